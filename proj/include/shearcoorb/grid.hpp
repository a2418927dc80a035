#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace shearcoorb {

using cplx = std::complex<double>;

// Periodic grid: n samples per axis on [0,L)^d, spectral lattice xi = k/L
// with k in the centered range [-n/2, n/2).
struct GridSpec {
    int d = 3;
    int n = 32;
    double L = 16.0;

    std::int64_t size() const;
    // frequency of FFT-ordered index k in [0,n)
    double xi(int k) const {
        // bin n/2 maps to -n/2 (standard FFT convention)
        int s = (k < n / 2) ? k : k - n;
        return static_cast<double>(s) / L;
    }
    double nyquist() const { return static_cast<double>(n) / (2.0 * L); }
    double dx() const { return L / static_cast<double>(n); }
    double dxi() const { return 1.0 / L; }
    bool operator==(const GridSpec& o) const { return d == o.d && n == o.n && L == o.L; }
};

GridSpec make_grid(int d, int n, double L);

enum class Domain { Spatial, Spectral };

struct VolumeField {
    GridSpec spec;
    Domain domain = Domain::Spatial;
    std::vector<cplx> values;
};

VolumeField make_field(const GridSpec& spec, Domain domain);

// decode linear index (row-major, axis x1 slowest) into per-axis indices
void decode_index(const GridSpec& spec, std::int64_t idx, int* out);

// Continuous-normalization FFT pair: forward approximates
// int f(x) e^{-2 pi i xi.x} dx, so forward = DFT * (L/n)^d and
// inverse = IDFT_unnormalized * (1/L)^d.
VolumeField fft_forward(const VolumeField& f);
VolumeField fft_inverse(const VolumeField& f);

// raw unnormalized in-place DFT of a buffer shaped like spec (sign=-1 forward)
void dft_inplace(const GridSpec& spec, cplx* data, int sign);

enum class PhantomKind { BandAnnulus, SpectralBump, ShiftedFrameElement };

struct PhantomSpec {
    PhantomKind kind = PhantomKind::BandAnnulus;
    std::uint64_t seed = 1;
    double band_lo = 0.3;
    double band_hi = 0.9;
    double cross_extent = 0.2;  // max |xi_i|, i >= 2
    double amplitude = 1.0;
};

// Spectral-domain phantom with support exactly inside the declared band.
// ShiftedFrameElement is produced by the transform layer (needs windows).
VolumeField make_phantom(const PhantomSpec& spec, const GridSpec& grid);

VolumeField read_volume(const std::string& path);
void write_volume(const std::string& path, const VolumeField& f);

}  // namespace shearcoorb
