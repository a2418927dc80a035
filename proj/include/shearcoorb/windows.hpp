#pragma once

#include <string>
#include <vector>

#include "shearcoorb/grid.hpp"
#include "shearcoorb/util.hpp"

namespace shearcoorb {

struct WindowParams {
    int d = 3;
    double a0 = 1.0;
    double a1 = 3.0;
    std::vector<double> b;  // d-1 cross half-widths, default all 1

    void validate() const;
};

// Spectral windows of the band-limited construction:
//   psi1(x) = c1 * |x|^{d/2} * exp(h^2 / ((|x|-a0)(|x|-a1))) on a0 < |x| < a1,
//   psi2(u) = prod_i c2_i * exp(1 / ((u_i/b_i)^2 - 1)) on |u_i| < b_i,
//   Psi(xi) = psi1(xi_1) psi2(xi~),
//   Phi(xi) = |xi_1|^{(d-1)/2} psi2(xi~) phi1(xi_1),
//   phi1(x) = (2 int_{max(|x|,a0)}^{a1} |psi1(w)|^2 / w^d dw)^{1/2}.
// h = (a1-a0)/2 keeps the bump shape invariant under band rescaling; at the
// reference band (1,3) the exponent reduces to 1/((x-1)(x-3)).
struct SpectralWindowPair {
    WindowParams params;
    double c1 = 1.0;               // psi1 prefactor
    std::vector<double> c2;        // per-axis psi2 prefactors
    bool normalized = false;
    double c_psi_cached = 0.0;     // admissibility constant after build

    // dense phi1 profile over [0, a1]
    static constexpr int profile_points = 8193;
    MonotoneCubic phi1_interp;

    double psi1(double x) const;
    double psi2_axis(int axis, double u) const;
    double psi2(const double* xt) const;      // d-1 entries
    double psi_hat(const double* xi) const;   // d entries
    double phi1(double x) const;
    double phi_hat(const double* xi) const;   // d entries
};

struct SupportBoxes {
    double a_band_psi_lo, a_band_psi_hi;  // [a0/a1, a1/a0]
    double a_band_phi_lo, a_band_phi_hi;  // [a0/a1, 1]
    std::vector<double> d1;               // Psi-Psi shear box half widths
    std::vector<double> d2;               // Phi-Psi shear box half widths
};

// build with unit prefactors (unnormalized); computes the phi1 profile
SpectralWindowPair build_window_pair(const WindowParams& params);

// c_psi = (int |psi1|^2/|w|^d dw) * prod_i int |psi2_i|^2, adaptive quadrature
double admissibility_constant(const SpectralWindowPair& pair);

// rescale psi2 to unit L2 per axis and psi1 to unit weighted integral,
// then rebuild phi1; Calderon sum becomes 1 in the continuum
SpectralWindowPair normalize_pair(const SpectralWindowPair& pair);

// max_y |Calderon LHS - 1| over the given y samples (y != 0)
double calderon_check(const SpectralWindowPair& pair, const std::vector<double>& y_samples);

SupportBoxes support_boxes(const WindowParams& params);

// max |product| over the grid lattice for (a,s) outside the predicted boxes
struct SupportScanResult {
    double max_out_of_box = 0.0;  // should be ~0
    double max_in_box = 0.0;      // positive control
};
SupportScanResult support_violation_scan(const SpectralWindowPair& pair, const SupportBoxes& boxes,
                                         const GridSpec& grid, int samples_per_axis = 20);

// |D^n phi1| near the band endpoints by central differences on the profile
struct SmoothnessTable {
    std::vector<double> h;                        // halving sequence
    std::vector<std::vector<double>> near_a1;     // [order][h index]
    std::vector<std::vector<double>> near_a0;
};
SmoothnessTable smoothness_probe(const SpectralWindowPair& pair, int max_order,
                                 const std::vector<double>& h_sequence);

void write_pair(const std::string& path, const SpectralWindowPair& pair);
SpectralWindowPair read_pair(const std::string& path);

}  // namespace shearcoorb
