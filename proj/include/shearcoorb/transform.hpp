#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "shearcoorb/frame.hpp"
#include "shearcoorb/grid.hpp"
#include "shearcoorb/paramspace.hpp"
#include "shearcoorb/windows.hpp"

namespace shearcoorb {

struct TransformConfig {
    GridSpec grid;
    std::shared_ptr<SpectralWindowPair> pair;
    ParamGrid pgrid;
    double margin = 0.0;
    std::uint64_t hash = 0;
    int workers = 1;
    std::int64_t max_coeff_bytes = std::int64_t(1) << 31;

    void validate() const;  // Nyquist coverage of every fine representative
};

// Analysis coefficients on the discretized parameter grid. Planes are stored
// in enumeration order: coarse sheet (one plane per shear tuple), then each
// fine cell in (sign, level, subcell) order.
struct CoeffField {
    std::uint64_t config_hash = 0;
    GridSpec grid;
    std::int64_t planes = 0;
    std::vector<std::vector<cplx>> data;  // spatial-domain planes over t
};

// plane index helpers
struct PlaneRef {
    bool coarse;
    int cell;            // -1 for coarse
    std::int64_t tuple;  // shear tuple index
};
PlaneRef plane_ref(const ParamGrid& pg, std::int64_t plane);
double plane_measure_weight(const ParamGrid& pg, std::int64_t plane);  // excludes dt
ParamPoint plane_point(const ParamGrid& pg, std::int64_t plane);       // t = 0

CoeffField analyze(const VolumeField& f, const TransformConfig& cfg);
VolumeField synthesize(const CoeffField& coeffs, const TransformConfig& cfg);

// Discrete frame-operator symbol W(xi): the lattice sum of
//   sum_s ds |Phi(S^T xi)|^2 + sum_cells w |det A| sum_s ds |Psi(A S^T xi)|^2.
// Every streaming verification below reduces to weighted averages of W by
// per-plane Plancherel, which keeps memory at O(n^d) for any plane count.
std::vector<double> frame_symbol(const TransformConfig& cfg);

struct ParsevalResult {
    double ratio = 0.0;
    double coverage = 0.0;  // fraction of spectral energy with W >= 1/2
    bool low_coverage = false;
    bool zero_input = false;
};
ParsevalResult parseval_ratio(const VolumeField& f, const TransformConfig& cfg,
                              const std::vector<double>* symbol = nullptr);

// || synthesize(analyze(f)) - f || / ||f||, evaluated spectrally
double roundtrip_error(const VolumeField& f, const TransformConfig& cfg,
                       const std::vector<double>* symbol = nullptr);

// || R(F) - F ||_mu / ||F||_mu for F = analyze(f), evaluated spectrally
double reproduce_error(const VolumeField& f, const TransformConfig& cfg,
                       const std::vector<double>* symbol = nullptr);

// stored-path energy, for cross-checks against the streaming identities
double coeff_energy(const CoeffField& coeffs, const TransformConfig& cfg);

void write_scf(const std::string& path, const CoeffField& coeffs);
CoeffField read_scf(const std::string& path);

// phantom built from a frame element (PhantomKind::ShiftedFrameElement)
VolumeField make_element_phantom(const ParamPoint& point, const TransformConfig& cfg);

// shared worker helper: deterministic partition of [0,n) into chunks
void parallel_chunks(std::int64_t n, int workers,
                     const std::function<void(std::int64_t, std::int64_t)>& body);

}  // namespace shearcoorb
