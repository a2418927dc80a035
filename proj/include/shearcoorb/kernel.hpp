#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "shearcoorb/transform.hpp"

namespace shearcoorb {

// Single spectral element description used by the lattice inner products.
// "fine" elements are dilated; the scale may leave [-1,1] (reduced kernel
// arguments do), which is fine for evaluation even though such points are
// outside X.
struct SpectralElem {
    bool phi_window = false;  // window shape: Phi when true, Psi otherwise
    bool coarse = false;      // no dilation when true
    double a = 1.0;
    std::vector<double> s;    // d-1
    std::vector<double> t;    // d
};

// <e_x, e_y> = sum_xi (1/L)^d e_x(xi) conj(e_y(xi)), evaluated with the
// per-axis factorization of the tensor windows (exact, just faster than a
// full lattice loop).
cplx elem_inner(const SpectralElem& x, const SpectralElem& y, const SpectralWindowPair& px,
                const SpectralWindowPair& py, const GridSpec& grid);

// brute-force lattice sum, test oracle for small grids
cplx elem_inner_bruteforce(const SpectralElem& x, const SpectralElem& y,
                           const SpectralWindowPair& px, const SpectralWindowPair& py,
                           const GridSpec& grid);

SpectralElem elem_of_point(const ParamPoint& p);

// R(x,y) = <psi_y, psi_x>
cplx kernel_eval_direct(const ParamPoint& x, const ParamPoint& y, const SpectralWindowPair& pair,
                        const GridSpec& grid);

// |R(x,y)| through the group-reduced single-argument transform
double kernel_eval_reduced(const ParamPoint& x, const ParamPoint& y,
                           const SpectralWindowPair& pair, const GridSpec& grid);

// mixed-window Gramian G(x,y) = <psi~_y, psi_x>
cplx gramian_eval(const SpectralWindowPair& pairA, const SpectralWindowPair& pairB,
                  const ParamPoint& x, const ParamPoint& y, const GridSpec& grid);

// reproducing-kernel operator on a coefficient field (same parameter grid)
CoeffField kernel_apply(const CoeffField& coeffs, const TransformConfig& cfg);

// discretized row integral int |R(x,y) m_v(x,y)|^q dmu(y), shear radius rho;
// split into the coarse-y and fine-y parts
struct RowIntegral {
    double coarse_part = 0.0;
    double fine_part = 0.0;
    double total() const { return coarse_part + fine_part; }
};
RowIntegral kernel_row_integral(const TransformConfig& cfg, const ParamPoint& x, double q,
                                double r, double rho);

struct KernelEstimate {
    double q = 2.0;
    double r = 0.0;
    std::vector<double> rho;
    std::vector<double> estimate;                  // ||.||^{1/q} per truncation
    std::vector<double> rel_change;                // vs previous rho entry
    std::vector<std::array<double, 4>> blocks;     // [cc, cf, fc, ff] raw integrals
    std::vector<double> alpha_samples;
};
KernelEstimate aq_norm_estimate(const TransformConfig& cfg, double q, double r,
                                const std::vector<double>& rho_schedule);

// randomized discrete Schur / embedding harness (Lemma A.3, Lemma 2.2)
struct SchurReport {
    int trials = 0;
    int violations = 0;
    int embedding_checks = 0;
    int embedding_violations = 0;
    double max_ratio = 0.0;  // max ||K F||_{p,v} / (||K||_{A1,mv} ||F||_{p,v})
};
SchurReport schur_bound_check(int trials, std::uint64_t seed);

bool young_check(double a, double b, double p, double q);
bool three_way_young_check(double a, double b, double c, double p, double q, double r);

}  // namespace shearcoorb
