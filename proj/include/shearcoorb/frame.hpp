#pragma once

#include <vector>

#include "shearcoorb/grid.hpp"
#include "shearcoorb/paramspace.hpp"
#include "shearcoorb/windows.hpp"

namespace shearcoorb {

// A(a) = diag(a, sgn(a)|a|^{1/d} I); S(s) unipotent with first row (1, s^T)
std::vector<double> scaling_matrix(double a, int d);       // row-major d*d
std::vector<double> shear_matrix(const std::vector<double>& s, int d);
double scaling_det(double a, int d);                       // |a|^{2-1/d}
double matrix_det(const std::vector<double>& m, int d);    // LU, test oracle

inline double signed_root(double a, int d) {
    return std::copysign(std::pow(std::abs(a), 1.0 / d), a);
}

// y = A(a)^T S(s)^T x evaluated directly: (a x1, sgn(a)|a|^{1/d} (x~ + s x1))
void dilated_arg(double a, const double* s, const double* xi, int d, double* out);

// Fine-sheet group law (a,s,t) o (a',s',t') = (aa', s + |a|^{1-1/d} s', t + S_s A_a t')
struct FinePoint {
    double a = 1.0;
    std::vector<double> s;
    std::vector<double> t;
};
FinePoint group_compose(const FinePoint& g, const FinePoint& h, int d);
FinePoint group_inverse(const FinePoint& g, int d);

// Spectral frame element at translation 0 sampled on the lattice:
//   coarse: Phi(S(s)^T xi); fine: |a|^{(2-1/d)/2} Psi(A(a) S(s)^T xi)
// Translation is a pure phase and is applied downstream.
double frame_element_value(const SpectralWindowPair& pair, bool coarse, double a, const double* s,
                           const double* xi);
VolumeField frame_element_spectral(const ParamPoint& point, const SpectralWindowPair& pair,
                                   const GridSpec& grid);

// reject scales whose dilated band leaves the spectral lattice
void check_nyquist(const SpectralWindowPair& pair, double a, const GridSpec& grid, double margin);

}  // namespace shearcoorb
