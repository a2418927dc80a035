#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "shearcoorb/grid.hpp"

namespace shearcoorb {

// Point in the hybrid parameter space X; coarse sheet has no scale.
struct ParamPoint {
    bool coarse = false;
    double a = 1.0;              // ignored when coarse
    std::vector<double> s;       // d-1 shears
    std::vector<double> t;       // d translations
};

struct ScaleCell {
    int sign;      // +1 / -1
    int level;     // dyadic level j, cell inside (2^{-(j+1)}, 2^{-j}]
    int sub;       // subcell index within the level
    double a_lo;   // |a| range, a_lo < a_hi
    double a_hi;
    double rep;    // signed representative
    double weight; // int_{a_lo}^{a_hi} da / a^{d+1} (one sign)
};

struct ShearGrid {
    double spacing = 0.5;
    double radius = 3.0;
    int m = 0;  // nodes k = -m..m per axis, s = k * spacing

    int nodes_per_axis() const { return 2 * m + 1; }
};

enum class ScaleRep { Midpoint, Geometric };

struct ParamGrid {
    int d = 3;
    int J = 2;
    int subcells = 1;
    ScaleRep rep = ScaleRep::Midpoint;
    GridSpec grid;                 // translation lattice
    ShearGrid shear;
    std::vector<ScaleCell> cells;  // fine cells, enumeration order

    std::int64_t shear_tuples() const;
    // planes: coarse sheet first (one per shear tuple), then per fine cell
    std::int64_t plane_count() const;
    // decode shear tuple index into s values (d-1 entries)
    void shear_of(std::int64_t tuple, double* s) const;
    double shear_weight() const;  // prod spacing
    double translation_weight() const { return std::pow(grid.dx(), grid.d); }
};

ParamGrid build_param_grid(int J, int subcells, double shear_spacing, double shear_radius,
                           ScaleRep rep, const GridSpec& grid);

// weight v_r: 1 on the coarse sheet, |a|^{-r} on fine scales
double v_r(const ParamPoint& x, double r);
double m_v(const ParamPoint& x, const ParamPoint& y, double r);

struct WeightIdentityReport {
    bool eq311_ok = false;          // m(inf, inf) = 1
    bool eq312_ok = false;          // m(a, inf) = |a|^{-r}
    double eq313_definitional = 0;  // sample value from the section-2 definition
    double eq313_as_printed = 0;    // same sample under the printed exponent
    bool eq313_flagged = false;
    int samples = 0;
};
WeightIdentityReport weight_identity_check(int samples, double r, std::uint64_t seed);

}  // namespace shearcoorb
