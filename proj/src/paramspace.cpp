#include "shearcoorb/paramspace.hpp"

#include <cmath>

#include "shearcoorb/util.hpp"

namespace shearcoorb {

std::int64_t ParamGrid::shear_tuples() const {
    std::int64_t t = 1;
    for (int i = 0; i < d - 1; ++i) t *= shear.nodes_per_axis();
    return t;
}

std::int64_t ParamGrid::plane_count() const {
    return shear_tuples() * (1 + static_cast<std::int64_t>(cells.size()));
}

void ParamGrid::shear_of(std::int64_t tuple, double* s) const {
    int npa = shear.nodes_per_axis();
    for (int ax = d - 2; ax >= 0; --ax) {
        int k = static_cast<int>(tuple % npa) - shear.m;
        s[ax] = k * shear.spacing;
        tuple /= npa;
    }
}

double ParamGrid::shear_weight() const {
    double w = 1.0;
    for (int i = 0; i < d - 1; ++i) w *= shear.spacing;
    return w;
}

ParamGrid build_param_grid(int J, int subcells, double shear_spacing, double shear_radius,
                           ScaleRep rep, const GridSpec& grid) {
    if (J < 1) fail("J must be >= 1");
    if (subcells < 1) fail("scale_subcells must be >= 1");
    if (!(shear_spacing > 0.0)) fail("shear spacing must be positive");
    ParamGrid pg;
    pg.d = grid.d;
    pg.J = J;
    pg.subcells = subcells;
    pg.rep = rep;
    pg.grid = grid;
    pg.shear.spacing = shear_spacing;
    pg.shear.radius = shear_radius;
    pg.shear.m = static_cast<int>(std::floor(shear_radius / shear_spacing + 1e-12));
    if (pg.shear.nodes_per_axis() < 1) fail("empty shear lattice");
    // fine cells: sign-major, then level, then geometric subcells (outer first)
    for (int sign = 0; sign < 2; ++sign) {
        int sg = sign == 0 ? 1 : -1;
        for (int j = 0; j < J; ++j) {
            double lvl_hi = std::pow(2.0, -j);
            double lvl_lo = 0.5 * lvl_hi;
            double ratio = std::pow(lvl_lo / lvl_hi, 1.0 / subcells);
            for (int u = 0; u < subcells; ++u) {
                ScaleCell c;
                c.sign = sg;
                c.level = j;
                c.sub = u;
                c.a_hi = lvl_hi * std::pow(ratio, u);
                c.a_lo = lvl_hi * std::pow(ratio, u + 1);
                if (u == subcells - 1) c.a_lo = lvl_lo;  // exact dyadic edge
                double mid = rep == ScaleRep::Midpoint ? 0.5 * (c.a_lo + c.a_hi)
                                                       : std::sqrt(c.a_lo * c.a_hi);
                c.rep = sg * mid;
                // int_{a_lo}^{a_hi} a^{-(d+1)} da, closed form
                c.weight = (std::pow(c.a_lo, -grid.d) - std::pow(c.a_hi, -grid.d)) /
                           static_cast<double>(grid.d);
                pg.cells.push_back(c);
            }
        }
    }
    return pg;
}

double v_r(const ParamPoint& x, double r) {
    if (x.coarse) return 1.0;
    return std::pow(std::abs(x.a), -r);
}

double m_v(const ParamPoint& x, const ParamPoint& y, double r) {
    double vx = v_r(x, r), vy = v_r(y, r);
    return std::max(vx / vy, vy / vx);
}

WeightIdentityReport weight_identity_check(int samples, double r, std::uint64_t seed) {
    WeightIdentityReport rep;
    rep.samples = samples;
    rep.eq311_ok = true;
    rep.eq312_ok = true;
    ParamPoint inf_pt;
    inf_pt.coarse = true;
    for (int i = 0; i < samples; ++i) {
        double u1 = u64_to_unit(splitmix64(seed ^ splitmix64(2 * i)));
        double u2 = u64_to_unit(splitmix64(seed ^ splitmix64(2 * i + 1)));
        ParamPoint x, y;
        x.a = std::ldexp(u1, -(i % 7));  // spread across dyadic ranges
        y.a = std::ldexp(u2, -((i / 7) % 7));
        if (m_v(inf_pt, inf_pt, r) != 1.0) rep.eq311_ok = false;
        double lhs = m_v(x, inf_pt, r);
        if (std::abs(lhs - std::pow(std::abs(x.a), -r)) > 1e-12 * lhs) rep.eq312_ok = false;
    }
    // Eq. (3.13) sample comparison at (1/4, 1/2), r as given
    ParamPoint x, y;
    x.a = 0.25;
    y.a = 0.5;
    double ratio = std::max(std::abs(x.a) / std::abs(y.a), std::abs(y.a) / std::abs(x.a));
    rep.eq313_definitional = m_v(x, y, r);
    rep.eq313_as_printed = std::pow(ratio, -r);
    rep.eq313_flagged = std::abs(rep.eq313_definitional - rep.eq313_as_printed) > 1e-12 &&
                        rep.eq313_as_printed < 1.0;
    return rep;
}

}  // namespace shearcoorb
