#include "shearcoorb/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shearcoorb/util.hpp"

namespace shearcoorb {

namespace {

struct AxisProfile {
    double scale;   // |a| for fine, 1 for coarse (axis-1 dilation)
    double root;    // |a|^{1/d} for fine, 1 for coarse (cross dilation)
    double pref;    // sqrt(|det A_a|) for fine, 1 for coarse
};

AxisProfile profile_of(const SpectralElem& e, int d) {
    AxisProfile p;
    if (e.coarse) {
        p.scale = 1.0;
        p.root = 1.0;
        p.pref = 1.0;
    } else {
        p.scale = std::abs(e.a);
        p.root = std::abs(signed_root(e.a, d));
        p.pref = std::sqrt(scaling_det(e.a, d));
    }
    return p;
}

double axis1_value(const SpectralElem& e, const SpectralWindowPair& pw, double x1, int d) {
    double arg = e.coarse ? x1 : e.a * x1;
    if (e.phi_window) {
        double ax = std::abs(arg);
        if (ax == 0.0 || ax >= pw.params.a1) return 0.0;
        return std::pow(ax, 0.5 * (d - 1)) * pw.phi1(ax);
    }
    return pw.psi1(arg);
}

// upper |xi1| support edge of the element's first axis
double axis1_upper(const SpectralElem& e, const SpectralWindowPair& pw) {
    double s = e.coarse ? 1.0 : std::abs(e.a);
    return pw.params.a1 / s;
}
double axis1_lower(const SpectralElem& e, const SpectralWindowPair& pw) {
    if (e.phi_window) return 0.0;
    double s = e.coarse ? 1.0 : std::abs(e.a);
    return pw.params.a0 / s;
}

}  // namespace

SpectralElem elem_of_point(const ParamPoint& p) {
    SpectralElem e;
    e.phi_window = p.coarse;
    e.coarse = p.coarse;
    e.a = p.coarse ? 1.0 : p.a;
    e.s = p.s;
    e.t = p.t;
    return e;
}

cplx elem_inner(const SpectralElem& x, const SpectralElem& y, const SpectralWindowPair& px,
                const SpectralWindowPair& py, const GridSpec& grid) {
    int d = grid.d;
    AxisProfile ax = profile_of(x, d), ay = profile_of(y, d);
    double up = std::min(axis1_upper(x, px), axis1_upper(y, py));
    double lo = std::max(axis1_lower(x, px), axis1_lower(y, py));
    if (up >= grid.nyquist()) fail("Nyquist violation in kernel evaluation");
    int jmax = std::min(grid.n / 2 - 1, static_cast<int>(std::ceil(up * grid.L)));
    cplx total(0.0, 0.0);
    std::vector<double> dt(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        dt[static_cast<std::size_t>(i)] = x.t[static_cast<std::size_t>(i)] - y.t[static_cast<std::size_t>(i)];
    for (int j = -jmax; j <= jmax; ++j) {
        double x1 = static_cast<double>(j) / grid.L;
        if (std::abs(x1) <= lo) continue;
        double w1 = axis1_value(x, px, x1, d) * axis1_value(y, py, x1, d);
        if (w1 == 0.0) continue;
        cplx f = w1 * std::exp(cplx(0.0, -2.0 * M_PI * x1 * dt[0]));
        for (int axn = 1; axn < d && f != cplx(0.0, 0.0); ++axn) {
            double bx = px.params.b[static_cast<std::size_t>(axn - 1)] / ax.root;
            double by = py.params.b[static_cast<std::size_t>(axn - 1)] / ay.root;
            double cx = -x.s[static_cast<std::size_t>(axn - 1)] * x1;
            double cy = -y.s[static_cast<std::size_t>(axn - 1)] * x1;
            double ulo = std::max(cx - bx, cy - by);
            double uhi = std::min(cx + bx, cy + by);
            if (ulo >= uhi) {
                f = 0.0;
                break;
            }
            int klo = std::max(-grid.n / 2, static_cast<int>(std::floor(ulo * grid.L)) - 1);
            int khi = std::min(grid.n / 2 - 1, static_cast<int>(std::ceil(uhi * grid.L)) + 1);
            cplx axsum(0.0, 0.0);
            for (int k = klo; k <= khi; ++k) {
                double u = static_cast<double>(k) / grid.L;
                double gx = px.psi2_axis(axn - 1, ax.root * (u - cx));
                if (gx == 0.0) continue;
                double gy = py.psi2_axis(axn - 1, ay.root * (u - cy));
                if (gy == 0.0) continue;
                axsum += gx * gy * std::exp(cplx(0.0, -2.0 * M_PI * u * dt[static_cast<std::size_t>(axn)]));
            }
            f *= axsum;
        }
        total += f;
    }
    total *= ax.pref * ay.pref * std::pow(grid.dxi(), d);
    return total;
}

cplx elem_inner_bruteforce(const SpectralElem& x, const SpectralElem& y,
                           const SpectralWindowPair& px, const SpectralWindowPair& py,
                           const GridSpec& grid) {
    int d = grid.d;
    AxisProfile ax = profile_of(x, d), ay = profile_of(y, d);
    std::vector<int> k(d);
    std::vector<double> xi(d), argx(d), argy(d);
    cplx total(0.0, 0.0);
    for (std::int64_t idx = 0; idx < grid.size(); ++idx) {
        decode_index(grid, idx, k.data());
        for (int i = 0; i < d; ++i) xi[i] = grid.xi(k[i]);
        auto eval = [&](const SpectralElem& e, const SpectralWindowPair& pw,
                        std::vector<double>& arg) -> double {
            arg[0] = e.coarse ? xi[0] : e.a * xi[0];
            double rt = e.coarse ? 1.0 : signed_root(e.a, d);
            for (int i = 1; i < d; ++i)
                arg[i] = rt * (xi[i] + e.s[static_cast<std::size_t>(i - 1)] * xi[0]);
            if (e.phi_window) {
                // undilated first axis for the Phi prefactor structure
                double ax1 = std::abs(arg[0]);
                if (ax1 == 0.0 || ax1 >= pw.params.a1) return 0.0;
                double v = std::pow(ax1, 0.5 * (d - 1)) * pw.phi1(ax1);
                return v == 0.0 ? 0.0 : v * pw.psi2(arg.data() + 1);
            }
            return pw.psi_hat(arg.data());
        };
        double vx = eval(x, px, argx);
        if (vx == 0.0) continue;
        double vy = eval(y, py, argy);
        if (vy == 0.0) continue;
        double ph = 0.0;
        for (int i = 0; i < d; ++i)
            ph += xi[i] * (x.t[static_cast<std::size_t>(i)] - y.t[static_cast<std::size_t>(i)]);
        total += vx * vy * std::exp(cplx(0.0, -2.0 * M_PI * ph));
    }
    return total * ax.pref * ay.pref * std::pow(grid.dxi(), d);
}

cplx kernel_eval_direct(const ParamPoint& x, const ParamPoint& y, const SpectralWindowPair& pair,
                        const GridSpec& grid) {
    // R(x,y) = <psi_y, psi_x>
    return elem_inner(elem_of_point(y), elem_of_point(x), pair, pair, grid);
}

namespace {

// S_s^{-1} t = (t1 - s.t~, t~)
std::vector<double> shear_inv_apply(const std::vector<double>& s, const std::vector<double>& t) {
    std::vector<double> out = t;
    for (std::size_t i = 1; i < t.size(); ++i) out[0] -= s[i - 1] * t[i];
    return out;
}
// A_a^{-1} t
std::vector<double> dilate_inv_apply(double a, int d, std::vector<double> t) {
    t[0] /= a;
    double r = signed_root(a, d);
    for (std::size_t i = 1; i < t.size(); ++i) t[i] /= r;
    return t;
}

}  // namespace

double kernel_eval_reduced(const ParamPoint& x, const ParamPoint& y,
                           const SpectralWindowPair& pair, const GridSpec& grid) {
    int d = pair.params.d;
    SpectralElem window;  // analyzing function, at the group origin
    window.s.assign(static_cast<std::size_t>(d - 1), 0.0);
    window.t.assign(static_cast<std::size_t>(d), 0.0);
    SpectralElem red;
    red.s.resize(static_cast<std::size_t>(d - 1));
    std::vector<double> dt(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        dt[static_cast<std::size_t>(i)] = x.t[static_cast<std::size_t>(i)] - y.t[static_cast<std::size_t>(i)];
    if (x.coarse && y.coarse) {
        // |<Phi, phi_(inf, s-s', S_{s'}^{-1} dt)>|
        window.phi_window = true;
        window.coarse = true;
        red.phi_window = true;
        red.coarse = true;
        for (int i = 0; i < d - 1; ++i)
            red.s[static_cast<std::size_t>(i)] =
                x.s[static_cast<std::size_t>(i)] - y.s[static_cast<std::size_t>(i)];
        red.t = shear_inv_apply(y.s, dt);
    } else if (x.coarse && !y.coarse) {
        // |<Psi, phi_(1/a', |a'|^{1/d-1}(s-s'), A_{a'}^{-1} S_{s'}^{-1} dt)>|
        window.phi_window = false;
        window.coarse = true;
        red.phi_window = true;
        red.coarse = false;
        red.a = 1.0 / y.a;
        double f = std::pow(std::abs(y.a), 1.0 / d - 1.0);
        for (int i = 0; i < d - 1; ++i)
            red.s[static_cast<std::size_t>(i)] =
                f * (x.s[static_cast<std::size_t>(i)] - y.s[static_cast<std::size_t>(i)]);
        red.t = dilate_inv_apply(y.a, d, shear_inv_apply(y.s, dt));
    } else if (!x.coarse && y.coarse) {
        // |<Phi, psi_(a, s-s', S_{s'}^{-1} dt)>|
        window.phi_window = true;
        window.coarse = true;
        red.phi_window = false;
        red.coarse = false;
        red.a = x.a;
        for (int i = 0; i < d - 1; ++i)
            red.s[static_cast<std::size_t>(i)] =
                x.s[static_cast<std::size_t>(i)] - y.s[static_cast<std::size_t>(i)];
        red.t = shear_inv_apply(y.s, dt);
    } else {
        // |<Psi, psi_(a/a', |a'|^{1/d-1}(s-s'), A_{a'}^{-1} S_{s'}^{-1} dt)>|
        window.phi_window = false;
        window.coarse = true;
        red.phi_window = false;
        red.coarse = false;
        red.a = x.a / y.a;
        double f = std::pow(std::abs(y.a), 1.0 / d - 1.0);
        for (int i = 0; i < d - 1; ++i)
            red.s[static_cast<std::size_t>(i)] =
                f * (x.s[static_cast<std::size_t>(i)] - y.s[static_cast<std::size_t>(i)]);
        red.t = dilate_inv_apply(y.a, d, shear_inv_apply(y.s, dt));
    }
    return std::abs(elem_inner(window, red, pair, pair, grid));
}

cplx gramian_eval(const SpectralWindowPair& pairA, const SpectralWindowPair& pairB,
                  const ParamPoint& x, const ParamPoint& y, const GridSpec& grid) {
    // G(x,y) = <psi~_y, psi_x>: analysis windows from pairB at y
    return elem_inner(elem_of_point(y), elem_of_point(x), pairB, pairA, grid);
}

CoeffField kernel_apply(const CoeffField& coeffs, const TransformConfig& cfg) {
    // K(F)(x) = <sum_y w_y F(y) psi_y, psi_x>: exact by linearity of the
    // finite quadrature, so synthesis followed by analysis
    return analyze(synthesize(coeffs, cfg), cfg);
}

namespace {

// sum_t (L/n)^d |R(t)|^q for the translation plane of a fixed element pair
double plane_qsum(const SpectralElem& ex, const SpectralElem& ey, const SpectralWindowPair& pair,
                  const GridSpec& grid, double q) {
    int d = grid.d;
    AxisProfile ax = profile_of(ex, d), ay = profile_of(ey, d);
    double up = std::min(axis1_upper(ex, pair), axis1_upper(ey, pair));
    double lo = std::max(axis1_lower(ex, pair), axis1_lower(ey, pair));
    if (lo >= up) return 0.0;
    int jmax = std::min(grid.n / 2 - 1, static_cast<int>(std::ceil(up * grid.L)));
    // factorized |P|^2 sum: Plancherel gives the q = 2 plane sum directly
    double sq = 0.0;
    for (int j = -jmax; j <= jmax; ++j) {
        double x1 = static_cast<double>(j) / grid.L;
        if (std::abs(x1) <= lo) continue;
        double w1 = axis1_value(ex, pair, x1, d) * axis1_value(ey, pair, x1, d);
        if (w1 == 0.0) continue;
        double f = w1 * w1;
        for (int axn = 1; axn < d && f != 0.0; ++axn) {
            double bx = pair.params.b[static_cast<std::size_t>(axn - 1)] / ax.root;
            double by = pair.params.b[static_cast<std::size_t>(axn - 1)] / ay.root;
            double cx = -ex.s[static_cast<std::size_t>(axn - 1)] * x1;
            double cy = -ey.s[static_cast<std::size_t>(axn - 1)] * x1;
            double ulo = std::max(cx - bx, cy - by);
            double uhi = std::min(cx + bx, cy + by);
            if (ulo >= uhi) {
                f = 0.0;
                break;
            }
            int klo = std::max(-grid.n / 2, static_cast<int>(std::floor(ulo * grid.L)) - 1);
            int khi = std::min(grid.n / 2 - 1, static_cast<int>(std::ceil(uhi * grid.L)) + 1);
            double axsum = 0.0;
            for (int k = klo; k <= khi; ++k) {
                double u = static_cast<double>(k) / grid.L;
                double gx = pair.psi2_axis(axn - 1, ax.root * (u - cx));
                if (gx == 0.0) continue;
                double gy = pair.psi2_axis(axn - 1, ay.root * (u - cy));
                if (gy == 0.0) continue;
                axsum += gx * gy * gx * gy;
            }
            f *= axsum;
        }
        sq += f;
    }
    double pref2 = ax.pref * ax.pref * ay.pref * ay.pref;
    double plancherel = pref2 * sq * std::pow(grid.dxi(), d);
    if (plancherel == 0.0) return 0.0;
    if (q == 2.0) return plancherel;
    // general q: materialize the product field (per-axis factorized fill,
    // the tensor structure makes every slab an outer product) and transform
    VolumeField prod = make_field(grid, Domain::Spectral);
    int n = grid.n;
    std::int64_t cross_size = 1;
    for (int i = 1; i < d; ++i) cross_size *= n;
    std::vector<double> dt(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i)
        dt[static_cast<std::size_t>(i)] =
            ex.t[static_cast<std::size_t>(i)] - ey.t[static_cast<std::size_t>(i)];
    std::vector<std::vector<cplx>> g(static_cast<std::size_t>(d - 1),
                                     std::vector<cplx>(static_cast<std::size_t>(n)));
    std::vector<int> kidx(static_cast<std::size_t>(d - 1));
    std::vector<cplx> partial(static_cast<std::size_t>(d));
    for (int k1 = 0; k1 < n; ++k1) {
        double x1 = grid.xi(k1);
        double w1 = axis1_value(ex, pair, x1, d) * axis1_value(ey, pair, x1, d);
        if (w1 == 0.0) continue;
        cplx f0 = w1 * std::exp(cplx(0.0, -2.0 * M_PI * x1 * dt[0]));
        for (int i = 1; i < d; ++i) {
            auto& gi = g[static_cast<std::size_t>(i - 1)];
            double sx = ex.s[static_cast<std::size_t>(i - 1)];
            double sy = ey.s[static_cast<std::size_t>(i - 1)];
            for (int k = 0; k < n; ++k) {
                double u = grid.xi(k);
                double gx = pair.psi2_axis(i - 1, ax.root * (u + sx * x1));
                double gy = gx == 0.0 ? 0.0 : pair.psi2_axis(i - 1, ay.root * (u + sy * x1));
                gi[static_cast<std::size_t>(k)] =
                    gy == 0.0 ? cplx(0.0, 0.0)
                              : gx * gy * std::exp(cplx(
                                              0.0, -2.0 * M_PI * u * dt[static_cast<std::size_t>(i)]));
            }
        }
        // odometer over the cross cube with running partial products
        std::fill(kidx.begin(), kidx.end(), 0);
        partial[0] = f0;
        for (int i = 1; i < d; ++i)
            partial[static_cast<std::size_t>(i)] =
                partial[static_cast<std::size_t>(i - 1)] * g[static_cast<std::size_t>(i - 1)][0];
        cplx* base = prod.values.data() + static_cast<std::size_t>(k1) * cross_size;
        for (std::int64_t c = 0;;) {
            base[c] = partial[static_cast<std::size_t>(d - 1)];
            if (++c >= cross_size) break;
            int axup = d - 2;
            while (axup >= 0 && ++kidx[static_cast<std::size_t>(axup)] >= n) {
                kidx[static_cast<std::size_t>(axup)] = 0;
                --axup;
            }
            for (int i = axup; i < d - 1; ++i)
                partial[static_cast<std::size_t>(i + 1)] =
                    partial[static_cast<std::size_t>(i)] *
                    g[static_cast<std::size_t>(i)][static_cast<std::size_t>(
                        kidx[static_cast<std::size_t>(i)])];
        }
    }
    dft_inplace(grid, prod.values.data(), +1);
    double scale = ax.pref * ay.pref * std::pow(grid.dxi(), d);
    KahanSum acc;
    if (q == 1.0) {
        for (const cplx& v : prod.values) {
            double m2 = std::norm(v);
            if (m2 != 0.0) acc.add(std::sqrt(m2));
        }
    } else {
        for (const cplx& v : prod.values) {
            double m2 = std::norm(v);
            if (m2 != 0.0) acc.add(std::pow(m2, 0.5 * q));
        }
    }
    return acc.value() * std::pow(scale, q) * std::pow(grid.dx(), d);
}

}  // namespace

RowIntegral kernel_row_integral(const TransformConfig& cfg, const ParamPoint& x, double q,
                                double r, double rho) {
    const ParamGrid& pg = cfg.pgrid;
    const GridSpec& grid = cfg.grid;
    const SpectralWindowPair& pair = *cfg.pair;
    int d = grid.d;
    double ds = pg.shear.spacing;
    int mr = static_cast<int>(std::floor(rho / ds + 1e-12));
    double dsw = std::pow(ds, d - 1);
    SpectralElem ex = elem_of_point(x);
    SpectralElem ey;
    ey.s.assign(static_cast<std::size_t>(d - 1), 0.0);
    ey.t.assign(static_cast<std::size_t>(d), 0.0);

    auto tuple_sum = [&]() -> double {
        // The cross windows vanish unless |s_x,i - s_y,i| |xi1| is within the
        // combined support width for some xi1 in the common band, so each
        // shear axis is clipped to an analytic box before scanning.
        double root_x = ex.coarse ? 1.0 : std::abs(signed_root(ex.a, d));
        double root_y = ey.coarse ? 1.0 : std::abs(signed_root(ey.a, d));
        double lo = std::max({axis1_lower(ex, pair), axis1_lower(ey, pair), grid.dxi()});
        double hi = std::min({axis1_upper(ex, pair), axis1_upper(ey, pair),
                              (grid.n / 2 - 1) * grid.dxi()});
        if (lo > hi) return 0.0;
        std::vector<int> klo(static_cast<std::size_t>(d - 1)), khi(klo.size()), kk(klo.size());
        for (int i = 0; i < d - 1; ++i) {
            double bi = pair.params.b[static_cast<std::size_t>(i)];
            double width = (bi / root_x + bi / root_y) / lo;
            double sx = ex.s[static_cast<std::size_t>(i)];
            klo[static_cast<std::size_t>(i)] =
                std::max(-mr, static_cast<int>(std::ceil((sx - width) / ds - 1e-12)));
            khi[static_cast<std::size_t>(i)] =
                std::min(mr, static_cast<int>(std::floor((sx + width) / ds + 1e-12)));
            if (klo[static_cast<std::size_t>(i)] > khi[static_cast<std::size_t>(i)]) return 0.0;
            kk[static_cast<std::size_t>(i)] = klo[static_cast<std::size_t>(i)];
        }
        KahanSum acc;
        while (true) {
            for (int i = 0; i < d - 1; ++i)
                ey.s[static_cast<std::size_t>(i)] = kk[static_cast<std::size_t>(i)] * ds;
            double t = plane_qsum(ex, ey, pair, grid, q);
            if (t != 0.0) acc.add(t);
            int ax = d - 2;
            while (ax >= 0 &&
                   ++kk[static_cast<std::size_t>(ax)] > khi[static_cast<std::size_t>(ax)]) {
                kk[static_cast<std::size_t>(ax)] = klo[static_cast<std::size_t>(ax)];
                --ax;
            }
            if (ax < 0) break;
        }
        return acc.value();
    };

    RowIntegral out;
    ParamPoint ycoarse;
    ycoarse.coarse = true;
    // coarse-y part
    ey.phi_window = true;
    ey.coarse = true;
    ey.a = 1.0;
    {
        double m = m_v(x, ycoarse, r);
        out.coarse_part = dsw * std::pow(m, q) * tuple_sum();
    }
    // fine-y part; for a shear-centered row the two scale signs contribute
    // identically (all window profiles are even), so one sign is doubled
    bool centered = true;
    for (double sv : x.s)
        if (sv != 0.0) centered = false;
    KahanSum facc;
    double x_lo = axis1_lower(ex, pair), x_hi = axis1_upper(ex, pair);
    for (const auto& c : pg.cells) {
        if (centered && c.sign < 0) continue;
        // prune cells whose dilated band cannot meet the x band
        double y_lo = pair.params.a0 / c.a_hi, y_hi = pair.params.a1 / c.a_lo;
        if (y_lo >= x_hi || x_lo >= y_hi) continue;
        ey.phi_window = false;
        ey.coarse = false;
        ey.a = c.rep;
        ParamPoint yp;
        yp.a = c.rep;
        double m = m_v(x, yp, r);
        double t = tuple_sum();
        if (t != 0.0) facc.add((centered ? 2.0 : 1.0) * c.weight * std::pow(m, q) * t);
    }
    out.fine_part = facc.value();
    return out;
}

KernelEstimate aq_norm_estimate(const TransformConfig& cfg, double q, double r,
                                const std::vector<double>& rho_schedule) {
    if (q < 1.0) fail("q must be >= 1");
    if (rho_schedule.empty()) fail("empty rho schedule");
    KernelEstimate est;
    est.q = q;
    est.r = r;
    est.rho = rho_schedule;
    // scale samples: coarse sheet plus a positive decimated set of fine
    // representatives (row integrals are even in the scale sign)
    std::vector<double> alphas;
    for (const auto& c : cfg.pgrid.cells) {
        if (c.sign < 0) continue;
        if (c.sub == 0 || c.sub == cfg.pgrid.subcells / 2 ||
            (c.level == cfg.pgrid.J - 1 && c.sub == cfg.pgrid.subcells - 1))
            alphas.push_back(c.rep);
    }
    est.alpha_samples = alphas;
    for (double rho : rho_schedule) {
        std::vector<RowIntegral> rows(alphas.size() + 1);
        parallel_chunks(static_cast<std::int64_t>(rows.size()), cfg.workers,
                        [&](std::int64_t lo, std::int64_t hi) {
                            for (std::int64_t i = lo; i < hi; ++i) {
                                ParamPoint x;
                                if (i == 0)
                                    x.coarse = true;
                                else
                                    x.a = alphas[static_cast<std::size_t>(i - 1)];
                                x.s.assign(static_cast<std::size_t>(cfg.grid.d - 1), 0.0);
                                x.t.assign(static_cast<std::size_t>(cfg.grid.d), 0.0);
                                rows[static_cast<std::size_t>(i)] =
                                    kernel_row_integral(cfg, x, q, r, rho);
                            }
                        });
        RowIntegral coarse_row = rows[0];
        std::vector<RowIntegral> fine_rows(rows.begin() + 1, rows.end());
        double fine_best = 0.0, fc = 0.0, ff = 0.0;
        for (const auto& row : fine_rows) {
            if (row.total() > fine_best) {
                fine_best = row.total();
                fc = row.coarse_part;
                ff = row.fine_part;
            }
        }
        double raw = std::max(coarse_row.total(), fine_best);
        est.blocks.push_back({coarse_row.coarse_part, coarse_row.fine_part, fc, ff});
        est.estimate.push_back(std::pow(raw, 1.0 / q));
        std::size_t k = est.estimate.size();
        est.rel_change.push_back(
            k < 2 ? 0.0
                  : std::abs(est.estimate[k - 1] - est.estimate[k - 2]) /
                        std::max(est.estimate[k - 2], 1e-300));
    }
    return est;
}

bool young_check(double a, double b, double p, double q) {
    if (!(a >= 0.0 && b >= 0.0)) fail("arguments must be nonnegative");
    if (std::abs(1.0 / p + 1.0 / q - 1.0) > 1e-9) fail("exponents must be conjugate");
    double slack = 1e-12 * (1.0 + std::pow(a, p) + std::pow(b, q));
    return a * b <= std::pow(a, p) / p + std::pow(b, q) / q + slack;
}

bool three_way_young_check(double a, double b, double c, double p, double q, double r) {
    if (!(a >= 0.0 && b >= 0.0 && c >= 0.0)) fail("arguments must be nonnegative");
    if (std::abs(1.0 / p + 1.0 / q + 1.0 / r - 1.0) > 1e-9) fail("exponents must sum to one");
    double slack = 1e-12 * (1.0 + std::pow(a, p) + std::pow(b, q) + std::pow(c, r));
    return a * b * c <= std::pow(a, p) / p + std::pow(b, q) / q + std::pow(c, r) / r + slack;
}

namespace {

double lpv_norm_discrete(const std::vector<cplx>& F, const std::vector<double>& w,
                         const std::vector<double>& v, double p) {
    if (std::isinf(p)) {
        double mx = 0.0;
        for (std::size_t i = 0; i < F.size(); ++i) mx = std::max(mx, std::abs(F[i]) * v[i]);
        return mx;
    }
    KahanSum acc;
    for (std::size_t i = 0; i < F.size(); ++i)
        acc.add(std::pow(std::abs(F[i]) * v[i], p) * w[i]);
    return std::pow(acc.value(), 1.0 / p);
}

double aq_norm_discrete(const std::vector<std::vector<double>>& Km,
                        const std::vector<double>& w, double q) {
    std::size_t n = Km.size();
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0, col = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row += std::pow(Km[i][j], q) * w[j];
            col += std::pow(Km[j][i], q) * w[j];
        }
        best = std::max(best, std::max(std::pow(row, 1.0 / q), std::pow(col, 1.0 / q)));
    }
    return best;
}

}  // namespace

SchurReport schur_bound_check(int trials, std::uint64_t seed) {
    SchurReport rep;
    rep.trials = trials;
    const double ps[] = {1.0, 1.5, 2.0, std::numeric_limits<double>::infinity()};
    std::uint64_t ctr = 0;
    auto uni = [&]() { return u64_to_unit(splitmix64(seed ^ splitmix64(ctr++))); };
    for (int t = 0; t < trials; ++t) {
        std::size_t n = 4 + static_cast<std::size_t>(uni() * 196.0);
        std::vector<double> w(n), v(n);
        for (auto& x : w) x = 0.05 + uni();
        for (auto& x : v) x = std::exp(2.0 * uni());  // v >= 1
        std::vector<std::vector<cplx>> K(n, std::vector<cplx>(n));
        std::vector<std::vector<double>> Km(n, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double g1, g2;
                seeded_gauss_pair(seed, 0x1000000ULL * (t + 1) + i * n + j, g1, g2);
                K[i][j] = cplx(g1, g2);
                double m = std::max(v[i] / v[j], v[j] / v[i]);
                Km[i][j] = std::abs(K[i][j]) * m;
            }
        double a1norm = aq_norm_discrete(Km, w, 1.0);
        std::vector<cplx> F(n);
        for (auto& x : F) {
            double g1, g2;
            seeded_gauss_pair(seed ^ 0x5bd1e995ULL, ctr++, g1, g2);
            x = cplx(g1, g2);
        }
        std::vector<cplx> KF(n, cplx(0.0, 0.0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) KF[i] += K[i][j] * F[j] * w[j];
        double p = ps[t % 4];
        double lhs = lpv_norm_discrete(KF, w, v, p);
        double rhs = a1norm * lpv_norm_discrete(F, w, v, p);
        if (rhs > 0.0) rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
        if (lhs > rhs * (1.0 + 1e-10)) ++rep.violations;
        // Lemma 2.2 embedding spot check on a subset of trials
        if (t % 10 == 0) {
            double pp = 1.5, rr = 3.0;
            double eps = 0.5 * (1.0 / pp - 1.0 / rr);
            double aalpha = rr * (1.0 / rr + eps);
            double pprime = pp / (pp - 1.0), rprime = rr / (rr - 1.0);
            double cbeta = pprime * (1.0 / rprime - eps);
            double ck = std::max({1.0, std::pow(aq_norm_discrete(Km, w, aalpha), aalpha),
                                  std::pow(aq_norm_discrete(Km, w, cbeta), cbeta)});
            double fp = lpv_norm_discrete(F, w, v, pp);
            if (fp > 0.0) {
                std::vector<cplx> G = F;
                for (auto& x : G) x /= fp;  // ||G||_{p,v} = 1
                std::vector<cplx> KG(n, cplx(0.0, 0.0));
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j) KG[i] += K[i][j] * G[j] * w[j];
                ++rep.embedding_checks;
                if (lpv_norm_discrete(KG, w, v, rr) > ck * (1.0 + 1e-10))
                    ++rep.embedding_violations;
            }
        }
    }
    return rep;
}

}  // namespace shearcoorb
