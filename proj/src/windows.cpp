#include "shearcoorb/windows.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "nlohmann/json.hpp"

namespace shearcoorb {

using json = nlohmann::json;

void WindowParams::validate() const {
    if (d < 3 || d % 2 == 0) fail("odd dimension required");
    if (!(0.0 < a0 && a0 < a1)) fail("band edges must satisfy 0 < a0 < a1");
    if (b.size() != static_cast<std::size_t>(d - 1)) fail("b must have d-1 entries");
    for (double bi : b)
        if (!(bi > 0.0)) fail("cross half-widths must be positive");
}

namespace {

// squared psi1 without the |x|^d factor: the weighted profile
// |psi1(w)|^2 / w^d = c1^2 exp(2 h^2 / ((w-a0)(w-a1)))
double weighted_sq_profile(const WindowParams& p, double c1, double w) {
    if (w <= p.a0 || w >= p.a1) return 0.0;
    double h = 0.5 * (p.a1 - p.a0);
    double e = 2.0 * h * h / ((w - p.a0) * (w - p.a1));
    return c1 * c1 * std::exp(e);
}

void build_phi1_profile(SpectralWindowPair& pair) {
    const WindowParams& p = pair.params;
    int m = SpectralWindowPair::profile_points;
    double dx = p.a1 / static_cast<double>(m - 1);
    // suffix integrals of the weighted profile, 5-point Gauss per segment
    static const double gl_x[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                   0.5384693101056831, 0.9061798459386640};
    static const double gl_w[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                   0.4786286704993665, 0.2369268850561891};
    std::vector<double> tail(m, 0.0);
    KahanSum acc;
    for (int i = m - 2; i >= 0; --i) {
        double lo = i * dx, hi = (i + 1) * dx;
        double c = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
        double seg = 0.0;
        for (int g = 0; g < 5; ++g)
            seg += gl_w[g] * weighted_sq_profile(p, pair.c1, c + hw * gl_x[g]);
        acc.add(seg * hw);
        tail[i] = acc.value();
    }
    std::vector<double> vals(m);
    for (int i = 0; i < m; ++i) vals[i] = std::sqrt(2.0 * std::max(tail[i], 0.0));
    pair.phi1_interp.build(0.0, dx, std::move(vals));
}

}  // namespace

double SpectralWindowPair::psi1(double x) const {
    const WindowParams& p = params;
    double ax = std::abs(x);
    if (ax <= p.a0 || ax >= p.a1) return 0.0;
    double h = 0.5 * (p.a1 - p.a0);
    double e = h * h / ((ax - p.a0) * (ax - p.a1));
    return c1 * std::pow(ax, 0.5 * p.d) * std::exp(e);
}

double SpectralWindowPair::psi2_axis(int axis, double u) const {
    double bi = params.b[static_cast<std::size_t>(axis)];
    double v = u / bi;
    if (std::abs(v) >= 1.0) return 0.0;
    return c2[static_cast<std::size_t>(axis)] * std::exp(1.0 / (v * v - 1.0));
}

double SpectralWindowPair::psi2(const double* xt) const {
    double r = 1.0;
    for (int i = 0; i < params.d - 1; ++i) {
        r *= psi2_axis(i, xt[i]);
        if (r == 0.0) return 0.0;
    }
    return r;
}

double SpectralWindowPair::psi_hat(const double* xi) const {
    double r = psi1(xi[0]);
    return r == 0.0 ? 0.0 : r * psi2(xi + 1);
}

double SpectralWindowPair::phi1(double x) const {
    double ax = std::abs(x);
    if (ax >= params.a1) return 0.0;
    return phi1_interp.eval(ax);
}

double SpectralWindowPair::phi_hat(const double* xi) const {
    double ax = std::abs(xi[0]);
    if (ax == 0.0 || ax >= params.a1) return 0.0;
    double r = phi1(ax);
    if (r == 0.0) return 0.0;
    r *= std::pow(ax, 0.5 * (params.d - 1));
    return r * psi2(xi + 1);
}

SpectralWindowPair build_window_pair(const WindowParams& params) {
    params.validate();
    SpectralWindowPair pair;
    pair.params = params;
    pair.c1 = 1.0;
    pair.c2.assign(static_cast<std::size_t>(params.d - 1), 1.0);
    build_phi1_profile(pair);
    pair.c_psi_cached = admissibility_constant(pair);
    return pair;
}

double admissibility_constant(const SpectralWindowPair& pair) {
    const WindowParams& p = pair.params;
    double i1 = 2.0 * adaptive_simpson(
                          [&](double w) { return weighted_sq_profile(p, pair.c1, w); }, p.a0,
                          p.a1, 1e-12);
    double r = i1;
    for (int ax = 0; ax < p.d - 1; ++ax) {
        double bi = p.b[static_cast<std::size_t>(ax)];
        double i2 = adaptive_simpson(
            [&](double u) {
                double v = pair.psi2_axis(ax, u);
                return v * v;
            },
            -bi, bi, 1e-12);
        r *= i2;
    }
    return r;
}

SpectralWindowPair normalize_pair(const SpectralWindowPair& pair) {
    const WindowParams& p = pair.params;
    SpectralWindowPair out = pair;
    double i1 = 2.0 * adaptive_simpson(
                          [&](double w) { return weighted_sq_profile(p, pair.c1, w); }, p.a0,
                          p.a1, 1e-14);
    if (!(i1 > 0.0)) fail("zero window");
    out.c1 = pair.c1 / std::sqrt(i1);
    for (int ax = 0; ax < p.d - 1; ++ax) {
        double bi = p.b[static_cast<std::size_t>(ax)];
        double i2 = adaptive_simpson(
            [&](double u) {
                double v = pair.psi2_axis(ax, u);
                return v * v;
            },
            -bi, bi, 1e-14);
        if (!(i2 > 0.0)) fail("zero window");
        out.c2[static_cast<std::size_t>(ax)] = pair.c2[static_cast<std::size_t>(ax)] / std::sqrt(i2);
    }
    build_phi1_profile(out);
    out.normalized = true;
    out.c_psi_cached = admissibility_constant(out);
    return out;
}

double calderon_check(const SpectralWindowPair& pair, const std::vector<double>& y_samples) {
    const WindowParams& p = pair.params;
    // cross-energy factor, common to both terms
    double p2 = 1.0;
    for (int ax = 0; ax < p.d - 1; ++ax) {
        double bi = p.b[static_cast<std::size_t>(ax)];
        p2 *= adaptive_simpson(
            [&](double u) {
                double v = pair.psi2_axis(ax, u);
                return v * v;
            },
            -bi, bi, 1e-12);
    }
    double max_dev = 0.0;
    for (double y : y_samples) {
        if (y == 0.0) fail("calderon_check: y = 0 rejected");
        double ay = std::abs(y);
        // coarse term: int |Phi(y,sigma)|^2 dsigma / |y|^{d-1}
        double f1 = pair.phi1(ay);
        double coarse = f1 * f1 * p2;  // the |y|^{d-1} factors cancel
        // fine term: int_{a0 <= |xi1| <= min(|y|,a1)} |psi1|^2/|xi1|^d * cross
        double hi = std::min(ay, p.a1);
        double fine = 0.0;
        if (hi > p.a0)
            fine = 2.0 *
                   adaptive_simpson(
                       [&](double w) {
                           double v = pair.psi1(w);
                           return v * v / std::pow(w, p.d);
                       },
                       p.a0, hi, 1e-12) *
                   p2;
        max_dev = std::max(max_dev, std::abs(coarse + fine - 1.0));
    }
    return max_dev;
}

SupportBoxes support_boxes(const WindowParams& params) {
    params.validate();
    SupportBoxes bx;
    bx.a_band_psi_lo = params.a0 / params.a1;
    bx.a_band_psi_hi = params.a1 / params.a0;
    bx.a_band_phi_lo = params.a0 / params.a1;
    bx.a_band_phi_hi = 1.0;
    double f = 1.0 / params.a0 +
               std::pow(params.a0, -(1.0 + 1.0 / params.d)) * std::pow(params.a1, 1.0 / params.d);
    for (double bi : params.b) {
        bx.d1.push_back(f * bi);
        bx.d2.push_back(f * bi);  // Lemma gives the same half-widths for both products
    }
    return bx;
}

namespace {

double product_scan(const SpectralWindowPair& pair, bool first_is_phi, double a,
                    const std::vector<double>& s, const GridSpec& grid) {
    std::vector<int> k(grid.d);
    std::vector<double> xi(grid.d), xim(grid.d);
    double root = std::copysign(std::pow(std::abs(a), 1.0 / grid.d), a);
    double mx = 0.0;
    for (std::int64_t idx = 0; idx < grid.size(); ++idx) {
        decode_index(grid, idx, k.data());
        for (int ax = 0; ax < grid.d; ++ax) xi[ax] = grid.xi(k[ax]);
        double w1 = first_is_phi ? pair.phi_hat(xi.data()) : pair.psi_hat(xi.data());
        if (w1 == 0.0) continue;
        xim[0] = a * xi[0];
        for (int ax = 1; ax < grid.d; ++ax)
            xim[ax] = root * (xi[ax] + s[static_cast<std::size_t>(ax - 1)] * xi[0]);
        double w2 = pair.psi_hat(xim.data());
        mx = std::max(mx, std::abs(w1 * w2));
    }
    return mx;
}

}  // namespace

SupportScanResult support_violation_scan(const SpectralWindowPair& pair, const SupportBoxes& boxes,
                                         const GridSpec& grid, int samples_per_axis) {
    SupportScanResult res;
    int d = pair.params.d;
    std::vector<double> s0(static_cast<std::size_t>(d - 1), 0.0);
    // out-of-box scale samples (both products share the psi box here, since
    // the phi band upper edge is 1 and |a| <= 1 is enforced by X anyway)
    for (int i = 0; i < samples_per_axis; ++i) {
        double f = 0.05 + 0.9 * static_cast<double>(i) / std::max(1, samples_per_axis - 1);
        double a_low = f * boxes.a_band_psi_lo;  // below the band
        for (int sgn = -1; sgn <= 1; sgn += 2) {
            res.max_out_of_box = std::max(
                res.max_out_of_box, product_scan(pair, false, sgn * a_low, s0, grid));
            res.max_out_of_box = std::max(
                res.max_out_of_box, product_scan(pair, true, sgn * a_low, s0, grid));
        }
    }
    // out-of-box shear samples at in-band scales
    for (int i = 0; i < samples_per_axis; ++i) {
        double a = boxes.a_band_psi_lo +
                   (1.0 - boxes.a_band_psi_lo) * (static_cast<double>(i) + 0.5) /
                       static_cast<double>(samples_per_axis);
        for (int j = 0; j < samples_per_axis; ++j) {
            double f = 1.02 + 2.0 * static_cast<double>(j) / std::max(1, samples_per_axis - 1);
            std::vector<double> s = s0;
            // push one axis past the box edge; with a in the band, the shear
            // membership is what gets violated
            double root = std::pow(std::abs(a), 1.0 / d);
            s[0] = f * boxes.d1[0] / root;  // ensures the sheared cross arg leaves Q_b
            res.max_out_of_box =
                std::max(res.max_out_of_box, product_scan(pair, false, a, s, grid));
            res.max_out_of_box = std::max(res.max_out_of_box, product_scan(pair, true, a, s, grid));
        }
    }
    res.max_in_box = product_scan(pair, false, 1.0, s0, grid);
    return res;
}

SmoothnessTable smoothness_probe(const SpectralWindowPair& pair, int max_order,
                                 const std::vector<double>& h_sequence) {
    if (max_order > 3) fail("smoothness_probe supports orders up to 3");
    const WindowParams& p = pair.params;
    double resolution = p.a1 / (SpectralWindowPair::profile_points - 1);
    SmoothnessTable tab;
    tab.h = h_sequence;
    tab.near_a1.assign(static_cast<std::size_t>(max_order) + 1, {});
    tab.near_a0.assign(static_cast<std::size_t>(max_order) + 1, {});
    for (double h : h_sequence) {
        double step = h / 8.0;
        if (step < 4.0 * resolution) fail("probe step below profile resolution");
        for (int n = 0; n <= max_order; ++n) {
            auto deriv = [&](double x) {
                // central n-th difference
                double acc = 0.0;
                for (int k = 0; k <= n; ++k) {
                    double binom = 1.0;
                    for (int j = 0; j < k; ++j) binom = binom * (n - j) / (j + 1);
                    double sign = (k % 2 == 0) ? 1.0 : -1.0;
                    acc += sign * binom * pair.phi1(x + (0.5 * n - k) * step);
                }
                return acc / std::pow(step, n);
            };
            tab.near_a1[static_cast<std::size_t>(n)].push_back(std::abs(deriv(p.a1 - h)));
            tab.near_a0[static_cast<std::size_t>(n)].push_back(std::abs(deriv(p.a0 + h)));
        }
    }
    return tab;
}

void write_pair(const std::string& path, const SpectralWindowPair& pair) {
    json j;
    j["params"] = {{"d", pair.params.d},
                   {"a0", pair.params.a0},
                   {"a1", pair.params.a1},
                   {"b", pair.params.b}};
    j["c1"] = pair.c1;
    j["c2"] = pair.c2;
    j["normalized"] = pair.normalized;
    j["c_psi"] = pair.c_psi_cached;
    const auto& y = pair.phi1_interp.y;
    j["phi1_table"] = base64_encode(reinterpret_cast<const unsigned char*>(y.data()),
                                    y.size() * sizeof(double));
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) fail("cannot open " + tmp);
        out << j.dump(2) << "\n";
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) fail("rename failed for " + path);
}

SpectralWindowPair read_pair(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);
    json j = json::parse(in);
    SpectralWindowPair pair;
    pair.params.d = j.at("params").at("d").get<int>();
    pair.params.a0 = j.at("params").at("a0").get<double>();
    pair.params.a1 = j.at("params").at("a1").get<double>();
    pair.params.b = j.at("params").at("b").get<std::vector<double>>();
    pair.params.validate();
    pair.c1 = j.at("c1").get<double>();
    pair.c2 = j.at("c2").get<std::vector<double>>();
    pair.normalized = j.at("normalized").get<bool>();
    pair.c_psi_cached = j.at("c_psi").get<double>();
    auto bytes = base64_decode(j.at("phi1_table").get<std::string>());
    if (bytes.size() != SpectralWindowPair::profile_points * sizeof(double))
        fail("phi1 table size mismatch");
    std::vector<double> vals(SpectralWindowPair::profile_points);
    std::memcpy(vals.data(), bytes.data(), bytes.size());
    pair.phi1_interp.build(0.0, pair.params.a1 / (SpectralWindowPair::profile_points - 1),
                           std::move(vals));
    return pair;
}

}  // namespace shearcoorb
