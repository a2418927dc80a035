#include "shearcoorb/frame.hpp"

#include <cmath>

#include "shearcoorb/util.hpp"

namespace shearcoorb {

std::vector<double> scaling_matrix(double a, int d) {
    if (a == 0.0) fail("scale a = 0");
    std::vector<double> m(static_cast<std::size_t>(d) * d, 0.0);
    m[0] = a;
    double r = signed_root(a, d);
    for (int i = 1; i < d; ++i) m[static_cast<std::size_t>(i) * d + i] = r;
    return m;
}

std::vector<double> shear_matrix(const std::vector<double>& s, int d) {
    std::vector<double> m(static_cast<std::size_t>(d) * d, 0.0);
    for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i) * d + i] = 1.0;
    for (int i = 1; i < d; ++i) m[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i - 1)];
    return m;
}

double scaling_det(double a, int d) {
    if (a == 0.0) fail("scale a = 0");
    return std::pow(std::abs(a), 2.0 - 1.0 / d);
}

double matrix_det(const std::vector<double>& m_in, int d) {
    std::vector<double> m = m_in;
    double det = 1.0;
    for (int c = 0; c < d; ++c) {
        int piv = c;
        for (int r = c + 1; r < d; ++r)
            if (std::abs(m[static_cast<std::size_t>(r) * d + c]) >
                std::abs(m[static_cast<std::size_t>(piv) * d + c]))
                piv = r;
        if (piv != c) {
            for (int k = 0; k < d; ++k)
                std::swap(m[static_cast<std::size_t>(c) * d + k],
                          m[static_cast<std::size_t>(piv) * d + k]);
            det = -det;
        }
        double p = m[static_cast<std::size_t>(c) * d + c];
        if (p == 0.0) return 0.0;
        det *= p;
        for (int r = c + 1; r < d; ++r) {
            double f = m[static_cast<std::size_t>(r) * d + c] / p;
            for (int k = c; k < d; ++k)
                m[static_cast<std::size_t>(r) * d + k] -= f * m[static_cast<std::size_t>(c) * d + k];
        }
    }
    return det;
}

void dilated_arg(double a, const double* s, const double* xi, int d, double* out) {
    double r = signed_root(a, d);
    out[0] = a * xi[0];
    for (int i = 1; i < d; ++i) out[i] = r * (xi[i] + s[i - 1] * xi[0]);
}

FinePoint group_compose(const FinePoint& g, const FinePoint& h, int d) {
    FinePoint out;
    out.a = g.a * h.a;
    double f = std::pow(std::abs(g.a), 1.0 - 1.0 / d);
    out.s.resize(static_cast<std::size_t>(d - 1));
    for (int i = 0; i < d - 1; ++i)
        out.s[static_cast<std::size_t>(i)] =
            g.s[static_cast<std::size_t>(i)] + f * h.s[static_cast<std::size_t>(i)];
    // t + S_s A_a t'
    out.t.resize(static_cast<std::size_t>(d));
    double root = signed_root(g.a, d);
    std::vector<double> at(static_cast<std::size_t>(d));
    at[0] = g.a * h.t[0];
    for (int i = 1; i < d; ++i) at[static_cast<std::size_t>(i)] = root * h.t[static_cast<std::size_t>(i)];
    out.t[0] = g.t[0];
    double dot = at[0];
    for (int i = 1; i < d; ++i)
        dot += g.s[static_cast<std::size_t>(i - 1)] * at[static_cast<std::size_t>(i)];
    out.t[0] += dot;
    for (int i = 1; i < d; ++i)
        out.t[static_cast<std::size_t>(i)] = g.t[static_cast<std::size_t>(i)] + at[static_cast<std::size_t>(i)];
    return out;
}

FinePoint group_inverse(const FinePoint& g, int d) {
    FinePoint inv;
    inv.a = 1.0 / g.a;
    double f = std::pow(std::abs(inv.a), 1.0 - 1.0 / d);
    inv.s.resize(static_cast<std::size_t>(d - 1));
    for (int i = 0; i < d - 1; ++i) inv.s[static_cast<std::size_t>(i)] = -f * g.s[static_cast<std::size_t>(i)];
    // -A_a^{-1} S_s^{-1} t with S_s^{-1} t = (t1 - s . t~, t~)
    std::vector<double> st(static_cast<std::size_t>(d));
    st[0] = g.t[0];
    for (int i = 1; i < d; ++i)
        st[0] -= g.s[static_cast<std::size_t>(i - 1)] * g.t[static_cast<std::size_t>(i)];
    for (int i = 1; i < d; ++i) st[static_cast<std::size_t>(i)] = g.t[static_cast<std::size_t>(i)];
    inv.t.resize(static_cast<std::size_t>(d));
    double root = signed_root(g.a, d);
    inv.t[0] = -st[0] / g.a;
    for (int i = 1; i < d; ++i) inv.t[static_cast<std::size_t>(i)] = -st[static_cast<std::size_t>(i)] / root;
    return inv;
}

double frame_element_value(const SpectralWindowPair& pair, bool coarse, double a, const double* s,
                           const double* xi) {
    int d = pair.params.d;
    double arg[16];
    if (coarse) {
        // S has first row (1, s^T); S^T xi = (xi1, xi~ + s xi1)
        arg[0] = xi[0];
        for (int i = 1; i < d; ++i) arg[i] = xi[i] + s[i - 1] * xi[0];
        return pair.phi_hat(arg);
    }
    dilated_arg(a, s, xi, d, arg);
    double det = scaling_det(a, d);
    return std::sqrt(det) * pair.psi_hat(arg);
}

VolumeField frame_element_spectral(const ParamPoint& point, const SpectralWindowPair& pair,
                                   const GridSpec& grid) {
    VolumeField f = make_field(grid, Domain::Spectral);
    std::vector<int> k(grid.d);
    std::vector<double> xi(grid.d);
    bool has_t = false;
    for (double tv : point.t)
        if (tv != 0.0) has_t = true;
    for (std::int64_t idx = 0; idx < grid.size(); ++idx) {
        decode_index(grid, idx, k.data());
        for (int ax = 0; ax < grid.d; ++ax) xi[ax] = grid.xi(k[ax]);
        double v = frame_element_value(pair, point.coarse, point.a, point.s.data(), xi.data());
        if (v == 0.0) continue;
        if (has_t) {
            double ph = 0.0;
            for (int ax = 0; ax < grid.d; ++ax) ph += xi[ax] * point.t[static_cast<std::size_t>(ax)];
            f.values[idx] = v * std::exp(cplx(0.0, -2.0 * M_PI * ph));
        } else {
            f.values[idx] = v;
        }
    }
    return f;
}

void check_nyquist(const SpectralWindowPair& pair, double a, const GridSpec& grid, double margin) {
    double edge = pair.params.a1 / std::abs(a) * (1.0 + margin);
    if (edge >= grid.nyquist()) fail("scaled band exceeds Nyquist");
}

}  // namespace shearcoorb
