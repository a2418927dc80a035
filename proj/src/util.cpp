#include "shearcoorb/util.hpp"

#include <algorithm>

namespace shearcoorb {

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa, double b, double fb,
               double m, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(f, a, fa, m, fm, lm, flm);
    double right = simpson(f, m, fm, b, fb, rm, frm);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (a == b) return 0.0;
    double m = 0.5 * (a + b);
    double fa = f(a), fb = f(b), fm = f(m);
    double whole = simpson(f, a, fa, b, fb, m, fm);
    return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

static const char* b64_alphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const unsigned char* data, std::size_t len) {
    std::string out;
    out.reserve((len + 2) / 3 * 4);
    for (std::size_t i = 0; i < len; i += 3) {
        unsigned v = data[i] << 16;
        if (i + 1 < len) v |= data[i + 1] << 8;
        if (i + 2 < len) v |= data[i + 2];
        out.push_back(b64_alphabet[(v >> 18) & 63]);
        out.push_back(b64_alphabet[(v >> 12) & 63]);
        out.push_back(i + 1 < len ? b64_alphabet[(v >> 6) & 63] : '=');
        out.push_back(i + 2 < len ? b64_alphabet[v & 63] : '=');
    }
    return out;
}

std::vector<unsigned char> base64_decode(const std::string& text) {
    auto val = [](char c) -> int {
        if (c >= 'A' && c <= 'Z') return c - 'A';
        if (c >= 'a' && c <= 'z') return c - 'a' + 26;
        if (c >= '0' && c <= '9') return c - '0' + 52;
        if (c == '+') return 62;
        if (c == '/') return 63;
        return -1;
    };
    std::vector<unsigned char> out;
    int acc = 0, bits = 0;
    for (char c : text) {
        if (c == '=' || c == '\n' || c == '\r') continue;
        int v = val(c);
        if (v < 0) fail("base64: bad character");
        acc = (acc << 6) | v;
        bits += 6;
        if (bits >= 8) {
            bits -= 8;
            out.push_back(static_cast<unsigned char>((acc >> bits) & 0xff));
        }
    }
    return out;
}

void MonotoneCubic::build(double x_first, double spacing, std::vector<double> values) {
    if (values.size() < 2) fail("interpolant needs at least two nodes");
    x0 = x_first;
    dx = spacing;
    y = std::move(values);
    std::size_t n = y.size();
    std::vector<double> d(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) d[i] = (y[i + 1] - y[i]) / dx;
    slope.assign(n, 0.0);
    slope[0] = d[0];
    slope[n - 1] = d[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (d[i - 1] * d[i] <= 0.0)
            slope[i] = 0.0;
        else
            slope[i] = 2.0 * d[i - 1] * d[i] / (d[i - 1] + d[i]);  // harmonic mean
    }
    // Fritsch-Carlson limiter
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (d[i] == 0.0) {
            slope[i] = slope[i + 1] = 0.0;
            continue;
        }
        double a = slope[i] / d[i], b = slope[i + 1] / d[i];
        double s = a * a + b * b;
        if (s > 9.0) {
            double t = 3.0 / std::sqrt(s);
            slope[i] = t * a * d[i];
            slope[i + 1] = t * b * d[i];
        }
    }
}

double MonotoneCubic::eval(double x) const {
    std::size_t n = y.size();
    double u = (x - x0) / dx;
    if (u <= 0.0) return y.front();
    if (u >= static_cast<double>(n - 1)) return y.back();
    std::size_t i = static_cast<std::size_t>(u);
    double t = u - static_cast<double>(i);
    double h00 = (1 + 2 * t) * (1 - t) * (1 - t);
    double h10 = t * (1 - t) * (1 - t);
    double h01 = t * t * (3 - 2 * t);
    double h11 = t * t * (t - 1);
    return h00 * y[i] + h10 * dx * slope[i] + h01 * y[i + 1] + h11 * dx * slope[i + 1];
}

}  // namespace shearcoorb
