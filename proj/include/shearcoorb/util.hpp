#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace shearcoorb {

// Compensated accumulator. Used by every measure-side reduction so that a
// fixed enumeration order gives bit-stable sums regardless of worker count.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        double y = x - carry;
        double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    double value() const { return sum; }
};

// splitmix64: counter-based generator, bit-stable across platforms.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// uniform in (0,1), never exactly 0
inline double u64_to_unit(std::uint64_t v) {
    return (static_cast<double>(v >> 11) + 0.5) * 0x1.0p-53;
}

// standard normal pair keyed by (seed, counter); Box-Muller
inline void seeded_gauss_pair(std::uint64_t seed, std::uint64_t counter, double& g1, double& g2) {
    std::uint64_t h = splitmix64(seed ^ splitmix64(counter));
    std::uint64_t h2 = splitmix64(h);
    double u1 = u64_to_unit(h);
    double u2 = u64_to_unit(h2);
    double rad = std::sqrt(-2.0 * std::log(u1));
    g1 = rad * std::cos(2.0 * M_PI * u2);
    g2 = rad * std::sin(2.0 * M_PI * u2);
}

// Adaptive Simpson with absolute tolerance; enough for the smooth bump
// profiles integrated here (all integrands are C^inf on the interior).
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-12, int max_depth = 48);

// FNV-1a over bytes; used for config hashing (stability, not security).
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string base64_encode(const unsigned char* data, std::size_t len);
std::vector<unsigned char> base64_decode(const std::string& text);

// Monotone (Fritsch-Carlson) cubic interpolant on a uniform grid.
struct MonotoneCubic {
    double x0 = 0.0, dx = 1.0;
    std::vector<double> y;
    std::vector<double> slope;  // one per node

    void build(double x_first, double spacing, std::vector<double> values);
    double eval(double x) const;
};

[[noreturn]] inline void fail(const std::string& msg) { throw std::runtime_error(msg); }

}  // namespace shearcoorb
