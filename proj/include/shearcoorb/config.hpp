#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "shearcoorb/transform.hpp"

namespace shearcoorb {

// Fully resolved run configuration. The hash covers every semantic field, so
// coefficient files can refuse synthesis under a different setup.
struct RunConfig {
    int d = 3;
    int n = 32;
    double L = 16.0;

    double a0 = 0.25;
    double a1 = 0.75;
    std::vector<double> b;  // d-1 cross bandwidths

    int J = 2;
    int subcells = 16;
    double shear_spacing = 0.4;
    double shear_radius = 3.5;
    ScaleRep rep = ScaleRep::Geometric;

    std::vector<double> r_list;
    std::vector<double> p_list;  // may contain inf

    std::vector<double> q_list;
    std::vector<double> rho_schedule;
    int kernel_n = 2048;
    double kernel_L = 256.0;
    int kernel_pairs = 1000;

    double band_lo = 0.3;
    double band_hi = 0.9;
    double amplitude = 1.0;

    std::uint64_t seed = 1;
    std::uint64_t hash = 0;

    // canonical serialized form (defaults filled, fixed key order)
    std::string canonical() const;
    TransformConfig transform(int workers) const;
    GridSpec kernel_grid() const;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text);

}  // namespace shearcoorb
