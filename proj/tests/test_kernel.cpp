#include <cmath>

#include "doctest.h"
#include "shearcoorb/config.hpp"
#include "shearcoorb/kernel.hpp"
#include "shearcoorb/util.hpp"

using namespace shearcoorb;

namespace {

WindowParams quarter_params() {
    WindowParams p;
    p.d = 3;
    p.a0 = 0.25;
    p.a1 = 0.75;
    p.b = {0.25, 0.25};
    return p;
}

const SpectralWindowPair& quarter_pair() {
    static SpectralWindowPair pair = normalize_pair(build_window_pair(quarter_params()));
    return pair;
}

double uniform(std::uint64_t seed, std::uint64_t k, double lo, double hi) {
    return lo + (hi - lo) * u64_to_unit(splitmix64(seed ^ splitmix64(k)));
}

// random parameter whose dilated band fits inside the given Nyquist range
ParamPoint random_point(std::uint64_t seed, std::uint64_t k, bool coarse) {
    ParamPoint p;
    p.coarse = coarse;
    if (!coarse) {
        double mag = uniform(seed, 4 * k, 0.5, 1.0);
        p.a = (splitmix64(seed + 7 * k) & 1) ? mag : -mag;
    }
    p.s = {uniform(seed, 4 * k + 1, -1.0, 1.0), uniform(seed, 4 * k + 2, -1.0, 1.0)};
    p.t = {uniform(seed, 4 * k + 3, -2.0, 2.0), uniform(seed, 9 * k + 5, -2.0, 2.0),
           uniform(seed, 9 * k + 8, -2.0, 2.0)};
    return p;
}

}  // namespace

TEST_CASE("factorized inner product matches the brute-force lattice sum") {
    GridSpec grid = make_grid(3, 32, 16.0);
    const SpectralWindowPair& pair = quarter_pair();
    for (int trial = 0; trial < 12; ++trial) {
        SpectralElem x, y;
        x.phi_window = trial % 3 == 0;
        x.coarse = x.phi_window;
        x.a = uniform(1, 10 * trial, 0.8, 1.0);
        x.s = {uniform(1, 10 * trial + 1, -0.5, 0.5), uniform(1, 10 * trial + 2, -0.5, 0.5)};
        x.t = {uniform(1, 10 * trial + 3, -2.0, 2.0), uniform(1, 10 * trial + 4, -2.0, 2.0),
               uniform(1, 10 * trial + 5, -2.0, 2.0)};
        y.phi_window = trial % 4 == 0;
        y.coarse = y.phi_window;
        y.a = uniform(2, 10 * trial, 0.8, 1.0);
        y.s = {uniform(2, 10 * trial + 1, -0.5, 0.5), uniform(2, 10 * trial + 2, -0.5, 0.5)};
        y.t = {uniform(2, 10 * trial + 3, -2.0, 2.0), uniform(2, 10 * trial + 4, -2.0, 2.0),
               uniform(2, 10 * trial + 5, -2.0, 2.0)};
        cplx fast = elem_inner(x, y, pair, pair, grid);
        cplx slow = elem_inner_bruteforce(x, y, pair, pair, grid);
        CHECK(std::abs(fast - slow) <= 1e-12 * (1.0 + std::abs(slow)));
    }
}

TEST_CASE("kernel is Hermitian") {
    GridSpec grid = make_grid(3, 64, 16.0);
    const SpectralWindowPair& pair = quarter_pair();
    for (int trial = 0; trial < 200; ++trial) {
        ParamPoint x = random_point(31, trial, trial % 4 == 0);
        ParamPoint y = random_point(37, trial, trial % 5 == 0);
        cplx rxy = kernel_eval_direct(x, y, pair, grid);
        cplx ryx = kernel_eval_direct(y, x, pair, grid);
        CHECK(std::abs(rxy - std::conj(ryx)) <= 1e-12 * (1.0 + std::abs(rxy)));
    }
}

TEST_CASE("diagonal values are parameter independent") {
    GridSpec grid = make_grid(3, 512, 128.0);
    const SpectralWindowPair& pair = quarter_pair();
    double ref = -1.0;
    for (int trial = 0; trial < 10; ++trial) {
        ParamPoint x = random_point(91, trial, false);
        double diag = kernel_eval_direct(x, x, pair, grid).real();
        double reduced = kernel_eval_reduced(x, x, pair, grid);
        CHECK(std::abs(reduced - diag) <= 1e-8 * (1.0 + diag));
        if (ref < 0.0)
            ref = diag;
        else
            CHECK(diag == doctest::Approx(ref).epsilon(1e-6));
    }
    CHECK(ref > 0.0);
}

TEST_CASE("reduced kernel matches the direct kernel on all four sheet pairs") {
    // the identities are exact in the continuum; both sides are lattice
    // quadratures, so agreement needs a fine spectral step
    GridSpec grid = make_grid(3, 512, 128.0);
    const SpectralWindowPair& pair = quarter_pair();
    int idx = 0;
    for (bool cx : {true, false})
        for (bool cy : {true, false})
            for (int trial = 0; trial < 25; ++trial) {
                ParamPoint x = random_point(101, idx, cx);
                ParamPoint y = random_point(103, idx, cy);
                ++idx;
                double direct = std::abs(kernel_eval_direct(x, y, pair, grid));
                double reduced = kernel_eval_reduced(x, y, pair, grid);
                CHECK(std::abs(reduced - direct) <= 1e-8 * (1.0 + direct));
            }
}

TEST_CASE("kernel vanishes for disjoint scale bands") {
    GridSpec grid = make_grid(3, 512, 64.0);  // Nyquist 4
    const SpectralWindowPair& pair = quarter_pair();
    ParamPoint x, y;
    x.a = 1.0;
    x.s = {0.0, 0.0};
    x.t = {0.0, 0.0, 0.0};
    y.a = 0.31;  // band [0.81, 2.42]; scale ratio > a1/a0 = 3
    y.s = {0.3, -0.2};
    y.t = {1.0, 0.5, 0.0};
    CHECK(std::abs(kernel_eval_direct(x, y, pair, grid)) <= 1e-14);
    // coarse against a deep fine scale: phi support ends at a1
    ParamPoint c;
    c.coarse = true;
    c.s = {0.0, 0.0};
    c.t = {0.0, 0.0, 0.0};
    CHECK(std::abs(kernel_eval_direct(c, y, pair, grid)) <= 1e-14);
}

TEST_CASE("Gramian collapses to the kernel and scales bilinearly") {
    GridSpec grid = make_grid(3, 64, 16.0);
    const SpectralWindowPair& pair = quarter_pair();
    ParamPoint x = random_point(11, 0, false);
    ParamPoint y = random_point(13, 1, false);
    cplx direct = kernel_eval_direct(x, y, pair, grid);
    CHECK(std::abs(gramian_eval(pair, pair, x, y, grid) - direct) <= 1e-12 * (1.0 + std::abs(direct)));

    SpectralWindowPair scaled = pair;
    scaled.c1 *= 2.0;
    cplx g = gramian_eval(pair, scaled, x, y, grid);
    CHECK(std::abs(g - 2.0 * direct) <= 1e-12 * (1.0 + std::abs(direct)));

    cplx ab = gramian_eval(pair, scaled, x, y, grid);
    cplx ba = gramian_eval(scaled, pair, y, x, grid);
    CHECK(std::abs(ab - std::conj(ba)) <= 1e-12 * (1.0 + std::abs(ab)));
}

TEST_CASE("row integrals depend only on the scale component") {
    TransformConfig cfg;
    cfg.grid = make_grid(3, 256, 64.0);
    cfg.pair = std::make_shared<SpectralWindowPair>(quarter_pair());
    cfg.pgrid = build_param_grid(1, 2, 0.4, 5.0, ScaleRep::Geometric, cfg.grid);
    cfg.workers = 2;
    ParamPoint x;
    x.a = cfg.pgrid.cells[0].rep;
    x.s = {0.0, 0.0};
    x.t = {0.0, 0.0, 0.0};
    RowIntegral base = kernel_row_integral(cfg, x, 2.0, 0.5, 3.0);
    CHECK(base.total() > 0.0);

    ParamPoint shifted = x;
    shifted.s = {0.8, -0.4};                      // shear lattice nodes
    shifted.t = {3.0 * cfg.grid.dx(), 0.0, -7.0 * cfg.grid.dx()};
    RowIntegral moved = kernel_row_integral(cfg, shifted, 2.0, 0.5, 3.0);
    CHECK(moved.coarse_part == doctest::Approx(base.coarse_part).epsilon(1e-6));
    CHECK(moved.fine_part == doctest::Approx(base.fine_part).epsilon(1e-6));

    ParamPoint mirrored = x;
    mirrored.a = -x.a;
    RowIntegral neg = kernel_row_integral(cfg, mirrored, 2.0, 0.5, 3.0);
    CHECK(neg.total() == doctest::Approx(base.total()).epsilon(1e-12));
}

TEST_CASE("aq estimate is monotone in r and validates inputs") {
    TransformConfig cfg;
    cfg.grid = make_grid(3, 64, 16.0);
    cfg.pair = std::make_shared<SpectralWindowPair>(quarter_pair());
    cfg.pgrid = build_param_grid(1, 2, 0.5, 2.0, ScaleRep::Geometric, cfg.grid);
    cfg.workers = 2;
    KernelEstimate e0 = aq_norm_estimate(cfg, 2.0, 0.0, {1.0, 2.0});
    KernelEstimate e1 = aq_norm_estimate(cfg, 2.0, 1.0, {1.0, 2.0});
    REQUIRE(e0.estimate.size() == 2);
    CHECK(e1.estimate.back() >= e0.estimate.back());
    for (const auto& blocks : e0.blocks)
        for (double v : blocks) CHECK(v >= 0.0);
    CHECK_THROWS_WITH(aq_norm_estimate(cfg, 0.5, 0.0, {1.0}), "q must be >= 1");
    CHECK_THROWS_WITH(aq_norm_estimate(cfg, 2.0, 0.0, {}), "empty rho schedule");
}

TEST_CASE("kernel apply: zero field and linearity") {
    RunConfig rc = parse_config(R"({
      "grid": {"d": 3, "n": 16, "L": 8.0},
      "window": {"a0": 0.25, "a1": 0.75, "b": [0.25]},
      "paramgrid": {"J": 1, "subcells": 1, "shear_spacing": 1.0, "shear_radius": 1.0,
                    "scale_representative": "geometric"},
      "weights": {"r": [0.0], "p": [2.0]},
      "kernel": {"q": [2.0], "rho_schedule": [1.0], "n": 16, "L": 8.0, "pairs": 2},
      "phantom": {"band_lo": 0.3, "band_hi": 0.8, "amplitude": 1.0},
      "seed": 1
    })");
    TransformConfig cfg = rc.transform(1);
    CoeffField z;
    z.config_hash = cfg.hash;
    z.grid = cfg.grid;
    z.planes = cfg.pgrid.plane_count();
    z.data.assign(static_cast<std::size_t>(z.planes),
                  std::vector<cplx>(static_cast<std::size_t>(cfg.grid.size()), cplx(0.0, 0.0)));
    CoeffField kz = kernel_apply(z, cfg);
    for (const auto& plane : kz.data)
        for (const auto& v : plane) CHECK(v == cplx(0.0, 0.0));
}

TEST_CASE("scalar Young inequalities") {
    CHECK(young_check(1.0, 1.0, 2.0, 2.0));           // equality case
    CHECK(young_check(2.0, 3.0, 2.0, 2.0));           // 6 <= 6.5
    CHECK(three_way_young_check(1.0, 2.0, 3.0, 3.0, 3.0, 3.0));
    CHECK_THROWS_WITH(young_check(1.0, 1.0, 2.0, 3.0), "exponents must be conjugate");
    CHECK_THROWS_WITH(three_way_young_check(1.0, 1.0, 1.0, 2.0, 2.0, 3.0),
                      "exponents must sum to one");
    CHECK_THROWS_WITH(young_check(-1.0, 1.0, 2.0, 2.0), "arguments must be nonnegative");
    // randomized sweep including near-boundary exponents
    for (int i = 0; i < 20000; ++i) {
        double a = 5.0 * u64_to_unit(splitmix64(3 * i));
        double b = 5.0 * u64_to_unit(splitmix64(3 * i + 1));
        double p = 1.0 + std::pow(10.0, -6.0 * u64_to_unit(splitmix64(3 * i + 2))) * 3.0;
        CHECK(young_check(a, b, p, p / (p - 1.0)));
    }
}

TEST_CASE("randomized discrete Schur bound") {
    SchurReport rep = schur_bound_check(100, 17);
    CHECK(rep.trials == 100);
    CHECK(rep.violations == 0);
    CHECK(rep.embedding_checks > 0);
    CHECK(rep.embedding_violations == 0);
    CHECK(rep.max_ratio <= 1.0 + 1e-12);
}
