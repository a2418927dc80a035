#include <cmath>

#include "doctest.h"
#include "shearcoorb/config.hpp"
#include "shearcoorb/coorbit.hpp"
#include "shearcoorb/util.hpp"

using namespace shearcoorb;

namespace {

const char* kConfig = R"({
  "grid": {"d": 3, "n": 16, "L": 8.0},
  "window": {"a0": 0.25, "a1": 0.75, "b": [0.25]},
  "paramgrid": {"J": 1, "subcells": 2, "shear_spacing": 1.0, "shear_radius": 2.0,
                "scale_representative": "geometric"},
  "weights": {"r": [0.0, 1.0], "p": [2.0]},
  "kernel": {"q": [2.0], "rho_schedule": [1.0], "n": 16, "L": 8.0, "pairs": 2},
  "phantom": {"band_lo": 0.3, "band_hi": 0.8, "amplitude": 1.0},
  "seed": 1
})";

const TransformConfig& cfg() {
    static TransformConfig c = parse_config(kConfig).transform(2);
    return c;
}

VolumeField phantom(std::uint64_t seed) {
    PhantomSpec ps;
    ps.seed = seed;
    ps.band_lo = 0.3;
    ps.band_hi = 0.8;
    return make_phantom(ps, cfg().grid);
}

CoeffField random_coeffs(std::uint64_t seed) {
    CoeffField c;
    c.config_hash = cfg().hash;
    c.grid = cfg().grid;
    c.planes = cfg().pgrid.plane_count();
    c.data.resize(static_cast<std::size_t>(c.planes));
    std::uint64_t ctr = 0;
    for (auto& plane : c.data) {
        plane.resize(static_cast<std::size_t>(cfg().grid.size()));
        for (auto& v : plane) {
            double g1, g2;
            seeded_gauss_pair(seed, ctr++, g1, g2);
            v = cplx(g1, g2);
        }
    }
    return c;
}

}  // namespace

TEST_CASE("lpv norm: zero field and validation") {
    CoeffField z = random_coeffs(1);
    for (auto& plane : z.data)
        for (auto& v : plane) v = cplx(0.0, 0.0);
    CHECK(lpv_norm(z, cfg(), 2.0, 0.0) == 0.0);
    CHECK(lpv_norm(z, cfg(), std::numeric_limits<double>::infinity(), 1.0) == 0.0);
    CHECK_THROWS_WITH(lpv_norm(z, cfg(), 0.5, 0.0), "p must be >= 1");
    CHECK_THROWS_WITH(lpv_norm(z, cfg(), 2.0, -1.0), "r must be >= 0");
    z.config_hash ^= 1;
    CHECK_THROWS_WITH(lpv_norm(z, cfg(), 2.0, 0.0), "config hash mismatch");
}

TEST_CASE("unweighted p=2 norm squares to the coefficient energy") {
    VolumeField f = phantom(2);
    CoeffField c = analyze(f, cfg());
    double norm = lpv_norm(c, cfg(), 2.0, 0.0);
    double energy = coeff_energy(c, cfg());
    CHECK(norm * norm == doctest::Approx(energy).epsilon(1e-12));
}

TEST_CASE("single-cell indicator has a closed-form norm") {
    // put value 1 at one translation bin of one fine plane
    std::int64_t plane = cfg().pgrid.shear_tuples();  // first fine plane
    ParamPoint pt = plane_point(cfg().pgrid, plane);
    REQUIRE(!pt.coarse);
    CoeffField c = random_coeffs(1);
    for (auto& pl : c.data)
        for (auto& v : pl) v = cplx(0.0, 0.0);
    c.data[static_cast<std::size_t>(plane)][5] = cplx(1.0, 0.0);
    double w = plane_measure_weight(cfg().pgrid, plane) * cfg().pgrid.translation_weight();
    for (double p : {1.0, 2.0, 4.0}) {
        for (double r : {0.0, 1.0}) {
            double expect = std::pow(w, 1.0 / p) * std::pow(std::abs(pt.a), -r);
            CHECK(lpv_norm(c, cfg(), p, r) == doctest::Approx(expect).epsilon(1e-12));
        }
    }
    double inf = std::numeric_limits<double>::infinity();
    CHECK(lpv_norm(c, cfg(), inf, 1.0) ==
          doctest::Approx(std::pow(std::abs(pt.a), -1.0)).epsilon(1e-12));
}

TEST_CASE("homogeneity and triangle inequality") {
    CoeffField a = random_coeffs(5), b = random_coeffs(6);
    CoeffField sum = a;
    for (std::int64_t p = 0; p < a.planes; ++p)
        for (std::size_t i = 0; i < a.data[static_cast<std::size_t>(p)].size(); ++i)
            sum.data[static_cast<std::size_t>(p)][i] += b.data[static_cast<std::size_t>(p)][i];
    double inf = std::numeric_limits<double>::infinity();
    for (double p : {1.0, 2.0, inf}) {
        double na = lpv_norm(a, cfg(), p, 0.5);
        double nb = lpv_norm(b, cfg(), p, 0.5);
        double ns = lpv_norm(sum, cfg(), p, 0.5);
        CHECK(ns <= na + nb + 1e-12 * (na + nb));
        CoeffField scaled = a;
        for (auto& plane : scaled.data)
            for (auto& v : plane) v *= cplx(0.0, -3.0);
        CHECK(lpv_norm(scaled, cfg(), p, 0.5) == doctest::Approx(3.0 * na).epsilon(1e-12));
    }
}

TEST_CASE("norms are monotone in r") {
    CoeffField c = random_coeffs(9);
    for (double p : {1.0, 2.0}) {
        double prev = -1.0;
        for (double r : {0.0, 0.5, 1.0, 2.0}) {
            double n = lpv_norm(c, cfg(), p, r);
            CHECK(n >= prev);
            prev = n;
        }
    }
}

TEST_CASE("streaming norm matches the stored path bit for bit") {
    VolumeField f = phantom(4);
    CoeffField c = analyze(f, cfg());
    double inf = std::numeric_limits<double>::infinity();
    for (double p : {1.0, 2.0, inf}) {
        for (double r : {0.0, 1.0}) {
            double stored = lpv_norm(c, cfg(), p, r);
            double streaming = lpv_norm_streaming(f, cfg(), p, r);
            CHECK(stored == streaming);
            CHECK(coorbit_norm(f, cfg(), p, r) == streaming);
        }
    }
}

TEST_CASE("coorbit norm homogeneity") {
    VolumeField f = phantom(7);
    double base = coorbit_norm(f, cfg(), 2.0, 0.5);
    CHECK(base > 0.0);
    VolumeField scaled = f;
    for (auto& v : scaled.values) v *= cplx(3.0, 4.0);  // modulus 5
    CHECK(coorbit_norm(scaled, cfg(), 2.0, 0.5) == doctest::Approx(5.0 * base).epsilon(1e-12));
}

TEST_CASE("embedding report") {
    VolumeField f = phantom(11);
    EmbeddingReport rep = embedding_report(f, cfg(), {1.0, 2.0}, {0.0, 0.5, 0.5, 1.0});
    CHECK(rep.r_monotone_ok);
    REQUIRE(rep.rows.size() == 8);
    // duplicate r entries give equal norms
    CHECK(rep.rows[1].norm == rep.rows[2].norm);
    CHECK(rep.rows[5].norm == rep.rows[6].norm);
    CHECK_THROWS_WITH(embedding_report(f, cfg(), {}, {0.0}), "empty request");

    std::string csv = coorbit_csv(rep, 12345);
    CHECK(csv.rfind("p,r,norm,config_hash\n", 0) == 0);
    CHECK(csv.find(",12345\n") != std::string::npos);
}
