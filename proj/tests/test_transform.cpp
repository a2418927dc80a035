#include <cmath>
#include <cstdio>
#include <cstring>

#include "doctest.h"
#include "shearcoorb/config.hpp"
#include "shearcoorb/transform.hpp"
#include "shearcoorb/util.hpp"

using namespace shearcoorb;

namespace {

const char* kSmallConfig = R"({
  "grid": {"d": 3, "n": 32, "L": 16.0},
  "window": {"a0": 0.25, "a1": 0.75, "b": [0.25]},
  "paramgrid": {"J": 1, "subcells": 2, "shear_spacing": 1.25, "shear_radius": 2.5,
                "scale_representative": "geometric"},
  "weights": {"r": [0.0, 1.0], "p": [2.0]},
  "kernel": {"q": [2.0], "rho_schedule": [1.25, 2.5], "n": 64, "L": 16.0, "pairs": 5},
  "phantom": {"band_lo": 0.3, "band_hi": 0.9, "amplitude": 1.0},
  "seed": 1
})";

const TransformConfig& small_cfg() {
    static TransformConfig cfg = parse_config(kSmallConfig).transform(2);
    return cfg;
}

VolumeField small_phantom(std::uint64_t seed) {
    PhantomSpec ps;
    ps.seed = seed;
    return make_phantom(ps, small_cfg().grid);
}

CoeffField random_coeffs(const TransformConfig& cfg, std::uint64_t seed) {
    CoeffField c;
    c.config_hash = cfg.hash;
    c.grid = cfg.grid;
    c.planes = cfg.pgrid.plane_count();
    c.data.resize(static_cast<std::size_t>(c.planes));
    std::uint64_t ctr = 0;
    for (auto& plane : c.data) {
        plane.resize(static_cast<std::size_t>(cfg.grid.size()));
        for (auto& v : plane) {
            double g1, g2;
            seeded_gauss_pair(seed, ctr++, g1, g2);
            v = cplx(g1, g2);
        }
    }
    return c;
}

}  // namespace

TEST_CASE("analyze is linear and annihilates zero") {
    const TransformConfig& cfg = small_cfg();
    VolumeField z = make_field(cfg.grid, Domain::Spectral);
    CoeffField cz = analyze(z, cfg);
    for (const auto& plane : cz.data)
        for (const auto& v : plane) CHECK(v == cplx(0.0, 0.0));

    VolumeField f = small_phantom(1), g = small_phantom(2);
    cplx alpha(0.7, -0.2), beta(-1.1, 0.5);
    VolumeField mix = make_field(cfg.grid, Domain::Spectral);
    for (std::size_t i = 0; i < mix.values.size(); ++i)
        mix.values[i] = alpha * f.values[i] + beta * g.values[i];
    CoeffField cf = analyze(f, cfg), cg = analyze(g, cfg), cm = analyze(mix, cfg);
    double max_err = 0.0, max_mag = 0.0;
    for (std::int64_t p = 0; p < cm.planes; ++p)
        for (std::size_t i = 0; i < cm.data[static_cast<std::size_t>(p)].size(); ++i) {
            cplx want = alpha * cf.data[static_cast<std::size_t>(p)][i] +
                        beta * cg.data[static_cast<std::size_t>(p)][i];
            max_err = std::max(max_err, std::abs(cm.data[static_cast<std::size_t>(p)][i] - want));
            max_mag = std::max(max_mag, std::abs(want));
        }
    CHECK(max_err <= 1e-12 * std::max(1.0, max_mag));
}

TEST_CASE("translation covariance on the lattice") {
    const TransformConfig& cfg = small_cfg();
    const GridSpec& g = cfg.grid;
    VolumeField f = small_phantom(3);
    // shift by t0 = (2, 5, 1) lattice steps: multiply the spectrum by the phase
    int shift[3] = {2, 5, 1};
    VolumeField fs = f;
    std::vector<int> k(3);
    for (std::int64_t idx = 0; idx < g.size(); ++idx) {
        decode_index(g, idx, k.data());
        double ph = 0.0;
        for (int ax = 0; ax < 3; ++ax) ph += g.xi(k[ax]) * shift[ax] * g.dx();
        fs.values[static_cast<std::size_t>(idx)] *= std::exp(cplx(0.0, -2.0 * M_PI * ph));
    }
    CoeffField cf = analyze(f, cfg), cs = analyze(fs, cfg);
    double max_err = 0.0, max_mag = 0.0;
    for (std::int64_t p = 0; p < cf.planes; ++p) {
        const auto& orig = cf.data[static_cast<std::size_t>(p)];
        const auto& shifted = cs.data[static_cast<std::size_t>(p)];
        for (std::int64_t idx = 0; idx < g.size(); ++idx) {
            decode_index(g, idx, k.data());
            std::int64_t src = 0;
            for (int ax = 0; ax < 3; ++ax)
                src = src * g.n + ((k[ax] - shift[ax] + g.n) % g.n);
            max_err = std::max(max_err, std::abs(shifted[static_cast<std::size_t>(idx)] -
                                                 orig[static_cast<std::size_t>(src)]));
            max_mag = std::max(max_mag, std::abs(orig[static_cast<std::size_t>(src)]));
        }
    }
    CHECK(max_err <= 1e-10 * std::max(1.0, max_mag));
}

TEST_CASE("analyze/synthesize adjointness") {
    const TransformConfig& cfg = small_cfg();
    VolumeField f = small_phantom(4);
    VolumeField fx = fft_inverse(f);  // spatial copy for the L2 side
    CoeffField G = random_coeffs(cfg, 99);
    CoeffField Vf = analyze(f, cfg);

    // <analyze(f), G>_mu
    double dt = cfg.pgrid.translation_weight();
    cplx lhs(0.0, 0.0);
    for (std::int64_t p = 0; p < Vf.planes; ++p) {
        double w = plane_measure_weight(cfg.pgrid, p) * dt;
        cplx acc(0.0, 0.0);
        for (std::size_t i = 0; i < Vf.data[static_cast<std::size_t>(p)].size(); ++i)
            acc += Vf.data[static_cast<std::size_t>(p)][i] *
                   std::conj(G.data[static_cast<std::size_t>(p)][i]);
        lhs += w * acc;
    }
    // <f, synthesize(G)>_L2
    VolumeField sg = synthesize(G, cfg);
    cplx rhs(0.0, 0.0);
    for (std::size_t i = 0; i < fx.values.size(); ++i)
        rhs += fx.values[i] * std::conj(sg.values[i]);
    rhs *= std::pow(cfg.grid.dx(), 3);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));
}

TEST_CASE("analyzing a frame element peaks at its own parameter") {
    const TransformConfig& cfg = small_cfg();
    const GridSpec& g = cfg.grid;
    // coarse plane, center shear tuple, lattice-aligned translation
    std::int64_t tuple = cfg.pgrid.shear_tuples() / 2;
    ParamPoint y = plane_point(cfg.pgrid, tuple);
    int tidx[3] = {3, 10, 28};
    std::int64_t tlin = 0;
    for (int ax = 0; ax < 3; ++ax) {
        y.t[static_cast<std::size_t>(ax)] = tidx[ax] * g.dx();
        tlin = tlin * g.n + tidx[ax];
    }
    VolumeField elem = make_element_phantom(y, cfg);
    double self = 0.0;
    for (const auto& v : elem.values) self += std::norm(v);
    self *= std::pow(g.dxi(), 3);  // R(y, y)

    CoeffField c = analyze(elem, cfg);
    cplx at_y = c.data[static_cast<std::size_t>(tuple)][static_cast<std::size_t>(tlin)];
    CHECK(at_y.real() == doctest::Approx(self).epsilon(1e-6));
    CHECK(std::abs(at_y.imag()) <= 1e-9 * self);
}

TEST_CASE("synthesize: zero input and homogeneity") {
    const TransformConfig& cfg = small_cfg();
    CoeffField z = random_coeffs(cfg, 1);
    for (auto& plane : z.data)
        for (auto& v : plane) v = cplx(0.0, 0.0);
    VolumeField sz = synthesize(z, cfg);
    for (const auto& v : sz.values) CHECK(std::abs(v) == 0.0);

    CoeffField c = random_coeffs(cfg, 2);
    VolumeField s1 = synthesize(c, cfg);
    cplx scale(2.0, -1.0);
    for (auto& plane : c.data)
        for (auto& v : plane) v *= scale;
    VolumeField s2 = synthesize(c, cfg);
    double max_err = 0.0, max_mag = 0.0;
    for (std::size_t i = 0; i < s1.values.size(); ++i) {
        max_err = std::max(max_err, std::abs(s2.values[i] - scale * s1.values[i]));
        max_mag = std::max(max_mag, std::abs(s2.values[i]));
    }
    CHECK(max_err <= 1e-12 * std::max(1.0, max_mag));
}

TEST_CASE("synthesize refuses foreign coefficients") {
    const TransformConfig& cfg = small_cfg();
    CoeffField c = random_coeffs(cfg, 3);
    c.config_hash ^= 1;
    CHECK_THROWS_WITH(synthesize(c, cfg), "config hash mismatch");
}

TEST_CASE("SCF round trip is bit exact") {
    const TransformConfig& cfg = small_cfg();
    CoeffField c = random_coeffs(cfg, 8);
    std::string path = "test_scf_roundtrip.scf";
    write_scf(path, c);
    CoeffField back = read_scf(path);
    CHECK(back.config_hash == c.config_hash);
    CHECK(back.grid == c.grid);
    CHECK(back.planes == c.planes);
    for (std::int64_t p = 0; p < c.planes; ++p)
        CHECK(std::memcmp(back.data[static_cast<std::size_t>(p)].data(),
                          c.data[static_cast<std::size_t>(p)].data(),
                          c.data[static_cast<std::size_t>(p)].size() * sizeof(cplx)) == 0);
    std::remove(path.c_str());
}

TEST_CASE("frame symbol and degenerate inputs") {
    const TransformConfig& cfg = small_cfg();
    std::vector<double> W = frame_symbol(cfg);
    double mx = 0.0;
    for (double w : W) {
        CHECK(w >= 0.0);
        mx = std::max(mx, w);
    }
    CHECK(mx > 0.0);

    VolumeField z = make_field(cfg.grid, Domain::Spectral);
    ParsevalResult res = parseval_ratio(z, cfg, &W);
    CHECK(res.zero_input);
    CHECK(std::isnan(res.ratio));
    CHECK_THROWS_WITH(roundtrip_error(z, cfg, &W), "zero signal");
    CHECK_THROWS_WITH(reproduce_error(z, cfg, &W), "zero coefficient field");
}
