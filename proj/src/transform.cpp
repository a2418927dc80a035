#include "shearcoorb/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <thread>

#include "nlohmann/json.hpp"
#include "shearcoorb/util.hpp"

namespace shearcoorb {

using json = nlohmann::json;

void TransformConfig::validate() const {
    if (!pair) fail("transform config has no window pair");
    if (pair->params.d != grid.d) fail("window/grid dimension mismatch");
    // Fine cells may extend past the lattice band (they contribute nothing
    // there); the base band itself has to fit.
    check_nyquist(*pair, 1.0, grid, margin);
}

void parallel_chunks(std::int64_t n, int workers,
                     const std::function<void(std::int64_t, std::int64_t)>& body) {
    workers = std::max(1, workers);
    if (workers == 1 || n < 2) {
        body(0, n);
        return;
    }
    std::int64_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        std::int64_t lo = w * chunk, hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back(body, lo, hi);
    }
    for (auto& t : pool) t.join();
}

PlaneRef plane_ref(const ParamGrid& pg, std::int64_t plane) {
    std::int64_t tuples = pg.shear_tuples();
    std::int64_t sheet = plane / tuples;
    PlaneRef ref;
    ref.tuple = plane % tuples;
    ref.coarse = sheet == 0;
    ref.cell = ref.coarse ? -1 : static_cast<int>(sheet - 1);
    return ref;
}

double plane_measure_weight(const ParamGrid& pg, std::int64_t plane) {
    PlaneRef ref = plane_ref(pg, plane);
    double w = pg.shear_weight();
    if (!ref.coarse) w *= pg.cells[static_cast<std::size_t>(ref.cell)].weight;
    return w;
}

ParamPoint plane_point(const ParamGrid& pg, std::int64_t plane) {
    PlaneRef ref = plane_ref(pg, plane);
    ParamPoint pt;
    pt.coarse = ref.coarse;
    if (!ref.coarse) pt.a = pg.cells[static_cast<std::size_t>(ref.cell)].rep;
    pt.s.resize(static_cast<std::size_t>(pg.d - 1));
    pg.shear_of(ref.tuple, pt.s.data());
    pt.t.assign(static_cast<std::size_t>(pg.d), 0.0);
    return pt;
}

namespace {

VolumeField as_spectral(const VolumeField& f) {
    return f.domain == Domain::Spectral ? f : fft_forward(f);
}

// fill a spectral element plane (t = 0) into buf
void element_plane(const TransformConfig& cfg, std::int64_t plane, std::vector<double>& buf) {
    const GridSpec& g = cfg.grid;
    ParamPoint pt = plane_point(cfg.pgrid, plane);
    buf.assign(static_cast<std::size_t>(g.size()), 0.0);
    std::vector<int> k(g.d);
    std::vector<double> xi(g.d);
    for (std::int64_t idx = 0; idx < g.size(); ++idx) {
        decode_index(g, idx, k.data());
        for (int ax = 0; ax < g.d; ++ax) xi[ax] = g.xi(k[ax]);
        buf[static_cast<std::size_t>(idx)] =
            frame_element_value(*cfg.pair, pt.coarse, pt.a, pt.s.data(), xi.data());
    }
}

}  // namespace

CoeffField analyze(const VolumeField& f, const TransformConfig& cfg) {
    cfg.validate();
    if (!(f.spec == cfg.grid)) fail("field/config grid mismatch");
    std::int64_t planes = cfg.pgrid.plane_count();
    std::int64_t bytes = planes * cfg.grid.size() * static_cast<std::int64_t>(sizeof(cplx));
    if (bytes > cfg.max_coeff_bytes)
        fail("coefficient field too large; use the streaming verification paths");
    VolumeField fh = as_spectral(f);
    CoeffField out;
    out.config_hash = cfg.hash;
    out.grid = cfg.grid;
    out.planes = planes;
    out.data.resize(static_cast<std::size_t>(planes));
    parallel_chunks(planes, cfg.workers, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<double> elem;
        for (std::int64_t p = lo; p < hi; ++p) {
            element_plane(cfg, p, elem);
            VolumeField prod = make_field(cfg.grid, Domain::Spectral);
            for (std::size_t i = 0; i < prod.values.size(); ++i)
                prod.values[i] = fh.values[i] * elem[i];
            out.data[static_cast<std::size_t>(p)] = fft_inverse(prod).values;
        }
    });
    return out;
}

VolumeField synthesize(const CoeffField& coeffs, const TransformConfig& cfg) {
    cfg.validate();
    if (coeffs.config_hash != cfg.hash) fail("config hash mismatch");
    if (!(coeffs.grid == cfg.grid)) fail("coefficient/config grid mismatch");
    std::int64_t planes = coeffs.planes;
    std::size_t nsz = static_cast<std::size_t>(cfg.grid.size());
    VolumeField acc = make_field(cfg.grid, Domain::Spectral);
    std::vector<cplx> carry(nsz, cplx(0.0, 0.0));
    // parallel FFTs in plane batches, strictly ordered accumulation
    int workers = std::max(1, cfg.workers);
    std::int64_t batch = std::max<std::int64_t>(1, workers);
    std::vector<std::vector<cplx>> terms(static_cast<std::size_t>(batch));
    for (std::int64_t base = 0; base < planes; base += batch) {
        std::int64_t cnt = std::min<std::int64_t>(batch, planes - base);
        parallel_chunks(cnt, workers, [&](std::int64_t lo, std::int64_t hi) {
            std::vector<double> elem;
            for (std::int64_t i = lo; i < hi; ++i) {
                std::int64_t p = base + i;
                element_plane(cfg, p, elem);
                VolumeField plane = make_field(cfg.grid, Domain::Spatial);
                plane.values = coeffs.data[static_cast<std::size_t>(p)];
                VolumeField ph = fft_forward(plane);
                double w = plane_measure_weight(cfg.pgrid, p);
                for (std::size_t bidx = 0; bidx < nsz; ++bidx)
                    ph.values[bidx] *= w * elem[bidx];
                terms[static_cast<std::size_t>(i)] = std::move(ph.values);
            }
        });
        for (std::int64_t i = 0; i < cnt; ++i) {
            const auto& term = terms[static_cast<std::size_t>(i)];
            for (std::size_t bidx = 0; bidx < nsz; ++bidx) {
                // complex Kahan, componentwise
                cplx y = term[bidx] - carry[bidx];
                cplx t = acc.values[bidx] + y;
                carry[bidx] = (t - acc.values[bidx]) - y;
                acc.values[bidx] = t;
            }
        }
    }
    return fft_inverse(acc);
}

std::vector<double> frame_symbol(const TransformConfig& cfg) {
    cfg.validate();
    const GridSpec& g = cfg.grid;
    const ParamGrid& pg = cfg.pgrid;
    const SpectralWindowPair& pair = *cfg.pair;
    std::vector<double> W(static_cast<std::size_t>(g.size()), 0.0);
    double ds = pg.shear.spacing;
    int m = pg.shear.m;

    parallel_chunks(g.size(), cfg.workers, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<int> k(g.d);
        std::vector<double> xi(g.d);
        for (std::int64_t idx = lo; idx < hi; ++idx) {
            decode_index(g, idx, k.data());
            for (int ax = 0; ax < g.d; ++ax) xi[ax] = g.xi(k[ax]);
            double x1 = xi[0];
            KahanSum acc;
            // coarse sheet: |xi1|^{d-1} phi1^2 prod_i sum_k ds psi2_i(...)^2
            double f1 = pair.phi1(std::abs(x1));
            if (f1 != 0.0 && x1 != 0.0) {
                double base = std::pow(std::abs(x1), g.d - 1) * f1 * f1;
                for (int ax = 1; ax < g.d && base != 0.0; ++ax) {
                    KahanSum axsum;
                    for (int kk = -m; kk <= m; ++kk) {
                        double v = pair.psi2_axis(ax - 1, xi[ax] + kk * ds * x1);
                        if (v != 0.0) axsum.add(ds * v * v);
                    }
                    base *= axsum.value();
                }
                acc.add(base);
            }
            // fine cells
            for (const auto& c : pg.cells) {
                double a = c.rep;
                double p1 = pair.psi1(a * x1);
                if (p1 == 0.0) continue;
                double root = std::abs(signed_root(a, g.d));
                double base = c.weight * scaling_det(a, g.d) * p1 * p1;
                for (int ax = 1; ax < g.d && base != 0.0; ++ax) {
                    KahanSum axsum;
                    for (int kk = -m; kk <= m; ++kk) {
                        double v = pair.psi2_axis(ax - 1, root * (xi[ax] + kk * ds * x1));
                        if (v != 0.0) axsum.add(ds * v * v);
                    }
                    base *= axsum.value();
                }
                acc.add(base);
            }
            W[static_cast<std::size_t>(idx)] = acc.value();
        }
    });
    return W;
}

ParsevalResult parseval_ratio(const VolumeField& f, const TransformConfig& cfg,
                              const std::vector<double>* symbol) {
    std::vector<double> local;
    if (!symbol) {
        local = frame_symbol(cfg);
        symbol = &local;
    }
    VolumeField fh = as_spectral(f);
    KahanSum num, den, cov;
    for (std::size_t i = 0; i < fh.values.size(); ++i) {
        double e = std::norm(fh.values[i]);
        if (e == 0.0) continue;
        den.add(e);
        num.add(e * (*symbol)[i]);
        if ((*symbol)[i] >= 0.5) cov.add(e);
    }
    ParsevalResult res;
    if (den.value() == 0.0) {
        res.zero_input = true;
        res.ratio = std::numeric_limits<double>::quiet_NaN();
        return res;
    }
    res.ratio = num.value() / den.value();
    res.coverage = cov.value() / den.value();
    res.low_coverage = res.coverage < 0.99;
    return res;
}

double roundtrip_error(const VolumeField& f, const TransformConfig& cfg,
                       const std::vector<double>* symbol) {
    std::vector<double> local;
    if (!symbol) {
        local = frame_symbol(cfg);
        symbol = &local;
    }
    VolumeField fh = as_spectral(f);
    KahanSum num, den;
    for (std::size_t i = 0; i < fh.values.size(); ++i) {
        double e = std::norm(fh.values[i]);
        if (e == 0.0) continue;
        double w = (*symbol)[i] - 1.0;
        den.add(e);
        num.add(e * w * w);
    }
    if (den.value() == 0.0) fail("zero signal");
    return std::sqrt(num.value() / den.value());
}

double reproduce_error(const VolumeField& f, const TransformConfig& cfg,
                       const std::vector<double>* symbol) {
    std::vector<double> local;
    if (!symbol) {
        local = frame_symbol(cfg);
        symbol = &local;
    }
    VolumeField fh = as_spectral(f);
    KahanSum num, den;
    for (std::size_t i = 0; i < fh.values.size(); ++i) {
        double e = std::norm(fh.values[i]);
        if (e == 0.0) continue;
        double w = (*symbol)[i];
        den.add(e * w);
        num.add(e * w * (w - 1.0) * (w - 1.0));
    }
    if (den.value() == 0.0) fail("zero coefficient field");
    return std::sqrt(num.value() / den.value());
}

double coeff_energy(const CoeffField& coeffs, const TransformConfig& cfg) {
    double dt = cfg.pgrid.translation_weight();
    KahanSum total;
    for (std::int64_t p = 0; p < coeffs.planes; ++p) {
        double w = plane_measure_weight(cfg.pgrid, p) * dt;
        KahanSum plane;
        for (const cplx& v : coeffs.data[static_cast<std::size_t>(p)]) plane.add(std::norm(v));
        total.add(w * plane.value());
    }
    return total.value();
}

void write_scf(const std::string& path, const CoeffField& coeffs) {
    json hdr = {{"config_hash", coeffs.config_hash},
                {"d", coeffs.grid.d},
                {"n", coeffs.grid.n},
                {"L", coeffs.grid.L},
                {"planes", coeffs.planes},
                {"order", "coarse-then-cells,shear-tuple-minor"},
                {"dtype", "c128-le"}};
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) fail("cannot open " + tmp);
        out.write("SHCOSCF1", 8);
        std::string h = hdr.dump();
        h.push_back('\n');
        out.write(h.data(), static_cast<std::streamsize>(h.size()));
        for (const auto& plane : coeffs.data)
            out.write(reinterpret_cast<const char*>(plane.data()),
                      static_cast<std::streamsize>(plane.size() * sizeof(cplx)));
        if (!out) fail("write failure on " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) fail("rename failed for " + path);
}

CoeffField read_scf(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "SHCOSCF1", 8) != 0) fail("bad SCF magic");
    std::string hline;
    std::getline(in, hline);
    json hdr = json::parse(hline);
    CoeffField c;
    c.config_hash = hdr.at("config_hash").get<std::uint64_t>();
    c.grid = make_grid(hdr.at("d").get<int>(), hdr.at("n").get<int>(), hdr.at("L").get<double>());
    c.planes = hdr.at("planes").get<std::int64_t>();
    c.data.resize(static_cast<std::size_t>(c.planes));
    std::size_t nsz = static_cast<std::size_t>(c.grid.size());
    for (auto& plane : c.data) {
        plane.resize(nsz);
        in.read(reinterpret_cast<char*>(plane.data()),
                static_cast<std::streamsize>(nsz * sizeof(cplx)));
        if (in.gcount() != static_cast<std::streamsize>(nsz * sizeof(cplx)))
            fail("payload size mismatch");
    }
    return c;
}

VolumeField make_element_phantom(const ParamPoint& point, const TransformConfig& cfg) {
    cfg.validate();
    if (!point.coarse) check_nyquist(*cfg.pair, point.a, cfg.grid, cfg.margin);
    return frame_element_spectral(point, *cfg.pair, cfg.grid);
}

}  // namespace shearcoorb
