#include "shearcoorb/coorbit.hpp"

#include <cmath>
#include <sstream>

#include "shearcoorb/util.hpp"

namespace shearcoorb {

namespace {

// mu-weighted plane reduction of (v_r |F|)^p; p = inf -> max v_r |F|
struct PlaneReducer {
    double p;
    bool inf;
    double dt;

    double reduce_plane(const std::vector<cplx>& plane, double w, double v) const {
        if (inf) {
            double mx = 0.0;
            for (const cplx& c : plane) mx = std::max(mx, std::abs(c));
            return mx * v;
        }
        KahanSum acc;
        for (const cplx& c : plane) {
            double m = std::abs(c);
            if (m != 0.0) acc.add(std::pow(m * v, p));
        }
        return w * dt * acc.value();
    }
};

double finish(const PlaneReducer& red, const std::vector<double>& partials) {
    if (red.inf) {
        double mx = 0.0;
        for (double v : partials) mx = std::max(mx, v);
        return mx;
    }
    KahanSum acc;
    for (double v : partials) acc.add(v);
    return std::pow(acc.value(), 1.0 / red.p);
}

double plane_weight_v(const TransformConfig& cfg, std::int64_t plane, double r) {
    return v_r(plane_point(cfg.pgrid, plane), r);
}

}  // namespace

double lpv_norm(const CoeffField& F, const TransformConfig& cfg, double p, double r) {
    if (p < 1.0) fail("p must be >= 1");
    if (r < 0.0) fail("r must be >= 0");
    if (F.config_hash != cfg.hash) fail("config hash mismatch");
    PlaneReducer red{p, std::isinf(p), cfg.pgrid.translation_weight()};
    std::vector<double> partials(static_cast<std::size_t>(F.planes), 0.0);
    parallel_chunks(F.planes, cfg.workers, [&](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i)
            partials[static_cast<std::size_t>(i)] =
                red.reduce_plane(F.data[static_cast<std::size_t>(i)],
                                 plane_measure_weight(cfg.pgrid, i), plane_weight_v(cfg, i, r));
    });
    return finish(red, partials);
}

double lpv_norm_streaming(const VolumeField& f, const TransformConfig& cfg, double p, double r) {
    if (p < 1.0) fail("p must be >= 1");
    if (r < 0.0) fail("r must be >= 0");
    cfg.validate();
    if (!(f.spec == cfg.grid)) fail("field/config grid mismatch");
    VolumeField fh = f.domain == Domain::Spectral ? f : fft_forward(f);
    const GridSpec& g = cfg.grid;
    std::int64_t planes = cfg.pgrid.plane_count();
    PlaneReducer red{p, std::isinf(p), cfg.pgrid.translation_weight()};
    std::vector<double> partials(static_cast<std::size_t>(planes), 0.0);
    parallel_chunks(planes, cfg.workers, [&](std::int64_t lo, std::int64_t hi) {
        std::vector<int> k(g.d);
        std::vector<double> xi(g.d);
        for (std::int64_t pl = lo; pl < hi; ++pl) {
            ParamPoint pt = plane_point(cfg.pgrid, pl);
            VolumeField prod = make_field(g, Domain::Spectral);
            for (std::int64_t idx = 0; idx < g.size(); ++idx) {
                decode_index(g, idx, k.data());
                for (int ax = 0; ax < g.d; ++ax) xi[ax] = g.xi(k[ax]);
                double e =
                    frame_element_value(*cfg.pair, pt.coarse, pt.a, pt.s.data(), xi.data());
                if (e != 0.0) prod.values[static_cast<std::size_t>(idx)] = fh.values[static_cast<std::size_t>(idx)] * e;
            }
            VolumeField coeff = fft_inverse(prod);
            partials[static_cast<std::size_t>(pl)] = red.reduce_plane(
                coeff.values, plane_measure_weight(cfg.pgrid, pl), plane_weight_v(cfg, pl, r));
        }
    });
    return finish(red, partials);
}

double coorbit_norm(const VolumeField& f, const TransformConfig& cfg, double p, double r) {
    return lpv_norm_streaming(f, cfg, p, r);
}

EmbeddingReport embedding_report(const VolumeField& f, const TransformConfig& cfg,
                                 const std::vector<double>& p_list,
                                 const std::vector<double>& r_list) {
    if (p_list.empty() || r_list.empty()) fail("empty request");
    EmbeddingReport rep;
    rep.p_list = p_list;
    rep.r_list = r_list;
    for (double p : p_list) {
        double prev = -1.0;
        double prev_r = -1.0;
        for (double r : r_list) {
            double norm = coorbit_norm(f, cfg, p, r);
            rep.rows.push_back({p, r, norm});
            if (prev >= 0.0 && r >= prev_r && norm < prev * (1.0 - 1e-12))
                rep.r_monotone_ok = false;
            prev = norm;
            prev_r = r;
        }
    }
    return rep;
}

std::string coorbit_csv(const EmbeddingReport& rep, std::uint64_t config_hash) {
    std::ostringstream out;
    out << "p,r,norm,config_hash\n";
    out.precision(17);
    for (const auto& row : rep.rows) {
        if (std::isinf(row.p))
            out << "inf";
        else
            out << row.p;
        out << ',' << row.r << ',' << row.norm << ',' << config_hash << '\n';
    }
    return out.str();
}

}  // namespace shearcoorb
