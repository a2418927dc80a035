#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shearcoorb/config.hpp"
#include "shearcoorb/coorbit.hpp"
#include "shearcoorb/kernel.hpp"
#include "shearcoorb/util.hpp"

namespace sc = shearcoorb;

namespace {

struct Verdict {
    std::string status;  // PASS | FAIL | REPORT
    std::vector<std::pair<std::string, std::string>> kv;

    void add(const std::string& k, const std::string& v) { kv.emplace_back(k, v); }
    void add(const std::string& k, double v) {
        std::ostringstream s;
        s.precision(12);
        s << v;
        kv.emplace_back(k, s.str());
    }
    void add(const std::string& k, std::int64_t v) { kv.emplace_back(k, std::to_string(v)); }

    int emit() const {
        std::cout << status;
        for (const auto& [k, v] : kv) std::cout << ' ' << k << '=' << v;
        std::cout << '\n';
        return status == "FAIL" ? 1 : 0;
    }
};

void write_text_atomic(const std::string& path, const std::string& text) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) sc::fail("cannot open " + tmp);
        out << text;
        if (!out) sc::fail("write failure on " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) sc::fail("rename failed for " + path);
}

// window pair for a config, reusing a cached profile when SHEARCOORB_CACHE is set
std::shared_ptr<sc::SpectralWindowPair> cached_pair(const sc::RunConfig& cfg) {
    sc::WindowParams wp;
    wp.d = cfg.d;
    wp.a0 = cfg.a0;
    wp.a1 = cfg.a1;
    wp.b = cfg.b;
    const char* cache = std::getenv("SHEARCOORB_CACHE");
    std::string path;
    if (cache && *cache) {
        std::ostringstream key;
        key << wp.d << ',' << wp.a0 << ',' << wp.a1;
        for (double v : wp.b) key << ',' << v;
        char hex[32];
        std::snprintf(hex, sizeof(hex), "%016llx",
                      static_cast<unsigned long long>(sc::fnv1a(key.str())));
        path = std::string(cache) + "/pair_" + hex + ".json";
        std::ifstream probe(path);
        if (probe) {
            sc::SpectralWindowPair p = sc::read_pair(path);
            if (p.params.d == wp.d && p.params.a0 == wp.a0 && p.params.a1 == wp.a1 &&
                p.params.b == wp.b && p.normalized)
                return std::make_shared<sc::SpectralWindowPair>(std::move(p));
        }
    }
    auto pair = std::make_shared<sc::SpectralWindowPair>(
        sc::normalize_pair(sc::build_window_pair(wp)));
    if (!path.empty()) sc::write_pair(path, *pair);
    return pair;
}

sc::TransformConfig make_transform(const sc::RunConfig& cfg, int workers) {
    sc::TransformConfig tc;
    tc.grid = sc::make_grid(cfg.d, cfg.n, cfg.L);
    tc.pair = cached_pair(cfg);
    tc.pgrid = sc::build_param_grid(cfg.J, cfg.subcells, cfg.shear_spacing, cfg.shear_radius,
                                    cfg.rep, tc.grid);
    tc.hash = cfg.hash;
    tc.workers = workers;
    tc.validate();
    return tc;
}

sc::VolumeField config_phantom(const sc::RunConfig& cfg, std::uint64_t seed) {
    sc::PhantomSpec ps;
    ps.kind = sc::PhantomKind::BandAnnulus;
    ps.seed = seed;
    ps.band_lo = cfg.band_lo;
    ps.band_hi = cfg.band_hi;
    ps.amplitude = cfg.amplitude;
    return sc::make_phantom(ps, sc::make_grid(cfg.d, cfg.n, cfg.L));
}

double field_energy(const sc::VolumeField& f) {
    sc::KahanSum e;
    for (const sc::cplx& v : f.values) e.add(std::norm(v));
    double cell = f.domain == sc::Domain::Spatial ? f.spec.dx() : f.spec.dxi();
    return e.value() * std::pow(cell, f.spec.d);
}

Verdict run_verify(const std::string& sub, const sc::RunConfig& cfg, int workers,
                   std::uint64_t seed) {
    Verdict v;
    if (sub == "calderon") {
        auto pair = cached_pair(cfg);
        std::vector<double> ys;
        for (int i = 1; i <= 256; ++i) ys.push_back(4.0 * cfg.a1 * i / 256.0);
        double dev = sc::calderon_check(*pair, ys);
        v.status = dev <= 1e-3 ? "PASS" : "FAIL";
        v.add("max_dev", dev);
        v.add("samples", std::int64_t(256));
    } else if (sub == "parseval") {
        sc::TransformConfig tc = make_transform(cfg, workers);
        std::vector<double> symbol = sc::frame_symbol(tc);
        double lo = 1e300, hi = -1e300, cov = 1e300;
        for (std::uint64_t s = 1; s <= 5; ++s) {
            sc::VolumeField f = config_phantom(cfg, seed + s - 1);
            sc::ParsevalResult r = sc::parseval_ratio(f, tc, &symbol);
            lo = std::min(lo, r.ratio);
            hi = std::max(hi, r.ratio);
            cov = std::min(cov, r.coverage);
        }
        v.status = (lo >= 0.95 && hi <= 1.05) ? "PASS" : "FAIL";
        v.add("ratio_min", lo);
        v.add("ratio_max", hi);
        v.add("coverage_min", cov);
    } else if (sub == "reproduce") {
        sc::TransformConfig tc = make_transform(cfg, workers);
        std::vector<double> symbol = sc::frame_symbol(tc);
        double worst = 0.0;
        for (std::uint64_t s = 1; s <= 5; ++s) {
            sc::VolumeField f = config_phantom(cfg, seed + s - 1);
            worst = std::max(worst, sc::reproduce_error(f, tc, &symbol));
        }
        v.status = worst <= 0.05 ? "PASS" : "FAIL";
        v.add("max_rel_err", worst);
    } else if (sub == "supports") {
        auto pair = cached_pair(cfg);
        sc::SupportBoxes boxes = sc::support_boxes(pair->params);
        sc::SupportScanResult scan =
            sc::support_violation_scan(*pair, boxes, sc::make_grid(cfg.d, cfg.n, cfg.L), 20);
        v.status = (scan.max_out_of_box <= 1e-14 && scan.max_in_box > 0.0) ? "PASS" : "FAIL";
        v.add("leak", scan.max_out_of_box);
        v.add("control", scan.max_in_box);
    } else if (sub == "smoothness") {
        // reference band of the worked example; derivative decay at the edges
        sc::WindowParams wp;
        wp.d = cfg.d;
        wp.b.assign(static_cast<std::size_t>(cfg.d - 1), 1.0);
        sc::SpectralWindowPair pair = sc::build_window_pair(wp);
        sc::SmoothnessTable tab = sc::smoothness_probe(pair, 3, {0.2, 0.1, 0.05, 0.025});
        bool ok = true;
        double worst_ratio = 0.0;
        auto check_col = [&](const std::vector<double>& col) {
            for (std::size_t i = 1; i < col.size(); ++i)
                if (!(col[i] < col[i - 1])) ok = false;
            double ratio = col.back() / std::max(col.front(), 1e-300);
            worst_ratio = std::max(worst_ratio, ratio);
            if (!(ratio <= 1e-3)) ok = false;
        };
        // the profile vanishes to all orders at a1; at a0 it flattens into a
        // constant, so only the derivatives decay there
        for (const auto& col : tab.near_a1) check_col(col);
        for (std::size_t n = 1; n < tab.near_a0.size(); ++n) check_col(tab.near_a0[n]);
        v.status = ok ? "PASS" : "FAIL";
        v.add("max_final_ratio", worst_ratio);
    } else if (sub == "identities") {
        double r = 1.0;
        for (double rv : cfg.r_list)
            if (rv > 0.0) {
                r = rv;
                break;
            }
        sc::WeightIdentityReport rep = sc::weight_identity_check(10000, r, seed);
        if (!rep.eq311_ok || !rep.eq312_ok) {
            v.status = "FAIL";
        } else {
            v.status = "REPORT";
        }
        v.add("eq311_ok", std::int64_t(rep.eq311_ok));
        v.add("eq312_ok", std::int64_t(rep.eq312_ok));
        v.add("eq313_definitional", rep.eq313_definitional);
        v.add("eq313_as_printed", rep.eq313_as_printed);
        v.add("eq313_flagged", std::int64_t(rep.eq313_flagged));
        v.add("samples", std::int64_t(rep.samples));
    } else if (sub == "inequalities") {
        std::uint64_t ctr = 0;
        auto uni = [&]() { return sc::u64_to_unit(sc::splitmix64(seed ^ sc::splitmix64(ctr++))); };
        int young_bad = 0, three_bad = 0;
        for (int t = 0; t < 100000; ++t) {
            double p = 1.0 + std::pow(10.0, -6.0 * uni()) * 3.0;
            double q = p / (p - 1.0);
            if (!sc::young_check(10.0 * uni(), 10.0 * uni(), p, q)) ++young_bad;
            double p3 = 1.5 + 3.0 * uni();
            double q3 = 1.5 + 3.0 * uni();
            double r3 = 1.0 / (1.0 - 1.0 / p3 - 1.0 / q3);
            if (r3 > 0.0 &&
                !sc::three_way_young_check(10.0 * uni(), 10.0 * uni(), 10.0 * uni(), p3, q3, r3))
                ++three_bad;
        }
        sc::SchurReport rep = sc::schur_bound_check(1000, seed);
        bool ok = young_bad == 0 && three_bad == 0 && rep.violations == 0 &&
                  rep.embedding_violations == 0;
        v.status = ok ? "PASS" : "FAIL";
        v.add("young_violations", std::int64_t(young_bad));
        v.add("three_way_violations", std::int64_t(three_bad));
        v.add("schur_violations", std::int64_t(rep.violations));
        v.add("embedding_violations", std::int64_t(rep.embedding_violations));
        v.add("schur_max_ratio", rep.max_ratio);
    } else {
        sc::fail("unknown verify subcommand " + sub);
    }
    return v;
}

Verdict run_kernel_norm(const sc::RunConfig& cfg, int workers, const std::string& output) {
    sc::TransformConfig tc = make_transform(cfg, workers);
    std::ostringstream csv;
    csv << "q,r,block,rho,value,rel_change\n";
    csv.precision(17);
    bool stabilized = true;
    bool monotone_r = true;
    double q1_growth = 0.0;
    static const char* block_names[4] = {"cc", "cf", "fc", "ff"};
    for (double q : cfg.q_list) {
        double prev_est = -1.0;
        double prev_r = -1.0;
        // q = 1 is a divergence diagnostic, run at a single weight
        std::vector<double> rs = cfg.r_list;
        if (q == 1.0 && !rs.empty()) rs.resize(1);
        for (double r : rs) {
            sc::KernelEstimate est = sc::aq_norm_estimate(tc, q, r, cfg.rho_schedule);
            for (std::size_t i = 0; i < est.rho.size(); ++i) {
                for (int bidx = 0; bidx < 4; ++bidx)
                    csv << q << ',' << r << ',' << block_names[bidx] << ',' << est.rho[i] << ','
                        << est.blocks[i][static_cast<std::size_t>(bidx)] << ",\n";
                csv << q << ',' << r << ',' << "estimate" << ',' << est.rho[i] << ','
                    << est.estimate[i] << ',' << est.rel_change[i] << '\n';
            }
            if (q > 1.0) {
                if (est.rel_change.back() > 0.01) stabilized = false;
                if (prev_r >= 0.0 && r >= prev_r &&
                    est.estimate.back() < prev_est * (1.0 - 1e-12))
                    monotone_r = false;
                prev_est = est.estimate.back();
                prev_r = r;
            } else {
                // diagnostic: the coarse-coarse block keeps growing with rho
                std::size_t last = est.blocks.size() - 1;
                double prev_cc = est.blocks[last - (last > 0 ? 1 : 0)][0];
                double rel = prev_cc > 0.0 ? (est.blocks[last][0] - prev_cc) / prev_cc : 0.0;
                q1_growth = std::max(q1_growth, rel);
            }
        }
    }
    if (!output.empty()) write_text_atomic(output, csv.str());
    Verdict v;
    v.status = (stabilized && monotone_r) ? "PASS" : "FAIL";
    v.add("stabilized", std::int64_t(stabilized));
    v.add("monotone_r", std::int64_t(monotone_r));
    if (q1_growth > 0.0) v.add("q1_last_rel_change", q1_growth);
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"inhomogeneous shearlet transform toolbox"};
    app.require_subcommand(1);

    std::string config_path, input_path, output_path, verify_sub;
    int workers = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;

    auto add_common = [&](CLI::App* cmd, bool need_config = true) {
        auto* opt = cmd->add_option("--config", config_path, "JSON run configuration");
        if (need_config) opt->required();
        cmd->add_option("--input", input_path, "input artifact path");
        cmd->add_option("--output", output_path, "output artifact path");
        cmd->add_option("--workers", workers, "worker thread count");
        cmd->add_option("--seed", seed, "seed override")->each([&](const std::string&) {
            seed_set = true;
        });
    };

    CLI::App* c_genwin = app.add_subcommand("gen-window", "build the normalized window pair");
    CLI::App* c_phantom = app.add_subcommand("phantom", "generate a band-limited test signal");
    CLI::App* c_analyze = app.add_subcommand("analyze", "signal to coefficient field");
    CLI::App* c_synth = app.add_subcommand("synthesize", "coefficient field to signal");
    CLI::App* c_verify = app.add_subcommand("verify", "run a verification suite");
    CLI::App* c_kernel = app.add_subcommand("kernel-norm", "kernel integrability estimates");
    CLI::App* c_coorbit = app.add_subcommand("coorbit-norm", "weighted coefficient norms");
    for (CLI::App* cmd : {c_genwin, c_phantom, c_analyze, c_synth, c_verify, c_kernel, c_coorbit})
        add_common(cmd);
    c_verify->add_option("subcommand", verify_sub, "verification to run")
        ->required()
        ->check(CLI::IsMember({"calderon", "parseval", "reproduce", "supports", "smoothness",
                               "identities", "inequalities"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        sc::RunConfig cfg = sc::load_config(config_path);
        std::uint64_t eff_seed = seed_set ? seed : cfg.seed;
        Verdict v;
        if (c_genwin->parsed()) {
            auto pair = cached_pair(cfg);
            if (output_path.empty()) sc::fail("gen-window needs --output");
            sc::write_pair(output_path, *pair);
            v.status = "REPORT";
            v.add("c_psi", sc::admissibility_constant(*pair));
            v.add("normalized", std::int64_t(1));
            v.add("path", output_path);
        } else if (c_phantom->parsed()) {
            if (output_path.empty()) sc::fail("phantom needs --output");
            sc::VolumeField f = config_phantom(cfg, eff_seed);
            sc::write_volume(output_path, f);
            v.status = "REPORT";
            v.add("energy", field_energy(f));
            v.add("seed", static_cast<std::int64_t>(eff_seed));
        } else if (c_analyze->parsed()) {
            if (input_path.empty()) sc::fail("analyze needs --input");
            if (output_path.empty()) sc::fail("analyze needs --output");
            sc::VolumeField f = sc::read_volume(input_path);
            sc::TransformConfig tc = make_transform(cfg, workers);
            sc::CoeffField c = sc::analyze(f, tc);
            sc::write_scf(output_path, c);
            v.status = "REPORT";
            v.add("planes", c.planes);
            v.add("energy", sc::coeff_energy(c, tc));
        } else if (c_synth->parsed()) {
            if (input_path.empty()) sc::fail("synthesize needs --input");
            if (output_path.empty()) sc::fail("synthesize needs --output");
            sc::CoeffField c = sc::read_scf(input_path);
            sc::TransformConfig tc = make_transform(cfg, workers);
            sc::VolumeField g = sc::synthesize(c, tc);
            sc::write_volume(output_path, g);
            v.status = "REPORT";
            v.add("energy", field_energy(g));
        } else if (c_verify->parsed()) {
            v = run_verify(verify_sub, cfg, workers, eff_seed ? eff_seed : 1);
        } else if (c_kernel->parsed()) {
            v = run_kernel_norm(cfg, workers, output_path);
        } else if (c_coorbit->parsed()) {
            sc::TransformConfig tc = make_transform(cfg, workers);
            sc::VolumeField f = input_path.empty() ? config_phantom(cfg, eff_seed ? eff_seed : 1)
                                                   : sc::read_volume(input_path);
            sc::EmbeddingReport rep = sc::embedding_report(f, tc, cfg.p_list, cfg.r_list);
            if (!output_path.empty())
                write_text_atomic(output_path, sc::coorbit_csv(rep, cfg.hash));
            v.status = rep.r_monotone_ok ? "PASS" : "FAIL";
            v.add("r_monotone", std::int64_t(rep.r_monotone_ok));
            v.add("rows", static_cast<std::int64_t>(rep.rows.size()));
        }
        return v.emit();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
