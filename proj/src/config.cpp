#include "shearcoorb/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "nlohmann/json.hpp"
#include "shearcoorb/util.hpp"

namespace shearcoorb {

using json = nlohmann::json;

namespace {

[[noreturn]] void cfg_fail(const std::string& ptr, const std::string& msg) {
    fail("config error at " + ptr + ": " + msg);
}

void reject_unknown(const json& obj, const std::string& ptr, const std::set<std::string>& keys) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!keys.count(it.key())) cfg_fail(ptr + "/" + it.key(), "unknown key");
}

double num_at(const json& obj, const std::string& ptr, const std::string& key, double dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number()) cfg_fail(ptr + "/" + key, "expected a number");
    return obj[key].get<double>();
}

int int_at(const json& obj, const std::string& ptr, const std::string& key, int dflt) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_number_integer()) cfg_fail(ptr + "/" + key, "expected an integer");
    return obj[key].get<int>();
}

// list of numbers, "inf" allowed when allow_inf
std::vector<double> list_at(const json& obj, const std::string& ptr, const std::string& key,
                            std::vector<double> dflt, bool allow_inf) {
    if (!obj.contains(key)) return dflt;
    if (!obj[key].is_array()) cfg_fail(ptr + "/" + key, "expected an array");
    std::vector<double> out;
    std::size_t i = 0;
    for (const auto& v : obj[key]) {
        std::string p = ptr + "/" + key + "/" + std::to_string(i++);
        if (v.is_number()) {
            out.push_back(v.get<double>());
        } else if (allow_inf && v.is_string() && v.get<std::string>() == "inf") {
            out.push_back(std::numeric_limits<double>::infinity());
        } else {
            cfg_fail(p, allow_inf ? "expected a number or \"inf\"" : "expected a number");
        }
    }
    return out;
}

std::string fmt(double v) {
    if (std::isinf(v)) return "inf";
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

}  // namespace

std::string RunConfig::canonical() const {
    std::ostringstream s;
    s << "grid:" << d << ',' << n << ',' << fmt(L);
    s << ";window:" << fmt(a0) << ',' << fmt(a1) << ",[";
    for (double v : b) s << fmt(v) << ',';
    s << "];paramgrid:" << J << ',' << subcells << ',' << fmt(shear_spacing) << ','
      << fmt(shear_radius) << ',' << (rep == ScaleRep::Midpoint ? "midpoint" : "geometric");
    s << ";weights:[";
    for (double v : r_list) s << fmt(v) << ',';
    s << "],[";
    for (double v : p_list) s << fmt(v) << ',';
    s << "];kernel:[";
    for (double v : q_list) s << fmt(v) << ',';
    s << "],[";
    for (double v : rho_schedule) s << fmt(v) << ',';
    s << "]," << kernel_n << ',' << fmt(kernel_L) << ',' << kernel_pairs;
    s << ";phantom:" << fmt(band_lo) << ',' << fmt(band_hi) << ',' << fmt(amplitude);
    s << ";seed:" << seed;
    return s.str();
}

TransformConfig RunConfig::transform(int workers) const {
    TransformConfig cfg;
    cfg.grid = make_grid(d, n, L);
    WindowParams wp;
    wp.d = d;
    wp.a0 = a0;
    wp.a1 = a1;
    wp.b = b;
    cfg.pair = std::make_shared<SpectralWindowPair>(normalize_pair(build_window_pair(wp)));
    cfg.pgrid = build_param_grid(J, subcells, shear_spacing, shear_radius, rep, cfg.grid);
    cfg.hash = hash;
    cfg.workers = workers;
    cfg.validate();
    return cfg;
}

GridSpec RunConfig::kernel_grid() const { return make_grid(d, kernel_n, kernel_L); }

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        cfg_fail("/", std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) cfg_fail("/", "expected an object");
    reject_unknown(root, "",
                   {"grid", "window", "paramgrid", "weights", "kernel", "phantom", "seed"});
    RunConfig c;

    json grid = root.value("grid", json::object());
    if (!grid.is_object()) cfg_fail("/grid", "expected an object");
    reject_unknown(grid, "/grid", {"d", "n", "L"});
    c.d = int_at(grid, "/grid", "d", c.d);
    c.n = int_at(grid, "/grid", "n", c.n);
    c.L = num_at(grid, "/grid", "L", c.L);
    if (c.d < 3 || c.d % 2 == 0) cfg_fail("/grid/d", "odd dimension >= 3 required");
    if (c.n < 8 || (c.n & (c.n - 1)) != 0) cfg_fail("/grid/n", "power of two >= 8 required");
    if (!(c.L > 0.0)) cfg_fail("/grid/L", "positive period required");

    json win = root.value("window", json::object());
    if (!win.is_object()) cfg_fail("/window", "expected an object");
    reject_unknown(win, "/window", {"a0", "a1", "b"});
    c.a0 = num_at(win, "/window", "a0", c.a0);
    c.a1 = num_at(win, "/window", "a1", c.a1);
    c.b = list_at(win, "/window", "b", {}, false);
    if (c.b.empty()) c.b.assign(static_cast<std::size_t>(c.d - 1), c.a0);
    if (c.b.size() == 1 && c.d > 2) c.b.assign(static_cast<std::size_t>(c.d - 1), c.b[0]);
    if (!(0.0 < c.a0 && c.a0 < c.a1)) cfg_fail("/window/a0", "need 0 < a0 < a1");
    if (c.b.size() != static_cast<std::size_t>(c.d - 1))
        cfg_fail("/window/b", "need d-1 entries (or one, broadcast)");
    for (std::size_t i = 0; i < c.b.size(); ++i)
        if (!(c.b[i] > 0.0)) cfg_fail("/window/b/" + std::to_string(i), "positive width required");

    json pg = root.value("paramgrid", json::object());
    if (!pg.is_object()) cfg_fail("/paramgrid", "expected an object");
    reject_unknown(pg, "/paramgrid",
                   {"J", "subcells", "shear_spacing", "shear_radius", "scale_representative"});
    c.J = int_at(pg, "/paramgrid", "J", c.J);
    c.subcells = int_at(pg, "/paramgrid", "subcells", c.subcells);
    c.shear_spacing = num_at(pg, "/paramgrid", "shear_spacing", c.shear_spacing);
    c.shear_radius = num_at(pg, "/paramgrid", "shear_radius", c.shear_radius);
    if (pg.contains("scale_representative")) {
        if (!pg["scale_representative"].is_string())
            cfg_fail("/paramgrid/scale_representative", "expected a string");
        std::string s = pg["scale_representative"].get<std::string>();
        if (s == "midpoint")
            c.rep = ScaleRep::Midpoint;
        else if (s == "geometric")
            c.rep = ScaleRep::Geometric;
        else
            cfg_fail("/paramgrid/scale_representative", "expected \"midpoint\" or \"geometric\"");
    }
    if (c.J < 1) cfg_fail("/paramgrid/J", "need J >= 1");
    if (c.subcells < 1) cfg_fail("/paramgrid/subcells", "need subcells >= 1");
    if (!(c.shear_spacing > 0.0)) cfg_fail("/paramgrid/shear_spacing", "positive spacing required");
    if (!(c.shear_radius >= 0.0)) cfg_fail("/paramgrid/shear_radius", "nonnegative radius required");

    json wts = root.value("weights", json::object());
    if (!wts.is_object()) cfg_fail("/weights", "expected an object");
    reject_unknown(wts, "/weights", {"r", "p"});
    c.r_list = list_at(wts, "/weights", "r", {0.0, 1.0}, false);
    c.p_list = list_at(wts, "/weights", "p", {1.0, 2.0}, true);
    for (std::size_t i = 0; i < c.r_list.size(); ++i)
        if (c.r_list[i] < 0.0) cfg_fail("/weights/r/" + std::to_string(i), "need r >= 0");
    for (std::size_t i = 0; i < c.p_list.size(); ++i)
        if (c.p_list[i] < 1.0) cfg_fail("/weights/p/" + std::to_string(i), "need p >= 1");

    json ker = root.value("kernel", json::object());
    if (!ker.is_object()) cfg_fail("/kernel", "expected an object");
    reject_unknown(ker, "/kernel", {"q", "rho_schedule", "n", "L", "pairs"});
    c.q_list = list_at(ker, "/kernel", "q", {2.0}, false);
    c.rho_schedule = list_at(ker, "/kernel", "rho_schedule", {1.0, 2.0, 4.0, 8.0}, false);
    c.kernel_n = int_at(ker, "/kernel", "n", c.kernel_n);
    c.kernel_L = num_at(ker, "/kernel", "L", c.kernel_L);
    c.kernel_pairs = int_at(ker, "/kernel", "pairs", c.kernel_pairs);
    for (std::size_t i = 0; i < c.q_list.size(); ++i)
        if (c.q_list[i] < 1.0) cfg_fail("/kernel/q/" + std::to_string(i), "need q >= 1");
    for (std::size_t i = 0; i < c.rho_schedule.size(); ++i)
        if (!(c.rho_schedule[i] > 0.0))
            cfg_fail("/kernel/rho_schedule/" + std::to_string(i), "positive radius required");
    if (c.kernel_n < 8 || (c.kernel_n & (c.kernel_n - 1)) != 0)
        cfg_fail("/kernel/n", "power of two >= 8 required");
    if (!(c.kernel_L > 0.0)) cfg_fail("/kernel/L", "positive period required");
    if (c.kernel_pairs < 1) cfg_fail("/kernel/pairs", "need at least one pair");

    json ph = root.value("phantom", json::object());
    if (!ph.is_object()) cfg_fail("/phantom", "expected an object");
    reject_unknown(ph, "/phantom", {"band_lo", "band_hi", "amplitude"});
    c.band_lo = num_at(ph, "/phantom", "band_lo", c.band_lo);
    c.band_hi = num_at(ph, "/phantom", "band_hi", c.band_hi);
    c.amplitude = num_at(ph, "/phantom", "amplitude", c.amplitude);
    if (!(0.0 < c.band_lo && c.band_lo < c.band_hi))
        cfg_fail("/phantom/band_lo", "need 0 < band_lo < band_hi");

    if (root.contains("seed")) {
        if (!root["seed"].is_number_unsigned()) cfg_fail("/seed", "expected an unsigned integer");
        c.seed = root["seed"].get<std::uint64_t>();
    }

    c.hash = fnv1a(c.canonical());
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open config " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace shearcoorb
