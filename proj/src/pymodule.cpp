#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "shearcoorb/config.hpp"
#include "shearcoorb/coorbit.hpp"
#include "shearcoorb/kernel.hpp"

namespace py = pybind11;
using namespace shearcoorb;

namespace {

py::array_t<std::complex<double>> field_to_array(const VolumeField& f) {
    std::vector<py::ssize_t> shape(static_cast<std::size_t>(f.spec.d), f.spec.n);
    py::array_t<std::complex<double>> out(shape);
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    return out;
}

VolumeField array_to_field(const GridSpec& g, const py::array_t<std::complex<double>>& a,
                           Domain domain) {
    if (a.ndim() != g.d) fail("array rank does not match the grid dimension");
    for (py::ssize_t i = 0; i < a.ndim(); ++i)
        if (a.shape(i) != g.n) fail("array shape does not match the grid");
    VolumeField f = make_field(g, domain);
    auto buf = a.unchecked();
    std::copy(a.data(), a.data() + f.values.size(), f.values.begin());
    (void)buf;
    return f;
}

ParamPoint make_point(std::optional<double> a, const std::vector<double>& s,
                      const std::vector<double>& t) {
    ParamPoint p;
    p.coarse = !a.has_value();
    if (a) p.a = *a;
    p.s = s;
    p.t = t;
    return p;
}

// configured session: grid, normalized windows, parameter grid
struct Session {
    RunConfig cfg;
    TransformConfig tc;

    Session(const std::string& json_text, int workers)
        : cfg(parse_config(json_text)), tc(cfg.transform(workers)) {}

    py::array_t<std::complex<double>> phantom(std::uint64_t seed) const {
        PhantomSpec ps;
        ps.seed = seed;
        ps.band_lo = cfg.band_lo;
        ps.band_hi = cfg.band_hi;
        ps.amplitude = cfg.amplitude;
        return field_to_array(make_phantom(ps, tc.grid));
    }

    py::array_t<std::complex<double>> analyze_field(
        const py::array_t<std::complex<double>>& f) const {
        CoeffField c = analyze(array_to_field(tc.grid, f, Domain::Spectral), tc);
        py::array_t<std::complex<double>> out(
            {static_cast<py::ssize_t>(c.planes), static_cast<py::ssize_t>(tc.grid.size())});
        auto* ptr = out.mutable_data();
        for (const auto& plane : c.data) {
            std::copy(plane.begin(), plane.end(), ptr);
            ptr += plane.size();
        }
        return out;
    }

    py::array_t<std::complex<double>> synthesize_coeffs(
        const py::array_t<std::complex<double>>& coeffs) const {
        if (coeffs.ndim() != 2) fail("coefficient array must be 2-d (plane, sample)");
        CoeffField c;
        c.config_hash = tc.hash;
        c.grid = tc.grid;
        c.planes = coeffs.shape(0);
        if (coeffs.shape(1) != tc.grid.size()) fail("coefficient plane size mismatch");
        c.data.resize(static_cast<std::size_t>(c.planes));
        const auto* ptr = coeffs.data();
        for (auto& plane : c.data) {
            plane.assign(ptr, ptr + tc.grid.size());
            ptr += tc.grid.size();
        }
        VolumeField g = synthesize(c, tc);
        return field_to_array(fft_forward(g));
    }

    std::vector<double> symbol() const { return frame_symbol(tc); }

    py::dict parseval(const py::array_t<std::complex<double>>& f) const {
        ParsevalResult r = parseval_ratio(array_to_field(tc.grid, f, Domain::Spectral), tc);
        py::dict d;
        d["ratio"] = r.ratio;
        d["coverage"] = r.coverage;
        return d;
    }

    double roundtrip(const py::array_t<std::complex<double>>& f) const {
        return roundtrip_error(array_to_field(tc.grid, f, Domain::Spectral), tc);
    }
    double reproduce(const py::array_t<std::complex<double>>& f) const {
        return reproduce_error(array_to_field(tc.grid, f, Domain::Spectral), tc);
    }

    double coorbit(const py::array_t<std::complex<double>>& f, double p, double r) const {
        return coorbit_norm(array_to_field(tc.grid, f, Domain::Spectral), tc, p, r);
    }

    std::complex<double> kernel_direct(std::optional<double> ax, const std::vector<double>& sx,
                                       const std::vector<double>& tx, std::optional<double> ay,
                                       const std::vector<double>& sy,
                                       const std::vector<double>& ty) const {
        return kernel_eval_direct(make_point(ax, sx, tx), make_point(ay, sy, ty), *tc.pair,
                                  cfg.kernel_grid());
    }

    double kernel_reduced(std::optional<double> ax, const std::vector<double>& sx,
                          const std::vector<double>& tx, std::optional<double> ay,
                          const std::vector<double>& sy, const std::vector<double>& ty) const {
        return kernel_eval_reduced(make_point(ax, sx, tx), make_point(ay, sy, ty), *tc.pair,
                                   cfg.kernel_grid());
    }

    py::dict kernel_estimate(double q, double r, const std::vector<double>& rhos) const {
        KernelEstimate est = aq_norm_estimate(tc, q, r, rhos);
        py::dict d;
        d["rho"] = est.rho;
        d["estimate"] = est.estimate;
        d["rel_change"] = est.rel_change;
        std::vector<std::vector<double>> blocks;
        for (const auto& b : est.blocks) blocks.push_back({b[0], b[1], b[2], b[3]});
        d["blocks"] = blocks;
        return d;
    }

    double calderon(int samples) const {
        std::vector<double> ys;
        for (int i = 1; i <= samples; ++i)
            ys.push_back(4.0 * cfg.a1 * i / static_cast<double>(samples));
        return calderon_check(*tc.pair, ys);
    }
};

}  // namespace

PYBIND11_MODULE(_shearcoorb, m) {
    m.doc() = "inhomogeneous shearlet transform core";

    py::class_<Session>(m, "Session")
        .def(py::init<const std::string&, int>(), py::arg("config_json"), py::arg("workers") = 1)
        .def_property_readonly("d", [](const Session& s) { return s.cfg.d; })
        .def_property_readonly("n", [](const Session& s) { return s.cfg.n; })
        .def_property_readonly("L", [](const Session& s) { return s.cfg.L; })
        .def_property_readonly("config_hash", [](const Session& s) { return s.cfg.hash; })
        .def_property_readonly("planes",
                               [](const Session& s) { return s.tc.pgrid.plane_count(); })
        .def("phantom", &Session::phantom, py::arg("seed") = 1)
        .def("analyze", &Session::analyze_field)
        .def("synthesize", &Session::synthesize_coeffs)
        .def("frame_symbol", &Session::symbol)
        .def("parseval_ratio", &Session::parseval)
        .def("roundtrip_error", &Session::roundtrip)
        .def("reproduce_error", &Session::reproduce)
        .def("coorbit_norm", &Session::coorbit, py::arg("f"), py::arg("p"), py::arg("r"))
        .def("kernel_direct", &Session::kernel_direct)
        .def("kernel_reduced", &Session::kernel_reduced)
        .def("kernel_estimate", &Session::kernel_estimate)
        .def("calderon_max_dev", &Session::calderon, py::arg("samples") = 256);

    m.def("young_check", &young_check, py::arg("a"), py::arg("b"), py::arg("p"), py::arg("q"));
    m.def("three_way_young_check", &three_way_young_check, py::arg("a"), py::arg("b"),
          py::arg("c"), py::arg("p"), py::arg("q"), py::arg("r"));
    m.def("schur_bound_check", [](int trials, std::uint64_t seed) {
        SchurReport rep = schur_bound_check(trials, seed);
        py::dict d;
        d["trials"] = rep.trials;
        d["violations"] = rep.violations;
        d["embedding_checks"] = rep.embedding_checks;
        d["embedding_violations"] = rep.embedding_violations;
        d["max_ratio"] = rep.max_ratio;
        return d;
    });
}
