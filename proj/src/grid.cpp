#include "shearcoorb/grid.hpp"

#include <fftw3.h>

#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <mutex>
#include <tuple>

#include "nlohmann/json.hpp"
#include "shearcoorb/util.hpp"

namespace shearcoorb {

using json = nlohmann::json;

std::int64_t GridSpec::size() const {
    std::int64_t s = 1;
    for (int i = 0; i < d; ++i) s *= n;
    return s;
}

GridSpec make_grid(int d, int n, double L) {
    if (d < 3 || d % 2 == 0) fail("odd dimension required");
    if (n < 8 || (n & (n - 1)) != 0) fail("samples per axis must be a power of two >= 8");
    if (!(L > 0.0)) fail("period must be positive");
    return GridSpec{d, n, L};
}

VolumeField make_field(const GridSpec& spec, Domain domain) {
    VolumeField f;
    f.spec = spec;
    f.domain = domain;
    f.values.assign(static_cast<std::size_t>(spec.size()), cplx(0.0, 0.0));
    return f;
}

void decode_index(const GridSpec& spec, std::int64_t idx, int* out) {
    for (int ax = spec.d - 1; ax >= 0; --ax) {
        out[ax] = static_cast<int>(idx % spec.n);
        idx /= spec.n;
    }
}

namespace {
std::mutex fftw_mutex;  // FFTW planner is not thread-safe
}

void dft_inplace(const GridSpec& spec, cplx* data, int sign) {
    // plans are cached per shape and reused through the new-array interface
    static std::map<std::tuple<int, int, int>, fftw_plan> plans;
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(fftw_mutex);
        auto key = std::make_tuple(spec.d, spec.n, sign < 0 ? -1 : 1);
        auto it = plans.find(key);
        if (it == plans.end()) {
            std::vector<int> dims(spec.d, spec.n);
            std::vector<cplx> scratch(static_cast<std::size_t>(spec.size()));
            plan = fftw_plan_dft(spec.d, dims.data(),
                                 reinterpret_cast<fftw_complex*>(scratch.data()),
                                 reinterpret_cast<fftw_complex*>(scratch.data()),
                                 sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
            plans.emplace(key, plan);
        } else {
            plan = it->second;
        }
    }
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(data),
                     reinterpret_cast<fftw_complex*>(data));
}

VolumeField fft_forward(const VolumeField& f) {
    if (f.domain != Domain::Spatial) fail("fft_forward expects a spatial field");
    VolumeField out = f;
    out.domain = Domain::Spectral;
    dft_inplace(f.spec, out.values.data(), -1);
    double scale = std::pow(f.spec.dx(), f.spec.d);
    for (auto& v : out.values) v *= scale;
    return out;
}

VolumeField fft_inverse(const VolumeField& f) {
    if (f.domain != Domain::Spectral) fail("fft_inverse expects a spectral field");
    VolumeField out = f;
    out.domain = Domain::Spatial;
    dft_inplace(f.spec, out.values.data(), +1);
    double scale = std::pow(f.spec.dxi(), f.spec.d);
    for (auto& v : out.values) v *= scale;
    return out;
}

VolumeField make_phantom(const PhantomSpec& spec, const GridSpec& grid) {
    if (spec.kind == PhantomKind::ShiftedFrameElement)
        fail("shifted-frame-element phantoms require a window pair (transform layer)");
    if (!(spec.band_lo >= 0.0 && spec.band_hi > spec.band_lo)) fail("bad phantom band");
    if (spec.band_hi >= grid.nyquist()) fail("phantom band exceeds Nyquist");
    // require at least one populated lattice bin in the band
    bool any = false;
    for (int k = 0; k < grid.n && !any; ++k) {
        double x1 = std::abs(grid.xi(k));
        if (x1 >= spec.band_lo && x1 <= spec.band_hi) any = true;
    }
    if (!any) fail("phantom band contains no lattice bin");

    VolumeField f = make_field(grid, Domain::Spectral);
    double mid = 0.5 * (spec.band_lo + spec.band_hi);
    double half = 0.5 * (spec.band_hi - spec.band_lo);
    std::vector<int> k(grid.d);
    for (std::int64_t idx = 0; idx < grid.size(); ++idx) {
        decode_index(grid, idx, k.data());
        double x1 = std::abs(grid.xi(k[0]));
        if (x1 < spec.band_lo || x1 > spec.band_hi) continue;
        bool in_cross = true;
        double rho2 = 0.0;
        for (int ax = 1; ax < grid.d; ++ax) {
            double xt = grid.xi(k[ax]);
            if (std::abs(xt) > spec.cross_extent) in_cross = false;
            rho2 += xt * xt;
        }
        if (!in_cross) continue;
        double u = (x1 - mid) / half;  // in [-1,1]
        double env = std::cos(0.5 * M_PI * u);
        env *= env;
        if (spec.kind == PhantomKind::SpectralBump) {
            double cr = spec.cross_extent > 0.0 ? rho2 / (spec.cross_extent * spec.cross_extent)
                                                : (rho2 > 0.0 ? 2.0 : 0.0);
            if (cr >= 1.0) continue;
            f.values[idx] = spec.amplitude * env * std::exp(1.0 / (cr - 1.0) + 1.0);
        } else {
            double g1, g2;
            seeded_gauss_pair(spec.seed, static_cast<std::uint64_t>(idx), g1, g2);
            f.values[idx] = spec.amplitude * env * cplx(g1, g2) * M_SQRT1_2;
        }
    }
    return f;
}

void write_volume(const std::string& path, const VolumeField& f) {
    json hdr = {{"d", f.spec.d},
                {"n", f.spec.n},
                {"L", f.spec.L},
                {"domain", f.domain == Domain::Spatial ? "spatial" : "spectral"},
                {"dtype", "c128-le"}};
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) fail("cannot open " + tmp);
        out.write("SHCOVOL1", 8);
        std::string h = hdr.dump();
        h.push_back('\n');
        out.write(h.data(), static_cast<std::streamsize>(h.size()));
        out.write(reinterpret_cast<const char*>(f.values.data()),
                  static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
        if (!out) fail("write failure on " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) fail("rename failed for " + path);
}

VolumeField read_volume(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("cannot open " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::memcmp(magic, "SHCOVOL1", 8) != 0) fail("bad VOL magic");
    std::string hline;
    std::getline(in, hline);
    json hdr;
    try {
        hdr = json::parse(hline);
    } catch (...) {
        fail("malformed VOL header");
    }
    if (hdr.value("dtype", "") != std::string("c128-le")) fail("unsupported dtype");
    GridSpec spec = make_grid(hdr.at("d").get<int>(), hdr.at("n").get<int>(),
                              hdr.at("L").get<double>());
    std::string dom = hdr.at("domain").get<std::string>();
    VolumeField f = make_field(spec, dom == "spatial" ? Domain::Spatial : Domain::Spectral);
    in.read(reinterpret_cast<char*>(f.values.data()),
            static_cast<std::streamsize>(f.values.size() * sizeof(cplx)));
    if (in.gcount() != static_cast<std::streamsize>(f.values.size() * sizeof(cplx)))
        fail("payload size mismatch");
    char probe;
    if (in.read(&probe, 1)) fail("payload size mismatch");
    return f;
}

}  // namespace shearcoorb
