#pragma once

#include <string>
#include <vector>

#include "shearcoorb/transform.hpp"

namespace shearcoorb {

// (sum_planes mu_weight sum_t dx^d (v_r |F|)^p)^{1/p}; p = inf -> weighted max
double lpv_norm(const CoeffField& F, const TransformConfig& cfg, double p, double r);

// same reduction without materializing the coefficient field: per-plane
// inverse transforms of f_hat times the element plane, reduced in plane order
double lpv_norm_streaming(const VolumeField& f, const TransformConfig& cfg, double p, double r);

// || analyze(f) ||_{L_{p,v_r}}
double coorbit_norm(const VolumeField& f, const TransformConfig& cfg, double p, double r);

struct EmbeddingRow {
    double p = 0.0;
    double r = 0.0;
    double norm = 0.0;
};

struct EmbeddingReport {
    std::vector<double> p_list;
    std::vector<double> r_list;
    std::vector<EmbeddingRow> rows;  // p-major, r-minor
    bool r_monotone_ok = true;       // norm non-decreasing in r at fixed p
};

EmbeddingReport embedding_report(const VolumeField& f, const TransformConfig& cfg,
                                 const std::vector<double>& p_list,
                                 const std::vector<double>& r_list);

// CSV with header "p,r,norm,config_hash"
std::string coorbit_csv(const EmbeddingReport& rep, std::uint64_t config_hash);

}  // namespace shearcoorb
