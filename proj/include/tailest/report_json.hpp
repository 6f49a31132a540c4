#pragma once

// JSON serialization of Monte Carlo reports. Kept out of simulation.hpp so
// the harness itself does not drag in the JSON library; include this where
// reports are written out (CLI, tests).
//
// Schema (stable, versioned): top-level schema_version / tool / rng /
// config / second_order / results / quantile_check. All doubles are emitted
// as JSON numbers (round-trip exact through the usual shortest-repr
// serializers); the seed is echoed together with the per-replicate
// derivation rule so any run can be reproduced from its report alone.

#include <json.hpp>

#include "simulation.hpp"

namespace tailest {

using ordered_json = nlohmann::ordered_json;

inline ordered_json to_json(const MonteCarloReport& report) {
    const MonteCarloConfig& cfg = report.config;
    ordered_json j;
    j["schema_version"] = 1;
    j["tool"] = "tailest";
    j["rng"] = {{"id", report.rng_id},
                {"base_seed", cfg.base_seed},
                {"replicate_seed_rule",
                 "base_seed xor splitmix64_mix(replicate_index)"}};

    ordered_json model;
    model["family"] = to_string(cfg.model.family);
    model["gamma"] = cfg.model.gamma;
    if (cfg.model.family == Family::strict_pareto)
        model["scale"] = cfg.model.scale;
    if (cfg.model.family == Family::burr)
        model["burr_rho"] = cfg.model.burr_rho;

    ordered_json estimators = ordered_json::array();
    for (EstimatorKind kind : cfg.estimators)
        estimators.push_back(to_string(kind));

    j["config"] = {{"model", model},
                   {"n", cfg.n},
                   {"k_set", cfg.k_set},
                   {"replications", cfg.replications},
                   {"estimators", estimators}};
    if (cfg.quantile_p) j["config"]["quantile_p"] = *cfg.quantile_p;

    if (const auto so = cfg.model.second_order())
        j["second_order"] = {{"rho", so->rho}, {"beta", so->beta}};
    else
        j["second_order"] = nullptr;

    ordered_json results = ordered_json::array();
    for (const EstimateCell& cell : report.cells)
        results.push_back({{"estimator", to_string(cell.kind)},
                           {"k", cell.k},
                           {"replications", cell.replications},
                           {"mean", cell.mean},
                           {"bias", cell.bias},
                           {"variance", cell.variance},
                           {"mse", cell.mse}});
    j["results"] = results;

    if (!report.quantile_cells.empty()) {
        ordered_json cells = ordered_json::array();
        for (const QuantileCell& qc : report.quantile_cells)
            cells.push_back({{"estimator", to_string(qc.kind)},
                             {"k", qc.k},
                             {"c_n", qc.c_n},
                             {"rate_factor", qc.rate_factor},
                             {"true_quantile", qc.true_quantile},
                             {"normalized_quantile_error",
                              {{"mean", qc.eq_mean}, {"variance", qc.eq_variance}}},
                             {"normalized_evi_error",
                              {{"mean", qc.egamma_mean},
                               {"variance", qc.egamma_variance}}},
                             {"variance_ratio", qc.variance_ratio}});
        j["quantile_check"] = {{"p", *cfg.quantile_p}, {"cells", cells}};
    }
    return j;
}

}  // namespace tailest
