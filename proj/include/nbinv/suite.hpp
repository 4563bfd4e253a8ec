#pragma once

#include "nbinv/experiments.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nbinv {

// Configuration for the randomized experiment suites. JSON only; unknown
// fields are rejected. NBINV_SEED in the environment overrides the seed.
struct SuiteConfig {
    std::uint64_t seed = 20260810;
    double tolerance = 1e-6;
    bool strict_control = false;
    std::vector<std::string> suites{"srp", "inverse_closed", "symmetry",
                                    "involution_bound"};
    std::vector<std::size_t> sizes{2, 3};
    std::map<std::string, std::size_t> trials{{"srp", 50},
                                              {"inverse_closed", 1000},
                                              {"symmetry", 100},
                                              {"involution_bound", 200}};
    std::vector<std::size_t> scalar_dims{1, 2, 3};
    std::size_t wiener_degree = 64;
    std::size_t ht_grid = 24; // matrix-level trials; kernel checks use 128
    bool include_swap_control = true;
    std::size_t radius_n_max = 1024;
    std::string output_dir = "nbinv-out";
};

SuiteConfig default_suite_config();
SuiteConfig suite_config_from_json(const nlohmann::json& j); // throws Config
nlohmann::json suite_config_to_json(const SuiteConfig& config);

struct SuiteSummaryRow {
    std::string property; // suite/instance/n key
    std::size_t trials = 0;
    std::size_t passes = 0;
    double worst_residual = 0.0;
    std::uint64_t seed_of_worst = 0;
};

struct SuiteResult {
    std::vector<ExperimentOutcome> outcomes;
    std::vector<SuiteSummaryRow> rows;
    std::size_t failures = 0;         // unexpected failures
    std::size_t control_failures = 0; // expected failures on the control
    bool control_detected = true;
    bool ok = false;
    nlohmann::json summary_json;
    std::string summary_csv;
};

// Runs the configured suites and, when out_dir is nonempty, writes
// outcomes.jsonl, summary.csv and certificates/ under it (atomically, once).
SuiteResult run_suite(const SuiteConfig& config, const std::string& out_dir);

} // namespace nbinv
