#include "nbinv/suite.hpp"

#include "nbinv/instances.hpp"
#include "nbinv/serialize.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace nbinv {

namespace {

using json = nlohmann::json;

const char* kKnownSuites[] = {"srp", "inverse_closed", "symmetry", "involution_bound"};

bool known_suite(const std::string& s) {
    for (const char* k : kKnownSuites)
        if (s == k) return true;
    return false;
}

void apply_env_seed(SuiteConfig& config) {
    if (const char* env = std::getenv("NBINV_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end == env || (end && *end != '\0'))
            raise(ErrorCode::Config, "NBINV_SEED is not an unsigned integer");
        config.seed = static_cast<std::uint64_t>(v);
    }
}

void validate(const SuiteConfig& c) {
    if (c.suites.empty())
        raise(ErrorCode::Config, "suite selection is empty");
    for (const auto& s : c.suites)
        if (!known_suite(s)) raise(ErrorCode::Config, "unknown suite \"" + s + "\"");
    if (c.sizes.empty()) raise(ErrorCode::Config, "sizes must be nonempty");
    for (std::size_t n : c.sizes)
        if (n < 1) raise(ErrorCode::Config, "sizes must be >= 1");
    for (const auto& [k, v] : c.trials) {
        if (!known_suite(k)) raise(ErrorCode::Config, "trials for unknown suite \"" + k + "\"");
        if (v < 1) raise(ErrorCode::Config, "trial counts must be >= 1");
    }
    if (!(c.tolerance > 0.0)) raise(ErrorCode::Config, "tolerance must be positive");
    if (c.scalar_dims.empty()) raise(ErrorCode::Config, "scalar_dims must be nonempty");
    for (std::size_t k : c.scalar_dims)
        if (k < 1 || k > 8) raise(ErrorCode::Config, "scalar_dims entries must be in 1..8");
    if (c.wiener_degree < 8 || c.wiener_degree > 4096)
        raise(ErrorCode::Config, "wiener_degree must be in 8..4096");
    if (c.ht_grid < 4 || c.ht_grid > 512)
        raise(ErrorCode::Config, "ht_grid must be in 4..512");
    if (c.radius_n_max < 4 || (c.radius_n_max & (c.radius_n_max - 1)) != 0)
        raise(ErrorCode::Config, "radius_n_max must be a power of two >= 4");
}

std::size_t trials_for(const SuiteConfig& c, const std::string& suite) {
    auto it = c.trials.find(suite);
    return it == c.trials.end() ? 100 : it->second;
}

struct RowAccumulator {
    std::map<std::string, SuiteSummaryRow> rows;

    void add(const ExperimentOutcome& o) {
        const std::string key =
            o.property + "/" + o.instance + "/n" + std::to_string(o.n);
        SuiteSummaryRow& row = rows[key];
        row.property = key;
        row.trials += 1;
        row.passes += o.pass ? 1 : 0;
        if (o.residual >= row.worst_residual) {
            row.worst_residual = o.residual;
            row.seed_of_worst = o.seed;
        }
    }
};

} // namespace

SuiteConfig default_suite_config() {
    SuiteConfig c;
    apply_env_seed(c);
    return c;
}

SuiteConfig suite_config_from_json(const json& j) {
    if (!j.is_object()) raise(ErrorCode::Config, "config must be a JSON object");
    SuiteConfig c;
    c.suites.clear();
    bool suites_given = false;
    for (const auto& [key, value] : j.items()) {
        try {
            if (key == "seed") c.seed = value.get<std::uint64_t>();
            else if (key == "tolerance") c.tolerance = value.get<double>();
            else if (key == "strict_control") c.strict_control = value.get<bool>();
            else if (key == "suites") {
                c.suites = value.get<std::vector<std::string>>();
                suites_given = true;
            } else if (key == "sizes") c.sizes = value.get<std::vector<std::size_t>>();
            else if (key == "trials") {
                for (const auto& [tk, tv] : value.items())
                    c.trials[tk] = tv.get<std::size_t>();
            } else if (key == "scalar_dims") c.scalar_dims = value.get<std::vector<std::size_t>>();
            else if (key == "wiener_degree") c.wiener_degree = value.get<std::size_t>();
            else if (key == "ht_grid") c.ht_grid = value.get<std::size_t>();
            else if (key == "include_swap_control") c.include_swap_control = value.get<bool>();
            else if (key == "radius_n_max") c.radius_n_max = value.get<std::size_t>();
            else if (key == "output_dir") c.output_dir = value.get<std::string>();
            else raise(ErrorCode::Config, "unknown config field \"" + key + "\"");
        } catch (const json::exception& e) {
            raise(ErrorCode::Config, "config field \"" + key + "\": " + e.what());
        }
    }
    if (!suites_given)
        c.suites = {"srp", "inverse_closed", "symmetry", "involution_bound"};
    apply_env_seed(c);
    validate(c);
    return c;
}

json suite_config_to_json(const SuiteConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["tolerance"] = c.tolerance;
    j["strict_control"] = c.strict_control;
    j["suites"] = c.suites;
    j["sizes"] = c.sizes;
    j["trials"] = c.trials;
    j["scalar_dims"] = c.scalar_dims;
    j["wiener_degree"] = c.wiener_degree;
    j["ht_grid"] = c.ht_grid;
    j["include_swap_control"] = c.include_swap_control;
    j["radius_n_max"] = c.radius_n_max;
    j["output_dir"] = c.output_dir;
    return j;
}

namespace {

struct PairPlan {
    Descriptor descriptor;
    std::string path_for_n(std::size_t n) const {
        if (descriptor->kind == Kind::ScalarMatrix) return "thm6";
        return n == 2 ? "prop4" : "thm6";
    }
};

void run_srp_suite(const SuiteConfig& c, std::vector<ExperimentOutcome>& outcomes,
                   std::vector<std::pair<std::string, std::string>>& audits) {
    const Descriptor wiener = make_wiener_algebra(c.wiener_degree);
    const std::size_t trials = trials_for(c, "srp");
    const std::size_t n = 2;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t seed = derive_seed(c.seed, "srp/wiener", trial);
        Rng rng(seed);
        const Matrix t = random_matrix(wiener, n, rng, 0.25);
        ExperimentOutcome o;
        o.seed = seed;
        o.instance = wiener->name;
        o.n = n;
        o.property = "srp_lift";
        try {
            const SpectralReport report = check_srp_matrix_lift(t, c.radius_n_max);
            const double r = std::max(report.radius, report.ambient_radius.value_or(0.0));
            o.residual = report.discrepancy();
            o.pass = report.discrepancy() <= 0.05 * std::max(1.0, r);
            if (!o.pass)
                o.detail = "radius " + std::to_string(report.radius) + " vs ambient " +
                           std::to_string(report.ambient_radius.value_or(0.0));
            if (trial == 0)
                audits.emplace_back("srp-wiener-trial0.json",
                                    spectral_report_to_json(report).dump(2) + "\n");
        } catch (const Error& e) {
            o.pass = false;
            o.detail = e.what();
        }
        if (!o.pass) o.counterexample_json = matrix_to_string(t);
        outcomes.push_back(std::move(o));
    }
}

void run_inverse_closed_suite(const SuiteConfig& c,
                              std::vector<ExperimentOutcome>& outcomes,
                              std::vector<std::pair<std::string, std::string>>& audits) {
    std::vector<PairPlan> pairs;
    for (std::size_t k : c.scalar_dims)
        pairs.push_back({make_scalar_algebra(k)});
    pairs.push_back({make_wiener_algebra(c.wiener_degree)});
    pairs.push_back({make_ht_algebra(c.ht_grid)});

    const std::size_t total = trials_for(c, "inverse_closed");
    const std::size_t combos = pairs.size() * c.sizes.size();
    const std::size_t per_combo = std::max<std::size_t>(1, total / combos);

    for (const PairPlan& pair : pairs) {
        for (std::size_t n : c.sizes) {
            const std::string path = pair.path_for_n(n);
            const std::string tag =
                "inverse_closed/" + pair.descriptor->name + "/n" + std::to_string(n);
            for (std::size_t trial = 0; trial < per_combo; ++trial) {
                const std::uint64_t seed = derive_seed(c.seed, tag, trial);
                Rng rng(seed);
                Matrix t;
                try {
                    t = random_matrix_for_path(pair.descriptor, n, path, rng);
                } catch (const Error& e) {
                    ExperimentOutcome o;
                    o.seed = seed;
                    o.instance = pair.descriptor->name;
                    o.n = n;
                    o.property = "inverse_closed/" + path;
                    o.pass = false;
                    o.detail = std::string("generation failed: ") + e.what();
                    outcomes.push_back(std::move(o));
                    continue;
                }
                outcomes.push_back(check_inverse_closed_pair(t, path, c.tolerance, seed));
                if (trial == 0) {
                    // audit certificate for the first trial of each combo
                    try {
                        PivotStrategy strategy;
                        strategy.tolerance = c.tolerance;
                        InversionCertificate cert;
                        if (path == "prop4") {
                            cert = prop4_invert_2x2(t, strategy);
                        } else {
                            InessentialMask mask = InessentialMask::none(n);
                            for (std::size_t jj = 0; jj < n; ++jj)
                                for (std::size_t kk = 0; kk < jj; ++kk)
                                    mask.below[jj * n + kk] =
                                        inessential_proxy(pair.descriptor, t.at(jj, kk));
                            cert = thm6_invert(t, mask, strategy);
                        }
                        audits.emplace_back(
                            "inverse-closed-" + pair.descriptor->name + "-n" +
                                std::to_string(n) + ".json",
                            certificate_to_json(cert).dump(2) + "\n");
                    } catch (const Error&) {
                        // the outcome entry already records the failure
                    }
                }
            }
        }
    }
}

void run_symmetry_suite(const SuiteConfig& c, std::vector<ExperimentOutcome>& outcomes,
                        std::size_t& control_failures, bool& control_detected) {
    std::vector<Descriptor> instances;
    for (std::size_t k : c.scalar_dims)
        if (k >= 2) instances.push_back(make_scalar_algebra(k));
    if (instances.empty()) instances.push_back(make_scalar_algebra(2));
    instances.push_back(make_ht_algebra(c.ht_grid));
    if (c.include_swap_control) instances.push_back(make_swap_algebra());

    const std::size_t trials = trials_for(c, "symmetry");
    const std::size_t per_instance =
        std::max<std::size_t>(1, trials / std::max<std::size_t>(1, instances.size()));

    for (const Descriptor& d : instances) {
        const std::size_t per_size =
            std::max<std::size_t>(1, per_instance / c.sizes.size());
        for (std::size_t n : c.sizes) {
            auto batch = check_symmetric_lift(
                d, n, per_size, derive_seed(c.seed, "symmetry/" + d->name, n));
            for (auto& o : batch) {
                if (!o.pass && o.expected_failure) ++control_failures;
                outcomes.push_back(std::move(o));
            }
        }
    }

    if (c.include_swap_control) {
        // a suite run must record at least one control failure, or flag the
        // suite itself as broken
        control_detected = control_failures >= 1;
        ExperimentOutcome o;
        o.seed = c.seed;
        o.instance = "swap";
        o.n = 0;
        o.property = "symmetric_control_detected";
        o.pass = control_detected;
        if (!control_detected)
            o.detail = "the non-symmetric control produced no recorded failure";
        outcomes.push_back(std::move(o));
    }
}

void run_involution_suite(const SuiteConfig& c, std::vector<ExperimentOutcome>& outcomes) {
    std::vector<Descriptor> instances;
    for (std::size_t k : c.scalar_dims) instances.push_back(make_scalar_algebra(k));
    instances.push_back(make_wiener_algebra(c.wiener_degree));
    instances.push_back(make_ht_algebra(c.ht_grid));
    instances.push_back(make_swap_algebra());

    const std::size_t samples = trials_for(c, "involution_bound");
    for (const Descriptor& d : instances) {
        const double worst =
            check_involution_bound(d, samples, derive_seed(c.seed, "involution", 0));
        ExperimentOutcome o;
        o.seed = c.seed;
        o.instance = d->name;
        o.n = 1;
        o.property = "involution_bound";
        o.residual = worst;
        o.pass = worst <= d->involution_bound + 1e-9;
        if (!o.pass)
            o.detail = "empirical ratio " + std::to_string(worst) + " exceeds declared M = " +
                       std::to_string(d->involution_bound);
        outcomes.push_back(std::move(o));
    }
}

} // namespace

SuiteResult run_suite(const SuiteConfig& config, const std::string& out_dir) {
    validate(config);
    SuiteResult result;
    std::vector<std::pair<std::string, std::string>> audits; // name -> contents

    for (const std::string& suite : config.suites) {
        if (suite == "srp") run_srp_suite(config, result.outcomes, audits);
        else if (suite == "inverse_closed")
            run_inverse_closed_suite(config, result.outcomes, audits);
        else if (suite == "symmetry")
            run_symmetry_suite(config, result.outcomes, result.control_failures,
                               result.control_detected);
        else if (suite == "involution_bound")
            run_involution_suite(config, result.outcomes);
    }

    RowAccumulator acc;
    for (const auto& o : result.outcomes) {
        acc.add(o);
        if (!o.pass && !o.expected_failure) ++result.failures;
    }
    if (config.strict_control) result.failures += result.control_failures;
    if (!result.control_detected) ++result.failures;
    for (auto& [key, row] : acc.rows) result.rows.push_back(row);
    result.ok = result.failures == 0;

    std::ostringstream csv;
    csv << "property,trials,passes,worst_residual,seed_of_worst\n";
    for (const auto& row : result.rows)
        csv << row.property << ',' << row.trials << ',' << row.passes << ','
            << row.worst_residual << ',' << row.seed_of_worst << '\n';
    result.summary_csv = csv.str();

    json rows_json = json::array();
    for (const auto& row : result.rows) {
        json r;
        r["property"] = row.property;
        r["trials"] = row.trials;
        r["passes"] = row.passes;
        r["worst_residual"] = row.worst_residual;
        r["seed_of_worst"] = row.seed_of_worst;
        rows_json.push_back(std::move(r));
    }
    result.summary_json = json{{"seed", config.seed},
                               {"failures", result.failures},
                               {"control_failures", result.control_failures},
                               {"control_detected", result.control_detected},
                               {"outcomes", result.outcomes.size()},
                               {"ok", result.ok},
                               {"rows", std::move(rows_json)}};

    if (!out_dir.empty()) {
        std::ostringstream lines;
        for (const auto& o : result.outcomes) lines << outcome_to_json(o).dump() << '\n';
        write_file_atomic(out_dir + "/outcomes.jsonl", lines.str());
        write_file_atomic(out_dir + "/summary.csv", result.summary_csv);
        write_file_atomic(out_dir + "/summary.json", result.summary_json.dump(2) + "\n");
        for (const auto& [name, contents] : audits)
            write_file_atomic(out_dir + "/certificates/" + name, contents);
        for (const auto& o : result.outcomes) {
            if (o.pass || o.counterexample_json.empty()) continue;
            write_file_atomic(out_dir + "/certificates/failure-" +
                                  std::to_string(o.seed) + ".json",
                              o.counterexample_json + "\n");
        }
    }
    return result;
}

} // namespace nbinv
