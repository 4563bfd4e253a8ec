// Command-line harness over the nbinv shared library. Talks to the core
// exclusively through the C API in nbinv.h.
//
// Exit codes: 0 success / all properties pass, 1 engine or property failure,
// 2 usage, parse or configuration errors.

#include "nbinv.h"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int exit_code_for(nbinv_status status) {
    switch (status) {
        case NBINV_OK: return kExitOk;
        case NBINV_ERR_PARSE:
        case NBINV_ERR_IO:
        case NBINV_ERR_CONFIG: return kExitUsage;
        default: return kExitFailure;
    }
}

struct StringHolder {
    char* text = nullptr;
    ~StringHolder() { nbinv_string_free(text); }
    std::string str() const { return text ? std::string(text) : std::string(); }
};

bool write_text_file(const std::string& path, const std::string& contents) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(p.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) return false;
    out << contents;
    return static_cast<bool>(out);
}

std::string read_text_file(const std::string& path, bool& ok) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        ok = false;
        return {};
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    ok = true;
    return ss.str();
}

int report_error(const char* what, nbinv_status status) {
    std::cerr << "nbinv: " << what << ": " << nbinv_last_error() << "\n";
    return exit_code_for(status);
}

int run_invert(const std::string& in_path, const std::string& method, double tol,
               const std::string& out_dir) {
    nbinv_matrix* matrix = nullptr;
    nbinv_status status = nbinv_matrix_read_file(in_path.c_str(), &matrix);
    if (status != NBINV_OK) return report_error("cannot load matrix", status);
    std::unique_ptr<nbinv_matrix, decltype(&nbinv_matrix_free)> matrix_guard(
        matrix, &nbinv_matrix_free);

    nbinv_certificate* cert = nullptr;
    status = nbinv_invert(matrix, method.c_str(), tol, &cert);
    if (status != NBINV_OK) return report_error("inversion failed", status);
    std::unique_ptr<nbinv_certificate, decltype(&nbinv_certificate_free)> cert_guard(
        cert, &nbinv_certificate_free);

    StringHolder json;
    status = nbinv_certificate_to_json(cert, &json.text);
    if (status != NBINV_OK) return report_error("cannot serialize certificate", status);

    const std::string stem = std::filesystem::path(in_path).stem().string();
    const std::string cert_path =
        out_dir + "/certificates/" + stem + "-" + method + ".json";
    if (!write_text_file(cert_path, json.str() + "\n")) {
        std::cerr << "nbinv: cannot write " << cert_path << "\n";
        return kExitUsage;
    }

    const double left = nbinv_certificate_residual_left(cert);
    const double right = nbinv_certificate_residual_right(cert);
    std::cout << "path: " << nbinv_certificate_path(cert) << "\n"
              << "residual_left: " << left << "\n"
              << "residual_right: " << right << "\n"
              << "certificate: " << cert_path << "\n";
    return kExitOk;
}

int run_radius(const std::string& in_path, unsigned n_max, bool ambient) {
    nbinv_matrix* matrix = nullptr;
    nbinv_status status = nbinv_matrix_read_file(in_path.c_str(), &matrix);
    if (status != NBINV_OK) return report_error("cannot load matrix", status);
    std::unique_ptr<nbinv_matrix, decltype(&nbinv_matrix_free)> guard(matrix,
                                                                      &nbinv_matrix_free);
    StringHolder report;
    status = nbinv_radius_report(matrix, n_max, ambient ? 1 : 0, &report.text);
    if (status != NBINV_OK) return report_error("radius estimation failed", status);
    std::cout << report.str() << "\n";
    return kExitOk;
}

int run_experiment(const char* kind, const std::string& options,
                   const std::string& out_path) {
    StringHolder outcomes;
    const nbinv_status status =
        nbinv_experiment_run(kind, options.c_str(), &outcomes.text);
    if (status != NBINV_OK && status != NBINV_ERR_PROPERTY_FAILED)
        return report_error("experiment failed", status);
    if (!out_path.empty() && !write_text_file(out_path, outcomes.str() + "\n")) {
        std::cerr << "nbinv: cannot write " << out_path << "\n";
        return kExitUsage;
    }
    std::cout << outcomes.str() << "\n";
    return status == NBINV_OK ? kExitOk : kExitFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"matrix inversion and spectral experiments over Banach algebras"};
    app.require_subcommand(1);

    // invert
    std::string in_path, method = "thm6", out_dir = "nbinv-out";
    double tol = 0.0;
    auto* invert = app.add_subcommand("invert", "invert a matrix file, emit a certificate");
    invert->add_option("--in", in_path, "matrix JSON file")->required();
    invert->add_option("--method", method,
                       "triangular | prop4 | thm6 | hermitian | oracle")
        ->capture_default_str();
    invert->add_option("--tol", tol, "residual tolerance (0: instance default)")
        ->capture_default_str();
    invert->add_option("--out", out_dir, "output directory")->capture_default_str();

    // radius
    std::string radius_in;
    unsigned n_max = 1024;
    bool ambient = false;
    auto* radius = app.add_subcommand("radius", "norm-sequence spectral radius estimate");
    radius->add_option("--in", radius_in, "matrix JSON file")->required();
    radius->add_option("--n-max", n_max, "largest power (power of two, >= 4)")
        ->capture_default_str();
    radius->add_flag("--ambient", ambient, "also estimate under the ambient norm");

    // srp
    std::string srp_instance = "wiener64", srp_out;
    std::uint64_t seed = 20260810;
    std::size_t trials = 50, srp_n = 2;
    auto* srp = app.add_subcommand("srp", "spectral-radius agreement between norms");
    srp->add_option("--instance", srp_instance, "instance name")->capture_default_str();
    srp->add_option("--n", srp_n, "matrix dimension")->capture_default_str();
    srp->add_option("--trials", trials, "number of trials")->capture_default_str();
    srp->add_option("--seed", seed, "master seed")->capture_default_str();
    srp->add_option("--n-max", n_max, "largest power for the radius estimate")
        ->capture_default_str();
    srp->add_option("--out", srp_out, "write outcomes JSON here");

    // symmetry
    std::string sym_instance = "scalar2", sym_out;
    std::size_t sym_n = 3, sym_trials = 100;
    std::uint64_t sym_seed = 20260810;
    bool strict = false;
    auto* symmetry = app.add_subcommand("symmetry", "invertibility of unit + T*T");
    symmetry->add_option("--instance", sym_instance, "instance name (swap = control)")
        ->capture_default_str();
    symmetry->add_option("--n", sym_n, "matrix dimension")->capture_default_str();
    symmetry->add_option("--trials", sym_trials, "number of trials")->capture_default_str();
    symmetry->add_option("--seed", sym_seed, "master seed")->capture_default_str();
    symmetry->add_flag("--strict", strict, "expected control failures also fail the run");
    symmetry->add_option("--out", sym_out, "write outcomes JSON here");

    // suite
    std::string config_path, suite_out = "nbinv-out", suite_format = "json";
    std::uint64_t suite_seed = 0;
    bool suite_seed_set = false;
    auto* suite = app.add_subcommand("suite", "run the configured experiment suites");
    suite->add_option("--config", config_path, "suite config JSON (defaults built in)");
    suite->add_option("--out", suite_out, "output directory")->capture_default_str();
    suite->add_option("--seed", suite_seed, "override the config seed")
        ->each([&](const std::string&) { suite_seed_set = true; });
    suite->add_option("--format", suite_format, "summary format printed to stdout")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    if (invert->parsed()) return run_invert(in_path, method, tol, out_dir);
    if (radius->parsed()) return run_radius(radius_in, n_max, ambient);
    if (srp->parsed()) {
        std::ostringstream options;
        options << "{\"instance\":\"" << srp_instance << "\",\"n\":" << srp_n
                << ",\"trials\":" << trials << ",\"seed\":" << seed
                << ",\"n_max\":" << n_max << "}";
        return run_experiment("srp", options.str(), srp_out);
    }
    if (symmetry->parsed()) {
        std::ostringstream options;
        options << "{\"instance\":\"" << sym_instance << "\",\"n\":" << sym_n
                << ",\"trials\":" << sym_trials << ",\"seed\":" << sym_seed
                << ",\"strict\":" << (strict ? "true" : "false") << "}";
        return run_experiment("symmetry", options.str(), sym_out);
    }
    if (suite->parsed()) {
        const bool have_config = !config_path.empty();
        std::string config_text;
        if (have_config) {
            bool ok = false;
            config_text = read_text_file(config_path, ok);
            if (!ok) {
                std::cerr << "nbinv: cannot read config " << config_path << "\n";
                return kExitUsage;
            }
        }
        if (suite_seed_set) {
            // the documented override knob is the environment variable; the
            // flag is sugar for it
            setenv("NBINV_SEED", std::to_string(suite_seed).c_str(), 1);
        }
        StringHolder summary;
        const nbinv_status status = nbinv_suite_run(
            have_config ? config_text.c_str() : nullptr, suite_out.c_str(),
            &summary.text);
        if (status == NBINV_OK || status == NBINV_ERR_PROPERTY_FAILED) {
            if (suite_format == "csv") {
                bool ok = false;
                const std::string csv = read_text_file(suite_out + "/summary.csv", ok);
                std::cout << (ok ? csv : summary.str()) << "\n";
            } else {
                std::cout << summary.str() << "\n";
            }
            if (status != NBINV_OK)
                std::cerr << "nbinv: suite recorded failures: " << nbinv_last_error()
                          << "\n";
            return status == NBINV_OK ? kExitOk : kExitFailure;
        }
        return report_error("suite failed to run", status);
    }
    return kExitUsage;
}
