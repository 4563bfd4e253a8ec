#include "nbinv.h"

#include "nbinv/experiments.hpp"
#include "nbinv/instances.hpp"
#include "nbinv/serialize.hpp"
#include "nbinv/suite.hpp"

#include <cstring>
#include <functional>
#include <new>
#include <string>

using namespace nbinv;

struct nbinv_matrix {
    Matrix m;
};

struct nbinv_certificate {
    InversionCertificate cert;
};

namespace {

thread_local std::string g_last_error;

nbinv_status status_of(const Error& e) {
    g_last_error = e.what();
    const int code = static_cast<int>(e.code());
    if (code >= 1 && code <= 20) return static_cast<nbinv_status>(code);
    return NBINV_ERR_INTERNAL;
}

nbinv_status guard(const std::function<void()>& body) {
    try {
        body();
        g_last_error.clear();
        return NBINV_OK;
    } catch (const Error& e) {
        return status_of(e);
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return NBINV_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return NBINV_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

nlohmann::json parse_or_throw(const char* text, const char* what, ErrorCode code) {
    nlohmann::json j = nlohmann::json::parse(text ? text : "", nullptr, false);
    if (j.is_discarded())
        raise(code, std::string(what) + " is not valid JSON");
    return j;
}

} // namespace

extern "C" {

const char* nbinv_version(void) { return "1.0.0"; }

const char* nbinv_last_error(void) { return g_last_error.c_str(); }

void nbinv_string_free(char* text) { delete[] text; }

nbinv_status nbinv_matrix_parse_json(const char* text, nbinv_matrix** out) {
    if (!text || !out) {
        g_last_error = "null argument";
        return NBINV_ERR_PARSE;
    }
    return guard([&] {
        Matrix m = matrix_from_json(parse_or_throw(text, "matrix text", ErrorCode::Parse));
        *out = new nbinv_matrix{std::move(m)};
    });
}

nbinv_status nbinv_matrix_read_file(const char* path, nbinv_matrix** out) {
    if (!path || !out) {
        g_last_error = "null argument";
        return NBINV_ERR_IO;
    }
    return guard([&] {
        const std::string text = read_file(path);
        Matrix m = matrix_from_json(parse_or_throw(text.c_str(), "matrix file", ErrorCode::Parse));
        *out = new nbinv_matrix{std::move(m)};
    });
}

nbinv_status nbinv_matrix_to_json(const nbinv_matrix* m, char** out_text) {
    if (!m || !out_text) {
        g_last_error = "null argument";
        return NBINV_ERR_PARSE;
    }
    return guard([&] { *out_text = dup_string(matrix_to_json(m->m).dump()); });
}

size_t nbinv_matrix_dim(const nbinv_matrix* m) { return m ? m->m.size() : 0; }

void nbinv_matrix_free(nbinv_matrix* m) { delete m; }

nbinv_status nbinv_invert(const nbinv_matrix* m, const char* method, double tol,
                          nbinv_certificate** out) {
    if (!m || !method || !out) {
        g_last_error = "null argument";
        return NBINV_ERR_CONFIG;
    }
    return guard([&] {
        const std::string name(method);
        PivotStrategy strategy;
        if (tol > 0.0) strategy.tolerance = tol;
        const double effective =
            tol > 0.0 ? tol : m->m.entry_descriptor()->tolerance;
        InversionCertificate cert;
        if (name == "thm6") {
            const std::size_t n = m->m.size();
            InessentialMask mask = InessentialMask::none(n);
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t k = 0; k < j; ++k)
                    mask.below[j * n + k] =
                        inessential_proxy(m->m.entry_descriptor(), m->m.at(j, k));
            cert = thm6_invert(m->m, mask, strategy);
        } else if (name == "prop4") {
            cert = prop4_invert_2x2(m->m, strategy);
        } else if (name == "hermitian") {
            cert = invert_hermitian_symmetric(m->m, strategy);
        } else if (name == "triangular" || name == "oracle") {
            InversionCertificate c;
            c.input = m->m;
            c.reduced = m->m;
            c.inverse = name == "oracle" ? oracle_invert(m->m)
                                         : invert_upper_triangular(m->m);
            c.path = InversionPath::Direct;
            c.route = name == "oracle" ? "flattening oracle, partial-pivot elimination"
                                       : "triangular back substitution";
            c.tolerance = effective;
            const Matrix id =
                Matrix::identity(m->m.entry_descriptor(), m->m.size());
            c.residual_left = mat_distance(mat_mul(c.inverse, m->m), id);
            c.residual_right = mat_distance(mat_mul(m->m, c.inverse), id);
            if (std::max(c.residual_left, c.residual_right) > effective)
                raise(ErrorCode::NotConvergent,
                      name + ": inversion residual " +
                          std::to_string(std::max(c.residual_left, c.residual_right)) +
                          " exceeds tolerance " + std::to_string(effective));
            cert = std::move(c);
        } else {
            raise(ErrorCode::Config, "unknown method \"" + name +
                                         "\" (triangular|prop4|thm6|hermitian|oracle)");
        }
        *out = new nbinv_certificate{std::move(cert)};
    });
}

nbinv_status nbinv_certificate_to_json(const nbinv_certificate* c, char** out_text) {
    if (!c || !out_text) {
        g_last_error = "null argument";
        return NBINV_ERR_CONFIG;
    }
    return guard([&] { *out_text = dup_string(certificate_to_json(c->cert).dump(2)); });
}

double nbinv_certificate_residual_left(const nbinv_certificate* c) {
    return c ? c->cert.residual_left : -1.0;
}

double nbinv_certificate_residual_right(const nbinv_certificate* c) {
    return c ? c->cert.residual_right : -1.0;
}

const char* nbinv_certificate_path(const nbinv_certificate* c) {
    return c ? inversion_path_name(c->cert.path) : "invalid";
}

nbinv_status nbinv_certificate_inverse(const nbinv_certificate* c, nbinv_matrix** out) {
    if (!c || !out) {
        g_last_error = "null argument";
        return NBINV_ERR_CONFIG;
    }
    return guard([&] { *out = new nbinv_matrix{c->cert.inverse}; });
}

void nbinv_certificate_free(nbinv_certificate* c) { delete c; }

nbinv_status nbinv_radius_report(const nbinv_matrix* m, unsigned n_max,
                                 int with_ambient, char** report_json) {
    if (!m || !report_json) {
        g_last_error = "null argument";
        return NBINV_ERR_CONFIG;
    }
    return guard([&] {
        const SpectralReport report =
            gelfand_radius(as_element(m->m), n_max, with_ambient != 0);
        *report_json = dup_string(spectral_report_to_json(report).dump(2));
    });
}

nbinv_status nbinv_suite_run(const char* config_json, const char* out_dir,
                             char** summary_json) {
    return guard([&] {
        SuiteConfig config =
            config_json
                ? suite_config_from_json(
                      parse_or_throw(config_json, "suite config", ErrorCode::Config))
                : default_suite_config();
        const SuiteResult result = run_suite(config, out_dir ? out_dir : "");
        if (summary_json) *summary_json = dup_string(result.summary_json.dump(2));
        if (!result.ok)
            raise(ErrorCode::PropertyFailed,
                  std::to_string(result.failures) + " propert" +
                      (result.failures == 1 ? "y" : "ies") + " failed");
    });
}

nbinv_status nbinv_experiment_run(const char* kind, const char* options_json,
                                  char** outcomes_json) {
    if (!kind) {
        g_last_error = "null kind";
        return NBINV_ERR_CONFIG;
    }
    return guard([&] {
        nlohmann::json options = nlohmann::json::object();
        if (options_json)
            options = parse_or_throw(options_json, "options", ErrorCode::Config);

        auto descriptor_for = [&](const std::string& fallback) -> Descriptor {
            const std::string name = options.value("instance", fallback);
            if (name.rfind("scalar", 0) == 0)
                return make_scalar_algebra(std::stoul(name.substr(6)));
            if (name.rfind("wiener", 0) == 0)
                return make_wiener_algebra(std::stoul(name.substr(6)));
            if (name.rfind("ht", 0) == 0)
                return make_ht_algebra(std::stoul(name.substr(2)));
            if (name == "swap") return make_swap_algebra();
            raise(ErrorCode::Config, "unknown instance \"" + name + "\"");
        };

        const std::uint64_t seed = options.value("seed", std::uint64_t{20260810});
        const std::size_t n = options.value("n", std::size_t{2});
        const std::size_t trials = options.value("trials", std::size_t{50});
        nlohmann::json out;
        out["kind"] = kind;
        bool failed = false;

        const std::string k(kind);
        if (k == "srp") {
            const Descriptor d = descriptor_for("wiener64");
            const std::size_t n_max = options.value("n_max", std::size_t{1024});
            nlohmann::json list = nlohmann::json::array();
            for (std::size_t i = 0; i < trials; ++i) {
                Rng rng(derive_seed(seed, "srp", i));
                const Matrix t = random_matrix(d, n, rng, 0.25);
                const SpectralReport report = check_srp_matrix_lift(t, n_max);
                const double r =
                    std::max(report.radius, report.ambient_radius.value_or(0.0));
                const bool pass = report.discrepancy() <= 0.05 * std::max(1.0, r);
                failed = failed || !pass;
                nlohmann::json jr = spectral_report_to_json(report);
                jr["pass"] = pass;
                list.push_back(std::move(jr));
            }
            out["outcomes"] = std::move(list);
        } else if (k == "symmetry") {
            const Descriptor d = descriptor_for("scalar2");
            const bool strict = options.value("strict", false);
            const auto outcomes = check_symmetric_lift(d, n, trials, seed);
            nlohmann::json list = nlohmann::json::array();
            for (const auto& o : outcomes) {
                if (!o.pass && (!o.expected_failure || strict)) failed = true;
                list.push_back(outcome_to_json(o));
            }
            out["outcomes"] = std::move(list);
        } else if (k == "involution_bound") {
            const Descriptor d = descriptor_for("scalar2");
            const double worst = check_involution_bound(d, trials, seed);
            out["worst_ratio"] = worst;
            out["declared_bound"] = d->involution_bound;
            failed = worst > d->involution_bound + 1e-9;
        } else {
            raise(ErrorCode::Config, "unknown experiment kind \"" + k + "\"");
        }
        out["pass"] = !failed;
        if (outcomes_json) *outcomes_json = dup_string(out.dump(2));
        if (failed) raise(ErrorCode::PropertyFailed, "experiment recorded failures");
    });
}

} // extern "C"
