#include "nbinv/serialize.hpp"

#include "nbinv/experiments.hpp"
#include "nbinv/instances.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace nbinv {

namespace {

using json = nlohmann::json;
using C = Complex;

json complex_to_json(const C& v) { return json::array({v.real(), v.imag()}); }

C complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        raise(ErrorCode::Parse, "expected a [re, im] pair");
    return C{j[0].get<double>(), j[1].get<double>()};
}

json complex_array(const std::vector<C>& v) {
    json out = json::array();
    for (const auto& x : v) out.push_back(complex_to_json(x));
    return out;
}

std::vector<C> complex_array_from(const json& j, const char* what) {
    if (!j.is_array()) raise(ErrorCode::Parse, std::string(what) + ": expected an array");
    std::vector<C> out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(complex_from_json(e));
    return out;
}

const json& field(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        raise(ErrorCode::Parse, std::string("missing field \"") + key + "\"");
    return *it;
}

} // namespace

json descriptor_to_json(const Descriptor& d) {
    json j;
    switch (d->kind) {
        case Kind::ScalarMatrix:
            j["kind"] = "scalar";
            j["k"] = d->dim;
            j["norm"] = d->scalar_norm == ScalarNorm::SingularValue ? "sigma" : "sum";
            if (!d->has_involution) j["involution"] = false;
            break;
        case Kind::Wiener:
            j["kind"] = "wiener";
            j["degree"] = d->degree;
            break;
        case Kind::Circle:
            j["kind"] = "circle";
            j["grid"] = d->grid;
            break;
        case Kind::HtUnitized:
            j["kind"] = "ht";
            j["grid"] = d->grid;
            break;
        case Kind::SwapPair:
            j["kind"] = "swap";
            break;
        case Kind::MatrixOver:
            j["kind"] = "matrix";
            j["m"] = d->msize;
            j["inner"] = descriptor_to_json(d->inner);
            break;
    }
    return j;
}

Descriptor descriptor_from_json(const json& j) {
    if (!j.is_object()) raise(ErrorCode::Parse, "descriptor must be an object");
    const std::string kind = field(j, "kind").get<std::string>();
    if (kind == "scalar") {
        const std::size_t k = field(j, "k").get<std::size_t>();
        ScalarNorm norm = ScalarNorm::SingularValue;
        if (j.contains("norm")) {
            const std::string s = j["norm"].get<std::string>();
            if (s == "sum") norm = ScalarNorm::SumModulus;
            else if (s != "sigma") raise(ErrorCode::Parse, "scalar norm must be sigma or sum");
        }
        const bool invol = j.value("involution", true);
        return make_scalar_algebra(k, norm, invol);
    }
    if (kind == "wiener") return make_wiener_algebra(field(j, "degree").get<std::size_t>());
    if (kind == "circle") return make_circle_algebra(field(j, "grid").get<std::size_t>());
    if (kind == "ht") return make_ht_algebra(field(j, "grid").get<std::size_t>());
    if (kind == "swap") return make_swap_algebra();
    if (kind == "matrix")
        return make_matrix_algebra(descriptor_from_json(field(j, "inner")),
                                   field(j, "m").get<std::size_t>());
    raise(ErrorCode::Parse, "unknown algebra kind \"" + kind + "\"");
}

json element_to_json(const Element& e) {
    const Descriptor& d = e.descriptor();
    switch (d->kind) {
        case Kind::ScalarMatrix: {
            const auto& p = e.as<ScalarMatrixPayload>();
            json rows = json::array();
            for (std::size_t i = 0; i < d->dim; ++i) {
                json row = json::array();
                for (std::size_t j = 0; j < d->dim; ++j)
                    row.push_back(complex_to_json(p.a[i * d->dim + j]));
                rows.push_back(std::move(row));
            }
            return rows;
        }
        case Kind::Wiener: {
            // coefficient array indexed -d..d, padded to the full band
            std::vector<C> full(2 * d->degree + 1, C{0.0, 0.0});
            const long hw = static_cast<long>(d->degree);
            for (long q = -hw; q <= hw; ++q)
                full[static_cast<std::size_t>(q + hw)] = wiener_coefficient(e, q);
            return complex_array(full);
        }
        case Kind::Circle:
            return complex_array(e.as<CirclePayload>().v);
        case Kind::HtUnitized: {
            const auto& p = e.as<HtPayload>();
            json j;
            j["c"] = complex_to_json(p.c);
            j["kernel"] = complex_array(p.k);
            j["weights"] = d->weights;
            return j;
        }
        case Kind::SwapPair: {
            const auto& p = e.as<SwapPayload>();
            return json::array({complex_to_json(p.x), complex_to_json(p.y)});
        }
        case Kind::MatrixOver: {
            const Matrix m = matrix_of(e);
            json entries = json::array();
            for (std::size_t i = 0; i < m.size(); ++i) {
                json row = json::array();
                for (std::size_t j = 0; j < m.size(); ++j)
                    row.push_back(element_to_json(m.at(i, j)));
                entries.push_back(std::move(row));
            }
            json j;
            j["n"] = m.size();
            j["entries"] = std::move(entries);
            return j;
        }
    }
    raise(ErrorCode::Parse, "element_to_json: unknown kind");
}

Element element_from_json(const Descriptor& d, const json& j) {
    switch (d->kind) {
        case Kind::ScalarMatrix: {
            if (!j.is_array() || j.size() != d->dim)
                raise(ErrorCode::Parse, "scalar payload must be a k x k nested array");
            std::vector<C> a;
            a.reserve(d->dim * d->dim);
            for (const auto& row : j) {
                if (!row.is_array() || row.size() != d->dim)
                    raise(ErrorCode::Parse, "scalar payload row has wrong length");
                for (const auto& v : row) a.push_back(complex_from_json(v));
            }
            return make_scalar(d, a);
        }
        case Kind::Wiener: {
            const auto coeffs = complex_array_from(j, "wiener payload");
            if (coeffs.size() != 2 * d->degree + 1)
                raise(ErrorCode::Parse, "wiener payload must list 2d+1 coefficients");
            return make_wiener(d, coeffs);
        }
        case Kind::Circle: {
            const auto vals = complex_array_from(j, "circle payload");
            if (vals.size() != d->grid)
                raise(ErrorCode::Parse, "circle payload must list one value per grid point");
            return Element(d, CirclePayload{vals});
        }
        case Kind::HtUnitized: {
            if (!j.is_object()) raise(ErrorCode::Parse, "ht payload must be an object");
            const C c = complex_from_json(field(j, "c"));
            const auto kernel = complex_array_from(field(j, "kernel"), "ht kernel");
            if (kernel.size() != d->grid * d->grid)
                raise(ErrorCode::Parse, "ht kernel must be an m*m row-major array");
            if (j.contains("weights")) {
                const auto w = j["weights"].get<std::vector<double>>();
                if (w != d->weights)
                    raise(ErrorCode::Parse, "ht payload weights disagree with the descriptor");
            }
            return make_ht(d, c, kernel);
        }
        case Kind::SwapPair: {
            if (!j.is_array() || j.size() != 2)
                raise(ErrorCode::Parse, "swap payload must be a pair");
            return make_swap(d, complex_from_json(j[0]), complex_from_json(j[1]));
        }
        case Kind::MatrixOver: {
            if (!j.is_object()) raise(ErrorCode::Parse, "nested matrix payload must be an object");
            const std::size_t n = field(j, "n").get<std::size_t>();
            if (n != d->msize)
                raise(ErrorCode::Parse, "nested matrix dimension disagrees with the descriptor");
            const json& entries = field(j, "entries");
            Matrix m(d->inner, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t jj = 0; jj < n; ++jj)
                    m.set(i, jj, element_from_json(d->inner, entries.at(i).at(jj)));
            return as_element(m);
        }
    }
    raise(ErrorCode::Parse, "element_from_json: unknown kind");
}

json matrix_to_json(const Matrix& m) {
    json entries = json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.size(); ++j)
            row.push_back(element_to_json(m.at(i, j)));
        entries.push_back(std::move(row));
    }
    json j;
    j["n"] = m.size();
    j["descriptor"] = descriptor_to_json(m.entry_descriptor());
    j["entries"] = std::move(entries);
    return j;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_object()) raise(ErrorCode::Parse, "matrix file must be a JSON object");
    const Descriptor d = descriptor_from_json(field(j, "descriptor"));
    const std::size_t n = field(j, "n").get<std::size_t>();
    if (n == 0) raise(ErrorCode::Parse, "matrix dimension must be >= 1");
    const json& entries = field(j, "entries");
    if (!entries.is_array() || entries.size() != n)
        raise(ErrorCode::Parse, "entries must be an n x n array");
    Matrix m(d, n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!entries[i].is_array() || entries[i].size() != n)
            raise(ErrorCode::Parse, "entries must be an n x n array");
        for (std::size_t jj = 0; jj < n; ++jj)
            m.set(i, jj, element_from_json(d, entries[i][jj]));
    }
    return m;
}

std::string matrix_to_string(const Matrix& m) { return matrix_to_json(m).dump(); }

Matrix matrix_from_string(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) raise(ErrorCode::Parse, "matrix text is not valid JSON");
    return matrix_from_json(j);
}

json certificate_to_json(const InversionCertificate& cert) {
    json j;
    j["path"] = inversion_path_name(cert.path);
    j["route"] = cert.route;
    j["tolerance"] = cert.tolerance;
    j["residual_left"] = cert.residual_left;
    j["residual_right"] = cert.residual_right;
    j["replay_residual"] = replay_residual(cert);
    j["input"] = matrix_to_json(cert.input);
    j["reduced"] = matrix_to_json(cert.reduced);
    j["inverse"] = matrix_to_json(cert.inverse);
    json factors = json::array();
    for (const GLPair& f : cert.factors) {
        json jf;
        jf["v"] = matrix_to_json(f.v);
        jf["v_inv"] = matrix_to_json(f.v_inv);
        jf["w"] = matrix_to_json(f.w);
        jf["w_inv"] = matrix_to_json(f.w_inv);
        factors.push_back(std::move(jf));
    }
    j["factors"] = std::move(factors);
    return j;
}

json spectral_report_to_json(const SpectralReport& report) {
    json j;
    if (!report.element.empty()) j["element"] = report.element;
    j["radius"] = report.radius;
    j["converged"] = report.converged;
    j["norm_bound"] = report.norm_bound;
    json seq = json::array();
    for (const auto& [n, v] : report.norm_sequence)
        seq.push_back(json::array({n, v}));
    j["norm_sequence"] = std::move(seq);
    if (report.ambient_radius) {
        j["ambient_radius"] = *report.ambient_radius;
        j["discrepancy"] = report.discrepancy();
    }
    return j;
}

json outcome_to_json(const ExperimentOutcome& o) {
    json j;
    j["seed"] = o.seed;
    j["instance"] = o.instance;
    j["n"] = o.n;
    j["property"] = o.property;
    j["pass"] = o.pass;
    j["expected_failure"] = o.expected_failure;
    j["residual"] = o.residual;
    if (!o.detail.empty()) j["detail"] = o.detail;
    if (!o.counterexample_json.empty())
        j["counterexample"] = json::parse(o.counterexample_json);
    return j;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) raise(ErrorCode::Io, "cannot open " + tmp.string() + " for writing");
        out << contents;
        if (!out) raise(ErrorCode::Io, "short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) raise(ErrorCode::Io, "cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(ErrorCode::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace nbinv
