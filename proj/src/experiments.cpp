#include "nbinv/experiments.hpp"

#include "nbinv/instances.hpp"
#include "nbinv/serialize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nbinv {

namespace {

using C = Complex;

double generation_amplitude(const Descriptor& d) {
    switch (d->kind) {
        case Kind::Wiener: return 0.25;
        case Kind::HtUnitized: return 0.3;
        default: return 1.0;
    }
}

// grid-backed instances need stronger diagonal dominance: truncated inverses
// must stay representable at the working tolerance (tails fall off like
// margin^degree), kernel-form inverses need a nonsingular scalar-part system
double dominance_floor(const Descriptor& d, double requested) {
    switch (d->kind) {
        case Kind::Wiener:
        case Kind::Circle: return std::max(requested, 1.25);
        case Kind::HtUnitized: return std::max(requested, 0.5);
        default: return requested;
    }
}

Matrix shift_until_regular(Matrix t, double floor_level) {
    const Descriptor& d = t.entry_descriptor();
    const Element one = unit(d);
    double c = 0.0;
    for (int attempt = 0; attempt < 18; ++attempt) {
        Matrix shifted = t;
        if (c > 0.0) {
            for (std::size_t i = 0; i < t.size(); ++i)
                shifted.set(i, i, add(t.at(i, i), scale(C{c, 0.0}, one)));
        }
        if (ambient_smallest_singular(shifted) >= floor_level) return shifted;
        c = (c == 0.0) ? 1.0 : 2.0 * c;
    }
    raise(ErrorCode::NotConvergent,
          "random matrix generation: no shift reached the singular-value floor");
}

} // namespace

Matrix random_invertible_matrix(const Descriptor& d, std::size_t n, Rng& rng,
                                double min_singular_floor) {
    Matrix t = random_matrix(d, n, rng, generation_amplitude(d));
    return shift_until_regular(std::move(t), dominance_floor(d, min_singular_floor));
}

Matrix random_hermitian_invertible(const Descriptor& d, std::size_t n, Rng& rng) {
    if (!d->has_involution)
        raise(ErrorCode::NoInvolution, d->name + " declares no involution");
    Matrix r = random_matrix(d, n, rng, generation_amplitude(d));
    Matrix h = mat_scale(C{0.5, 0.0}, mat_add(r, mat_star(r)));

    if (is_scalar_backed(d)) {
        // real spectrum: shift along the real axis into the widest gap
        const CDense flat = mat_flatten(h);
        std::vector<double> eigs;
        for (const C& mu : cd_eigenvalues(flat)) eigs.push_back(mu.real());
        std::sort(eigs.begin(), eigs.end());
        const double scale_level =
            std::max(1.0, std::abs(eigs.front()) + std::abs(eigs.back()));
        auto min_dist = [&](double c) {
            double best = std::numeric_limits<double>::infinity();
            for (double mu : eigs) best = std::min(best, std::abs(mu + c));
            return best;
        };
        double best_c = 0.0;
        double best = min_dist(0.0);
        std::vector<double> candidates{0.0, scale_level, -scale_level};
        for (std::size_t i = 0; i + 1 < eigs.size(); ++i)
            candidates.push_back(-(eigs[i] + eigs[i + 1]) / 2.0);
        for (double c : candidates) {
            const double v = min_dist(c);
            if (v > best) {
                best = v;
                best_c = c;
            }
            if (best >= 0.1 * scale_level) break;
        }
        if (best_c != 0.0) {
            const Element one = unit(d);
            for (std::size_t i = 0; i < n; ++i)
                h.set(i, i, add(h.at(i, i), scale(C{best_c, 0.0}, one)));
        }
        return h;
    }
    return shift_until_regular(std::move(h), dominance_floor(d, 1e-3));
}

Matrix random_matrix_for_path(const Descriptor& d, std::size_t n,
                              const std::string& engine_path, Rng& rng) {
    if (engine_path == "hermitian") return random_hermitian_invertible(d, n, rng);
    if (engine_path == "prop4") {
        if (n != 2) raise(ErrorCode::DimensionMismatch, "prop4 path needs n = 2");
        return random_invertible_matrix(d, n, rng);
    }
    if (engine_path == "triangular" ||
        (engine_path == "thm6" &&
         (d->kind == Kind::Wiener || d->kind == Kind::Circle))) {
        // the inessential proxy for the function algebras is {0}: random
        // triangular matrices are exactly the admissible corpus
        Matrix t = random_matrix(d, n, rng, generation_amplitude(d));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) t.set(i, j, zero(d));
        return shift_until_regular(std::move(t), dominance_floor(d, 1e-3));
    }
    if (engine_path == "thm6") {
        Matrix t = random_matrix(d, n, rng, generation_amplitude(d));
        if (d->kind == Kind::HtUnitized) {
            // below-diagonal entries are pure kernels: the compact-like ideal
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < i; ++j) {
                    HtPayload p = t.at(i, j).as<HtPayload>();
                    p.c = C{0.0, 0.0};
                    t.set(i, j, Element(d, std::move(p)));
                }
        }
        return shift_until_regular(std::move(t), dominance_floor(d, 1e-3));
    }
    raise(ErrorCode::Config, "unknown engine path \"" + engine_path + "\"");
}

SpectralReport check_srp_matrix_lift(const Matrix& t, std::size_t n_max) {
    const Descriptor& d = t.entry_descriptor();
    if (!d->has_ambient)
        raise(ErrorCode::NotSupported, d->name + " declares no ambient embedding");
    SpectralReport report = gelfand_radius(as_element(t), n_max, /*with_ambient=*/true);
    report.element = "m" + std::to_string(t.size()) + "(" + d->name + ")";
    return report;
}

ExperimentOutcome check_inverse_closed_pair(const Matrix& t, const std::string& engine_path,
                                            double tol, std::uint64_t seed) {
    const Descriptor& d = t.entry_descriptor();
    ExperimentOutcome outcome;
    outcome.seed = seed;
    outcome.instance = d->name;
    outcome.n = t.size();
    outcome.property = "inverse_closed/" + engine_path;

    Matrix ambient_inverse;
    try {
        ambient_inverse = oracle_invert(t);
    } catch (const Error& e) {
        outcome.pass = false;
        outcome.detail = std::string("ambient oracle failed: ") + e.what();
        outcome.counterexample_json = matrix_to_string(t);
        return outcome;
    }

    Matrix recovered;
    try {
        PivotStrategy strategy;
        strategy.tolerance = tol;
        if (engine_path == "thm6") {
            InessentialMask mask = InessentialMask::none(t.size());
            for (std::size_t j = 0; j < t.size(); ++j)
                for (std::size_t k = 0; k < j; ++k)
                    mask.below[j * t.size() + k] = inessential_proxy(d, t.at(j, k));
            recovered = thm6_invert(t, mask, strategy).inverse;
        } else if (engine_path == "prop4") {
            recovered = prop4_invert_2x2(t, strategy).inverse;
        } else if (engine_path == "hermitian") {
            recovered = invert_hermitian_symmetric(t, strategy).inverse;
        } else if (engine_path == "triangular") {
            recovered = invert_upper_triangular(t);
        } else {
            raise(ErrorCode::Config, "unknown engine path \"" + engine_path + "\"");
        }
    } catch (const Error& e) {
        outcome.pass = false;
        outcome.detail = std::string("engine recovery failed: ") + e.what();
        outcome.counterexample_json = matrix_to_string(t);
        return outcome;
    }

    const double residual = mat_residual(t, recovered);
    const Matrix diff = mat_sub(recovered, ambient_inverse);
    const double ambient_scale =
        d->has_ambient ? mat_ambient_norm(ambient_inverse) : mat_norm(ambient_inverse);
    const double ambient_diff = d->has_ambient ? mat_ambient_norm(diff) : mat_norm(diff);
    outcome.residual = std::max(residual, ambient_diff / (1.0 + ambient_scale));
    outcome.pass = residual <= tol && ambient_diff <= tol * (1.0 + ambient_scale);
    if (!outcome.pass) {
        outcome.detail = "residual " + std::to_string(residual) + ", ambient distance " +
                         std::to_string(ambient_diff);
        outcome.counterexample_json = matrix_to_string(t);
    }
    return outcome;
}

std::vector<ExperimentOutcome> check_symmetric_lift(const Descriptor& d, std::size_t n,
                                                    std::size_t trials, std::uint64_t seed) {
    if (!d->has_involution)
        raise(ErrorCode::NoInvolution, d->name + " declares no involution");

    std::vector<ExperimentOutcome> outcomes;
    outcomes.reserve(trials);
    const bool star_flattens =
        d->kind == Kind::ScalarMatrix || d->kind == Kind::HtUnitized ||
        (d->kind == Kind::MatrixOver && is_scalar_backed(d) &&
         d->inner->kind == Kind::ScalarMatrix);

    for (std::size_t trial = 0; trial < trials; ++trial) {
        const std::uint64_t trial_seed = derive_seed(seed, "symmetric_lift/" + d->name, trial);
        Rng rng(trial_seed);
        Matrix t;
        if (trial == 0 && d->kind == Kind::SwapPair && !d->is_symmetric) {
            // witness (2, -1/2) lifted diagonally: 1 + a*a = (0, 0)
            t = Matrix(d, n);
            const Element witness = make_swap(d, C{2.0, 0.0}, C{-0.5, 0.0});
            for (std::size_t i = 0; i < n; ++i) t.set(i, i, witness);
        } else {
            t = random_matrix(d, n, rng, generation_amplitude(d));
        }
        const Matrix w = mat_add(Matrix::identity(d, n),
                                 mat_mul(mat_star(t), t));
        ExperimentOutcome o;
        o.seed = trial_seed;
        o.instance = d->name;
        o.n = n;
        o.property = "symmetric_lift";
        o.expected_failure = !d->is_symmetric;
        if (star_flattens) {
            // flattening respects the involution here, so I + T*T is a
            // hermitian scalar matrix and its smallest eigenvalue decides
            const double min_eig = cd_min_eig_hermitian(mat_flatten(w));
            o.residual = 1.0 - min_eig;
            o.pass = min_eig >= 1.0 - 1e-10;
            if (!o.pass) o.detail = "min eigenvalue " + std::to_string(min_eig);
        } else {
            try {
                const Matrix winv = oracle_invert(w);
                o.residual = mat_residual(w, winv);
                o.pass = o.residual <= 100.0 * d->tolerance;
            } catch (const Error& e) {
                o.pass = false;
                o.detail = std::string("unit + T*T not invertible: ") + e.what();
            }
        }
        if (!o.pass) o.counterexample_json = matrix_to_string(t);
        outcomes.push_back(std::move(o));
    }
    return outcomes;
}

double check_involution_bound(const Descriptor& d, std::size_t samples, std::uint64_t seed) {
    if (!d->has_involution)
        raise(ErrorCode::NoInvolution, d->name + " declares no involution");
    double worst = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        Rng rng(derive_seed(seed, "involution_bound/" + d->name, i));
        const Element a = random_element(d, rng);
        const double na = norm(a);
        if (na == 0.0) continue;
        worst = std::max(worst, norm(star(a)) / na);
    }
    return worst;
}

} // namespace nbinv
