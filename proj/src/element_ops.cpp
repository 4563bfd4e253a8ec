#include "nbinv/element_ops.hpp"

#include "internal.hpp"
#include "nbinv/fft.hpp"
#include "nbinv/instances.hpp"
#include "nbinv/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nbinv {

namespace {

using C = Complex;

bool pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Wiener powers escape any fixed truncation band; the norm sequence must see
// the true powers, so the accumulator lives under a widened degree while the
// ring elements keep the descriptor's truncation.
Element widen_for_powers(const Element& a, std::size_t n_max) {
    const Descriptor& d = a.descriptor();
    if (d->kind == Kind::Wiener) {
        const Descriptor wide = make_wiener_algebra(d->degree * n_max);
        return detail::wiener_change_degree(a, wide);
    }
    if (d->kind == Kind::MatrixOver && d->inner->kind == Kind::Wiener) {
        const Matrix m = matrix_of(a);
        const Descriptor wide = make_wiener_algebra(d->inner->degree * n_max);
        Matrix out(wide, m.size());
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j)
                out.set(i, j, detail::wiener_change_degree(m.at(i, j), wide));
        return as_element(out);
    }
    return a;
}

} // namespace

Element neumann_inverse(const Element& a, double tol, std::size_t max_terms) {
    const Descriptor& d = a.descriptor();
    const Element one = unit(d);
    const Element r = sub(one, a);
    const double guard = 1e9 * std::max(1.0, norm(a));

    Element sum = one;
    Element term = one;
    bool small_term = false;
    for (std::size_t k = 0; k < max_terms; ++k) {
        term = mul(term, r);
        const double tn = norm(term);
        if (tn == 0.0) {
            small_term = true;
            break;
        }
        if (!std::isfinite(tn) || tn > guard)
            raise(ErrorCode::NotConvergent,
                  "neumann_inverse: series diverges, ||unit - a|| = " +
                      std::to_string(norm(r)));
        sum = add(sum, term);
        if (tn <= 0.25 * tol) {
            small_term = true;
            break;
        }
    }
    const double left = distance(mul(sum, a), one);
    const double right = distance(mul(a, sum), one);
    if (!small_term || std::max(left, right) > tol)
        raise(ErrorCode::NotConvergent,
              "neumann_inverse: residual " + std::to_string(std::max(left, right)) +
                  " after budget, tolerance " + std::to_string(tol));
    return sum;
}

SpectralReport gelfand_radius(const Element& a, std::size_t n_max, bool with_ambient) {
    if (n_max < 4 || !pow2(n_max))
        raise(ErrorCode::DimensionMismatch,
              "gelfand_radius: n_max must be a power of two, >= 4");
    const Descriptor& d = a.descriptor();
    if (with_ambient && !d->has_ambient)
        raise(ErrorCode::NotSupported, d->name + " declares no ambient embedding");

    SpectralReport report;
    report.norm_bound = norm(a);
    if (!std::isfinite(report.norm_bound))
        raise(ErrorCode::Overflow, "gelfand_radius: ||a|| is not finite");
    if (report.norm_bound == 0.0) {
        report.radius = 0.0;
        report.converged = true;
        if (with_ambient) report.ambient_radius = 0.0;
        return report;
    }

    Element v = widen_for_powers(a, n_max);
    // a^N = e^{L} * v with ||v|| = 1; ambient norms ride on the same scaling.
    double log_scale = std::log(norm(v));
    v = scale(C{1.0 / norm(v), 0.0}, v);

    std::vector<double> logs_a;   // log ||a^N||, N = 2,4,...
    std::vector<double> logs_b;
    bool collapsed = false;
    std::uint64_t n_current = 1;
    while (n_current < n_max) {
        // trim above the convolution noise floor (~1e-16 relative); dropped
        // mass is orders below every tolerance downstream
        Element w = detail::trim_small_coefficients(mul(v, v), 1e-14);
        n_current *= 2;
        const double wn = norm(w);
        if (!std::isfinite(wn))
            raise(ErrorCode::Overflow, "gelfand_radius: power norm overflow");
        if (wn == 0.0) {
            report.norm_sequence.emplace_back(n_current, 0.0);
            collapsed = true; // nilpotent at this power: radius is zero
            break;
        }
        log_scale = 2.0 * log_scale + std::log(wn);
        v = scale(C{1.0 / wn, 0.0}, w);
        logs_a.push_back(log_scale);
        report.norm_sequence.emplace_back(n_current, std::exp(log_scale));
        // a^N = e^{log_scale} v with ||v||_A = 1, so ||a^N||_B = e^{log_scale} ||v||_B
        if (with_ambient)
            logs_b.push_back(log_scale + std::log(std::max(ambient_norm(v), 1e-300)));
    }

    if (collapsed) {
        report.radius = 0.0;
        report.converged = true;
        if (with_ambient) report.ambient_radius = 0.0;
        return report;
    }

    auto estimate_from = [&](const std::vector<double>& logs) {
        const std::size_t last = logs.size() - 1;
        const double n_last = static_cast<double>(n_max);
        const double base = std::exp(logs[last] / n_last);
        if (logs.size() < 2) return base;
        double corr = std::exp((logs[last] - 2.0 * logs[last - 1]) / n_last);
        corr = std::clamp(corr, 0.5, 2.0);
        return base * corr;
    };

    report.radius = estimate_from(logs_a);
    if (logs_a.size() >= 2) {
        const double prev = std::exp(logs_a[logs_a.size() - 2] /
                                     (static_cast<double>(n_max) / 2.0));
        const double cur = std::exp(logs_a.back() / static_cast<double>(n_max));
        report.converged = std::abs(cur - prev) <= 0.05 * std::max(1.0, cur);
    }
    if (with_ambient) report.ambient_radius = estimate_from(logs_b);
    return report;
}

namespace {

Element lift_modulus_floor(const Element& a, double floor_level) {
    const Descriptor& d = a.descriptor();
    if (d->kind == Kind::Circle) {
        CirclePayload out = a.as<CirclePayload>();
        for (auto& v : out.v) {
            const double m = std::abs(v);
            if (m < floor_level) v = (m == 0.0) ? C{floor_level, 0.0} : v * (floor_level / m);
        }
        return Element(d, std::move(out));
    }
    // wiener: lift on the oversampled grid, transform back, truncate
    const std::size_t grid =
        next_pow2(std::max<std::size_t>(d->oversample * (2 * d->degree + 1), 16));
    const auto& p = a.as<WienerPayload>();
    std::vector<C> vals = p.c.empty() ? std::vector<C>(grid, C{0.0, 0.0})
                                      : eval_on_circle(p.c, grid);
    for (auto& v : vals) {
        const double m = std::abs(v);
        if (m < floor_level) v = (m == 0.0) ? C{floor_level, 0.0} : v * (floor_level / m);
    }
    return make_wiener(d, coeffs_from_circle(vals, d->degree));
}

} // namespace

namespace detail {

Element invertible_approximant(const Element& a, double level) {
    const Descriptor& d = a.descriptor();
    if (d->kind == Kind::Wiener || d->kind == Kind::Circle) {
        for (double boost : {1.0, 2.0, 4.0}) {
            Element candidate = lift_modulus_floor(a, boost * level);
            try {
                (void)invert(candidate);
                return candidate;
            } catch (const Error&) {
            }
        }
        // The lift kinks the function at its zeros and the kink escapes the
        // truncation band; an additive shift in the direction clearing the
        // range keeps the candidate a clean trig polynomial.
        const std::vector<C> values = detail::pivot_spectrum_probe(a);
        const Element one = unit(d);
        double best_clearance = -1.0;
        double best_theta = 0.0;
        for (int k = 0; k < 16; ++k) {
            const double theta = 0.39269908169872415 * k; // 2 pi / 16
            const C shift = std::polar(level, theta);
            double clearance = std::numeric_limits<double>::infinity();
            for (const C& v : values) clearance = std::min(clearance, std::abs(v + shift));
            if (clearance > best_clearance) {
                best_clearance = clearance;
                best_theta = theta;
            }
        }
        Element candidate = add(a, scale(std::polar(level, best_theta), one));
        try {
            (void)invert(candidate);
            return candidate;
        } catch (const Error&) {
        }
    } else {
        // shifted unit with a verified shift; rotate when the shift lands on
        // the spectrum
        static const C rotations[] = {C{1.0, 0.0}, C{0.0, 1.0},
                                      C{0.70710678118654752, 0.70710678118654752},
                                      C{-1.0, 0.0}};
        const Element one = unit(d);
        for (const C& rot : rotations) {
            Element candidate = add(a, scale(level * rot, one));
            try {
                (void)invert(candidate);
                return candidate;
            } catch (const Error&) {
            }
        }
    }
    raise(ErrorCode::NotSupported,
          d->name + ": no invertible approximant found at level " +
              std::to_string(level));
}

} // namespace detail

std::vector<Element> approximate_by_invertibles(const Element& a, std::size_t m) {
    if (m == 0) return {};
    const Descriptor& d = a.descriptor();

    // already invertible: the constant sequence
    try {
        (void)invert(a);
        return std::vector<Element>(m, a);
    } catch (const Error&) {
    }

    std::vector<Element> out;
    out.reserve(m);
    double last_dist = std::numeric_limits<double>::infinity();

    for (std::size_t j = 1; j <= m; ++j) {
        Element candidate;
        bool found = true;
        try {
            candidate = detail::invertible_approximant(a, 1.0 / static_cast<double>(j));
        } catch (const Error&) {
            found = false;
        }
        if (!found) {
            // finer levels may be unresolvable at the truncation degree; hold
            // the last verified approximant
            if (!out.empty()) {
                out.push_back(out.back());
                continue;
            }
            raise(ErrorCode::NotSupported,
                  d->name + ": no invertible approximant found at level 1/" +
                      std::to_string(j));
        }
        const double dist = distance(a, candidate);
        if (dist > last_dist && !out.empty()) {
            out.push_back(out.back()); // keep the distance sequence nonincreasing
        } else {
            out.push_back(candidate);
            last_dist = dist;
        }
    }
    return out;
}

WitnessReport symmetric_witness_check(const Element& a) {
    const Descriptor& d = a.descriptor();
    if (!d->has_involution)
        raise(ErrorCode::NoInvolution, d->name + " declares no involution");
    const Element one = unit(d);
    const Element w = add(one, mul(star(a), a));
    WitnessReport report;
    try {
        Element inv = invert(w);
        report.ok = true;
        report.residual = std::max(distance(mul(w, inv), one), distance(mul(inv, w), one));
        report.witness = std::move(inv);
    } catch (const Error& e) {
        report.ok = false;
        report.residual = std::numeric_limits<double>::infinity();
        report.detail = std::string("unit + a*a not invertible: ") + e.what();
    }
    return report;
}

} // namespace nbinv
