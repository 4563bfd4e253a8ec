#include "nbinv/inversion.hpp"

#include "internal.hpp"
#include "nbinv/element_ops.hpp"
#include "nbinv/fft.hpp"
#include "nbinv/instances.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nbinv {

namespace {

using C = Complex;
constexpr double kTwoPi = 6.283185307179586476925286766559;

double engine_tolerance(const Matrix& t, const PivotStrategy& s) {
    return s.tolerance > 0.0 ? s.tolerance : t.entry_descriptor()->tolerance;
}

bool try_invert(const Element& a, Element& out) {
    try {
        out = invert(a);
        return true;
    } catch (const Error&) {
        return false;
    }
}

// lambda with lambda + pivot invertible: spectrum-aware direction when a probe
// exists, verified random draws otherwise. eps rides on the pivot's own scale
// so the shifted element clears the pivot's range with real margin.
C pick_lambda(const Element& pivot, double eps, const PivotStrategy& strategy,
              std::uint64_t salt, Element* shifted_inverse) {
    const Descriptor& d = pivot.descriptor();
    const Element one = unit(d);
    const std::vector<C> spectrum = detail::pivot_spectrum_probe(pivot);
    Rng rng(mix_seed(strategy.seed ^ salt));
    double radius = eps * (1.0 + 2.0 * norm(pivot));
    for (int attempt = 0; attempt < strategy.retry_budget; ++attempt) {
        C lambda;
        if (!spectrum.empty() && attempt < 8) {
            // theta maximizing the distance from the negated spectrum
            double best_dist = -1.0;
            double best_theta = 0.0;
            for (int k = 0; k < 64; ++k) {
                const double theta = kTwoPi * (k + 0.5 * attempt) / 64.0;
                const C cand = std::polar(radius, theta);
                double dist = std::numeric_limits<double>::infinity();
                for (const C& mu : spectrum) dist = std::min(dist, std::abs(cand + mu));
                if (dist > best_dist) {
                    best_dist = dist;
                    best_theta = theta;
                }
            }
            lambda = std::polar(radius, best_theta);
        } else {
            lambda = std::polar(radius, kTwoPi * rng.uniform());
        }
        Element candidate = add(scale(lambda, one), pivot);
        Element inv;
        if (try_invert(candidate, inv)) {
            if (shifted_inverse) *shifted_inverse = std::move(inv);
            return lambda;
        }
        radius *= 0.5;
    }
    raise(ErrorCode::ApproximationStalled,
          "no shift lambda with lambda + pivot invertible within the retry budget");
}

struct FactorAccumulator {
    Matrix v_hat; // V_r ... V_1
    Matrix w_hat; // W_1 ... W_r
    std::vector<GLPair> factors;
    Matrix current;

    explicit FactorAccumulator(const Matrix& t)
        : v_hat(Matrix::identity(t.entry_descriptor(), t.size())),
          w_hat(v_hat),
          current(t) {}

    void push(GLPair pair) {
        current = apply_pair(pair, current);
        v_hat = mat_mul(pair.v, v_hat);
        w_hat = mat_mul(w_hat, pair.w);
        factors.push_back(std::move(pair));
    }

    // row o scaled by the pivot inverse, recorded as a left factor
    void push_normalization(std::size_t o, const Element& pivot, const Element& pivot_inv) {
        const Descriptor& d = current.entry_descriptor();
        const std::size_t n = current.size();
        Matrix v = Matrix::identity(d, n);
        Matrix v_inv = v;
        v.set(o, o, pivot_inv);
        v_inv.set(o, o, pivot);
        const Matrix id = Matrix::identity(d, n);
        factors.push_back(GLPair{std::move(v), std::move(v_inv), id, id});
        for (std::size_t k = 0; k < n; ++k) {
            current.set(o, k, mul(pivot_inv, current.at(o, k)));
            v_hat.set(o, k, mul(pivot_inv, v_hat.at(o, k)));
        }
    }

    // elimination pair at the (already normalized) pivot o, applied in place
    void push_elimination(std::size_t o) {
        const std::size_t n = current.size();
        std::vector<Element> col(n), row(n);
        for (std::size_t j = o + 1; j < n; ++j) col[j] = current.at(j, o);
        for (std::size_t k = o + 1; k < n; ++k) row[k] = current.at(o, k);

        GLPair pair = build_elimination_pair_at(current, o);
        // V: row_j -= t_{j,o} row_o
        for (std::size_t j = o + 1; j < n; ++j) {
            for (std::size_t k = 0; k < n; ++k) {
                current.set(j, k, sub(current.at(j, k), mul(col[j], current.at(o, k))));
                v_hat.set(j, k, sub(v_hat.at(j, k), mul(col[j], v_hat.at(o, k))));
            }
        }
        // W: col_k -= col_o t_{o,k}
        for (std::size_t k = o + 1; k < n; ++k) {
            for (std::size_t j = 0; j < n; ++j) {
                current.set(j, k, sub(current.at(j, k), mul(current.at(j, o), row[k])));
                w_hat.set(j, k, sub(w_hat.at(j, k), mul(w_hat.at(j, o), row[k])));
            }
        }
        factors.push_back(std::move(pair));
    }

    void push_row_swap(std::size_t i, std::size_t j) {
        const Descriptor& d = current.entry_descriptor();
        const std::size_t n = current.size();
        factors.push_back(row_swap_pair(d, n, i, j));
        for (std::size_t k = 0; k < n; ++k) {
            Element tmp = current.at(i, k);
            current.set(i, k, current.at(j, k));
            current.set(j, k, tmp);
            tmp = v_hat.at(i, k);
            v_hat.set(i, k, v_hat.at(j, k));
            v_hat.set(j, k, tmp);
        }
    }

    Matrix recover_inverse(const Matrix& reduced_inverse) const {
        // S = V^ T W^  =>  T^{-1} = W^ S^{-1} V^
        return mat_mul(mat_mul(w_hat, reduced_inverse), v_hat);
    }
};

InversionCertificate finish_certificate(const Matrix& input, FactorAccumulator&& acc,
                                        Matrix inverse, InversionPath path, double tol,
                                        const char* who, std::string route) {
    InversionCertificate cert;
    cert.input = input;
    cert.reduced = std::move(acc.current);
    cert.factors = std::move(acc.factors);
    cert.inverse = std::move(inverse);
    cert.path = path;
    cert.route = std::move(route);
    cert.tolerance = tol;
    const Matrix id = Matrix::identity(input.entry_descriptor(), input.size());
    cert.residual_left = mat_distance(mat_mul(cert.inverse, input), id);
    cert.residual_right = mat_distance(mat_mul(input, cert.inverse), id);
    if (std::max(cert.residual_left, cert.residual_right) > tol)
        raise(ErrorCode::NotConvergent,
              std::string(who) + ": inversion residual " +
                  std::to_string(std::max(cert.residual_left, cert.residual_right)) +
                  " exceeds tolerance " + std::to_string(tol));
    return cert;
}

// Cauchy acceptance for perturbed-limit sequences: successive inverses must
// approach within tol/4 with the residual under tol; growing differences twice
// in a row end the schedule.
class LimitTracker {
public:
    LimitTracker(const Matrix& target, double tol) : target_(target), tol_(tol) {}

    // returns true once the sequence is accepted; candidate becomes the limit
    bool feed(const Matrix& candidate_inverse) {
        const double resid = mat_residual(target_, candidate_inverse);
        if (have_prev_) {
            const double diff = mat_distance(candidate_inverse, prev_);
            if (diff < 0.25 * tol_ && resid <= tol_) {
                best_ = candidate_inverse;
                accepted_ = true;
                return true;
            }
            if (diff > last_diff_ && ++growth_strikes_ >= 2) {
                // rounding took over; keep the best iterate seen so far
                exhausted_ = true;
                return false;
            }
            last_diff_ = diff;
        }
        if (resid < best_resid_) {
            best_resid_ = resid;
            best_ = candidate_inverse;
        }
        prev_ = candidate_inverse;
        have_prev_ = true;
        return false;
    }

    bool accepted() const { return accepted_; }
    bool exhausted() const { return exhausted_; }
    bool has_best() const { return best_resid_ < std::numeric_limits<double>::infinity(); }
    double best_residual() const { return best_resid_; }
    const Matrix& best() const { return best_; }

private:
    Matrix target_;
    double tol_;
    Matrix prev_, best_;
    bool have_prev_ = false;
    bool accepted_ = false;
    bool exhausted_ = false;
    double last_diff_ = std::numeric_limits<double>::infinity();
    double best_resid_ = std::numeric_limits<double>::infinity();
    int growth_strikes_ = 0;
};

Matrix thm6_inverse_only(const Matrix& t, const PivotStrategy& strategy, int depth);

// One elimination sweep: normalizes pivots and clears their row/column,
// falling back to the interchange + vanishing-perturbation branch. Returns
// the inverse and flags whether a perturbation limit was taken.
Matrix eliminate_and_invert(const Matrix& t, const PivotStrategy& strategy,
                            FactorAccumulator& acc, bool& perturbed, int depth) {
    const std::size_t n = t.size();
    const Descriptor& d = t.entry_descriptor();
    const double tol = engine_tolerance(t, strategy);
    if (depth > 64)
        raise(ErrorCode::ApproximationStalled, "elimination recursion exceeded depth budget");

    for (std::size_t o = 0; o < n; ++o) {
        Element pivot = acc.current.at(o, o);
        Element pivot_inv;
        if (try_invert(pivot, pivot_inv)) {
            acc.push_normalization(o, pivot, pivot_inv);
            if (o + 1 < n) acc.push_elimination(o);
            continue;
        }
        if (o + 1 == n)
            raise(ErrorCode::NotInvertibleInAmbient,
                  "final pivot not invertible in the entry algebra");

        // interchange rows o and o+1, then perturb the new pivot toward zero
        acc.push_row_swap(o, o + 1);
        const Element r_pivot = acc.current.at(o, o);
        if (!inessential_proxy(d, r_pivot))
            raise(ErrorCode::MaskViolation,
                  "interchanged pivot fails the inessential proxy; "
                  "perturbation limit not justified");

        const Matrix tail = acc.current.minor_from(o);
        LimitTracker tracker(tail, tol);
        const Element one = unit(d);
        double eps = strategy.epsilon0;
        for (int m = 0; m < strategy.limit_budget && !tracker.exhausted(); ++m) {
            Element shifted_inv;
            const C lambda = pick_lambda(r_pivot, eps, strategy,
                                         mix_seed(static_cast<std::uint64_t>(m) + o),
                                         &shifted_inv);
            Matrix tail_m = tail;
            tail_m.set(0, 0, add(scale(lambda, one), r_pivot));
            Matrix inv_m;
            try {
                inv_m = thm6_inverse_only(tail_m, strategy, depth + 1);
            } catch (const Error&) {
                eps *= 0.5;
                continue;
            }
            if (tracker.feed(inv_m)) break;
            eps = std::min(eps * 0.5, std::abs(lambda) * 0.5);
        }
        if (!tracker.accepted() &&
            !(tracker.has_best() && tracker.best_residual() <= tol))
            raise(ErrorCode::ApproximationStalled,
                  "perturbed pivot inverses failed the Cauchy test within budget");
        perturbed = true;

        // current = diag(I_o, tail); assemble the inverse from the limit
        Matrix reduced_inv = Matrix::identity(d, n);
        const Matrix& tail_inv = tracker.best();
        for (std::size_t i = 0; i < tail_inv.size(); ++i)
            for (std::size_t j = 0; j < tail_inv.size(); ++j)
                reduced_inv.set(o + i, o + j, tail_inv.at(i, j));
        return acc.recover_inverse(reduced_inv);
    }
    // fully reduced to the identity
    return acc.recover_inverse(Matrix::identity(d, n));
}

Matrix thm6_inverse_only(const Matrix& t, const PivotStrategy& strategy, int depth) {
    FactorAccumulator acc(t);
    bool perturbed = false;
    return eliminate_and_invert(t, strategy, acc, perturbed, depth);
}

} // namespace

const char* inversion_path_name(InversionPath p) {
    switch (p) {
        case InversionPath::Direct: return "direct";
        case InversionPath::Interchange: return "interchange";
        case InversionPath::PerturbedLimit: return "perturbed-limit";
    }
    return "unknown";
}

double replay_residual(const InversionCertificate& cert) {
    Matrix replay = cert.input;
    for (const GLPair& f : cert.factors) replay = apply_pair(f, replay);
    return mat_distance(replay, cert.reduced);
}

InessentialMask InessentialMask::full(std::size_t n) {
    InessentialMask m;
    m.n = n;
    m.below.assign(n * n, true);
    return m;
}

InessentialMask InessentialMask::none(std::size_t n) {
    InessentialMask m;
    m.n = n;
    m.below.assign(n * n, false);
    return m;
}

bool InessentialMask::claimed(std::size_t j, std::size_t k) const {
    if (j >= n || k >= n) return false;
    return below[j * n + k];
}

Matrix invert_upper_triangular(const Matrix& t, const EntryInverter& entry_inverter) {
    const std::size_t n = t.size();
    const Descriptor& d = t.entry_descriptor();
    const double tol = d->tolerance;

    double below_norm = 0.0;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < j; ++k) below_norm += norm(t.at(j, k));
    if (below_norm > tol * std::max(1.0, mat_norm(t)))
        raise(ErrorCode::DimensionMismatch,
              "invert_upper_triangular: matrix has below-diagonal mass " +
                  std::to_string(below_norm));

    Matrix s(d, n);
    for (std::size_t j = 0; j < n; ++j) {
        try {
            s.set(j, j, entry_inverter(t.at(j, j)));
        } catch (const Error& e) {
            raise(ErrorCode::DiagonalNotInvertible,
                  "diagonal entry " + std::to_string(j + 1) +
                      " not invertible: " + e.what());
        }
    }
    // T S = I column recursion: s_jk = -t_jj^{-1} (sum_{j<l<=k} t_jl s_lk)
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = k; j-- > 0;) {
            Element acc = mul(t.at(j, j + 1), s.at(j + 1, k));
            for (std::size_t l = j + 2; l <= k; ++l)
                acc = add(acc, mul(t.at(j, l), s.at(l, k)));
            s.set(j, k, neg(mul(s.at(j, j), acc)));
        }
    }
    return s;
}

Matrix invert_upper_triangular(const Matrix& t) {
    return invert_upper_triangular(t, [](const Element& e) { return invert(e); });
}

namespace {

// The two elementary multiplications of the 2x2 construction, run on a matrix
// whose pivot is already invertible. Appends the factors to `acc` and returns
// the inverse.
Matrix prop4_direct_core(FactorAccumulator& acc, const Element& pivot_inv,
                         const PivotStrategy& strategy) {
    const Matrix& t = acc.current;
    const Descriptor& d = t.entry_descriptor();
    const Element one = unit(d);
    const Element nil = zero(d);

    // lambda with lambda + t21 invertible; lambda = 0 is admissible but only
    // kept when the plain inverse is well clear of the working tolerance
    // (truncated algebras can pass the gate with no margin to spare)
    const Element t21 = t.at(1, 0);
    const double tol = engine_tolerance(t, strategy);
    C lambda{0.0, 0.0};
    Element r11_inv;
    bool have_r11 = false;
    if (try_invert(t21, r11_inv)) {
        const double quality = distance(mul(t21, r11_inv), one);
        have_r11 = quality <= tol / 16.0;
    }
    if (!have_r11)
        lambda = pick_lambda(t21, strategy.epsilon0, strategy, 0x5151u, &r11_inv);

    // V = [[lambda a, 1], [1, 0]], a = pivot inverse; V^{-1} = [[0,1],[1,-lambda a]]
    const Element la = scale(lambda, pivot_inv);
    Matrix v(d, 2), v_inv(d, 2);
    v.set(0, 0, la);
    v.set(0, 1, one);
    v.set(1, 0, one);
    v.set(1, 1, nil);
    v_inv.set(0, 0, nil);
    v_inv.set(0, 1, one);
    v_inv.set(1, 0, one);
    v_inv.set(1, 1, neg(la));
    const Matrix id2 = Matrix::identity(d, 2);
    const Element t11 = t.at(0, 0);
    acc.push(GLPair{v, v_inv, id2, id2});

    // W = [[1,0],[-t11 r11^{-1}, 1]] applied on the left
    Matrix w = id2, w_inv = id2;
    const Element t11r = mul(t11, r11_inv);
    w.set(1, 0, neg(t11r));
    w_inv.set(1, 0, t11r);
    acc.push(GLPair{w, w_inv, id2, id2});

    // acc.current is now upper triangular with s11 = lambda + t21
    Matrix s_inv = invert_upper_triangular(acc.current);
    return acc.recover_inverse(s_inv);
}

} // namespace

InversionCertificate prop4_invert_2x2(const Matrix& t, const PivotStrategy& strategy) {
    if (t.size() != 2)
        raise(ErrorCode::DimensionMismatch, "prop4_invert_2x2 expects a 2x2 matrix");
    const Descriptor& d = t.entry_descriptor();
    const double tol = engine_tolerance(t, strategy);

    // bring an invertible entry into the pivot with row/column interchanges
    struct Candidate {
        std::size_t i, j;
    };
    static const Candidate order[] = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
    for (const Candidate& c : order) {
        Element pivot_inv;
        if (!try_invert(t.at(c.i, c.j), pivot_inv)) continue;
        FactorAccumulator acc(t);
        if (c.i == 1) acc.push(row_swap_pair(d, 2, 0, 1));
        if (c.j == 1) acc.push(col_swap_pair(d, 2, 0, 1));
        Matrix inverse = prop4_direct_core(acc, pivot_inv, strategy);
        const InversionPath path = (c.i == 0 && c.j == 0) ? InversionPath::Direct
                                                          : InversionPath::Interchange;
        return finish_certificate(t, std::move(acc), std::move(inverse), path, tol,
                                  "prop4_invert_2x2", "2x2 elementary multiplications");
    }

    // closure path: approximate t11 by invertibles along a geometric level
    // schedule (the Cauchy gate needs geometric decay), invert the perturbed
    // matrices, and take the limit
    LimitTracker tracker(t, tol);
    double level = strategy.epsilon0;
    bool any_approximant = false;
    int consecutive_misses = 0;
    for (int m = 0; m < strategy.limit_budget && !tracker.exhausted(); ++m, level *= 0.5) {
        Element am;
        try {
            am = detail::invertible_approximant(t.at(0, 0), level);
            consecutive_misses = 0;
        } catch (const Error&) {
            if (++consecutive_misses >= 6) break; // finer levels will not verify either
            continue;
        }
        any_approximant = true;
        Matrix tm = t;
        tm.set(0, 0, am);
        Element pivot_inv;
        if (!try_invert(am, pivot_inv)) continue;
        FactorAccumulator sub_acc(tm);
        Matrix inv_m;
        try {
            inv_m = prop4_direct_core(sub_acc, pivot_inv, strategy);
        } catch (const Error&) {
            continue;
        }
        if (tracker.feed(inv_m)) break;
    }
    if (!any_approximant)
        raise(ErrorCode::NotInvertibleInAmbient,
              "no entry invertible and no approximation available");
    if (!tracker.accepted() && !(tracker.has_best() && tracker.best_residual() <= tol))
        raise(ErrorCode::ApproximationStalled,
              "prop4_invert_2x2: approximant inverses failed the Cauchy test");
    FactorAccumulator acc(t); // no replayable factors on the limit path
    return finish_certificate(t, std::move(acc), tracker.best(),
                              InversionPath::PerturbedLimit, tol, "prop4_invert_2x2",
                              "2x2 closure-of-invertibles limit");
}

InversionCertificate thm6_invert(const Matrix& t, const InessentialMask& mask,
                                 const PivotStrategy& strategy) {
    const std::size_t n = t.size();
    if (mask.n != n)
        raise(ErrorCode::DimensionMismatch, "thm6_invert: mask dimension mismatch");
    const Descriptor& d = t.entry_descriptor();
    const double tol = engine_tolerance(t, strategy);

    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < j; ++k) {
            if (mask.claimed(j, k)) {
                if (!inessential_proxy(d, t.at(j, k)))
                    raise(ErrorCode::MaskViolation,
                          "entry (" + std::to_string(j + 1) + "," +
                              std::to_string(k + 1) +
                              ") claimed inessential but fails the instance proxy");
            } else if (!is_zero(t.at(j, k), tol)) {
                raise(ErrorCode::MaskViolation,
                      "below-diagonal entry (" + std::to_string(j + 1) + "," +
                          std::to_string(k + 1) + ") neither claimed nor zero");
            }
        }

    FactorAccumulator acc(t);
    bool perturbed = false;
    Matrix inverse = eliminate_and_invert(t, strategy, acc, perturbed, 0);
    return finish_certificate(t, std::move(acc), std::move(inverse),
                              perturbed ? InversionPath::PerturbedLimit
                                        : InversionPath::Direct,
                              tol, "thm6_invert",
                              perturbed ? "recursive elimination with interchange and "
                                          "vanishing perturbation"
                                        : "recursive elimination");
}

namespace {

// hermitian pivot approached through i*eps + t11 (real spectrum keeps every
// term invertible in a symmetric algebra)
InversionCertificate hermitian_2x2(const Matrix& t, const PivotStrategy& strategy) {
    const Descriptor& d = t.entry_descriptor();
    const double tol = engine_tolerance(t, strategy);
    const Element t11 = t.at(0, 0);

    Element pivot_inv;
    if (try_invert(t11, pivot_inv)) {
        FactorAccumulator acc(t);
        Matrix inverse = prop4_direct_core(acc, pivot_inv, strategy);
        return finish_certificate(t, std::move(acc), std::move(inverse),
                                  InversionPath::Direct, tol, "invert_hermitian",
                                  "2x2 hermitian pivot, direct");
    }

    const Element one = unit(d);
    LimitTracker tracker(t, tol);
    double eps = strategy.epsilon0;
    for (int m = 0; m < strategy.limit_budget && !tracker.exhausted(); ++m) {
        const Element am = add(scale(C{0.0, eps}, one), t11);
        Element am_inv;
        if (!try_invert(am, am_inv)) {
            eps *= 0.5;
            continue;
        }
        Matrix tm = t;
        tm.set(0, 0, am);
        FactorAccumulator sub_acc(tm);
        Matrix inv_m;
        try {
            inv_m = prop4_direct_core(sub_acc, am_inv, strategy);
        } catch (const Error&) {
            eps *= 0.5;
            continue;
        }
        if (tracker.feed(inv_m)) break;
        eps *= 0.5;
    }
    if (!tracker.accepted() && !(tracker.has_best() && tracker.best_residual() <= tol))
        raise(ErrorCode::ApproximationStalled,
              "hermitian pivot perturbations failed the Cauchy test");
    FactorAccumulator acc(t);
    return finish_certificate(t, std::move(acc), tracker.best(),
                              InversionPath::PerturbedLimit, tol, "invert_hermitian",
                              "2x2 hermitian pivot through i*eps + t11");
}

} // namespace

InversionCertificate invert_hermitian_symmetric(const Matrix& t,
                                                const PivotStrategy& strategy) {
    const Descriptor& d = t.entry_descriptor();
    if (!d->has_involution)
        raise(ErrorCode::NoInvolution, d->name + " declares no involution");
    if (!d->is_symmetric)
        raise(ErrorCode::NotSupported,
              d->name + " is not declared symmetric; the hermitian path needs "
                        "pivots approachable through i*eps + t11");
    const double tol = engine_tolerance(t, strategy);
    if (!mat_is_hermitian(t, 10.0 * tol * std::max(1.0, mat_norm(t))))
        raise(ErrorCode::NotHermitian, "matrix is not hermitian within tolerance");

    const std::size_t n = t.size();
    if (n == 1) {
        Matrix wrapped(d, 1);
        wrapped.set(0, 0, t.at(0, 0));
        // treat as the hermitian pivot of a trivial block
        Element inv;
        if (!try_invert(t.at(0, 0), inv)) {
            // i*eps + t11 limit at the element level
            double eps = strategy.epsilon0;
            LimitTracker tracker(t, tol);
            const Element one = unit(d);
            for (int m = 0; m < strategy.limit_budget && !tracker.exhausted(); ++m) {
                Element am_inv;
                if (try_invert(add(scale(C{0.0, eps}, one), t.at(0, 0)), am_inv)) {
                    Matrix cand(d, 1);
                    cand.set(0, 0, am_inv);
                    if (tracker.feed(cand)) break;
                }
                eps *= 0.5;
            }
            if (!tracker.accepted() &&
                !(tracker.has_best() && tracker.best_residual() <= tol))
                raise(ErrorCode::ApproximationStalled,
                      "hermitian 1x1 perturbation limit stalled");
            FactorAccumulator acc(t);
            return finish_certificate(t, std::move(acc), tracker.best(),
                                      InversionPath::PerturbedLimit, tol,
                                      "invert_hermitian",
                                      "1x1 hermitian pivot through i*eps + t11");
        }
        Matrix invm(d, 1);
        invm.set(0, 0, inv);
        FactorAccumulator acc(t);
        return finish_certificate(t, std::move(acc), std::move(invm),
                                  InversionPath::Direct, tol, "invert_hermitian",
                                  "1x1 direct");
    }
    if (n == 2) return hermitian_2x2(t, strategy);

    // pad to the next power of two, nest into 2x2 blocks, recurse
    const std::size_t target = next_pow2(n);
    const Matrix padded = pad_matrix(t, target);
    const Matrix nested = nest(padded); // 2x2 over M_{target/2}(A), still hermitian
    PivotStrategy nested_strategy = strategy;
    nested_strategy.tolerance = tol; // keep one tolerance across the nesting
    const InversionCertificate inner = invert_hermitian_symmetric(nested, nested_strategy);
    Matrix inverse = unpad_matrix(unnest(inner.inverse), n);

    std::string route = "pad " + std::to_string(n) + "->" + std::to_string(target) +
                        ", nest to 2x2 over " + nested.entry_descriptor()->name +
                        "; " + inner.route;
    FactorAccumulator acc(t);
    return finish_certificate(t, std::move(acc), std::move(inverse), inner.path, tol,
                              "invert_hermitian", std::move(route));
}

// ---------------------------------------------------------------------------
// brute-force oracle
// ---------------------------------------------------------------------------

namespace {

Matrix oracle_invert_pointwise(const Matrix& t) {
    const Descriptor& d = t.entry_descriptor();
    const std::size_t n = t.size();
    const bool wiener = d->kind == Kind::Wiener;
    const std::size_t grid =
        wiener ? next_pow2(std::max<std::size_t>(d->oversample * (2 * d->degree + 1), 16))
               : d->grid;

    // values of every entry on the grid
    std::vector<std::vector<C>> vals(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (wiener) {
                vals[i * n + j] = wiener_values(t.at(i, j), grid);
            } else {
                vals[i * n + j] = t.at(i, j).as<CirclePayload>().v;
            }
        }

    std::vector<std::vector<C>> inv_vals(n * n, std::vector<C>(grid));
    CDense point(n, n);
    for (std::size_t g = 0; g < grid; ++g) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) point.at(i, j) = vals[i * n + j][g];
        CDense pinv = cd_invert(point); // throws SingularToWorkingPrecision
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) inv_vals[i * n + j][g] = pinv.at(i, j);
    }

    Matrix out(d, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (wiener) {
                out.set(i, j, make_wiener(d, coeffs_from_circle(inv_vals[i * n + j],
                                                                d->degree)));
            } else {
                out.set(i, j, Element(d, CirclePayload{inv_vals[i * n + j]}));
            }
        }
    return out;
}

Matrix oracle_invert_ht(const Matrix& t) {
    const Descriptor& d = t.entry_descriptor();
    const std::size_t n = t.size();
    const std::size_t m = d->grid;

    CDense big(n * m, n * m);
    CDense scalars(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            big.set_block(i * m, j * m, flatten(t.at(i, j)));
            scalars.at(i, j) = ht_scalar_part(t.at(i, j));
        }
    const CDense big_inv = cd_invert(big);
    // the scalar parts of the inverse solve the quotient system C' = C^{-1}
    CDense scalars_inv;
    try {
        scalars_inv = cd_invert(scalars);
    } catch (const Error&) {
        raise(ErrorCode::SingularToWorkingPrecision,
              "oracle_invert: scalar-part matrix singular, inverse leaves the "
              "unitized algebra");
    }

    Matrix out(d, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const CDense block = big_inv.block(i * m, j * m, m, m);
            const C cij = scalars_inv.at(i, j);
            std::vector<C> kernel(m * m);
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t c2 = 0; c2 < m; ++c2) {
                    C v = block.at(r, c2);
                    if (r == c2) v -= cij;
                    kernel[r * m + c2] = v / d->weights[c2];
                }
            out.set(i, j, make_ht(d, cij, kernel));
        }
    return out;
}

} // namespace

Matrix oracle_invert(const Matrix& t) {
    const Descriptor& d = t.entry_descriptor();
    switch (d->kind) {
        case Kind::Wiener:
        case Kind::Circle:
            return oracle_invert_pointwise(t);
        case Kind::HtUnitized:
            return oracle_invert_ht(t);
        default:
            break;
    }
    if (!is_scalar_backed(d))
        raise(ErrorCode::NotSupported,
              "oracle_invert: " + d->name + " is neither scalar- nor grid-backed");
    const CDense big_inv = cd_invert(mat_flatten(t));
    return mat_unflatten(d, t.size(), big_inv);
}

double ambient_smallest_singular(const Matrix& t) {
    const Descriptor& d = t.entry_descriptor();
    switch (d->kind) {
        case Kind::Wiener: {
            const std::size_t n = t.size();
            const std::size_t grid = next_pow2(
                std::max<std::size_t>(d->oversample * (2 * d->degree + 1), 16));
            std::vector<std::vector<C>> vals(n * n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    vals[i * n + j] = wiener_values(t.at(i, j), grid);
            double worst = std::numeric_limits<double>::infinity();
            CDense point(n, n);
            for (std::size_t g = 0; g < grid; ++g) {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        point.at(i, j) = vals[i * n + j][g];
                worst = std::min(worst, cd_sigma_min(point));
            }
            return worst;
        }
        case Kind::Circle: {
            const std::size_t n = t.size();
            double worst = std::numeric_limits<double>::infinity();
            CDense point(n, n);
            for (std::size_t g = 0; g < d->grid; ++g) {
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j)
                        point.at(i, j) = t.at(i, j).as<CirclePayload>().v[g];
                worst = std::min(worst, cd_sigma_min(point));
            }
            return worst;
        }
        default:
            return cd_sigma_min(mat_flatten(t));
    }
}

namespace detail {

Element invert_nested(const Element& a) {
    const Matrix m = matrix_of(a);
    const Descriptor& d = m.entry_descriptor();
    PivotStrategy strategy;
    if (m.size() == 1) {
        Matrix out(d, 1);
        out.set(0, 0, invert(m.at(0, 0)));
        return as_element(out);
    }
    bool all_proxy = true;
    for (std::size_t i = 0; i < m.size() && all_proxy; ++i)
        for (std::size_t j = 0; j < i && all_proxy; ++j)
            all_proxy = inessential_proxy(d, m.at(i, j));
    try {
        if (all_proxy) {
            const InversionCertificate cert =
                thm6_invert(m, InessentialMask::full(m.size()), strategy);
            return as_element(cert.inverse);
        }
        if (m.size() == 2) {
            const InversionCertificate cert = prop4_invert_2x2(m, strategy);
            return as_element(cert.inverse);
        }
    } catch (const Error& e) {
        raise(ErrorCode::NotInvertible,
              std::string("nested matrix inversion failed: ") + e.what());
    }
    raise(ErrorCode::NotSupported,
          "nested matrix over " + d->name +
              " admits no elimination path (mask unsatisfied, size > 2)");
}

} // namespace detail

} // namespace nbinv
