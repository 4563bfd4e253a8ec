#include "nbinv/instances.hpp"

#include "internal.hpp"
#include "nbinv/fft.hpp"
#include "nbinv/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nbinv {

namespace {

using C = Complex;

ErrorCode mismatch_code(Kind kind) {
    switch (kind) {
        case Kind::Wiener: return ErrorCode::DegreeMismatch;
        case Kind::Circle:
        case Kind::HtUnitized: return ErrorCode::GridMismatch;
        default: return ErrorCode::DimensionMismatch;
    }
}

void require_same(const Element& a, const Element& b) {
    if (!same_algebra(a.descriptor(), b.descriptor()))
        raise(mismatch_code(a.descriptor()->kind),
              "operands live in different algebras: " + a.descriptor()->name +
                  " vs " + b.descriptor()->name);
}

std::size_t wiener_grid(const AlgebraDescriptor& d) {
    return next_pow2(std::max<std::size_t>(d.oversample * (2 * d.degree + 1), 16));
}

// --- scalar matrices -------------------------------------------------------

CDense scalar_dense(const Element& a) {
    const auto& p = a.as<ScalarMatrixPayload>();
    const std::size_t k = a.descriptor()->dim;
    CDense m(k, k);
    m.data() = p.a;
    return m;
}

Element scalar_from_dense(const Descriptor& d, const CDense& m) {
    return Element(d, ScalarMatrixPayload{m.data()});
}

double scalar_norm_of(const AlgebraDescriptor& d, const ScalarMatrixPayload& p) {
    if (d.scalar_norm == ScalarNorm::SumModulus) {
        double s = 0.0;
        for (const auto& v : p.a) s += std::abs(v);
        return s;
    }
    CDense m(d.dim, d.dim);
    m.data() = p.a;
    return cd_sigma_max(m);
}

// --- wiener ------------------------------------------------------------------

// Payload arrays track the actual support; half_width may sit below the
// descriptor's truncation degree.
WienerPayload trim_wiener(WienerPayload p) {
    std::size_t strip = 0;
    while (strip < p.half_width && p.c[strip] == C{0.0, 0.0} &&
           p.c[p.c.size() - 1 - strip] == C{0.0, 0.0})
        ++strip;
    if (strip == 0) return p;
    WienerPayload out{p.half_width - strip,
                      std::vector<C>(p.c.begin() + static_cast<long>(strip),
                                     p.c.end() - static_cast<long>(strip))};
    return out;
}

WienerPayload align_add(const WienerPayload& a, const WienerPayload& b, bool subtract) {
    const std::size_t hw = std::max(a.half_width, b.half_width);
    WienerPayload out{hw, std::vector<C>(2 * hw + 1, C{0.0, 0.0})};
    const std::size_t oa = hw - a.half_width;
    const std::size_t ob = hw - b.half_width;
    for (std::size_t i = 0; i < a.c.size(); ++i) out.c[oa + i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i)
        out.c[ob + i] += subtract ? -b.c[i] : b.c[i];
    return out;
}

// --- hille-tamarkin ----------------------------------------------------------

double ht_norm_of(const AlgebraDescriptor& d, const HtPayload& p) {
    const std::size_t m = d.grid;
    double worst = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j)
            row += std::abs(p.k[i * m + j]) * d.weights[j];
        worst = std::max(worst, row);
    }
    return std::abs(p.c) + worst;
}

std::vector<C> ht_compose_raw(const AlgebraDescriptor& d, const std::vector<C>& k1,
                              const std::vector<C>& k2) {
    const std::size_t m = d.grid;
    std::vector<C> out(m * m, C{0.0, 0.0});
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t l = 0; l < m; ++l) {
            const C f = k1[i * m + l] * d.weights[l];
            if (f == C{0.0, 0.0}) continue;
            const C* row2 = &k2[l * m];
            C* rowo = &out[i * m];
            for (std::size_t j = 0; j < m; ++j) rowo[j] += f * row2[j];
        }
    }
    return out;
}

} // namespace

// ---------------------------------------------------------------------------
// constructors
// ---------------------------------------------------------------------------

Element make_scalar(const Descriptor& d, const std::vector<Complex>& row_major) {
    if (d->kind != Kind::ScalarMatrix)
        raise(ErrorCode::DimensionMismatch, "make_scalar: wrong algebra");
    if (row_major.size() != d->dim * d->dim)
        raise(ErrorCode::DimensionMismatch, "make_scalar: payload size mismatch");
    return Element(d, ScalarMatrixPayload{row_major});
}

Element make_scalar1(const Descriptor& d, Complex value) {
    if (d->dim != 1) raise(ErrorCode::DimensionMismatch, "make_scalar1 needs k = 1");
    return make_scalar(d, {value});
}

Element make_wiener(const Descriptor& d, const std::vector<Complex>& coeffs) {
    if (d->kind != Kind::Wiener)
        raise(ErrorCode::DegreeMismatch, "make_wiener: wrong algebra");
    if (coeffs.size() != 2 * d->degree + 1)
        raise(ErrorCode::DegreeMismatch, "make_wiener: expected 2d+1 coefficients");
    return Element(d, trim_wiener(WienerPayload{d->degree, coeffs}));
}

Complex wiener_coefficient(const Element& f, long q) {
    const auto& p = f.as<WienerPayload>();
    const long hw = static_cast<long>(p.half_width);
    if (q < -hw || q > hw) return C{0.0, 0.0};
    return p.c[static_cast<std::size_t>(q + hw)];
}

std::vector<Complex> wiener_values(const Element& f, std::size_t grid) {
    const auto& p = f.as<WienerPayload>();
    return eval_on_circle(p.c, grid);
}

Element make_ht(const Descriptor& d, Complex c, const std::vector<Complex>& kernel) {
    if (d->kind != Kind::HtUnitized)
        raise(ErrorCode::GridMismatch, "make_ht: wrong algebra");
    if (kernel.size() != d->grid * d->grid)
        raise(ErrorCode::GridMismatch, "make_ht: kernel size mismatch");
    return Element(d, HtPayload{c, kernel});
}

Element make_ht(const Descriptor& d, Complex c, const HtKernel& k) {
    if (k.m != d->grid || k.weights != d->weights)
        raise(ErrorCode::GridMismatch, "make_ht: kernel grid mismatch");
    return make_ht(d, c, k.samples);
}

HtKernel ht_kernel_part(const Element& u) {
    const auto& p = u.as<HtPayload>();
    return HtKernel{u.descriptor()->grid, u.descriptor()->weights, p.k};
}

Complex ht_scalar_part(const Element& u) { return u.as<HtPayload>().c; }

Element make_swap(const Descriptor& d, Complex x, Complex y) {
    if (d->kind != Kind::SwapPair)
        raise(ErrorCode::DimensionMismatch, "make_swap: wrong algebra");
    return Element(d, SwapPayload{x, y});
}

// ---------------------------------------------------------------------------
// generic arithmetic
// ---------------------------------------------------------------------------

Element zero(const Descriptor& d) {
    switch (d->kind) {
        case Kind::ScalarMatrix:
            return Element(d, ScalarMatrixPayload{std::vector<C>(d->dim * d->dim)});
        case Kind::Wiener:
            return Element(d, WienerPayload{0, {C{0.0, 0.0}}});
        case Kind::Circle:
            return Element(d, CirclePayload{std::vector<C>(d->grid)});
        case Kind::HtUnitized:
            return Element(d, HtPayload{C{0.0, 0.0}, std::vector<C>(d->grid * d->grid)});
        case Kind::SwapPair:
            return Element(d, SwapPayload{});
        case Kind::MatrixOver:
            return as_element(Matrix(d->inner, d->msize));
    }
    raise(ErrorCode::NotSupported, "zero: unknown kind");
}

Element unit(const Descriptor& d) {
    switch (d->kind) {
        case Kind::ScalarMatrix: {
            std::vector<C> a(d->dim * d->dim, C{0.0, 0.0});
            for (std::size_t i = 0; i < d->dim; ++i) a[i * d->dim + i] = C{1.0, 0.0};
            return Element(d, ScalarMatrixPayload{std::move(a)});
        }
        case Kind::Wiener:
            return Element(d, WienerPayload{0, {C{1.0, 0.0}}});
        case Kind::Circle:
            return Element(d, CirclePayload{std::vector<C>(d->grid, C{1.0, 0.0})});
        case Kind::HtUnitized:
            return Element(d, HtPayload{C{1.0, 0.0}, std::vector<C>(d->grid * d->grid)});
        case Kind::SwapPair:
            return Element(d, SwapPayload{C{1.0, 0.0}, C{1.0, 0.0}});
        case Kind::MatrixOver:
            return as_element(Matrix::identity(d->inner, d->msize));
    }
    raise(ErrorCode::NotSupported, "unit: unknown kind");
}

Element add(const Element& a, const Element& b) {
    require_same(a, b);
    const Descriptor& d = a.descriptor();
    switch (d->kind) {
        case Kind::ScalarMatrix: {
            ScalarMatrixPayload out = a.as<ScalarMatrixPayload>();
            const auto& pb = b.as<ScalarMatrixPayload>();
            for (std::size_t i = 0; i < out.a.size(); ++i) out.a[i] += pb.a[i];
            return Element(d, std::move(out));
        }
        case Kind::Wiener:
            return Element(d, align_add(a.as<WienerPayload>(), b.as<WienerPayload>(), false));
        case Kind::Circle: {
            CirclePayload out = a.as<CirclePayload>();
            const auto& pb = b.as<CirclePayload>();
            for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] += pb.v[i];
            return Element(d, std::move(out));
        }
        case Kind::HtUnitized: {
            HtPayload out = a.as<HtPayload>();
            const auto& pb = b.as<HtPayload>();
            out.c += pb.c;
            for (std::size_t i = 0; i < out.k.size(); ++i) out.k[i] += pb.k[i];
            return Element(d, std::move(out));
        }
        case Kind::SwapPair: {
            const auto& pa = a.as<SwapPayload>();
            const auto& pb = b.as<SwapPayload>();
            return Element(d, SwapPayload{pa.x + pb.x, pa.y + pb.y});
        }
        case Kind::MatrixOver:
            return as_element(mat_add(matrix_of(a), matrix_of(b)));
    }
    raise(ErrorCode::NotSupported, "add: unknown kind");
}

Element neg(const Element& a) { return scale(C{-1.0, 0.0}, a); }

Element sub(const Element& a, const Element& b) { return add(a, neg(b)); }

Element scale(Complex s, const Element& a) {
    const Descriptor& d = a.descriptor();
    switch (d->kind) {
        case Kind::ScalarMatrix: {
            ScalarMatrixPayload out = a.as<ScalarMatrixPayload>();
            for (auto& v : out.a) v *= s;
            return Element(d, std::move(out));
        }
        case Kind::Wiener: {
            WienerPayload out = a.as<WienerPayload>();
            for (auto& v : out.c) v *= s;
            return Element(d, std::move(out));
        }
        case Kind::Circle: {
            CirclePayload out = a.as<CirclePayload>();
            for (auto& v : out.v) v *= s;
            return Element(d, std::move(out));
        }
        case Kind::HtUnitized: {
            HtPayload out = a.as<HtPayload>();
            out.c *= s;
            for (auto& v : out.k) v *= s;
            return Element(d, std::move(out));
        }
        case Kind::SwapPair: {
            const auto& p = a.as<SwapPayload>();
            return Element(d, SwapPayload{s * p.x, s * p.y});
        }
        case Kind::MatrixOver:
            return as_element(mat_scale(s, matrix_of(a)));
    }
    raise(ErrorCode::NotSupported, "scale: unknown kind");
}

Element mul(const Element& a, const Element& b) {
    require_same(a, b);
    const Descriptor& d = a.descriptor();
    switch (d->kind) {
        case Kind::ScalarMatrix:
            return scalar_from_dense(d, cd_mul(scalar_dense(a), scalar_dense(b)));
        case Kind::Wiener: {
            const auto& pa = a.as<WienerPayload>();
            const auto& pb = b.as<WienerPayload>();
            if (pa.c.empty() || pb.c.empty())
                return zero(d);
            std::vector<C> conv = convolve(pa.c, pb.c);
            std::size_t hw = pa.half_width + pb.half_width;
            WienerPayload out{hw, std::move(conv)};
            if (hw > d->degree) {
                // truncate to |q| <= d
                const std::size_t cut = hw - d->degree;
                out.c.erase(out.c.begin(), out.c.begin() + static_cast<long>(cut));
                out.c.resize(2 * d->degree + 1);
                out.half_width = d->degree;
            }
            return Element(d, trim_wiener(std::move(out)));
        }
        case Kind::Circle: {
            CirclePayload out = a.as<CirclePayload>();
            const auto& pb = b.as<CirclePayload>();
            for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] *= pb.v[i];
            return Element(d, std::move(out));
        }
        case Kind::HtUnitized: {
            const auto& pa = a.as<HtPayload>();
            const auto& pb = b.as<HtPayload>();
            // (c1 + K1)(c2 + K2) = c1 c2 + (c1 K2 + c2 K1 + K1 o K2)
            HtPayload out{pa.c * pb.c, ht_compose_raw(*d, pa.k, pb.k)};
            for (std::size_t i = 0; i < out.k.size(); ++i)
                out.k[i] += pa.c * pb.k[i] + pb.c * pa.k[i];
            return Element(d, std::move(out));
        }
        case Kind::SwapPair: {
            const auto& pa = a.as<SwapPayload>();
            const auto& pb = b.as<SwapPayload>();
            return Element(d, SwapPayload{pa.x * pb.x, pa.y * pb.y});
        }
        case Kind::MatrixOver:
            return as_element(mat_mul(matrix_of(a), matrix_of(b)));
    }
    raise(ErrorCode::NotSupported, "mul: unknown kind");
}

Element star(const Element& a) {
    const Descriptor& d = a.descriptor();
    if (!d->has_involution)
        raise(ErrorCode::NoInvolution, d->name + " declares no involution");
    switch (d->kind) {
        case Kind::ScalarMatrix:
            return scalar_from_dense(d, cd_adjoint(scalar_dense(a)));
        case Kind::Wiener: {
            const auto& p = a.as<WienerPayload>();
            WienerPayload out{p.half_width, std::vector<C>(p.c.size())};
            for (std::size_t i = 0; i < p.c.size(); ++i)
                out.c[p.c.size() - 1 - i] = std::conj(p.c[i]);
            return Element(d, std::move(out));
        }
        case Kind::Circle: {
            CirclePayload out = a.as<CirclePayload>();
            for (auto& v : out.v) v = std::conj(v);
            return Element(d, std::move(out));
        }
        case Kind::HtUnitized: {
            const auto& p = a.as<HtPayload>();
            const std::size_t m = d->grid;
            HtPayload out{std::conj(p.c), std::vector<C>(m * m)};
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    out.k[i * m + j] =
                        std::conj(p.k[j * m + i]) * (d->weights[j] / d->weights[i]);
            return Element(d, std::move(out));
        }
        case Kind::SwapPair: {
            const auto& p = a.as<SwapPayload>();
            return Element(d, SwapPayload{std::conj(p.y), std::conj(p.x)});
        }
        case Kind::MatrixOver:
            return as_element(mat_star(matrix_of(a)));
    }
    raise(ErrorCode::NotSupported, "star: unknown kind");
}

double norm(const Element& a) {
    const Descriptor& d = a.descriptor();
    switch (d->kind) {
        case Kind::ScalarMatrix:
            return scalar_norm_of(*d, a.as<ScalarMatrixPayload>());
        case Kind::Wiener: {
            double s = 0.0;
            for (const auto& v : a.as<WienerPayload>().c) s += std::abs(v);
            return s;
        }
        case Kind::Circle: {
            double s = 0.0;
            for (const auto& v : a.as<CirclePayload>().v) s = std::max(s, std::abs(v));
            return s;
        }
        case Kind::HtUnitized:
            return ht_norm_of(*d, a.as<HtPayload>());
        case Kind::SwapPair: {
            const auto& p = a.as<SwapPayload>();
            return std::max(std::abs(p.x), std::abs(p.y));
        }
        case Kind::MatrixOver:
            return mat_norm(matrix_of(a));
    }
    raise(ErrorCode::NotSupported, "norm: unknown kind");
}

double ambient_norm(const Element& a) {
    const Descriptor& d = a.descriptor();
    if (!d->has_ambient)
        raise(ErrorCode::NotSupported, d->name + " declares no ambient embedding");
    switch (d->kind) {
        case Kind::ScalarMatrix: {
            const auto& p = a.as<ScalarMatrixPayload>();
            if (d->scalar_norm == ScalarNorm::SingularValue) {
                double s = 0.0;
                for (const auto& v : p.a) s += std::abs(v);
                return s;
            }
            CDense m(d->dim, d->dim);
            m.data() = p.a;
            return cd_sigma_max(m);
        }
        case Kind::Wiener: {
            // grid follows the actual support so widened power accumulators
            // stay cheap to evaluate
            const auto& p = a.as<WienerPayload>();
            if (p.c.empty()) return 0.0;
            const std::size_t grid =
                next_pow2(std::max<std::size_t>(4 * p.c.size() + 1, 256));
            double s = 0.0;
            for (const auto& v : eval_on_circle(p.c, grid)) s = std::max(s, std::abs(v));
            return s;
        }
        case Kind::HtUnitized: {
            // induced sup norm of the flattened operator c*I + K*diag(w)
            const auto& p = a.as<HtPayload>();
            const std::size_t m = d->grid;
            double worst = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                double row = 0.0;
                for (std::size_t j = 0; j < m; ++j) {
                    C v = p.k[i * m + j] * d->weights[j];
                    if (i == j) v += p.c;
                    row += std::abs(v);
                }
                worst = std::max(worst, row);
            }
            return worst;
        }
        case Kind::MatrixOver: {
            const Matrix& m = matrix_of(a);
            double s = 0.0;
            for (std::size_t i = 0; i < m.size(); ++i)
                for (std::size_t j = 0; j < m.size(); ++j)
                    s += ambient_norm(m.at(i, j));
            return s;
        }
        default:
            raise(ErrorCode::NotSupported, "ambient_norm: unknown kind");
    }
}

// ---------------------------------------------------------------------------
// instance inversion
// ---------------------------------------------------------------------------

Element wiener_mul(const Element& f, const Element& g) {
    if (f.descriptor()->kind != Kind::Wiener || g.descriptor()->kind != Kind::Wiener)
        raise(ErrorCode::DegreeMismatch, "wiener_mul: wrong algebra");
    return mul(f, g);
}

Element wiener_inverse(const Element& f, double tol) {
    const Descriptor& d = f.descriptor();
    if (d->kind != Kind::Wiener)
        raise(ErrorCode::DegreeMismatch, "wiener_inverse: wrong algebra");
    const auto& p = f.as<WienerPayload>();
    const std::size_t grid = wiener_grid(*d);
    std::vector<C> vals =
        p.c.empty() ? std::vector<C>(grid, C{0.0, 0.0}) : eval_on_circle(p.c, grid);
    double vmax = 0.0, vmin = std::numeric_limits<double>::infinity();
    for (const auto& v : vals) {
        vmax = std::max(vmax, std::abs(v));
        vmin = std::min(vmin, std::abs(v));
    }
    const double threshold = 1e-9 * std::max(1.0, vmax);
    if (vmin <= threshold)
        raise(ErrorCode::NotInvertible,
              "wiener_inverse: |f| falls to " + std::to_string(vmin) +
                  " on the sampling grid");
    for (auto& v : vals) v = C{1.0, 0.0} / v;
    Element g = make_wiener(d, coeffs_from_circle(vals, d->degree));
    const Element residual = sub(mul(f, g), unit(d));
    if (norm(residual) > tol)
        raise(ErrorCode::NotInvertible,
              "wiener_inverse: residual " + std::to_string(norm(residual)) +
                  " exceeds tolerance (inverse escapes the truncation degree)");
    return g;
}

double ht_kernel_norm(const HtKernel& k) {
    double worst = 0.0;
    for (std::size_t i = 0; i < k.m; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < k.m; ++j)
            row += std::abs(k.samples[i * k.m + j]) * k.weights[j];
        worst = std::max(worst, row);
    }
    return worst;
}

HtKernel ht_compose(const HtKernel& k1, const HtKernel& k2) {
    if (k1.m != k2.m || k1.weights != k2.weights)
        raise(ErrorCode::GridMismatch, "ht_compose: kernels live on different grids");
    HtKernel out{k1.m, k1.weights, std::vector<C>(k1.m * k1.m, C{0.0, 0.0})};
    for (std::size_t i = 0; i < k1.m; ++i) {
        for (std::size_t l = 0; l < k1.m; ++l) {
            const C f = k1.samples[i * k1.m + l] * k1.weights[l];
            if (f == C{0.0, 0.0}) continue;
            for (std::size_t j = 0; j < k1.m; ++j)
                out.samples[i * k1.m + j] += f * k2.samples[l * k1.m + j];
        }
    }
    return out;
}

std::vector<Complex> ht_apply(const HtKernel& k, const std::vector<Complex>& f) {
    if (f.size() != k.m)
        raise(ErrorCode::GridMismatch, "ht_apply: function lives on a different grid");
    std::vector<C> out(k.m, C{0.0, 0.0});
    for (std::size_t i = 0; i < k.m; ++i)
        for (std::size_t j = 0; j < k.m; ++j)
            out[i] += k.samples[i * k.m + j] * k.weights[j] * f[j];
    return out;
}

Element ht_unitized_inverse(const Element& u, double tol) {
    const Descriptor& d = u.descriptor();
    if (d->kind != Kind::HtUnitized)
        raise(ErrorCode::GridMismatch, "ht_unitized_inverse: wrong algebra");
    const auto& p = u.as<HtPayload>();
    if (std::abs(p.c) <= 1e-14 * std::max(1.0, ht_norm_of(*d, p)))
        raise(ErrorCode::ZeroScalarPart,
              "ht_unitized_inverse: zero scalar part, inverse leaves the unitized algebra");
    const std::size_t m = d->grid;
    const CDense inv = cd_invert(flatten(u)); // throws SingularToWorkingPrecision
    const C cinv = C{1.0, 0.0} / p.c;
    HtPayload out{cinv, std::vector<C>(m * m)};
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            C v = inv.at(i, j);
            if (i == j) v -= cinv;
            out.k[i * m + j] = v / d->weights[j];
        }
    Element result(d, std::move(out));
    const double resid = std::max(distance(mul(u, result), unit(d)),
                                  distance(mul(result, u), unit(d)));
    if (resid > tol)
        raise(ErrorCode::NotInvertible,
              "ht_unitized_inverse: residual " + std::to_string(resid) +
                  " exceeds tolerance");
    return result;
}

Element invert(const Element& a) {
    const Descriptor& d = a.descriptor();
    const double tol = d->tolerance;
    switch (d->kind) {
        case Kind::ScalarMatrix: {
            CDense inv = cd_invert(scalar_dense(a)); // may throw
            Element s = scalar_from_dense(d, inv);
            const double resid = std::max(distance(mul(a, s), unit(d)),
                                          distance(mul(s, a), unit(d)));
            if (resid > tol)
                raise(ErrorCode::NotInvertible,
                      "scalar inverse residual " + std::to_string(resid) +
                          " exceeds tolerance");
            return s;
        }
        case Kind::Wiener:
            return wiener_inverse(a, tol);
        case Kind::Circle: {
            const auto& p = a.as<CirclePayload>();
            double vmax = 0.0, vmin = std::numeric_limits<double>::infinity();
            for (const auto& v : p.v) {
                vmax = std::max(vmax, std::abs(v));
                vmin = std::min(vmin, std::abs(v));
            }
            if (vmin <= 1e-9 * std::max(1.0, vmax))
                raise(ErrorCode::NotInvertible, "circle element vanishes on the grid");
            CirclePayload out = p;
            for (auto& v : out.v) v = C{1.0, 0.0} / v;
            return Element(d, std::move(out));
        }
        case Kind::HtUnitized:
            return ht_unitized_inverse(a, tol);
        case Kind::SwapPair: {
            const auto& p = a.as<SwapPayload>();
            const double scale = std::max(1.0, std::max(std::abs(p.x), std::abs(p.y)));
            if (std::abs(p.x) <= 1e-13 * scale || std::abs(p.y) <= 1e-13 * scale)
                raise(ErrorCode::NotInvertible, "swap element has a zero component");
            return Element(d, SwapPayload{C{1.0, 0.0} / p.x, C{1.0, 0.0} / p.y});
        }
        case Kind::MatrixOver:
            return detail::invert_nested(a);
    }
    raise(ErrorCode::NotSupported, "invert: unknown kind");
}

// ---------------------------------------------------------------------------

bool inessential_proxy(const Descriptor& d, const Element& a) {
    switch (d->kind) {
        case Kind::ScalarMatrix:
        case Kind::SwapPair:
            return true; // finite-dimensional: every spectrum is finite
        case Kind::HtUnitized:
            // kernels with no scalar part play the role of compact operators
            return std::abs(a.as<HtPayload>().c) <= d->tolerance;
        case Kind::Wiener:
        case Kind::Circle:
            return is_zero(a, d->tolerance); // conservative proxy: {0}
        case Kind::MatrixOver: {
            if (is_scalar_backed(d)) return true;
            const Matrix& m = matrix_of(a);
            for (std::size_t i = 0; i < m.size(); ++i)
                for (std::size_t j = 0; j < m.size(); ++j)
                    if (!inessential_proxy(d->inner, m.at(i, j))) return false;
            return true;
        }
    }
    return false;
}

Element random_element(const Descriptor& d, Rng& rng, double amplitude) {
    switch (d->kind) {
        case Kind::ScalarMatrix: {
            std::vector<C> a(d->dim * d->dim);
            for (auto& v : a) v = amplitude * rng.gaussian_complex();
            return Element(d, ScalarMatrixPayload{std::move(a)});
        }
        case Kind::Wiener: {
            // decaying envelope: inverses of shifted samples then stay well
            // inside the truncation band (tail ~ e^{-d/3})
            std::vector<C> c(2 * d->degree + 1);
            const long hw = static_cast<long>(d->degree);
            for (long q = -hw; q <= hw; ++q)
                c[static_cast<std::size_t>(q + hw)] =
                    amplitude * std::exp(-std::abs(static_cast<double>(q)) / 3.0) *
                    rng.gaussian_complex();
            return make_wiener(d, c);
        }
        case Kind::Circle: {
            std::vector<C> v(d->grid);
            for (auto& x : v) x = amplitude * rng.gaussian_complex();
            return Element(d, CirclePayload{std::move(v)});
        }
        case Kind::HtUnitized: {
            HtPayload p{amplitude * rng.gaussian_complex(),
                        std::vector<C>(d->grid * d->grid)};
            for (auto& v : p.k) v = amplitude * rng.gaussian_complex();
            return Element(d, std::move(p));
        }
        case Kind::SwapPair:
            return Element(d, SwapPayload{amplitude * rng.gaussian_complex(),
                                          amplitude * rng.gaussian_complex()});
        case Kind::MatrixOver:
            return as_element(random_matrix(d->inner, d->msize, rng, amplitude));
    }
    raise(ErrorCode::NotSupported, "random_element: unknown kind");
}

// ---------------------------------------------------------------------------
// flattening
// ---------------------------------------------------------------------------

CDense flatten(const Element& a) {
    const Descriptor& d = a.descriptor();
    switch (d->kind) {
        case Kind::ScalarMatrix:
            return scalar_dense(a);
        case Kind::SwapPair: {
            const auto& p = a.as<SwapPayload>();
            CDense m(2, 2);
            m.at(0, 0) = p.x;
            m.at(1, 1) = p.y;
            return m;
        }
        case Kind::HtUnitized: {
            const auto& p = a.as<HtPayload>();
            const std::size_t m = d->grid;
            CDense out(m, m);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) {
                    C v = p.k[i * m + j] * d->weights[j];
                    if (i == j) v += p.c;
                    out.at(i, j) = v;
                }
            return out;
        }
        case Kind::MatrixOver:
            return mat_flatten(matrix_of(a));
        default:
            raise(ErrorCode::NotSupported,
                  "flatten: " + d->name + " has no finite matrix representation");
    }
}

Element unflatten(const Descriptor& d, const CDense& m) {
    switch (d->kind) {
        case Kind::ScalarMatrix:
            if (m.rows() != d->dim || m.cols() != d->dim)
                raise(ErrorCode::DimensionMismatch, "unflatten: block size mismatch");
            return scalar_from_dense(d, m);
        case Kind::SwapPair:
            if (m.rows() != 2 || m.cols() != 2)
                raise(ErrorCode::DimensionMismatch, "unflatten: block size mismatch");
            return Element(d, SwapPayload{m.at(0, 0), m.at(1, 1)});
        case Kind::MatrixOver:
            return as_element(mat_unflatten(d->inner, d->msize, m));
        default:
            raise(ErrorCode::NotSupported,
                  "unflatten: " + d->name + " has no canonical matrix decoding");
    }
}

namespace detail {

Element trim_small_coefficients(const Element& a, double rel) {
    const Descriptor& d = a.descriptor();
    if (d->kind == Kind::MatrixOver && d->inner->kind == Kind::Wiener) {
        Matrix m = matrix_of(a);
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j)
                m.set(i, j, trim_small_coefficients(m.at(i, j), rel));
        return as_element(m);
    }
    if (d->kind != Kind::Wiener) return a;
    const auto& p = a.as<WienerPayload>();
    double peak = 0.0;
    for (const auto& v : p.c) peak = std::max(peak, std::abs(v));
    const double cut = rel * peak;
    std::size_t lo = 0, hi = p.c.size();
    while (lo < hi && std::abs(p.c[lo]) <= cut) ++lo;
    while (hi > lo && std::abs(p.c[hi - 1]) <= cut) --hi;
    // keep the support symmetric around q = 0
    const long hw_old = static_cast<long>(p.half_width);
    const long reach = std::max(std::abs(static_cast<long>(lo) - hw_old),
                                std::abs(static_cast<long>(hi) - 1 - hw_old));
    const long hw_new = std::min<long>(hw_old, reach);
    if (hw_new >= hw_old) return a;
    WienerPayload out{static_cast<std::size_t>(hw_new),
                      std::vector<C>(p.c.begin() + (hw_old - hw_new),
                                     p.c.begin() + (hw_old + hw_new + 1))};
    return Element(d, std::move(out));
}

Element wiener_change_degree(const Element& f, const Descriptor& target) {
    const auto& p = f.as<WienerPayload>();
    std::vector<C> c(2 * target->degree + 1, C{0.0, 0.0});
    const long hw_new = static_cast<long>(target->degree);
    const long hw_old = static_cast<long>(p.half_width);
    for (long q = -hw_old; q <= hw_old; ++q) {
        if (q < -hw_new || q > hw_new) continue;
        c[static_cast<std::size_t>(q + hw_new)] =
            p.c[static_cast<std::size_t>(q + hw_old)];
    }
    return make_wiener(target, c);
}

std::vector<Complex> pivot_spectrum_probe(const Element& a) {
    const Descriptor& d = a.descriptor();
    switch (d->kind) {
        case Kind::SwapPair: {
            const auto& p = a.as<SwapPayload>();
            return {p.x, p.y};
        }
        case Kind::Circle:
            return a.as<CirclePayload>().v;
        case Kind::Wiener: {
            const auto& p = a.as<WienerPayload>();
            if (p.c.empty()) return {C{0.0, 0.0}};
            return eval_on_circle(p.c, wiener_grid(*d));
        }
        case Kind::ScalarMatrix:
            return cd_eigenvalues(flatten(a));
        case Kind::HtUnitized:
            if (d->grid > 96) return {}; // eigen probe too costly at this size
            return cd_eigenvalues(flatten(a));
        case Kind::MatrixOver: {
            if (!is_scalar_backed(d)) return {};
            const std::size_t dim = flatten_dim(d);
            if (dim > 96) return {};
            return cd_eigenvalues(flatten(a));
        }
    }
    return {};
}

} // namespace detail

} // namespace nbinv
