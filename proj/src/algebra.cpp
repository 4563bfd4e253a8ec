#include "nbinv/algebra.hpp"

#include "nbinv/matrix.hpp"

#include <cmath>

namespace nbinv {

namespace {

std::shared_ptr<AlgebraDescriptor> base_descriptor(Kind kind) {
    auto d = std::make_shared<AlgebraDescriptor>();
    d->kind = kind;
    return d;
}

} // namespace

Descriptor make_scalar_algebra(std::size_t k, ScalarNorm norm, bool with_involution) {
    if (k == 0) raise(ErrorCode::DimensionMismatch, "scalar algebra needs k >= 1");
    auto d = base_descriptor(Kind::ScalarMatrix);
    d->dim = k;
    d->scalar_norm = norm;
    d->has_involution = with_involution;
    d->is_symmetric = with_involution; // conjugate transpose, spectra of a*a in [0,inf)
    d->involution_bound = 1.0;
    d->has_ambient = true; // the same algebra under the other norm
    d->embedding_constant = (norm == ScalarNorm::SingularValue)
                                ? std::pow(static_cast<double>(k), 1.5)
                                : 1.0;
    d->tolerance = 1e-8;
    d->name = "scalar" + std::to_string(k) +
              (norm == ScalarNorm::SumModulus ? ":sum" : "");
    return d;
}

Descriptor make_wiener_algebra(std::size_t degree) {
    auto d = base_descriptor(Kind::Wiener);
    d->degree = degree;
    d->oversample = 8;
    d->has_involution = true;
    d->is_symmetric = true; // 1 + |f|^2 bounded away from zero
    d->involution_bound = 1.0;
    d->has_ambient = true; // continuous functions on the circle, sup norm
    d->embedding_constant = 1.0;
    d->tolerance = 1e-6;
    d->name = "wiener" + std::to_string(degree);
    return d;
}

Descriptor make_circle_algebra(std::size_t grid) {
    if (grid == 0 || (grid & (grid - 1)) != 0)
        raise(ErrorCode::DimensionMismatch, "circle grid must be a power of two");
    auto d = base_descriptor(Kind::Circle);
    d->grid = grid;
    d->has_involution = true;
    d->is_symmetric = true;
    d->involution_bound = 1.0;
    d->has_ambient = false;
    d->tolerance = 1e-6;
    d->name = "circle" + std::to_string(grid);
    return d;
}

Descriptor make_ht_algebra(std::size_t grid) {
    if (grid == 0) raise(ErrorCode::DimensionMismatch, "ht grid must be nonempty");
    auto d = base_descriptor(Kind::HtUnitized);
    d->grid = grid;
    d->weights.assign(grid, 1.0 / static_cast<double>(grid));
    d->has_involution = true;  // weighted adjoint kernel; uniform weights here
    d->is_symmetric = true;    // flattening is *-compatible on uniform grids
    // ||a*||/||a|| swaps max row sums for max column sums; m is the tight bound.
    d->involution_bound = static_cast<double>(grid);
    d->has_ambient = true; // all grid operators under the induced sup norm
    d->embedding_constant = 1.0;
    d->tolerance = 1e-6;
    d->name = "ht" + std::to_string(grid);
    return d;
}

Descriptor make_swap_algebra() {
    auto d = base_descriptor(Kind::SwapPair);
    d->has_involution = true;
    d->is_symmetric = false; // witness: a = (2, -1/2) gives 1 + a*a = 0
    d->involution_bound = 1.0;
    d->has_ambient = false;
    d->tolerance = 1e-8;
    d->name = "swap";
    return d;
}

Descriptor make_matrix_algebra(Descriptor inner, std::size_t m) {
    if (!inner) raise(ErrorCode::DimensionMismatch, "matrix algebra needs an entry algebra");
    if (m == 0) raise(ErrorCode::DimensionMismatch, "matrix algebra needs m >= 1");
    auto d = base_descriptor(Kind::MatrixOver);
    d->inner = inner;
    d->msize = m;
    d->has_involution = inner->has_involution;
    d->is_symmetric = inner->is_symmetric; // symmetry lifts to matrix algebras
    d->involution_bound = inner->involution_bound;
    d->has_ambient = inner->has_ambient;
    d->embedding_constant = inner->embedding_constant;
    d->tolerance = inner->tolerance;
    d->name = "m" + std::to_string(m) + "(" + inner->name + ")";
    return d;
}

bool same_algebra(const Descriptor& a, const Descriptor& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind) return false;
    switch (a->kind) {
        case Kind::ScalarMatrix:
            return a->dim == b->dim && a->scalar_norm == b->scalar_norm &&
                   a->has_involution == b->has_involution;
        case Kind::Wiener:
            return a->degree == b->degree;
        case Kind::Circle:
            return a->grid == b->grid;
        case Kind::HtUnitized:
            return a->grid == b->grid && a->weights == b->weights;
        case Kind::SwapPair:
            return true;
        case Kind::MatrixOver:
            return a->msize == b->msize && same_algebra(a->inner, b->inner);
    }
    return false;
}

bool is_scalar_backed(const Descriptor& d) {
    switch (d->kind) {
        case Kind::ScalarMatrix:
        case Kind::SwapPair:
            return true;
        case Kind::MatrixOver:
            return is_scalar_backed(d->inner);
        default:
            return false;
    }
}

std::size_t flatten_dim(const Descriptor& d) {
    switch (d->kind) {
        case Kind::ScalarMatrix: return d->dim;
        case Kind::SwapPair: return 2;
        case Kind::HtUnitized: return d->grid;
        case Kind::MatrixOver: return d->msize * flatten_dim(d->inner);
        default:
            raise(ErrorCode::NotSupported,
                  "flatten: " + d->name + " has no finite matrix representation");
    }
}

bool is_zero(const Element& a, double tol) { return norm(a) <= tol; }

double distance(const Element& a, const Element& b) { return norm(sub(a, b)); }

} // namespace nbinv
