#include "nbinv/matrix.hpp"

#include <algorithm>
#include <cmath>

namespace nbinv {

Matrix::Matrix(Descriptor entry_desc, std::size_t n) : desc_(std::move(entry_desc)), n_(n) {
    if (n_ == 0) raise(ErrorCode::DimensionMismatch, "matrix dimension must be >= 1");
    entries_.assign(n_ * n_, zero(desc_));
}

Matrix Matrix::identity(const Descriptor& entry_desc, std::size_t n) {
    Matrix m(entry_desc, n);
    const Element one = unit(entry_desc);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, one);
    return m;
}

const Element& Matrix::at(std::size_t i, std::size_t j) const {
    if (i >= n_ || j >= n_) raise(ErrorCode::DimensionMismatch, "matrix index out of range");
    return entries_[i * n_ + j];
}

void Matrix::set(std::size_t i, std::size_t j, Element e) {
    if (i >= n_ || j >= n_) raise(ErrorCode::DimensionMismatch, "matrix index out of range");
    if (!same_algebra(e.descriptor(), desc_))
        raise(ErrorCode::DimensionMismatch, "entry descriptor differs from the matrix algebra");
    entries_[i * n_ + j] = std::move(e);
}

Matrix Matrix::minor_from(std::size_t offset) const {
    if (offset >= n_) raise(ErrorCode::DimensionMismatch, "minor offset out of range");
    return block(offset, offset, n_ - offset);
}

Matrix Matrix::block(std::size_t i0, std::size_t j0, std::size_t n) const {
    if (i0 + n > n_ || j0 + n > n_)
        raise(ErrorCode::DimensionMismatch, "block exceeds matrix bounds");
    Matrix out(desc_, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.set(i, j, at(i0 + i, j0 + j));
    return out;
}

double mat_norm(const Matrix& t) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j) s += norm(t.at(i, j));
    return s;
}

double mat_ambient_norm(const Matrix& t) {
    double s = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j) s += ambient_norm(t.at(i, j));
    return s;
}

static void require_shape(const Matrix& t, const Matrix& s) {
    if (t.size() != s.size() || !same_algebra(t.entry_descriptor(), s.entry_descriptor()))
        raise(ErrorCode::DimensionMismatch, "matrix shapes or entry algebras differ");
}

Matrix mat_mul(const Matrix& t, const Matrix& s) {
    require_shape(t, s);
    const std::size_t n = t.size();
    Matrix out(t.entry_descriptor(), n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Element acc = mul(t.at(i, 0), s.at(0, j));
            for (std::size_t l = 1; l < n; ++l)
                acc = add(acc, mul(t.at(i, l), s.at(l, j)));
            out.set(i, j, std::move(acc));
        }
    return out;
}

Matrix mat_add(const Matrix& t, const Matrix& s) {
    require_shape(t, s);
    Matrix out(t.entry_descriptor(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j)
            out.set(i, j, add(t.at(i, j), s.at(i, j)));
    return out;
}

Matrix mat_sub(const Matrix& t, const Matrix& s) {
    require_shape(t, s);
    Matrix out(t.entry_descriptor(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j)
            out.set(i, j, sub(t.at(i, j), s.at(i, j)));
    return out;
}

Matrix mat_scale(Complex c, const Matrix& t) {
    Matrix out(t.entry_descriptor(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j) out.set(i, j, scale(c, t.at(i, j)));
    return out;
}

Matrix mat_star(const Matrix& t) {
    Matrix out(t.entry_descriptor(), t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j) out.set(j, i, star(t.at(i, j)));
    return out;
}

bool mat_is_hermitian(const Matrix& t, double tol) {
    return mat_distance(t, mat_star(t)) <= tol;
}

double mat_distance(const Matrix& t, const Matrix& s) {
    return mat_norm(mat_sub(t, s));
}

double mat_residual(const Matrix& t, const Matrix& inv) {
    const Matrix id = Matrix::identity(t.entry_descriptor(), t.size());
    return std::max(mat_distance(mat_mul(inv, t), id),
                    mat_distance(mat_mul(t, inv), id));
}

Matrix pad_matrix(const Matrix& t, std::size_t target) {
    if (target < t.size())
        raise(ErrorCode::DimensionMismatch,
              "pad_matrix: target dimension smaller than the source");
    if (target == t.size()) return t;
    Matrix out(t.entry_descriptor(), target);
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j) out.set(i, j, t.at(i, j));
    const Element one = unit(t.entry_descriptor());
    for (std::size_t i = t.size(); i < target; ++i) out.set(i, i, one);
    return out;
}

Matrix unpad_matrix(const Matrix& t, std::size_t m) {
    if (m > t.size())
        raise(ErrorCode::DimensionMismatch, "unpad_matrix: block exceeds matrix");
    return t.block(0, 0, m);
}

Matrix nest(const Matrix& t) {
    if (t.size() % 2 != 0)
        raise(ErrorCode::DimensionMismatch, "nest: dimension must be even");
    const std::size_t m = t.size() / 2;
    const Descriptor block_desc = make_matrix_algebra(t.entry_descriptor(), m);
    Matrix out(block_desc, 2);
    for (std::size_t bi = 0; bi < 2; ++bi)
        for (std::size_t bj = 0; bj < 2; ++bj)
            out.set(bi, bj, as_element(t.block(bi * m, bj * m, m)));
    return out;
}

Matrix unnest(const Matrix& t) {
    const Descriptor& d = t.entry_descriptor();
    if (d->kind != Kind::MatrixOver)
        raise(ErrorCode::DimensionMismatch, "unnest: entries are not nested matrices");
    const std::size_t m = d->msize;
    Matrix out(d->inner, t.size() * m);
    for (std::size_t bi = 0; bi < t.size(); ++bi)
        for (std::size_t bj = 0; bj < t.size(); ++bj) {
            const Matrix& blockm = matrix_of(t.at(bi, bj));
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    out.set(bi * m + i, bj * m + j, blockm.at(i, j));
        }
    return out;
}

Element as_element(const Matrix& t) {
    const Descriptor d = make_matrix_algebra(t.entry_descriptor(), t.size());
    return Element(d, MatrixPayload{std::make_shared<const Matrix>(t)});
}

Matrix matrix_of(const Element& e) {
    if (e.descriptor()->kind != Kind::MatrixOver)
        raise(ErrorCode::DimensionMismatch, "matrix_of: element is not a nested matrix");
    return *e.as<MatrixPayload>().m;
}

GLPair identity_pair(const Descriptor& d, std::size_t n) {
    const Matrix id = Matrix::identity(d, n);
    return GLPair{id, id, id, id};
}

GLPair row_swap_pair(const Descriptor& d, std::size_t n, std::size_t i, std::size_t j) {
    Matrix p = Matrix::identity(d, n);
    const Element one = unit(d);
    const Element nil = zero(d);
    p.set(i, i, nil);
    p.set(j, j, nil);
    p.set(i, j, one);
    p.set(j, i, one);
    const Matrix id = Matrix::identity(d, n);
    return GLPair{p, p, id, id}; // self-inverse, acts on the left
}

GLPair col_swap_pair(const Descriptor& d, std::size_t n, std::size_t i, std::size_t j) {
    GLPair rows = row_swap_pair(d, n, i, j);
    return GLPair{rows.w, rows.w_inv, rows.v, rows.v_inv};
}

double gl_pair_residual(const GLPair& p) {
    const Matrix id = Matrix::identity(p.v.entry_descriptor(), p.v.size());
    double r = mat_distance(mat_mul(p.v, p.v_inv), id);
    r = std::max(r, mat_distance(mat_mul(p.v_inv, p.v), id));
    r = std::max(r, mat_distance(mat_mul(p.w, p.w_inv), id));
    r = std::max(r, mat_distance(mat_mul(p.w_inv, p.w), id));
    return r;
}

Matrix apply_pair(const GLPair& p, const Matrix& t) {
    return mat_mul(mat_mul(p.v, t), p.w);
}

bool check_gl_equivalence(const Matrix& t, const Matrix& s, const GLPair& p, double tol) {
    require_shape(t, s);
    return mat_distance(apply_pair(p, t), s) <= tol;
}

GLPair build_elimination_pair_at(const Matrix& t, std::size_t offset) {
    const std::size_t n = t.size();
    if (offset >= n)
        raise(ErrorCode::DimensionMismatch, "elimination offset out of range");
    const Descriptor& d = t.entry_descriptor();
    const Element one = unit(d);
    if (distance(t.at(offset, offset), one) >
        10.0 * d->tolerance * std::max(1.0, norm(t.at(offset, offset))))
        raise(ErrorCode::PivotNotUnit,
              "elimination pivot is not the unit within tolerance");
    Matrix v = Matrix::identity(d, n);
    Matrix v_inv = v;
    Matrix w = v;
    Matrix w_inv = v;
    for (std::size_t j = offset + 1; j < n; ++j) {
        v.set(j, offset, neg(t.at(j, offset)));
        v_inv.set(j, offset, t.at(j, offset));
        w.set(offset, j, neg(t.at(offset, j)));
        w_inv.set(offset, j, t.at(offset, j));
    }
    return GLPair{std::move(v), std::move(v_inv), std::move(w), std::move(w_inv)};
}

GLPair build_elimination_pair(const Matrix& t) { return build_elimination_pair_at(t, 0); }

CDense mat_flatten(const Matrix& t) {
    const std::size_t d = flatten_dim(t.entry_descriptor());
    CDense out(t.size() * d, t.size() * d);
    for (std::size_t i = 0; i < t.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j)
            out.set_block(i * d, j * d, flatten(t.at(i, j)));
    return out;
}

Matrix mat_unflatten(const Descriptor& d, std::size_t n, const CDense& big) {
    const std::size_t k = flatten_dim(d);
    if (big.rows() != n * k || big.cols() != n * k)
        raise(ErrorCode::DimensionMismatch, "mat_unflatten: shape mismatch");
    Matrix out(d, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            out.set(i, j, unflatten(d, big.block(i * k, j * k, k, k)));
    return out;
}

Matrix random_matrix(const Descriptor& d, std::size_t n, Rng& rng, double amplitude) {
    Matrix out(d, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.set(i, j, random_element(d, rng, amplitude));
    return out;
}

} // namespace nbinv
