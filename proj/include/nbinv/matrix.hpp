#pragma once

#include "nbinv/algebra.hpp"

#include <cstddef>
#include <vector>

namespace nbinv {

// Square matrix over a Banach algebra, carrying the sum norm
// ||T|| = sum_{j,k} ||t_jk||. Entries share one descriptor.
class Matrix {
public:
    Matrix() = default;
    Matrix(Descriptor entry_desc, std::size_t n);
    static Matrix identity(const Descriptor& entry_desc, std::size_t n);

    std::size_t size() const { return n_; }
    const Descriptor& entry_descriptor() const { return desc_; }

    const Element& at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, Element e);

    Matrix minor_from(std::size_t offset) const; // lower-right block
    Matrix block(std::size_t i0, std::size_t j0, std::size_t n) const;

private:
    Descriptor desc_;
    std::size_t n_ = 0;
    std::vector<Element> entries_;
};

double mat_norm(const Matrix& t);
double mat_ambient_norm(const Matrix& t);
Matrix mat_mul(const Matrix& t, const Matrix& s);
Matrix mat_add(const Matrix& t, const Matrix& s);
Matrix mat_sub(const Matrix& t, const Matrix& s);
Matrix mat_scale(Complex c, const Matrix& t);
Matrix mat_star(const Matrix& t);
bool mat_is_hermitian(const Matrix& t, double tol);
double mat_distance(const Matrix& t, const Matrix& s);
double mat_residual(const Matrix& t, const Matrix& inv); // max of both sides

// Top-left embedding with identity fill on the new diagonal slots.
// Preserves hermitian-ness and the invertibility predicate.
Matrix pad_matrix(const Matrix& t, std::size_t target);
Matrix unpad_matrix(const Matrix& t, std::size_t m);

// Splits a 2m x 2m matrix over A into a 2 x 2 matrix over M_m(A); a unital
// *-isomorphism. unnest inverts it.
Matrix nest(const Matrix& t);
Matrix unnest(const Matrix& t);

Element as_element(const Matrix& t);       // wrap in the matrix algebra
Matrix matrix_of(const Element& e);        // unwrap a MatrixOver payload

// Pair (V, W) of invertible matrices with certified inverses; realizes the
// equivalence T ~ S when V*T*W = S.
struct GLPair {
    Matrix v, v_inv, w, w_inv;
};

GLPair identity_pair(const Descriptor& d, std::size_t n);
GLPair row_swap_pair(const Descriptor& d, std::size_t n, std::size_t i, std::size_t j);
GLPair col_swap_pair(const Descriptor& d, std::size_t n, std::size_t i, std::size_t j);
double gl_pair_residual(const GLPair& p);
Matrix apply_pair(const GLPair& p, const Matrix& t); // V*T*W
bool check_gl_equivalence(const Matrix& t, const Matrix& s, const GLPair& p, double tol);

// Elimination pair for a pivot equal to the unit: V carries -t_j1 in the first
// column, W carries -t_1k in the first row, inverses are the sign flips.
// V*T*W then has unit pivot and zero first row/column elsewhere.
// Throws PivotNotUnit when t11 is not the unit within tolerance.
GLPair build_elimination_pair(const Matrix& t);

// Same pair embedded at diagonal `offset` of a full-size identity.
GLPair build_elimination_pair_at(const Matrix& t, std::size_t offset);

CDense mat_flatten(const Matrix& t);
Matrix mat_unflatten(const Descriptor& d, std::size_t n, const CDense& big);

Matrix random_matrix(const Descriptor& d, std::size_t n, Rng& rng, double amplitude = 1.0);

} // namespace nbinv
