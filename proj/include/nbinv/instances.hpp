#pragma once

#include "nbinv/algebra.hpp"

#include <vector>

namespace nbinv {

// --- scalar matrices ------------------------------------------------------

Element make_scalar(const Descriptor& d, const std::vector<Complex>& row_major);
Element make_scalar1(const Descriptor& d, Complex value); // k = 1 convenience

// --- Wiener algebra -------------------------------------------------------

// Coefficients indexed q = -d..d (array length 2d+1).
Element make_wiener(const Descriptor& d, const std::vector<Complex>& coeffs);
// Coefficient of e^{iqt}.
Complex wiener_coefficient(const Element& f, long q);
// Values on a power-of-two circle grid.
std::vector<Complex> wiener_values(const Element& f, std::size_t grid);
// Truncated convolution product; DegreeMismatch when truncation degrees differ.
Element wiener_mul(const Element& f, const Element& g);
// Pointwise reciprocal on an oversampled grid, transformed back and truncated.
// NotInvertible when f (nearly) vanishes on the grid or the residual misses tol.
Element wiener_inverse(const Element& f, double tol);

// --- Hille-Tamarkin kernels -----------------------------------------------

// Discretized kernel on a quadrature grid; the unitized element c*I + T_K
// lives in the HtUnitized algebra with norm |c| + |||K|||.
struct HtKernel {
    std::size_t m = 0;
    std::vector<double> weights;  // quadrature weights mu_i
    std::vector<Complex> samples; // K[i][j], row-major
};

double ht_kernel_norm(const HtKernel& k); // max_i sum_j |K(i,j)| mu_j
HtKernel ht_compose(const HtKernel& k1, const HtKernel& k2); // GridMismatch
std::vector<Complex> ht_apply(const HtKernel& k, const std::vector<Complex>& f);

Element make_ht(const Descriptor& d, Complex c, const std::vector<Complex>& kernel);
Element make_ht(const Descriptor& d, Complex c, const HtKernel& k);
HtKernel ht_kernel_part(const Element& u);
Complex ht_scalar_part(const Element& u);
// Dense inverse of c*I + T_K, verified to have the same unitized shape.
// ZeroScalarPart when c = 0; SingularToWorkingPrecision when the flattened
// operator is singular.
Element ht_unitized_inverse(const Element& u, double tol);

// --- swap-involution control algebra --------------------------------------

Element make_swap(const Descriptor& d, Complex x, Complex y);

// --- inessential-ideal membership proxy ------------------------------------

// Instance-specific proxy for membership in the largest inessential ideal:
// always true for finite-dimensional scalar-backed algebras, true for
// unitized kernels with zero scalar part, and {0} for the function algebras.
bool inessential_proxy(const Descriptor& d, const Element& a);

} // namespace nbinv
