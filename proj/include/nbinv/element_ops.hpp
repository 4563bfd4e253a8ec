#pragma once

#include "nbinv/algebra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace nbinv {

// Spectral radius estimate from the norm sequence ||a^N||^{1/N}, N doubling.
struct SpectralReport {
    std::string element; // identifier supplied by the caller
    std::vector<std::pair<std::uint64_t, double>> norm_sequence; // (N, ||a^N||)
    double radius = 0.0;
    bool converged = false;
    double norm_bound = 0.0; // ||a||, an upper bound for the radius
    std::optional<double> ambient_radius;

    double discrepancy() const {
        return ambient_radius ? std::abs(radius - *ambient_radius) : 0.0;
    }
};

// Geometric series for (unit - r)^{-1} with r = unit - a. Attempts the series
// whenever partial sums behave and verifies both one-sided residuals; throws
// NotConvergent when the tolerance is unmet within the term budget.
Element neumann_inverse(const Element& a, double tol, std::size_t max_terms);

// Norm sequence rho_N = ||a^N||^{1/N} for N = 2, 4, ..., n_max (n_max a power
// of two, >= 4), powers kept normalized with exponent bookkeeping. The final
// estimate damps slow 1/N convergence with a clamped geometric correction.
// with_ambient additionally tracks the sequence under the ambient norm.
SpectralReport gelfand_radius(const Element& a, std::size_t n_max,
                              bool with_ambient = false);

// Sequence a_1..a_m of invertible elements with ||a - a_j|| nonincreasing and
// tending to zero: shifted units for the finite-dimensional instances,
// pointwise modulus lifting for the function algebras.
std::vector<Element> approximate_by_invertibles(const Element& a, std::size_t m);

struct WitnessReport {
    bool ok = false;
    std::optional<Element> witness; // inverse of unit + a*a when ok
    double residual = 0.0;
    std::string detail;
};

// Checks invertibility of unit + a*a, the defining property of a symmetric
// *-algebra, returning the computed inverse as witness.
WitnessReport symmetric_witness_check(const Element& a);

} // namespace nbinv
