#pragma once

#include "nbinv/algebra.hpp"

namespace nbinv::detail {

// Inversion of a nested matrix element; dispatches into the elimination
// engine. Defined in inversion.cpp.
Element invert_nested(const Element& a);

// Spectrum probe for pivot perturbation: eigenvalues of the flattened
// representation where available, grid values for the function algebras.
// Empty when the instance offers no cheap probe.
std::vector<Complex> pivot_spectrum_probe(const Element& a);

// Wiener payload re-homed under a descriptor with a different truncation
// degree (coefficients zero-padded or truncated).
Element wiener_change_degree(const Element& f, const Descriptor& target);

// Drops coefficients below rel * max|c| at the edges of Wiener payloads
// (entrywise for nested matrices). Power accumulators keep constant effective
// support this way: the analyticity annulus of the base element bounds the
// decay rate of every power.
Element trim_small_coefficients(const Element& a, double rel);

// Verified-invertible approximant of `a` at distance ~level: shifted units for
// the finite-dimensional instances, modulus lifting for the function algebras.
// Throws NotSupported when no candidate verifies at this level.
Element invertible_approximant(const Element& a, double level);

} // namespace nbinv::detail
