#pragma once

#include "nbinv/element_ops.hpp"
#include "nbinv/inversion.hpp"
#include "nbinv/matrix.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace nbinv {

// One randomized trial; failures carry a replayable seed and the serialized
// offending input.
struct ExperimentOutcome {
    std::uint64_t seed = 0;
    std::string instance;
    std::size_t n = 0;
    std::string property;
    bool pass = false;
    bool expected_failure = false; // negative controls
    double residual = 0.0;
    std::string detail;
    std::string counterexample_json; // empty when passing
};

// Spectral radius of a matrix estimated in M_n(A) (sum of entry norms) and in
// M_n(B) (sum of entry ambient norms) from one normalized power iteration.
SpectralReport check_srp_matrix_lift(const Matrix& t, std::size_t n_max);

// Inverts T with the flattened/pointwise ambient oracle, recovers the inverse
// through the named engine path, and compares both in the ambient norm.
// engine_path is one of "thm6", "prop4", "triangular", "hermitian".
ExperimentOutcome check_inverse_closed_pair(const Matrix& t, const std::string& engine_path,
                                            double tol, std::uint64_t seed);

// Random T in M_n(A): is unit + T*T invertible? Records failures instead of
// throwing; the swap control is expected to fail.
std::vector<ExperimentOutcome> check_symmetric_lift(const Descriptor& d, std::size_t n,
                                                    std::size_t trials, std::uint64_t seed);

// Empirical max of ||a*||/||a|| over random samples.
double check_involution_bound(const Descriptor& d, std::size_t samples, std::uint64_t seed);

// Gaussian entries shifted by c*I until the ambient smallest singular value
// clears the floor. Grid-backed instances get a stronger dominance floor so
// truncated inverses stay representable.
Matrix random_invertible_matrix(const Descriptor& d, std::size_t n, Rng& rng,
                                double min_singular_floor = 1e-3);

// Random hermitian matrix shifted along the real axis away from singularity.
Matrix random_hermitian_invertible(const Descriptor& d, std::size_t n, Rng& rng);

// Random matrix satisfying the hypotheses of the given engine path for the
// instance (upper-triangular where the proxy demands it, kernel-only
// below-diagonal entries for the unitized kernels, and so on).
Matrix random_matrix_for_path(const Descriptor& d, std::size_t n,
                              const std::string& engine_path, Rng& rng);

} // namespace nbinv
