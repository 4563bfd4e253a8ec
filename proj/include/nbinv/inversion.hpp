#pragma once

#include "nbinv/matrix.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace nbinv {

enum class InversionPath { Direct, Interchange, PerturbedLimit };

const char* inversion_path_name(InversionPath p);

// Deterministic rule for the free complex parameters in the elimination
// proofs: pivots with a computable spectrum get eps*e^{i theta} with theta
// maximizing the distance from the negated spectrum; otherwise random draws
// with verification. eps follows the halving schedule {1/2, 1/4, ...}.
struct PivotStrategy {
    double epsilon0 = 0.5;
    int retry_budget = 32;   // lambda draws per level
    int limit_budget = 64;   // terms in a perturbed-limit sequence
    double tolerance = 0.0;  // 0 selects the instance tolerance
    std::uint64_t seed = 0x243f6a8885a308d3ull;
};

struct InversionCertificate {
    Matrix input;
    Matrix reduced;               // V_r...V_1 * T * W_1...W_r
    Matrix inverse;
    std::vector<GLPair> factors;  // in application order
    double residual_left = 0.0;   // ||T^{-1} T - I||
    double residual_right = 0.0;  // ||T T^{-1} - I||
    InversionPath path = InversionPath::Direct;
    std::string route;            // e.g. "pad 3->4, nest, 2x2 over m2(scalar2)"
    double tolerance = 0.0;
};

// Distance between the recorded reduced matrix and a replay of the factors.
double replay_residual(const InversionCertificate& cert);

using EntryInverter = std::function<Element(const Element&)>;

// Back substitution over the algebra; for n = 2 the off-diagonal entry is
// exactly -s11 * t12 * s22. Throws DiagonalNotInvertible naming the pivot.
Matrix invert_upper_triangular(const Matrix& t, const EntryInverter& entry_inverter);
Matrix invert_upper_triangular(const Matrix& t);

// 2x2 inversion through one-sided invertible entries: interchanges bring an
// invertible entry to the pivot, two elementary multiplications produce an
// upper-triangular factor, and entries in the closure of the invertibles are
// handled by inverting nearby perturbations and taking the limit.
InversionCertificate prop4_invert_2x2(const Matrix& t, const PivotStrategy& strategy = {});

// Matrices whose below-diagonal entries pass the inessential proxy.
// Rows/columns listed as true are claimed inessential; below-diagonal entries
// must either be claimed and pass the proxy or vanish.
struct InessentialMask {
    std::size_t n = 0;
    std::vector<bool> below; // row-major over j > k slots, claim flags

    static InessentialMask full(std::size_t n);
    static InessentialMask none(std::size_t n);
    bool claimed(std::size_t j, std::size_t k) const;
};

// Recursive elimination: normalize the pivot, clear its row and column with an
// elimination pair, recurse on the minor; a non-invertible pivot triggers the
// row-1/row-2 interchange and a vanishing perturbation sequence whose inverses
// converge. Requires invertibility in the ambient algebra.
InversionCertificate thm6_invert(const Matrix& t, const InessentialMask& mask,
                                 const PivotStrategy& strategy = {});

// Hermitian inversion for symmetric instances: size 2 runs the 2x2 machinery
// with the pivot approached through i*eps + t11; larger sizes pad to the next
// power of two, nest into 2x2 blocks over the nested matrix algebra, and
// recurse. Throws NotHermitian / NoInvolution / NotSupported.
InversionCertificate invert_hermitian_symmetric(const Matrix& t,
                                                const PivotStrategy& strategy = {});

// Ground-truth brute force: flattens to one scalar system, inverts by
// elimination with partial pivoting, reshapes back. Grid-backed instances
// invert pointwise (circle/wiener) or through the scalar-part quotient (ht).
Matrix oracle_invert(const Matrix& t);

// Smallest singular value of the flattened/pointwise ambient representation;
// the random-matrix shift rule keeps this above a floor.
double ambient_smallest_singular(const Matrix& t);

} // namespace nbinv
