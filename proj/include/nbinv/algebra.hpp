#pragma once

#include "nbinv/cdense.hpp"
#include "nbinv/errors.hpp"
#include "nbinv/rng.hpp"

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nbinv {

class Matrix;

// Concrete unital Banach algebras shipped with the library. Every element
// carries a descriptor; arithmetic dispatches on the descriptor's kind.
enum class Kind {
    ScalarMatrix, // k x k complex matrices
    Wiener,       // trig polynomials with the l^1 coefficient norm
    Circle,       // samples on a uniform circle grid, sup norm
    HtUnitized,   // c*I + integral operator given by a kernel on a grid
    SwapPair,     // C^2, componentwise product, (x,y)* = (conj y, conj x)
    MatrixOver,   // m x m matrices over another descriptor, sum norm
};

enum class ScalarNorm { SingularValue, SumModulus };

struct AlgebraDescriptor;
using Descriptor = std::shared_ptr<const AlgebraDescriptor>;

struct AlgebraDescriptor {
    Kind kind = Kind::ScalarMatrix;

    // scalar-matrix
    std::size_t dim = 1;
    ScalarNorm scalar_norm = ScalarNorm::SingularValue;

    // wiener
    std::size_t degree = 64;
    std::size_t oversample = 8;

    // circle / ht
    std::size_t grid = 128;
    std::vector<double> weights; // ht quadrature weights

    // matrix-over
    Descriptor inner;
    std::size_t msize = 0;

    bool has_involution = true;
    bool is_symmetric = false;    // 1 + a*a invertible for every a
    double involution_bound = 1.0; // M with ||a*|| <= M ||a||
    bool has_ambient = false;
    double embedding_constant = 1.0; // J with J ||a||_A >= ||a||_B
    double tolerance = 1e-8;
    std::string name;
};

Descriptor make_scalar_algebra(std::size_t k,
                               ScalarNorm norm = ScalarNorm::SingularValue,
                               bool with_involution = true);
Descriptor make_wiener_algebra(std::size_t degree = 64);
Descriptor make_circle_algebra(std::size_t grid);
Descriptor make_ht_algebra(std::size_t grid = 128);
Descriptor make_swap_algebra();
Descriptor make_matrix_algebra(Descriptor inner, std::size_t m);

// Structural compatibility (same algebra up to shared_ptr identity).
bool same_algebra(const Descriptor& a, const Descriptor& b);
// True when elements flatten to finite scalar matrices multiplicatively.
bool is_scalar_backed(const Descriptor& d);
// Dimension of the flattened representation for scalar-backed descriptors.
std::size_t flatten_dim(const Descriptor& d);

struct ScalarMatrixPayload {
    std::vector<Complex> a; // k*k row-major
};
struct WienerPayload {
    std::size_t half_width = 0;
    std::vector<Complex> c; // c[q + half_width], q in [-half_width, half_width]
};
struct CirclePayload {
    std::vector<Complex> v;
};
struct HtPayload {
    Complex c{0.0, 0.0};
    std::vector<Complex> k; // m*m row-major kernel samples
};
struct SwapPayload {
    Complex x{0.0, 0.0};
    Complex y{0.0, 0.0};
};
struct MatrixPayload {
    std::shared_ptr<const Matrix> m;
};

using Payload = std::variant<ScalarMatrixPayload, WienerPayload, CirclePayload,
                             HtPayload, SwapPayload, MatrixPayload>;

// Immutable value in a unital normed algebra. Copies are cheap (shared state).
class Element {
public:
    Element() = default;
    Element(Descriptor desc, Payload payload)
        : desc_(std::move(desc)),
          payload_(std::make_shared<const Payload>(std::move(payload))) {}

    bool valid() const { return static_cast<bool>(desc_); }
    const Descriptor& descriptor() const { return desc_; }
    const Payload& payload() const { return *payload_; }

    template <typename T>
    const T& as() const {
        return std::get<T>(*payload_);
    }

private:
    Descriptor desc_;
    std::shared_ptr<const Payload> payload_;
};

Element zero(const Descriptor& d);
Element unit(const Descriptor& d);
Element add(const Element& a, const Element& b);
Element sub(const Element& a, const Element& b);
Element neg(const Element& a);
Element mul(const Element& a, const Element& b);
Element scale(Complex s, const Element& a);
Element star(const Element& a);          // throws NoInvolution
double norm(const Element& a);           // the algebra norm
double ambient_norm(const Element& a);   // throws NotSupported without ambient

// Instance inversion routine (two-sided, residual-verified).
// Throws NotInvertible / ZeroScalarPart / SingularToWorkingPrecision.
Element invert(const Element& a);

bool is_zero(const Element& a, double tol);
double distance(const Element& a, const Element& b);

// Gaussian element, coefficientwise per instance representation.
Element random_element(const Descriptor& d, Rng& rng, double amplitude = 1.0);

// Multiplicative flattening to a dense scalar matrix (scalar-backed only).
CDense flatten(const Element& a);
Element unflatten(const Descriptor& d, const CDense& m);

inline Element operator+(const Element& a, const Element& b) { return add(a, b); }
inline Element operator-(const Element& a, const Element& b) { return sub(a, b); }
inline Element operator-(const Element& a) { return neg(a); }
inline Element operator*(const Element& a, const Element& b) { return mul(a, b); }
inline Element operator*(Complex s, const Element& a) { return scale(s, a); }
inline Element operator*(double s, const Element& a) { return scale(Complex{s, 0.0}, a); }

} // namespace nbinv
