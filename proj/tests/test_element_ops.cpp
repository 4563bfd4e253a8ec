// Element-level procedures: geometric series inversion, norm-sequence radius
// estimates, approximation by invertibles, symmetry witnesses.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nbinv/cdense.hpp"
#include "nbinv/element_ops.hpp"
#include "nbinv/instances.hpp"

#include <cmath>

using namespace nbinv;

namespace {

Element scalar2(const Descriptor& d, Complex a, Complex b, Complex c, Complex e) {
    return make_scalar(d, {a, b, c, e});
}

} // namespace

TEST_CASE("neumann_inverse: identity and scaled unit") {
    const Descriptor d = make_scalar_algebra(1);
    const Element one = unit(d);
    CHECK(distance(neumann_inverse(one, 1e-12, 64), one) <= 1e-12);

    // a = (1/2) unit: the geometric series sums to 2
    const Element half = scale(Complex{0.5, 0.0}, one);
    CHECK(distance(neumann_inverse(half, 1e-12, 256),
                   scale(Complex{2.0, 0.0}, one)) <= 1e-10);
}

TEST_CASE("neumann_inverse: nilpotent tail terminates the series") {
    const Descriptor d = make_scalar_algebra(2);
    // n has a single entry above the diagonal; n^2 = 0, so (unit - n)^{-1} = unit + n
    const Element n = scalar2(d, {0, 0}, {1, 0}, {0, 0}, {0, 0});
    const Element a = sub(unit(d), n);
    const Element s = neumann_inverse(a, 1e-12, 16);
    CHECK(distance(s, add(unit(d), n)) <= 1e-12);
}

TEST_CASE("neumann_inverse: divergent input reports NotConvergent") {
    const Descriptor d = make_scalar_algebra(1);
    const Element a = scale(Complex{4.0, 0.0}, unit(d)); // ||unit - a|| = 3
    try {
        (void)neumann_inverse(a, 1e-10, 64);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotConvergent);
    }
}

TEST_CASE("neumann_inverse residuals are two-sided") {
    const Descriptor d = make_scalar_algebra(2);
    Rng rng(7);
    const Element one = unit(d);
    for (int i = 0; i < 20; ++i) {
        const Element a = add(one, random_element(d, rng, 0.15));
        const Element s = neumann_inverse(a, 1e-10, 512);
        CHECK(distance(mul(a, s), one) <= 1e-10);
        CHECK(distance(mul(s, a), one) <= 1e-10);
    }
}

TEST_CASE("gelfand_radius: unit has radius one") {
    for (const Descriptor& d : {make_scalar_algebra(1), make_scalar_algebra(3),
                                make_wiener_algebra(16)}) {
        CAPTURE(d->name);
        const SpectralReport r = gelfand_radius(unit(d), 64);
        CHECK(r.radius == doctest::Approx(1.0).epsilon(0.05));
    }
}

TEST_CASE("gelfand_radius: nilpotent element collapses to zero") {
    const Descriptor d = make_scalar_algebra(2);
    const Element n = scalar2(d, {0, 0}, {1, 0}, {0, 0}, {0, 0});
    const SpectralReport r = gelfand_radius(n, 64);
    CHECK(r.radius == doctest::Approx(0.0));
    CHECK(r.converged);
}

TEST_CASE("gelfand_radius: [[0,2],[1/2,0]] against the eigenvalue oracle") {
    const Descriptor d = make_scalar_algebra(2);
    const Element a = scalar2(d, {0, 0}, {2, 0}, {0.5, 0}, {0, 0});
    // oracle: eigenvalues of the flattened matrix
    double rho_true = 0.0;
    for (const Complex& mu : cd_eigenvalues(flatten(a)))
        rho_true = std::max(rho_true, std::abs(mu));
    CHECK(rho_true == doctest::Approx(1.0).epsilon(1e-12));
    const SpectralReport r = gelfand_radius(a, 1024);
    CHECK(std::abs(r.radius - rho_true) <= 0.02);
}

TEST_CASE("gelfand_radius never exceeds the norm bound") {
    Rng rng(11);
    for (const Descriptor& d : {make_scalar_algebra(2), make_scalar_algebra(3)}) {
        for (int i = 0; i < 25; ++i) {
            const Element a = random_element(d, rng);
            const SpectralReport r = gelfand_radius(a, 256);
            CHECK(r.radius <= norm(a) + 1e-9);
        }
    }
}

TEST_CASE("gelfand_radius: spectral mapping for squares within 5%") {
    Rng rng(13);
    const Descriptor d = make_scalar_algebra(3);
    for (int i = 0; i < 25; ++i) {
        const Element a = random_element(d, rng);
        const double r1 = gelfand_radius(a, 1024).radius;
        const double r2 = gelfand_radius(mul(a, a), 1024).radius;
        if (r2 < 1e-8) continue;
        CHECK(std::abs(r1 * r1 - r2) <= 0.05 * r2);
    }
}

TEST_CASE("gelfand_radius rejects invalid n_max") {
    const Descriptor d = make_scalar_algebra(1);
    CHECK_THROWS_AS(gelfand_radius(unit(d), 3), Error);
    CHECK_THROWS_AS(gelfand_radius(unit(d), 48), Error);
}

TEST_CASE("approximate_by_invertibles: invertible input gives a constant sequence") {
    const Descriptor d = make_scalar_algebra(2);
    Rng rng(17);
    const Element a = add(scale(Complex{2.0, 0.0}, unit(d)), random_element(d, rng, 0.1));
    const auto seq = approximate_by_invertibles(a, 5);
    REQUIRE(seq.size() == 5);
    for (const Element& t : seq) CHECK(distance(t, a) == doctest::Approx(0.0));
}

TEST_CASE("approximate_by_invertibles: zero becomes shifted units") {
    const Descriptor d = make_scalar_algebra(1);
    const auto seq = approximate_by_invertibles(zero(d), 6);
    REQUIRE(seq.size() == 6);
    for (std::size_t j = 0; j < seq.size(); ++j) {
        CHECK(distance(seq[j], scale(Complex{1.0 / (j + 1.0), 0.0}, unit(d))) <= 1e-12);
    }
}

TEST_CASE("approximate_by_invertibles: singular scalar matrix, terms verified") {
    const Descriptor d = make_scalar_algebra(3);
    // rank-one, hence singular
    std::vector<Complex> payload(9);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            payload[i * 3 + j] = Complex{double(i + 1), 0.0} * Complex{double(j) - 1.0, 0.5};
    const Element a = make_scalar(d, payload);
    CHECK_THROWS_AS(invert(a), Error);

    const auto seq = approximate_by_invertibles(a, 8);
    double last = 1e300;
    for (const Element& t : seq) {
        // verified invertible by the instance's own routine
        CHECK_NOTHROW((void)invert(t));
        // determinant oracle: product of flattened eigenvalues stays away from zero
        double det_mod = 1.0;
        for (const Complex& mu : cd_eigenvalues(flatten(t))) det_mod *= std::abs(mu);
        CHECK(det_mod > 0.0);
        const double dist = distance(a, t);
        CHECK(dist <= last + 1e-12);
        last = dist;
    }
    CHECK(last <= distance(a, seq.front()) + 1e-12);
}

TEST_CASE("approximate_by_invertibles: wiener element with a zero on the circle") {
    const Descriptor d = make_wiener_algebra(64);
    // f = 1 - e^{it} vanishes at t = 0
    std::vector<Complex> coeffs(129, Complex{0, 0});
    coeffs[64] = Complex{1, 0};
    coeffs[65] = Complex{-1, 0};
    const Element f = make_wiener(d, coeffs);
    CHECK_THROWS_AS(invert(f), Error);
    const auto seq = approximate_by_invertibles(f, 4);
    double last = 1e300;
    for (const Element& t : seq) {
        CHECK_NOTHROW((void)invert(t));
        const double dist = distance(f, t);
        CHECK(dist <= last + 1e-12);
        last = dist;
    }
}

TEST_CASE("symmetric_witness_check: zero gives the unit witness") {
    const Descriptor d = make_scalar_algebra(2);
    const WitnessReport r = symmetric_witness_check(zero(d));
    REQUIRE(r.ok);
    CHECK(distance(*r.witness, unit(d)) <= 1e-12);
}

TEST_CASE("symmetric_witness_check: conjugate-transpose algebra always passes") {
    const Descriptor d = make_scalar_algebra(2);
    Rng rng(29);
    for (int i = 0; i < 40; ++i) {
        const Element a = random_element(d, rng);
        const WitnessReport r = symmetric_witness_check(a);
        REQUIRE(r.ok);
        // eigenvalue oracle: smallest eigenvalue of I + a*a is >= 1
        const Element w = add(unit(d), mul(star(a), a));
        CHECK(cd_min_eig_hermitian(flatten(w)) >= 1.0 - 1e-10);
    }
}

TEST_CASE("symmetric_witness_check: swap control witness fails") {
    const Descriptor d = make_swap_algebra();
    // a = (2, -1/2): a*a = (-1, -1) so unit + a*a = (0, 0)
    const Element a = make_swap(d, Complex{2, 0}, Complex{-0.5, 0});
    const Element w = add(unit(d), mul(star(a), a));
    CHECK(norm(w) <= 1e-14);
    const WitnessReport r = symmetric_witness_check(a);
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.detail.empty());
}

TEST_CASE("symmetric_witness_check requires an involution") {
    const Descriptor bare = make_scalar_algebra(2, ScalarNorm::SingularValue, false);
    Rng rng(31);
    CHECK_THROWS_AS(symmetric_witness_check(random_element(bare, rng)), Error);
}
