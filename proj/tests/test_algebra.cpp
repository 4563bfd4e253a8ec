// Norm and involution axioms for every shipped algebra, plus the descriptor
// declarations (embedding constant, involution bound) checked by sampling.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nbinv/algebra.hpp"
#include "nbinv/instances.hpp"
#include "nbinv/matrix.hpp"

#include <cmath>
#include <vector>

using namespace nbinv;

namespace {

std::vector<Descriptor> all_instances() {
    return {
        make_scalar_algebra(1),
        make_scalar_algebra(2),
        make_scalar_algebra(3),
        make_scalar_algebra(2, ScalarNorm::SumModulus),
        make_wiener_algebra(32),
        make_circle_algebra(64),
        make_ht_algebra(16),
        make_swap_algebra(),
        make_matrix_algebra(make_scalar_algebra(2), 2),
    };
}

} // namespace

TEST_CASE("norm axioms hold on random samples") {
    for (const Descriptor& d : all_instances()) {
        CAPTURE(d->name);
        Rng rng(101);
        const Element one = unit(d);
        CHECK(norm(one) >= 1.0 - 1e-12);
        CHECK(norm(zero(d)) == doctest::Approx(0.0));
        for (int i = 0; i < 60; ++i) {
            const Element a = random_element(d, rng);
            const Element b = random_element(d, rng);
            const double na = norm(a);
            const double nb = norm(b);
            CHECK(na >= 0.0);
            // submultiplicative
            CHECK(norm(mul(a, b)) <= na * nb + 1e-9 * (1.0 + na * nb));
            // triangle inequality
            CHECK(norm(add(a, b)) <= na + nb + 1e-9 * (1.0 + na + nb));
            // homogeneity
            const Complex s{-0.7, 1.3};
            CHECK(norm(scale(s, a)) == doctest::Approx(std::abs(s) * na).epsilon(1e-9));
            // faithful: distance to itself is zero
            CHECK(distance(a, a) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("unit is a two-sided identity") {
    for (const Descriptor& d : all_instances()) {
        CAPTURE(d->name);
        Rng rng(17);
        const Element one = unit(d);
        for (int i = 0; i < 10; ++i) {
            const Element a = random_element(d, rng);
            CHECK(distance(mul(a, one), a) <= 1e-12 * (1.0 + norm(a)));
            CHECK(distance(mul(one, a), a) <= 1e-12 * (1.0 + norm(a)));
        }
    }
}

TEST_CASE("involution laws") {
    for (const Descriptor& d : all_instances()) {
        if (!d->has_involution) continue;
        CAPTURE(d->name);
        Rng rng(23);
        for (int i = 0; i < 40; ++i) {
            const Element a = random_element(d, rng);
            const Element b = random_element(d, rng);
            const double scale_ab = 1.0 + norm(a) * norm(b);
            CHECK(distance(star(star(a)), a) <= 1e-10 * (1.0 + norm(a)));
            CHECK(distance(star(mul(a, b)), mul(star(b), star(a))) <= 1e-9 * scale_ab);
            CHECK(distance(star(add(a, b)), add(star(a), star(b))) <=
                  1e-10 * (1.0 + norm(a) + norm(b)));
        }
    }
}

TEST_CASE("declared involution bound dominates sampled ratios") {
    for (const Descriptor& d : all_instances()) {
        if (!d->has_involution) continue;
        CAPTURE(d->name);
        Rng rng(31);
        for (int i = 0; i < 200; ++i) {
            const Element a = random_element(d, rng);
            const double na = norm(a);
            if (na == 0.0) continue;
            CHECK(norm(star(a)) <= d->involution_bound * na * (1.0 + 1e-9));
        }
    }
}

TEST_CASE("ambient embedding constant: J ||a||_A >= ||a||_B") {
    for (const Descriptor& d : all_instances()) {
        if (!d->has_ambient) continue;
        CAPTURE(d->name);
        Rng rng(47);
        for (int i = 0; i < 200; ++i) {
            const Element a = random_element(d, rng);
            CHECK(ambient_norm(a) <=
                  d->embedding_constant * norm(a) * (1.0 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("star without involution is rejected") {
    const Descriptor bare = make_scalar_algebra(2, ScalarNorm::SingularValue,
                                                /*with_involution=*/false);
    Rng rng(3);
    const Element a = random_element(bare, rng);
    CHECK_THROWS_AS(star(a), Error);
    try {
        star(a);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoInvolution);
    }
}

TEST_CASE("flattening is multiplicative where defined") {
    for (const Descriptor& d : {make_scalar_algebra(3), make_swap_algebra(),
                                make_ht_algebra(8),
                                make_matrix_algebra(make_scalar_algebra(2), 2)}) {
        CAPTURE(d->name);
        Rng rng(59);
        for (int i = 0; i < 20; ++i) {
            const Element a = random_element(d, rng);
            const Element b = random_element(d, rng);
            const CDense lhs = flatten(mul(a, b));
            const CDense rhs = cd_mul(flatten(a), flatten(b));
            CHECK(cd_max_abs(cd_sub(lhs, rhs)) <= 1e-10 * (1.0 + cd_max_abs(lhs)));
        }
        // unit flattens to the identity
        CHECK(cd_max_abs(cd_sub(flatten(unit(d)),
                                CDense::identity(flatten_dim(d)))) <= 1e-14);
    }
}

TEST_CASE("unflatten inverts flatten for scalar-backed payloads") {
    for (const Descriptor& d : {make_scalar_algebra(2), make_swap_algebra(),
                                make_matrix_algebra(make_scalar_algebra(2), 2)}) {
        CAPTURE(d->name);
        Rng rng(61);
        const Element a = random_element(d, rng);
        CHECK(distance(unflatten(d, flatten(a)), a) <= 1e-13 * (1.0 + norm(a)));
    }
}

TEST_CASE("instance inversion is two-sided and verified") {
    for (const Descriptor& d : all_instances()) {
        CAPTURE(d->name);
        Rng rng(73);
        const Element one = unit(d);
        // shifted elements are safely invertible in every instance
        for (int i = 0; i < 10; ++i) {
            const Element a =
                add(scale(Complex{4.0, 0.0}, one), random_element(d, rng, 0.1));
            const Element s = invert(a);
            CHECK(distance(mul(a, s), one) <= 2.0 * d->tolerance);
            CHECK(distance(mul(s, a), one) <= 2.0 * d->tolerance);
        }
        CHECK_THROWS_AS(invert(zero(d)), Error);
    }
}

TEST_CASE("same_algebra distinguishes parameters") {
    CHECK(same_algebra(make_scalar_algebra(2), make_scalar_algebra(2)));
    CHECK_FALSE(same_algebra(make_scalar_algebra(2), make_scalar_algebra(3)));
    CHECK_FALSE(same_algebra(make_wiener_algebra(32), make_wiener_algebra(64)));
    CHECK_FALSE(same_algebra(make_scalar_algebra(2), make_swap_algebra()));
    CHECK(same_algebra(make_matrix_algebra(make_scalar_algebra(2), 2),
                       make_matrix_algebra(make_scalar_algebra(2), 2)));
    CHECK_FALSE(same_algebra(make_matrix_algebra(make_scalar_algebra(2), 2),
                             make_matrix_algebra(make_scalar_algebra(1), 2)));
}

TEST_CASE("mixing algebras raises the instance mismatch error") {
    const Descriptor w32 = make_wiener_algebra(32);
    const Descriptor w64 = make_wiener_algebra(64);
    Rng rng(5);
    const Element f = random_element(w32, rng);
    const Element g = random_element(w64, rng);
    try {
        (void)mul(f, g);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegreeMismatch);
    }
    const Descriptor h8 = make_ht_algebra(8);
    const Descriptor h16 = make_ht_algebra(16);
    try {
        (void)mul(random_element(h8, rng), random_element(h16, rng));
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GridMismatch);
    }
}
