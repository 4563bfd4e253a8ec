// Concrete algebra instances: Wiener arithmetic and inversion, discretized
// integral-operator kernels, unitized inversion, the swap control, and the
// inessential-membership proxies.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nbinv/fft.hpp"
#include "nbinv/instances.hpp"
#include "nbinv/matrix.hpp"

#include <cmath>

using namespace nbinv;

namespace {

Element wiener_monomial(const Descriptor& d, long q, Complex coeff) {
    std::vector<Complex> c(2 * d->degree + 1, Complex{0, 0});
    c[static_cast<std::size_t>(q + static_cast<long>(d->degree))] = coeff;
    return make_wiener(d, c);
}

} // namespace

// --- wiener ------------------------------------------------------------------

TEST_CASE("wiener_mul: unit, shift cancellation, grid evaluation") {
    const Descriptor d = make_wiener_algebra(64);
    Rng rng(3);
    const Element f = random_element(d, rng);
    CHECK(distance(wiener_mul(f, unit(d)), f) <= 1e-14);

    // e^{it} * e^{-it} = 1
    const Element plus = wiener_monomial(d, 1, {1, 0});
    const Element minus = wiener_monomial(d, -1, {1, 0});
    CHECK(distance(wiener_mul(plus, minus), unit(d)) <= 1e-15);

    // evaluation is multiplicative up to the truncation tail
    const Element g = random_element(d, rng);
    const Element fg = wiener_mul(f, g);
    const auto vf = wiener_values(f, 1024);
    const auto vg = wiener_values(g, 1024);
    const auto vfg = wiener_values(fg, 1024);
    double worst = 0.0;
    for (std::size_t i = 0; i < vf.size(); ++i)
        worst = std::max(worst, std::abs(vfg[i] - vf[i] * vg[i]));
    CHECK(worst <= 1e-8 * (1.0 + norm(f) * norm(g)));
}

TEST_CASE("wiener_inverse: constants and the geometric-series function") {
    const Descriptor d = make_wiener_algebra(64);
    const Element two = scale(Complex{2, 0}, unit(d));
    CHECK(distance(wiener_inverse(two, 1e-10), scale(Complex{0.5, 0}, unit(d))) <= 1e-12);

    // f = 2 + e^{it}: 1/f has coefficients (-1)^q / 2^{q+1} for q >= 0
    const Element f = add(two, wiener_monomial(d, 1, {1, 0}));
    const Element g = wiener_inverse(f, 1e-8);
    for (long q = 0; q <= 10; ++q) {
        const double expected = ((q % 2 == 0) ? 1.0 : -1.0) / std::pow(2.0, q + 1);
        CHECK(std::abs(wiener_coefficient(g, q) - Complex{expected, 0}) <= 1e-8);
    }
    for (long q = -10; q < 0; ++q)
        CHECK(std::abs(wiener_coefficient(g, q)) <= 1e-10);
}

TEST_CASE("wiener_inverse: functions vanishing on the circle are rejected") {
    const Descriptor d = make_wiener_algebra(64);
    const Element f = sub(unit(d), wiener_monomial(d, 1, {1, 0})); // 1 - e^{it}
    try {
        (void)wiener_inverse(f, 1e-8);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotInvertible);
    }
}

TEST_CASE("wiener embedding: sup norm never exceeds the coefficient norm") {
    const Descriptor d = make_wiener_algebra(32);
    Rng rng(7);
    for (int i = 0; i < 1000; ++i) {
        const Element f = random_element(d, rng);
        CHECK(ambient_norm(f) <= norm(f) * (1.0 + 1e-12) + 1e-12);
    }
}

// --- hille-tamarkin kernels -----------------------------------------------------

TEST_CASE("ht_compose: zero kernel and the rank-one idempotent") {
    const Descriptor d = make_ht_algebra(16);
    Rng rng(11);
    const HtKernel k = ht_kernel_part(random_element(d, rng));
    HtKernel zero_kernel{d->grid, d->weights,
                         std::vector<Complex>(d->grid * d->grid, Complex{0, 0})};
    const HtKernel kz = ht_compose(k, zero_kernel);
    CHECK(ht_kernel_norm(kz) <= 1e-15);

    // constant kernel 1 with weights summing to one: K o K = K
    HtKernel ones{d->grid, d->weights,
                  std::vector<Complex>(d->grid * d->grid, Complex{1, 0})};
    const HtKernel sq = ht_compose(ones, ones);
    double diff = 0.0;
    for (std::size_t i = 0; i < sq.samples.size(); ++i)
        diff = std::max(diff, std::abs(sq.samples[i] - ones.samples[i]));
    CHECK(diff <= 1e-12);
}

TEST_CASE("ht_compose matches operator application") {
    const Descriptor d = make_ht_algebra(16);
    Rng rng(13);
    const HtKernel k1 = ht_kernel_part(random_element(d, rng));
    const HtKernel k2 = ht_kernel_part(random_element(d, rng));
    std::vector<Complex> f(d->grid);
    for (auto& v : f) v = rng.gaussian_complex();
    const auto composed = ht_apply(ht_compose(k1, k2), f);
    const auto chained = ht_apply(k1, ht_apply(k2, f));
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i)
        worst = std::max(worst, std::abs(composed[i] - chained[i]));
    CHECK(worst <= 1e-12 * (1.0 + ht_kernel_norm(k1) * ht_kernel_norm(k2)));
}

TEST_CASE("ht kernel norm is submultiplicative under composition") {
    const Descriptor d = make_ht_algebra(24);
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        const HtKernel k1 = ht_kernel_part(random_element(d, rng));
        const HtKernel k2 = ht_kernel_part(random_element(d, rng));
        CHECK(ht_kernel_norm(ht_compose(k1, k2)) <=
              ht_kernel_norm(k1) * ht_kernel_norm(k2) + 1e-12);
    }
}

TEST_CASE("ht_compose rejects mismatched grids") {
    const Descriptor d1 = make_ht_algebra(8);
    const Descriptor d2 = make_ht_algebra(16);
    Rng rng(19);
    const HtKernel k1 = ht_kernel_part(random_element(d1, rng));
    const HtKernel k2 = ht_kernel_part(random_element(d2, rng));
    try {
        (void)ht_compose(k1, k2);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GridMismatch);
    }
}

TEST_CASE("ht_unitized_inverse: unit, Neumann series, zero scalar part") {
    const Descriptor d = make_ht_algebra(16);
    CHECK(distance(ht_unitized_inverse(unit(d), 1e-10), unit(d)) <= 1e-12);

    // c = 1, |||K||| ~ 0.3: the inverse kernel is -K + K o K - ...
    Rng rng(23);
    Element raw = random_element(d, rng);
    HtKernel k = ht_kernel_part(raw);
    const double target = 0.3 / std::max(ht_kernel_norm(k), 1e-12);
    for (auto& v : k.samples) v *= target;
    const Element u = make_ht(d, Complex{1, 0}, k);
    const Element inv = ht_unitized_inverse(u, 1e-10);
    CHECK(std::abs(ht_scalar_part(inv) - Complex{1, 0}) <= 1e-12);
    // series cross-check
    HtKernel term = k;
    HtKernel series{d->grid, d->weights,
                    std::vector<Complex>(d->grid * d->grid, Complex{0, 0})};
    double sign = -1.0;
    for (int j = 0; j < 40; ++j) {
        for (std::size_t i = 0; i < series.samples.size(); ++i)
            series.samples[i] += sign * term.samples[i];
        term = ht_compose(term, k);
        sign = -sign;
        if (ht_kernel_norm(term) < 1e-14) break;
    }
    const HtKernel kinv = ht_kernel_part(inv);
    double diff = 0.0;
    for (std::size_t i = 0; i < series.samples.size(); ++i)
        diff = std::max(diff, std::abs(series.samples[i] - kinv.samples[i]));
    CHECK(diff <= 1e-9);

    // c = 0 cannot be represented in the unitized algebra
    const Element no_scalar = make_ht(d, Complex{0, 0}, ht_kernel_part(raw));
    try {
        (void)ht_unitized_inverse(no_scalar, 1e-8);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::ZeroScalarPart);
    }
}

TEST_CASE("ht involution laws hold on the uniform grid") {
    const Descriptor d = make_ht_algebra(16);
    Rng rng(29);
    const Element a = random_element(d, rng);
    const Element b = random_element(d, rng);
    CHECK(distance(star(star(a)), a) <= 1e-12 * (1.0 + norm(a)));
    CHECK(distance(star(mul(a, b)), mul(star(b), star(a))) <=
          1e-10 * (1.0 + norm(a) * norm(b)));
}

// --- swap control ----------------------------------------------------------------

TEST_CASE("swap algebra: componentwise arithmetic and the non-symmetry witness") {
    const Descriptor d = make_swap_algebra();
    const Element a = make_swap(d, {2, 0}, {-0.5, 0});
    const Element aa = mul(star(a), a);
    // a* = (-1/2, 2), so a* a = (-1, -1)
    CHECK(distance(aa, scale(Complex{-1, 0}, unit(d))) <= 1e-15);
    CHECK(norm(add(unit(d), aa)) <= 1e-15);
    CHECK_FALSE(d->is_symmetric);
}

// --- inessential proxies -----------------------------------------------------------

TEST_CASE("inessential_proxy: instance-specific membership") {
    const Descriptor scalar3 = make_scalar_algebra(3);
    const Descriptor wiener = make_wiener_algebra(16);
    const Descriptor ht = make_ht_algebra(8);
    Rng rng(31);

    // zero is inessential everywhere
    CHECK(inessential_proxy(scalar3, zero(scalar3)));
    CHECK(inessential_proxy(wiener, zero(wiener)));
    CHECK(inessential_proxy(ht, zero(ht)));

    // finite dimension: every element passes
    CHECK(inessential_proxy(scalar3, random_element(scalar3, rng)));

    // conservative proxy on the function algebra: nonzero fails
    CHECK_FALSE(inessential_proxy(wiener, unit(wiener)));
    CHECK_FALSE(inessential_proxy(wiener, random_element(wiener, rng)));

    // kernels with no scalar part behave like compact operators
    const Element pure_kernel =
        make_ht(ht, Complex{0, 0}, ht_kernel_part(random_element(ht, rng)));
    CHECK(inessential_proxy(ht, pure_kernel));
    CHECK_FALSE(inessential_proxy(ht, unit(ht)));
}

// --- scalar norms -------------------------------------------------------------------

TEST_CASE("scalar norms: largest singular value vs sum of moduli") {
    const Descriptor sigma = make_scalar_algebra(2);
    const Descriptor sum = make_scalar_algebra(2, ScalarNorm::SumModulus);
    const std::vector<Complex> payload{{3, 0}, {0, 0}, {0, 0}, {0, 4}};
    CHECK(norm(make_scalar(sigma, payload)) == doctest::Approx(4.0));
    CHECK(norm(make_scalar(sum, payload)) == doctest::Approx(7.0));
    CHECK(norm(unit(sigma)) == doctest::Approx(1.0));
    CHECK(norm(unit(sum)) == doctest::Approx(2.0));
}
