// Acceptance suite. Each numbered criterion runs at its stated size and
// tolerance and prints exactly one PASS/FAIL line; the exit code is the
// number of failed criteria.

#include "nbinv/experiments.hpp"
#include "nbinv/instances.hpp"
#include "nbinv/serialize.hpp"
#include "nbinv/suite.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace nbinv;

namespace {

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << index << ": "
              << name;
    if (!detail.empty()) std::cout << "  (" << detail << ")";
    std::cout << std::endl;
    if (!pass) ++g_failures;
}

constexpr std::uint64_t kSeed = 20260810;

double cert_residual(const InversionCertificate& c) {
    return std::max(c.residual_left, c.residual_right);
}

// 1. Oracle equivalence along the recursive elimination path:
//    200 random invertible T in M_n(M_k(C)), n in {2,3,4}, k in {1,2,3}.
void criterion_1() {
    const std::size_t ns[] = {2, 3, 4};
    const std::size_t ks[] = {1, 2, 3};
    std::size_t failures = 0;
    double worst_resid = 0.0, worst_dist = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = ns[trial % 3];
        const std::size_t k = ks[(trial / 3) % 3];
        const Descriptor d = make_scalar_algebra(k);
        Rng rng(derive_seed(kSeed, "acc1", trial));
        try {
            const Matrix t = random_invertible_matrix(d, n, rng);
            const InversionCertificate c = thm6_invert(t, InessentialMask::full(n));
            const Matrix o = oracle_invert(t);
            const double resid = cert_residual(c);
            const double dist = mat_distance(c.inverse, o) / (1.0 + mat_norm(o));
            worst_resid = std::max(worst_resid, resid);
            worst_dist = std::max(worst_dist, dist);
            if (resid > 1e-8 || dist > 1e-6) ++failures;
        } catch (const Error&) {
            ++failures;
        }
    }
    std::ostringstream detail;
    detail << "200 trials, worst residual " << worst_resid << ", worst oracle distance "
           << worst_dist;
    report(1, "thm6 path matches the oracle on random invertible matrices",
           failures == 0, detail.str());
}

// 2. 2x2 closure path with a forced-singular (1,1) entry: 500 trials over
//    M_2(C), residual <= 1e-6 through interchange/approximation.
void criterion_2() {
    const Descriptor d = make_scalar_algebra(2);
    std::size_t failures = 0;
    std::size_t interchanges = 0, limits = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        Matrix t(d, 2);
        // redraw until the matrix with its rank-one corner stays honestly
        // invertible, so all 500 trials run
        for (int attempt = 0;; ++attempt) {
            Rng rng(derive_seed(kSeed, "acc2", trial * 97 + attempt));
            t = random_invertible_matrix(d, 2, rng);
            std::vector<Complex> rank_one(4);
            const Complex u0 = rng.gaussian_complex(), u1 = rng.gaussian_complex();
            const Complex v0 = rng.gaussian_complex(), v1 = rng.gaussian_complex();
            rank_one[0] = u0 * v0;
            rank_one[1] = u0 * v1;
            rank_one[2] = u1 * v0;
            rank_one[3] = u1 * v1;
            t.set(0, 0, make_scalar(d, rank_one));
            if (ambient_smallest_singular(t) >= 1e-3) break;
        }
        try {
            PivotStrategy strategy;
            strategy.tolerance = 1e-6;
            const InversionCertificate c = prop4_invert_2x2(t, strategy);
            worst = std::max(worst, cert_residual(c));
            if (cert_residual(c) > 1e-6 || c.path == InversionPath::Direct) ++failures;
            if (c.path == InversionPath::Interchange) ++interchanges;
            if (c.path == InversionPath::PerturbedLimit) ++limits;
        } catch (const Error&) {
            ++failures;
        }
    }
    std::ostringstream detail;
    detail << interchanges << " interchange / " << limits
           << " perturbed-limit paths, worst residual " << worst;
    report(2, "singular pivots recover through interchange or approximation",
           failures == 0, detail.str());
}

// 3. Triangular identity s12 = -s11 t12 s22: 200 random upper-triangular 2x2.
void criterion_3() {
    std::size_t failures = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t k = 1 + (trial % 3);
        const Descriptor d = make_scalar_algebra(k);
        Rng rng(derive_seed(kSeed, "acc3", trial));
        Matrix t = random_matrix(d, 2, rng);
        t.set(1, 0, zero(d));
        t.set(0, 0, add(scale(Complex{2.5, 0}, unit(d)), t.at(0, 0)));
        t.set(1, 1, add(scale(Complex{-2.5, 0}, unit(d)), t.at(1, 1)));
        try {
            const Matrix s = invert_upper_triangular(t);
            const Element identity_gap =
                add(s.at(0, 1), mul(s.at(0, 0), mul(t.at(0, 1), s.at(1, 1))));
            worst = std::max(worst, norm(identity_gap));
            if (norm(identity_gap) > 1e-10) ++failures;
        } catch (const Error&) {
            ++failures;
        }
    }
    std::ostringstream detail;
    detail << "worst |s12 + s11 t12 s22| = " << worst;
    report(3, "triangular inverses satisfy the off-diagonal identity",
           failures == 0, detail.str());
}

// 4. Spectral radius agreement between the coefficient and sup norms:
//    50 random 2x2 trig-polynomial matrices, n_max = 1024, 5% envelope.
void criterion_4() {
    const Descriptor d = make_wiener_algebra(64);
    std::size_t failures = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Rng rng(derive_seed(kSeed, "acc4", trial));
        const Matrix t = random_matrix(d, 2, rng, 0.25);
        try {
            const SpectralReport r = check_srp_matrix_lift(t, 1024);
            const double radius = std::max(r.radius, r.ambient_radius.value_or(0.0));
            const double rel = r.discrepancy() / std::max(1.0, radius);
            worst = std::max(worst, rel);
            if (r.discrepancy() > 0.05 * std::max(1.0, radius)) ++failures;
        } catch (const Error&) {
            ++failures;
        }
    }
    std::ostringstream detail;
    detail << "worst relative discrepancy " << worst;
    report(4, "matrix spectral radius agrees across the embedding", failures == 0,
           detail.str());
}

// 5. Symmetry lifts to matrices: 100 random T over M_2(C) with n <= 4 give
//    min eig(I + T*T) >= 1 - 1e-10; the swap control records a failure.
void criterion_5() {
    const Descriptor d = make_scalar_algebra(2);
    std::size_t failures = 0;
    double worst = 2.0;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 2 + (trial % 3);
        Rng rng(derive_seed(kSeed, "acc5", trial));
        const Matrix t = random_matrix(d, n, rng);
        const Matrix w =
            mat_add(Matrix::identity(d, n), mat_mul(mat_star(t), t));
        const double min_eig = cd_min_eig_hermitian(mat_flatten(w));
        worst = std::min(worst, min_eig);
        if (min_eig < 1.0 - 1e-10) ++failures;
    }
    std::size_t control_failures = 0;
    for (const auto& o : check_symmetric_lift(make_swap_algebra(), 2, 4, kSeed))
        if (!o.pass) ++control_failures;
    std::ostringstream detail;
    detail << "min eigenvalue " << worst << ", control failures " << control_failures;
    report(5, "I + T*T stays invertible over the *-closed blocks; control trips",
           failures == 0 && control_failures >= 1, detail.str());
}

// 6. Hermitian inversion through padding and nesting: 100 random hermitian
//    invertible 3x3 over M_2(C); padding preserves invertibility both ways.
void criterion_6() {
    const Descriptor d = make_scalar_algebra(2);
    std::size_t failures = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(derive_seed(kSeed, "acc6", trial));
        try {
            const Matrix t = random_hermitian_invertible(d, 3, rng);
            const InversionCertificate c = invert_hermitian_symmetric(t);
            const Matrix o = oracle_invert(t);
            const double dist = mat_distance(c.inverse, o) / (1.0 + mat_norm(o));
            worst = std::max(worst, std::max(dist, cert_residual(c)));
            if (cert_residual(c) > 1e-8 || dist > 1e-8) ++failures;

            // invertibility across the padding, in both directions
            const Matrix padded = pad_matrix(t, 4);
            const Matrix pad_inv = oracle_invert(padded); // invertible forward
            if (mat_distance(unpad_matrix(pad_inv, 3), o) > 1e-8 * (1.0 + mat_norm(o)))
                ++failures;
            Matrix singular = t;
            for (std::size_t j = 0; j < 3; ++j) singular.set(0, j, zero(d));
            for (std::size_t j = 0; j < 3; ++j) singular.set(j, 0, zero(d));
            bool caught_plain = false, caught_padded = false;
            try {
                (void)oracle_invert(singular);
            } catch (const Error&) {
                caught_plain = true;
            }
            try {
                (void)oracle_invert(pad_matrix(singular, 4));
            } catch (const Error&) {
                caught_padded = true;
            }
            if (!caught_plain || !caught_padded) ++failures;
        } catch (const Error&) {
            ++failures;
        }
    }
    std::ostringstream detail;
    detail << "worst residual/distance " << worst;
    report(6, "hermitian pad-and-nest inversion matches the oracle", failures == 0,
           detail.str());
}

// 7. Wiener inversion: explicit coefficients for 1/(2 + e^{it}); the function
//    1 - e^{it} is rejected.
void criterion_7() {
    const Descriptor d = make_wiener_algebra(64);
    bool pass = true;
    std::string detail;
    try {
        std::vector<Complex> coeffs(129, Complex{0, 0});
        coeffs[64] = Complex{2, 0};
        coeffs[65] = Complex{1, 0};
        const Element f = make_wiener(d, coeffs);
        const Element g = wiener_inverse(f, 1e-8);
        double worst = 0.0;
        for (long q = 0; q <= 10; ++q) {
            const double expected = ((q % 2 == 0) ? 1.0 : -1.0) / std::pow(2.0, q + 1);
            worst = std::max(worst,
                             std::abs(wiener_coefficient(g, q) - Complex{expected, 0}));
        }
        if (worst > 1e-8) pass = false;
        std::ostringstream ss;
        ss << "worst coefficient error " << worst;
        detail = ss.str();

        std::vector<Complex> bad(129, Complex{0, 0});
        bad[64] = Complex{1, 0};
        bad[65] = Complex{-1, 0};
        bool rejected = false;
        try {
            (void)wiener_inverse(make_wiener(d, bad), 1e-8);
        } catch (const Error& e) {
            rejected = e.code() == ErrorCode::NotInvertible;
        }
        if (!rejected) pass = false;
    } catch (const Error& e) {
        pass = false;
        detail = e.what();
    }
    report(7, "explicit trig-polynomial inversion and rejection", pass, detail);
}

// 8. Kernel algebra: composition submultiplicative at grid 128; dominant
//    unitized elements invert with the exact reciprocal scalar part.
void criterion_8() {
    const Descriptor d = make_ht_algebra(128);
    std::size_t failures = 0;
    double worst_gap = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(derive_seed(kSeed, "acc8a", trial));
        const HtKernel k1 = ht_kernel_part(random_element(d, rng));
        const HtKernel k2 = ht_kernel_part(random_element(d, rng));
        const double lhs = ht_kernel_norm(ht_compose(k1, k2));
        const double rhs = ht_kernel_norm(k1) * ht_kernel_norm(k2);
        worst_gap = std::max(worst_gap, lhs - rhs);
        if (lhs > rhs + 1e-12) ++failures;
    }
    double worst_resid = 0.0, worst_scalar = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Rng rng(derive_seed(kSeed, "acc8b", trial));
        HtKernel k = ht_kernel_part(random_element(d, rng));
        const Complex c{1.5 + rng.uniform(), rng.uniform() - 0.5};
        // |c| > |||K|||: scale the kernel under the scalar part
        const double target = 0.8 * std::abs(c) / std::max(ht_kernel_norm(k), 1e-12);
        for (auto& v : k.samples) v *= target;
        const Element u = make_ht(d, c, k);
        try {
            const Element inv = ht_unitized_inverse(u, 1e-8);
            const Element one = unit(d);
            const double resid = std::max(distance(mul(u, inv), one),
                                          distance(mul(inv, u), one));
            const double scalar_err =
                std::abs(ht_scalar_part(inv) - Complex{1.0, 0.0} / c);
            worst_resid = std::max(worst_resid, resid);
            worst_scalar = std::max(worst_scalar, scalar_err);
            if (resid > 1e-8 || scalar_err > 1e-10) ++failures;
        } catch (const Error&) {
            ++failures;
        }
    }
    bool zero_rejected = false;
    try {
        Rng rng(derive_seed(kSeed, "acc8c", 0));
        (void)ht_unitized_inverse(
            make_ht(d, Complex{0, 0}, ht_kernel_part(random_element(d, rng))), 1e-8);
    } catch (const Error& e) {
        zero_rejected = e.code() == ErrorCode::ZeroScalarPart;
    }
    std::ostringstream detail;
    detail << "worst submult gap " << worst_gap << ", worst residual " << worst_resid
           << ", worst scalar error " << worst_scalar;
    report(8, "kernel composition and unitized inversion", failures == 0 && zero_rejected,
           detail.str());
}

// 9. Inverse-closedness scanner: 1000 randomized trials across the shipped
//    instance pairs at n in {2,3}, zero failures at tolerance 1e-6.
void criterion_9() {
    SuiteConfig cfg;
    cfg.seed = kSeed;
    cfg.suites = {"inverse_closed"};
    cfg.trials["inverse_closed"] = 1000;
    const SuiteResult result = run_suite(cfg, "");
    double worst = 0.0;
    std::uint64_t worst_seed = 0;
    std::size_t trials = 0;
    for (const auto& row : result.rows) {
        trials += row.trials;
        if (row.worst_residual > worst) {
            worst = row.worst_residual;
            worst_seed = row.seed_of_worst;
        }
    }
    std::ostringstream detail;
    detail << trials << " trials, " << result.failures
           << " failures, worst residual " << worst << " (seed " << worst_seed << ")";
    report(9, "inverse-closedness scanner records zero failures", result.failures == 0,
           detail.str());
}

// 10. Harness contract: default suite exits 0, strict control run exits 1,
//     malformed config exits 2, serialization round-trips byte-identically.
void criterion_10() {
#ifdef NBINV_CLI_PATH
    const std::string cli = NBINV_CLI_PATH;
#else
    const std::string cli = "./nbinv";
#endif
    namespace fs = std::filesystem;
    const std::string dir = "/tmp/nbinv-acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);

    auto run = [&](const std::string& args) {
        const std::string cmd = cli + " " + args + " >" + dir + "/stdout.txt 2>" +
                                dir + "/stderr.txt";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    };

    bool pass = true;
    std::ostringstream detail;

    const int default_suite = run("suite --out " + dir + "/default");
    if (default_suite != 0) pass = false;
    detail << "default suite exit " << default_suite;

    {
        std::ofstream strict(dir + "/strict.json");
        strict << R"({"suites": ["symmetry"], "strict_control": true,
                      "trials": {"symmetry": 8}, "scalar_dims": [2], "ht_grid": 8})";
    }
    const int strict_run =
        run("suite --config " + dir + "/strict.json --out " + dir + "/strict");
    if (strict_run != 1) pass = false;
    detail << ", strict exit " << strict_run;

    {
        std::ofstream bad(dir + "/bad.json");
        bad << R"({"suites": ["symmetry"], "unknown_knob": true})";
    }
    const int bad_run = run("suite --config " + dir + "/bad.json --out " + dir + "/bad");
    if (bad_run != 2) pass = false;
    detail << ", malformed-config exit " << bad_run;

    const int empty_run = run("suite --config /dev/null --out " + dir + "/empty");
    if (empty_run != 2) pass = false;
    detail << ", empty-config exit " << empty_run;

    if (!fs::exists(dir + "/default/outcomes.jsonl") ||
        !fs::exists(dir + "/default/summary.csv"))
        pass = false;

    {
        std::ofstream small(dir + "/small.json");
        small << R"({"suites": ["involution_bound"], "trials": {"involution_bound": 5},
                     "scalar_dims": [2], "ht_grid": 8})";
    }
    const int csv_run = run("suite --config " + dir + "/small.json --out " + dir +
                            "/csv --format csv");
    if (csv_run != 0) pass = false;
    std::ifstream csv_out(dir + "/stdout.txt");
    std::string first_line;
    std::getline(csv_out, first_line);
    if (first_line.rfind("property,trials,passes", 0) != 0) pass = false;
    detail << ", csv-format exit " << csv_run;

    // serialization round trip, byte-identical on scalar-backed payloads
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(derive_seed(kSeed, "acc10", trial));
        const Descriptor d = make_scalar_algebra(1 + trial % 3);
        const Matrix t = random_matrix(d, 2 + trial % 2, rng);
        const std::string once = matrix_to_string(t);
        const std::string twice = matrix_to_string(matrix_from_string(once));
        if (once != twice) ++mismatches;
    }
    if (mismatches != 0) pass = false;
    detail << ", round-trip mismatches " << mismatches;

    report(10, "harness exit codes and byte-identical round trips", pass, detail.str());
}

} // namespace

int main() {
    unsetenv("NBINV_SEED"); // criteria run at their pinned seeds
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    std::cout << (g_failures == 0 ? "all criteria passed"
                                  : std::to_string(g_failures) + " criteria failed")
              << std::endl;
    return g_failures;
}
