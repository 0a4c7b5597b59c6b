#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "chaoskit/criteria.hpp"
#include "chaoskit/families.hpp"
#include "chaoskit/rng.hpp"
#include "chaoskit/runner.hpp"

using namespace ck;

namespace {

SymTensor random_sym(int d, int p, std::uint64_t stream) {
    RawTensor t(d, p);
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = 2.0 * random_uniform(11, stream, i) - 1.0;
    return symmetrize(t);
}

double poly_eval(const std::vector<double>& coeffs, double x) {
    double acc = 0.0;
    for (std::size_t r = coeffs.size(); r-- > 0;) acc = acc * x + coeffs[r];
    return acc;
}

}  // namespace

TEST_CASE("criterion polynomial for a hand-expanded spec") {
    // a != 0, b = {1}: P(x) = x^2 (x - 1) = x^3 - x^2
    const TargetSpec X{1.0, {1.0}, {}};
    const CriterionPolynomial P = build_polynomial(X);
    CHECK(P.degree == 3);
    CHECK(P.a_nonzero);
    CHECK(P.coeffs == std::vector<double>{0.0, 0.0, -1.0, 1.0});
    // weights w_r = coeffs[r] / 2^{r-1}
    CHECK(P.weights[2] == doctest::Approx(-0.5));
    CHECK(P.weights[3] == doctest::Approx(0.25));
    CHECK_FALSE(P.has_repeated_roots);
    // roots: x = 0 twice, then b
    CHECK(P.roots == std::vector<double>{0.0, 0.0, 1.0});
}

TEST_CASE("criterion polynomial vanishes exactly on the spectrum") {
    for (std::uint64_t i = 0; i < 8; ++i) {
        const TargetSpec X = random_target_spec(3, i);
        const CriterionPolynomial P = build_polynomial(X);
        CHECK(P.degree == (X.a != 0.0 ? 2 : 1) + X.k1() + 2 * X.k2());
        for (double b : X.b) CHECK(std::abs(poly_eval(P.coeffs, b)) < 1e-10);
        for (auto [c, d] : X.cd) CHECK(std::abs(poly_eval(P.coeffs, c)) < 1e-10);
        CHECK(poly_eval(P.coeffs, 0.0) == 0.0);
    }
}

TEST_CASE("repeated spectral values are flagged") {
    CHECK(build_polynomial(TargetSpec{0.0, {1.0, 1.0}, {}}).has_repeated_roots);
    CHECK(build_polynomial(TargetSpec{0.0, {0.5}, {{0.5, 1.0}}}).has_repeated_roots);
    CHECK_FALSE(build_polynomial(TargetSpec{0.0, {0.5}, {{0.7, 1.0}}}).has_repeated_roots);
    // the structural double root at each c alone does not count as repetition
    CHECK_FALSE(build_polynomial(TargetSpec{0.0, {}, {{0.7, 1.0}}}).has_repeated_roots);
}

TEST_CASE("elementary symmetric polynomials") {
    const std::vector<double> v{1.0, 2.0, 3.0};
    CHECK(elementary_symmetric(v) == std::vector<double>{1.0, 6.0, 11.0, 6.0});
    CHECK(elementary_symmetric_excluding(v, 1) == std::vector<double>{1.0, 4.0, 3.0});
    CHECK(elementary_symmetric({}) == std::vector<double>{1.0});
}

TEST_CASE("polynomial coefficients match the symmetric-function expansion") {
    // P(x) = x^m prod (x - b_j) prod (x - c_j)^2 expanded through elementary
    // symmetric polynomials of the root multiset
    const TargetSpec X{1.0, {1.3, -0.4}, {{0.9, 1.0}}};
    const CriterionPolynomial P = build_polynomial(X);
    std::vector<double> roots{1.3, -0.4, 0.9, 0.9};
    const std::vector<double> e = elementary_symmetric(roots);
    const int m = 2;  // multiplicity of the root at zero
    for (int r = 0; r <= P.degree; ++r) {
        double want = 0.0;
        const int k = r - m;  // power drawn from the root product
        const int n = int(roots.size());
        if (k >= 0 && k <= n) want = (n - k) % 2 == 0 ? e[std::size_t(n - k)]
                                                      : -e[std::size_t(n - k)];
        CHECK(P.coeffs[std::size_t(r)] == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("the weighted Gamma combination of the exact embedding vanishes") {
    for (std::uint64_t i = 0; i < 10; ++i) {
        const TargetSpec X = random_target_spec(9, i);
        const ChaosVector F = to_chaos(X, SpaceDim(1 + X.k1() + X.k2()));
        const CriterionPolynomial P = build_polynomial(X);
        const ChaosVector combo = gamma_combination(F, P);
        CHECK(mean(combo) == 0.0);  // centred by construction
        CHECK(std::sqrt(variance(combo)) < 1e-9 * std::max(1.0, target_cumulant(X, 2)));
    }
}

TEST_CASE("single-point check passes the exact law and fails a wrong one") {
    const TargetSpec X{0.0, {1.0}, {}};
    const ChaosVector F = to_chaos(X, SpaceDim(2));
    const ConvergenceReport ok = main_theorem_check(F, X);
    CHECK(ok.verdict == "pass");
    CHECK(ok.rows.size() == 1);
    for (double g : ok.rows[0].kappa_gaps) CHECK(g < 1e-9);
    CHECK(ok.rows[0].combo_l2 < 1e-9);

    const TargetSpec wrong{0.0, {1.3}, {}};
    CHECK(main_theorem_check(F, wrong).verdict == "fail");
}

TEST_CASE("fourth-moment family sequence converges with the expected slopes") {
    const Family& fam = family("fourth-moment");
    const auto seq = family_sequence("fourth-moment", {2, 4, 8, 16, 32});
    const ConvergenceReport rep = sequence_check(seq, fam.target);
    CHECK(rep.verdict == "pass(trend)");
    // variance is matched exactly along the family
    for (const ConvergenceRow& row : rep.rows) CHECK(row.kappa_gaps[1] < 1e-12);
    // kappa_4 = 6/n and the combination norm is n^{-1/2}/2
    CHECK(rep.kappa_slopes[3] == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(rep.combo_slope == doctest::Approx(-0.5).epsilon(1e-6));
    CHECK(rep.rows.back().kappa_gaps[3] == doctest::Approx(6.0 / 32.0).epsilon(1e-12));
    CHECK(rep.rows.back().combo_l2 == doctest::Approx(0.5 / std::sqrt(32.0)).epsilon(1e-12));
}

TEST_CASE("sequence_check demands strictly increasing n") {
    const auto seq = family_sequence("fourth-moment", {4, 4});
    CHECK_THROWS_AS((void)sequence_check(seq, family("fourth-moment").target),
                    std::invalid_argument);
}

TEST_CASE("log-log slope fitting") {
    // value = 3 n^{-1/2} exactly
    std::vector<double> ns{2, 4, 8, 16}, vals;
    for (double n : ns) vals.push_back(3.0 / std::sqrt(n));
    CHECK(loglog_slope(ns, vals) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::isnan(loglog_slope({2}, {1.0})));
    CHECK(std::isnan(loglog_slope({2, 4}, {0.0, 0.0})));  // nonpositive values skipped
}

TEST_CASE("contraction constants c_p") {
    // c_p = 2 (p/2)! C(p-1, p/2-1)^2
    const TargetSpec gauss{1.0, {}, {}};
    CHECK(sufficient_contraction_check(random_sym(3, 2, 1), gauss).c_p == doctest::Approx(2.0));
    CHECK(sufficient_contraction_check(random_sym(3, 4, 2), gauss).c_p == doctest::Approx(36.0));
    CHECK(sufficient_contraction_check(random_sym(2, 6, 3), gauss).c_p ==
          doctest::Approx(2.0 * 6.0 * 100.0));
}

TEST_CASE("chi-square fixed point: both statistics vanish exactly") {
    // f = (1/18) e^{x4}: f ~x_2 f = (2/36) f and the weighted combination is 0
    const std::vector<double> e{1.0, 0.0};
    const SymTensor f = (1.0 / 18.0) * SymTensor::rank_one(2, e, 4);
    const ChiSquareReport rep = chi_square_check(f, 1);
    CHECK(rep.c_p == doctest::Approx(36.0));
    CHECK(rep.b2_statistic == 0.0);
    CHECK(rep.combo_statistic == 0.0);
    CHECK(rep.sides_agree);

    // perturbing the kernel moves both statistics off zero together
    const SymTensor g = f + 0.05 * random_sym(2, 4, 4);
    const ChiSquareReport bad = chi_square_check(g, 1);
    CHECK(bad.b2_statistic > 1e-4);
    CHECK(bad.combo_statistic > 1e-4);
    CHECK(bad.sides_agree);
}

TEST_CASE("C_l statistics: count, homogeneity and the fixed-point scaling") {
    const SymTensor f = random_sym(2, 4, 5);
    const ClReport rep = remark_Cl_check(f, 0.7, 1.1);
    // even l in [2, 3p-4] = [2, 8]
    REQUIRE(rep.statistics.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) CHECK(rep.statistics[i].first == 2 + 2 * int(i));
    // independent of a
    const ClReport rep2 = remark_Cl_check(f, -3.0, 1.1);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(rep.statistics[i].second == doctest::Approx(rep2.statistics[i].second));
    // scaling f -> s f, b -> s b multiplies every statistic by s^3
    const double s = 1.7;
    const ClReport scaled = remark_Cl_check(s * f, 0.7, s * 1.1);
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(scaled.statistics[i].second ==
              doctest::Approx(s * s * s * rep.statistics[i].second).epsilon(1e-12));
}

TEST_CASE("stable-convergence statistics obey the chain inequality") {
    const SymTensor g = random_sym(3, 3, 6);
    std::vector<double> e{1.0, 0.0, 0.0};
    const SymTensor f = SymTensor::basis(3, 0);
    const StableKernelReport rep = stable_kernel_stats(g, f);
    CHECK(rep.chain_lhs == doctest::Approx(rep.gf_norm * rep.gf_norm).epsilon(1e-12));
    CHECK(rep.chain_lhs == doctest::Approx(rep.chain_mid).epsilon(1e-10));
    CHECK(rep.chain_mid <= rep.chain_rhs + 1e-12);
    CHECK(rep.chain_rhs == doctest::Approx(rep.g_pm1_norm).epsilon(1e-12));  // ||f|| = 1
    CHECK_THROWS_AS((void)stable_kernel_stats(g, 2.0 * f), std::invalid_argument);
}

TEST_CASE("disjoint-block third-chaos kernels: the trace norm is n^{-1/2}") {
    for (int n : {2, 5, 10}) {
        const ChaosVector G = family("stable-block").make(n);
        const SymTensor& g = G.kernel(3);
        const SymTensor f = SymTensor::basis(g.dim(), 0);
        const StableKernelReport rep = stable_kernel_stats(g, f);
        CHECK(rep.g_pm1_norm == doctest::Approx(1.0 / std::sqrt(double(n))).epsilon(1e-12));
    }
}

TEST_CASE("mixed-chaos statistic collapses to the single-kernel form") {
    // F = I_p(g): total = p^2 (p-1)! ||g ~x_1 f||^2, no cross term
    const SymTensor g = random_sym(3, 3, 7);
    const SymTensor f = SymTensor::basis(3, 1);
    ChaosVector F(3);
    F.set_kernel(3, g);
    const MixedStableReport rep = mixed_chaos_stable_stats(F, f);
    CHECK(rep.cross_term == 0.0);
    const double want = 9.0 * 2.0 * std::pow(norm(sym_contract(g, f, 1)), 2);
    CHECK(rep.total == doctest::Approx(want).epsilon(1e-11));
    CHECK(rep.total == doctest::Approx(rep.pairing_second_moment).epsilon(1e-12));
}

TEST_CASE("feasibility gate on the worked example") {
    const std::vector<double> c{1.0, -2.0, -1.0, 4.0, -5.0, -2.0};
    const std::vector<double> d(6, 1.0);
    const FeasibilityVerdict v = feasibility_gate(c, d);
    CHECK(v.excluded);
    REQUIRE(v.blocks.size() == 4);
    CHECK(v.blocks[0] == std::vector<int>{1, 3});
    CHECK(v.blocks[1] == std::vector<int>{2, 6});
    CHECK(v.blocks[2] == std::vector<int>{4});
    CHECK(v.blocks[3] == std::vector<int>{5});
    CHECK(v.failed_conditions == std::vector<int>{2, 3});
}

TEST_CASE("feasibility gate admits balanced configurations") {
    const FeasibilityVerdict ok = feasibility_gate({1.0, -1.0}, {0.7, 0.7});
    CHECK_FALSE(ok.excluded);
    CHECK(ok.beta == std::vector<int>{1});
    CHECK(ok.gamma_counts == std::vector<int>{1});

    // odd count fails condition 1
    CHECK(feasibility_gate({1.0, -1.0, 2.0}, {1.0, 1.0, 1.0}).excluded);
    const auto odd = feasibility_gate({1.0, -1.0, 2.0}, {1.0, 1.0, 1.0});
    CHECK(std::find(odd.failed_conditions.begin(), odd.failed_conditions.end(), 1) !=
          odd.failed_conditions.end());

    // unbalanced d mass fails condition 3
    const auto mass = feasibility_gate({1.0, -1.0}, {0.7, 0.7 * (1.0 + 1e-3)});
    CHECK(mass.excluded);
    CHECK(mass.failed_conditions == std::vector<int>{3});
}

TEST_CASE("correlated feasibility gate adds the variance-mass condition") {
    const CorrelatedSpec ok{1.0, {1.0, -1.0}, {0.1, 0.1}};
    CHECK_FALSE(correlated_feasibility_gate(ok).excluded);

    // positive-side sigma^2 mass at least 1/2 fails condition 4
    const CorrelatedSpec heavy{1.0, {1.0, -1.0}, {0.75, 0.3}};
    const FeasibilityVerdict v = correlated_feasibility_gate(heavy);
    CHECK(v.excluded);
    CHECK(std::find(v.failed_conditions.begin(), v.failed_conditions.end(), 4) !=
          v.failed_conditions.end());

    const CorrelatedSpec bad{1.0, {1.0, -1.0}, {0.8, 0.8}};
    CHECK_THROWS_AS((void)correlated_feasibility_gate(bad), std::invalid_argument);
}

TEST_CASE("rearranged CF identity holds on a grid, including repeated roots") {
    const std::vector<TargetSpec> specs{
        {0.5, {1.0, -0.7}, {{0.8, 1.2}, {-0.6, 0.4}}},
        {0.0, {1.3, 1.3, 0.7}, {}},           // repeated b values
        {1.0, {}, {{0.5, 2.0}, {0.5, -1.0}}}  // repeated c values
    };
    for (const TargetSpec& X : specs) {
        CHECK(appendix_identity_residual(X, 0.0) == 0.0);
        for (int k = 0; k <= 100; ++k) {
            const double x = -5.0 + 0.1 * k;
            CHECK(appendix_identity_residual(X, x) < 1e-9);
        }
    }
}
