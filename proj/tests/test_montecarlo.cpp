#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "chaoskit/criteria.hpp"
#include "chaoskit/montecarlo.hpp"
#include "chaoskit/rng.hpp"

using namespace ck;

namespace {

SymTensor random_sym(int d, int p, std::uint64_t stream) {
    RawTensor t(d, p);
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = 2.0 * random_uniform(13, stream, i) - 1.0;
    return symmetrize(t);
}

McConfig quick(std::size_t n, std::uint64_t seed = 1) {
    McConfig cfg;
    cfg.N = n;
    cfg.seed = seed;
    return cfg;
}

}  // namespace

TEST_CASE("Hermite evaluation on hand-computed expansions") {
    // I_2(e0 x e0)(x) = x^2 - 1
    ChaosVector F(2, 0.5);
    F.set_kernel(2, SymTensor::rank_one(2, std::vector<double>{1.0, 0.0}, 2));
    const std::array<double, 2> xi{1.7, -0.3};
    CHECK(evaluate_chaos(F, xi) == doctest::Approx(0.5 + 1.7 * 1.7 - 1.0).epsilon(1e-14));

    // I_2(e0 ~x e1)(x, y) = x y   (2 * 1/2 off-diagonal entries)
    ChaosVector G(2);
    const std::vector<double> m{0.0, 0.5, 0.5, 0.0};
    G.set_kernel(2, SymTensor::from_matrix(2, m));
    CHECK(evaluate_chaos(G, xi) == doctest::Approx(1.7 * -0.3).epsilon(1e-14));

    // I_3(e0^{x3})(x) = x^3 - 3x, plus a first-order term
    ChaosVector H(1);
    H.set_kernel(1, 2.0 * SymTensor::basis(1, 0));
    H.set_kernel(3, SymTensor::rank_one(1, std::vector<double>{1.0}, 3));
    const std::array<double, 1> x1{0.9};
    CHECK(evaluate_chaos(H, x1) ==
          doctest::Approx(2.0 * 0.9 + 0.9 * 0.9 * 0.9 - 3.0 * 0.9).epsilon(1e-13));
}

TEST_CASE("sampled moments match the exact kernel algebra") {
    ChaosVector F(3, 0.2);
    F.set_kernel(1, random_sym(3, 1, 1));
    F.set_kernel(2, random_sym(3, 2, 2));
    F.set_kernel(3, random_sym(3, 3, 3));
    const McConfig cfg = quick(200000, 9);
    const std::vector<double> s = sample_chaos(F, cfg);
    REQUIRE(s.size() == cfg.N);

    const double m = std::accumulate(s.begin(), s.end(), 0.0) / double(cfg.N);
    double v = 0.0;
    for (double x : s) v += (x - m) * (x - m);
    v /= double(cfg.N - 1);

    const double var = variance(F);
    const double se_mean = std::sqrt(var / double(cfg.N));
    CHECK(std::abs(m - mean(F)) < 4 * se_mean);
    const double se_var = std::sqrt((cumulant(F, 4) + 2 * var * var) / double(cfg.N));
    CHECK(std::abs(v - var) < 4 * se_var);
}

TEST_CASE("sampling is reproducible and thread-count independent") {
    ChaosVector F(2);
    F.set_kernel(2, random_sym(2, 2, 4));
    McConfig one = quick(5000, 3);
    one.threads = 1;
    McConfig four = quick(5000, 3);
    four.threads = 4;
    const std::vector<double> a = sample_chaos(F, one);
    const std::vector<double> b = sample_chaos(F, four);
    CHECK(a == b);  // bitwise
    CHECK(sample_chaos(F, quick(5000, 4)) != a);  // seed matters
}

TEST_CASE("k-statistics are unbiased: exact enumeration of a discrete law") {
    // X in {-1, 0, 1} with probabilities {1/4, 1/2, 1/4}:
    // kappa = (0, 1/2, 0, -1/4, 0, 1/2) for r = 1..6
    const std::array<double, 3> values{-1.0, 0.0, 1.0};
    const std::array<double, 3> probs{0.25, 0.5, 0.25};
    const std::array<double, 7> kappa{0.0, 0.0, 0.5, 0.0, -0.25, 0.0, 0.5};

    const int n = 8;
    std::array<double, 7> expect{};
    std::vector<double> sample(n, 0.0);
    std::vector<int> digits(n, 0);
    while (true) {
        double w = 1.0;
        for (int i = 0; i < n; ++i) {
            sample[std::size_t(i)] = values[std::size_t(digits[std::size_t(i)])];
            w *= probs[std::size_t(digits[std::size_t(i)])];
        }
        const std::vector<McEstimate> est = empirical_cumulants(sample, 6);
        for (int r = 1; r <= 6; ++r) expect[std::size_t(r)] += w * est[std::size_t(r)].value;
        int k = n - 1;
        while (k >= 0 && ++digits[std::size_t(k)] == 3) {
            digits[std::size_t(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
    for (int r = 1; r <= 6; ++r)
        CHECK(expect[std::size_t(r)] ==
              doctest::Approx(kappa[std::size_t(r)]).epsilon(1e-9).scale(1.0));
}

TEST_CASE("empirical cumulants of a second-chaos law bracket the truth") {
    const TargetSpec X{0.0, {1.0}, {}};  // kappa_3 = 8, kappa_4 = 48
    const ChaosVector F = to_chaos(X, SpaceDim(2));
    const std::vector<McEstimate> est = empirical_cumulants(F, 4, quick(200000, 21));
    for (int r = 2; r <= 4; ++r) {
        const double truth = target_cumulant(X, r);
        CHECK(std::abs(est[std::size_t(r)].value - truth) < 4 * est[std::size_t(r)].se);
        CHECK(est[std::size_t(r)].se > 0.0);
    }
    CHECK_THROWS_AS((void)empirical_cumulants(F, 7, quick(1000)), std::invalid_argument);
}

TEST_CASE("empirical characteristic function") {
    const TargetSpec X{0.5, {1.0}, {}};
    const ChaosVector F = to_chaos(X, SpaceDim(2));
    McConfig cfg = quick(100000, 31);
    cfg.x_grid = {0.0, 0.5, 1.0, 2.0, -1.5};
    const std::vector<CfPoint> pts = empirical_cf(F, cfg);
    REQUIRE(pts.size() == cfg.x_grid.size());
    CHECK(pts[0].value == std::complex<double>(1.0, 0.0));  // x = 0 exactly
    const double ci = 4.0 / std::sqrt(double(cfg.N));
    for (const CfPoint& p : pts) {
        CHECK(p.ci == doctest::Approx(ci));
        CHECK(std::abs(p.value - target_cf(X, p.x)) < p.ci);
    }
}

TEST_CASE("conditional L1 estimator on known conditionals") {
    ChaosVector F(3);
    F.set_kernel(1, SymTensor::basis(3, 0));
    const McConfig cfg = quick(100000, 41);

    // G independent of F: E[G|F] = 0
    ChaosVector G(3);
    G.set_kernel(1, SymTensor::basis(3, 1));
    const ConditionalL1 ind = conditional_l1(F, G, cfg);
    CHECK(ind.binning_estimator);
    CHECK(ind.bins == cfg.bins);
    CHECK(std::abs(ind.estimate.value) < 4 * ind.estimate.se + 0.01);

    // G = F: E[|E[F|F]|] = E|N| = sqrt(2/pi)
    const ConditionalL1 same = conditional_l1(F, F, cfg);
    CHECK(same.estimate.value ==
          doctest::Approx(std::sqrt(2.0 / 3.141592653589793)).epsilon(0.02));

    // the exact weighted combination has vanishing conditional moments
    const TargetSpec X{0.0, {1.0, -0.5}, {}};
    const ChaosVector FX = to_chaos(X, SpaceDim(3));
    const ChaosVector combo = gamma_combination(FX, build_polynomial(X));
    const ConditionalL1 zero = conditional_l1(FX, combo, cfg);
    CHECK(std::abs(zero.estimate.value) < 1e-10);

    ChaosVector constant(3, 1.0);
    CHECK_THROWS_AS((void)conditional_l1(constant, F, cfg), std::invalid_argument);
}

TEST_CASE("joint stable functionals: exact anchors and an independent oracle") {
    const int d = 3;
    const SymTensor g = random_sym(d, 3, 8);
    ChaosVector F(d);
    F.set_kernel(3, g);
    const SymTensor f = SymTensor::basis(d, 0);
    const TargetSpec X{std::sqrt(6.0), {}, {}};

    McConfig cfg = quick(60000, 51);
    cfg.t_grid = {{0.0, 0.0}, {0.4, -0.3}, {1.0, 0.5}};
    const std::vector<JointFunctionalRow> rows = joint_stable_functionals(F, f, X, cfg);
    REQUIRE(rows.size() == 3);

    // at t = (0,0) the first functional is E<DI_1(f), DF> = 3 I_2(g ~x_1 f)
    // in expectation, i.e. zero mean with known second moment
    CHECK(rows[0].t1 == 0.0);
    CHECK(std::abs(rows[0].pairing_mean.imag()) < 1e-14);
    CHECK(std::abs(rows[0].pairing_mean.real()) < 4 * rows[0].pairing_se);

    // independent naive oracle at t = (0.4, -0.3), different seed/stream
    {
        const double t1 = 0.4, t2 = -0.3;
        ChaosVector pairD(d);
        pairD.add_kernel(2, sym_contract(g, f, 1), 3.0);
        ChaosVector I1f(d);
        I1f.set_kernel(1, f);
        const std::size_t N = 60000;
        std::complex<double> acc{0.0, 0.0};
        std::vector<double> xi(std::size_t(d), 0.0);
        for (std::size_t i = 0; i < N; ++i) {
            for (int j = 0; j < d; ++j)
                xi[std::size_t(j)] = random_normal(999, 7, i * std::size_t(d) + std::size_t(j));
            const double phase = t1 * evaluate_chaos(I1f, xi) + t2 * evaluate_chaos(F, xi);
            acc += std::exp(std::complex<double>(0.0, phase)) * evaluate_chaos(pairD, xi);
        }
        acc /= double(N);
        const double sigma = rows[1].pairing_se * std::sqrt(2.0);  // two independent runs
        CHECK(std::abs(rows[1].pairing_mean - acc) < 8 * sigma);
    }

    // f orthogonal to every kernel direction: both functionals vanish exactly
    ChaosVector Fo(3);
    Fo.set_kernel(2, SymTensor::rank_one(3, std::vector<double>{0.0, 1.0, 0.0}, 2));
    const std::vector<JointFunctionalRow> zero =
        joint_stable_functionals(Fo, SymTensor::basis(3, 0), TargetSpec{1.0, {}, {}}, cfg);
    for (const JointFunctionalRow& r : zero) {
        CHECK(std::abs(r.pairing_mean) == 0.0);
        CHECK(std::abs(r.weighted_mean) == 0.0);
    }
}

TEST_CASE("configuration validation") {
    McConfig cfg;
    cfg.N = 10;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.N = 1000;
    cfg.bins = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.bins = 8;
    CHECK_NOTHROW(cfg.validate());
}
