#pragma once

// Decision procedures: the main-theorem conditions, contraction-based
// sufficient criteria, stable-convergence statistics, the odd-chaos
// feasibility gate and the characteristic-function identity verifier.

#include <optional>
#include <string>
#include <vector>

#include "chaoskit/target.hpp"

namespace ck {

// P(x) = x^{1+1[a!=0]} prod_j (x - b_j) prod_j (x - c_j)^2 together with its
// monomial coefficients and the combination weights P^{(r)}(0)/(r! 2^{r-1})
struct CriterionPolynomial {
    std::vector<double> roots;     // with multiplicity, zeros first
    std::vector<double> coeffs;    // coeffs[r] multiplies x^r
    std::vector<double> weights;   // weights[r] for r = 1..degree, [0] unused
    int degree = 0;
    bool a_nonzero = false;
    int k1 = 0;
    int k2 = 0;
    bool has_repeated_roots = false;  // noted: a smaller polynomial may suffice
};

CriterionPolynomial build_polynomial(const TargetSpec& X);

// elementary symmetric polynomials e_0..e_k of the given values (e_0 = 1)
std::vector<double> elementary_symmetric(const std::vector<double>& values);
// same with the element at position l (0-based) left out
std::vector<double> elementary_symmetric_excluding(const std::vector<double>& values,
                                                   std::size_t l);

// sum_r weights[r] * (Gamma_{r-1}(F) - E[Gamma_{r-1}(F)])
ChaosVector gamma_combination(const ChaosVector& F, const CriterionPolynomial& P);

struct CheckOptions {
    double kappa_tol = 1e-6;        // exact-family cumulant gap threshold
    double combo_tol = 1e-6;        // exact-family combination norm threshold
    double trend_kappa_tol = 0.5;   // "last value below threshold" in trend mode
    double trend_combo_tol = 0.5;
    double slope_max = -0.25;       // trend rule: slope must be at most this
    bool conditional_l1 = false;    // opt-in Monte Carlo conditional estimate
};

struct ConvergenceRow {
    double n = 0.0;
    std::vector<double> kappa_F;       // r = 1..r_max
    std::vector<double> kappa_X;
    std::vector<double> kappa_gaps;    // |kappa_F - kappa_X|
    double combo_l2 = 0.0;
    std::optional<double> conditional_l1;
};

struct ConvergenceReport {
    int poly_degree = 0;
    int r_max = 0;                      // gaps reported for r = 1..r_max
    std::vector<ConvergenceRow> rows;
    std::vector<double> kappa_slopes;   // per r, NaN where not fitted
    double combo_slope = 0.0;           // NaN when not fitted
    std::string verdict;                // pass | pass(trend) | fail | inconclusive
};

ConvergenceReport main_theorem_check(const ChaosVector& F, const TargetSpec& X,
                                     const CheckOptions& opts = {});
// one row per (n, F_n); n values must be strictly increasing
ConvergenceReport sequence_check(const std::vector<std::pair<double, ChaosVector>>& seq,
                                 const TargetSpec& X, const CheckOptions& opts = {});

// least-squares slope of log(value) against log(n); NaN if fewer than two
// positive points
double loglog_slope(const std::vector<double>& ns, const std::vector<double>& values);

// single even-order kernel against a general first-two-chaos target
// (sufficient conditions only; necessity is open)
struct ContractionReport {
    double c_p = 0.0;
    std::vector<double> kappa_gaps;                    // r = 1..deg(P)
    std::vector<std::pair<int, double>> offhalf_norms; // (l, ||f (~x)_l f||), l != p/2
    double combo_norm = 0.0;  // || sum_r w_r c_p^r f (~x)_{p/2}^{(r)} f ||
    std::string note = "sufficient only";
};
ContractionReport sufficient_contraction_check(const SymTensor& f, const TargetSpec& X);

// centred chi-square target with k1 degrees of freedom: the half-contraction
// fixed-point statistic and the weighted-combination statistic side by side
struct ChiSquareReport {
    double c_p = 0.0;
    double b2_statistic = 0.0;     // ||f (~x)_{p/2} f - (2/c_p) f||
    double combo_statistic = 0.0;  // c-side combination norm
    std::vector<std::pair<int, double>> offhalf_norms;
    std::vector<double> kappa_gaps;
    double tol = 0.0;
    bool sides_agree = false;      // both statistics on the same side of tol
};
ChiSquareReport chi_square_check(const SymTensor& f, int k1, double tol = 1e-9);

// the C_l family of contraction conditions for targets aN + b(xi^2 - 1)
struct ClReport {
    std::vector<std::pair<int, double>> statistics;  // (l, norm), even l in [2, 3p-4]
};
ClReport remark_Cl_check(const SymTensor& f, double a, double b);

// single-kernel stable-convergence statistics against a unit f in H
struct StableKernelReport {
    double g_pm1_norm = 0.0;   // ||g (x)_{p-1} g||
    double gf_norm = 0.0;      // ||g (x)_1 f||
    double chain_lhs = 0.0;    // ||g (x)_1 f||^2
    double chain_mid = 0.0;    // <g (x)_{p-1} g, f (x) f>
    double chain_rhs = 0.0;    // ||g (x)_{p-1} g|| ||f||^2
};
StableKernelReport stable_kernel_stats(const SymTensor& g, const SymTensor& f);

// mixed-chaos necessary statistic:
// sum_{l=2}^{p-1} (l+1)! <g_{l-1} (~x)_{l-1} g_{l+1}, f (~x) f> + E[<DI_1(f), DF>^2]
struct MixedStableReport {
    double cross_term = 0.0;
    double pairing_second_moment = 0.0;
    double total = 0.0;
};
MixedStableReport mixed_chaos_stable_stats(const ChaosVector& F, const SymTensor& f);

// odd-chaos feasibility gate: partitions indices with c_i != 0 by |c_i|
// (relative tolerance 1e-9) and checks the three combinatorial conditions
struct FeasibilityVerdict {
    bool excluded = false;
    std::vector<int> failed_conditions;             // subset of {1,2,3} ({1..4} correlated)
    std::vector<std::vector<int>> blocks;           // 1-based indices, by increasing |c|
    std::vector<int> beta;                          // per block: #positive
    std::vector<int> gamma_counts;                  // per block: #negative
    std::vector<std::vector<int>> failing_blocks;   // blocks violating condition 2 or 3
    std::string message;
};
FeasibilityVerdict feasibility_gate(const std::vector<double>& c, const std::vector<double>& d);
FeasibilityVerdict correlated_feasibility_gate(const CorrelatedSpec& Y);

// relative defect of the rearranged characteristic-function identity
// (cumulant/weight sums against the G1/G2 product form); 0 at x = 0
double appendix_identity_residual(const TargetSpec& X, double x);

}  // namespace ck
