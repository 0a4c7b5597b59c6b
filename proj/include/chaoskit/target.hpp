#pragma once

// Canonical limit laws living in the first two chaoses:
//   X = a N + sum_i b_i (R_i^2 - 1) + sum_j [ c_j (P_j^2 - 1) + d_j P_j ]
// with independent standard normals, b_i != 0 and c_j d_j != 0.

#include <complex>
#include <cstdint>
#include <utility>
#include <vector>

#include "chaoskit/chaos.hpp"

namespace ck {

struct TargetSpec {
    double a = 0.0;
    std::vector<double> b;                        // b_i != 0
    std::vector<std::pair<double, double>> cd;    // (c_j, d_j), c_j d_j != 0

    int k1() const { return int(b.size()); }
    int k2() const { return int(cd.size()); }
    // throws std::invalid_argument on violated invariants
    void validate() const;
};

// Y = a0 U0 + sum_i lambda_i (U_i^2 - 1) with corr(U0, U_i) = sigma_i and
// (U_1..U_k) mutually independent standard normals
struct CorrelatedSpec {
    double a0 = 0.0;
    std::vector<double> lambdas;  // lambda_i != 0
    std::vector<double> sigmas;
    void validate() const;
};

// closed-form cumulant for r >= 2 (kappa_1 = 0 by construction):
// kappa_r = a^2 1[r=2] + sum_j 2^{r-1}(r-1)! b_j^r
//         + sum_j [2^{r-1}(r-1)! c_j^r + 2^{r-3} r! c_j^{r-2} d_j^2]
double target_cumulant(const TargetSpec& X, int r);

// closed-form characteristic function
std::complex<double> target_cf(const TargetSpec& X, double x);

// defect of the first-order ODE satisfied by the characteristic function,
// (lhs - rhs) / max(1, |lhs|, |rhs|), with phi' taken from the closed form's
// analytic derivative. The scaling keeps the residual comparable across
// specs; the raw difference grows with the polynomial prefactors.
std::complex<double> ode_residual(const TargetSpec& X, double x);

// embedding into the chaos algebra on distinct basis directions:
// f1 = a e_0 + sum_j d_j e_{1+k1+j}, f2 = sum_i b_i e_{1+i}^{(x)2} + ...
ChaosVector to_chaos(const TargetSpec& X, SpaceDim dim);

// recover a TargetSpec from first/second chaos kernels by eigendecomposition
// of f2 and splitting f1 along the eigenvectors.
// Conventions: b sorted descending, (c,d) sorted by c descending with d >= 0,
// a = norm of the part of f1 outside the retained eigendirections.
TargetSpec canonicalize(const SymTensor& f1, const SymTensor& f2);

// decorrelation of the correlated form: a <- a0 sqrt(1 - sum sigma^2),
// sigma_i = 0 contributes a b entry, sigma_i != 0 a (lambda_i, a0 sigma_i) pair
TargetSpec from_correlated(const CorrelatedSpec& Y);

// i.i.d. draws of X; deterministic for a given (seed, stream)
std::vector<double> sample_target(const TargetSpec& X, std::size_t n, std::uint64_t seed,
                                  std::uint64_t stream = 0);

}  // namespace ck
