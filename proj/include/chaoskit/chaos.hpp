#pragma once

// Random variables given as finite chaos expansions F = f0 + sum_p I_p(f_p)
// over a fixed d-dimensional Gaussian space, with exact second moments,
// products, Gamma operators and cumulants computed through kernel algebra.
// The derivation of the Gamma pairing formula used by gamma_step is written
// out in docs/gamma_pairing.md.

#include <vector>

#include "chaoskit/tensor.hpp"

namespace ck {

class ChaosVector {
  public:
    explicit ChaosVector(int dim, double constant = 0.0) : dim_(dim), f0_(constant) {
        if (dim < 1) throw std::invalid_argument("ChaosVector: dim must be >= 1");
    }

    int dim() const { return dim_; }
    // highest order with a stored kernel (0 if none)
    int max_order() const { return int(kernels_.size()); }
    double constant() const { return f0_; }
    void set_constant(double v) { f0_ = v; }

    // kernel of order p (1 <= p <= max_order)
    const SymTensor& kernel(int p) const;
    void set_kernel(int p, SymTensor f);
    void add_kernel(int p, const SymTensor& f, double weight = 1.0);

    ChaosVector& operator+=(const ChaosVector& o);
    ChaosVector& operator*=(double c);
    friend ChaosVector operator+(ChaosVector a, const ChaosVector& b) { return a += b; }
    friend ChaosVector operator*(ChaosVector a, double c) { return a *= c; }
    friend ChaosVector operator*(double c, ChaosVector a) { return a *= c; }

  private:
    int dim_;
    double f0_;
    std::vector<SymTensor> kernels_;  // kernels_[p-1] has order p
};

double mean(const ChaosVector& F);
double variance(const ChaosVector& F);
// E[FG] = f0 g0 + sum_p p! <f_p, g_p>
double l2_inner(const ChaosVector& F, const ChaosVector& G);
double l2_norm(const ChaosVector& F);

// pointwise product through the multiplication formula
// I_p(f) I_q(g) = sum_r r! C(p,r) C(q,r) I_{p+q-2r}(f (~x)_r g)
ChaosVector wick_product(const ChaosVector& F, const ChaosVector& G);

// <DF, -DL^{-1}G>_H expanded in closed form: for F = sum_p I_p(f_p) and
// G = sum_q I_q(g_q),
//   sum_{p,q>=1} p sum_{r=0}^{(p-1)^(q-1)} r! C(p-1,r) C(q-1,r)
//                I_{p+q-2-2r}( sym(f_p (x)_{r+1} g_q) ).
ChaosVector gamma_step(const ChaosVector& F, const ChaosVector& G);

// Gamma_k(F): Gamma_0 = F, Gamma_k = gamma_step(F, Gamma_{k-1})
ChaosVector gamma(const ChaosVector& F, int k);
// M_k(F) = Gamma_k(F) - E[Gamma_k(F)]
ChaosVector m_centered(const ChaosVector& F, int k);
// Gamma_0..Gamma_k in one sweep
std::vector<ChaosVector> gamma_chain(const ChaosVector& F, int k);

// kappa_1 = mean; kappa_r = (r-1)! E[Gamma_{r-1}(F)] for r >= 2
double cumulant(const ChaosVector& F, int r);
// cumulants 1..r_max sharing one Gamma chain
std::vector<double> cumulants(const ChaosVector& F, int r_max);

}  // namespace ck
