#include "chaoskit/chaos.hpp"

#include <algorithm>
#include <cmath>

namespace ck {

const SymTensor& ChaosVector::kernel(int p) const {
    if (p < 1 || p > max_order()) throw std::out_of_range("ChaosVector::kernel: bad order");
    return kernels_[std::size_t(p) - 1];
}

void ChaosVector::set_kernel(int p, SymTensor f) {
    if (p < 1) throw std::invalid_argument("set_kernel: order must be >= 1");
    if (f.dim() != dim_ || f.order() != p) throw std::invalid_argument("set_kernel: shape mismatch");
    while (max_order() < p) kernels_.emplace_back(dim_, max_order() + 1);
    kernels_[std::size_t(p) - 1] = std::move(f);
}

void ChaosVector::add_kernel(int p, const SymTensor& f, double weight) {
    if (p == 0) {
        f0_ += weight * f.data()[0];
        return;
    }
    if (f.dim() != dim_ || f.order() != p) throw std::invalid_argument("add_kernel: shape mismatch");
    while (max_order() < p) kernels_.emplace_back(dim_, max_order() + 1);
    SymTensor& dst = kernels_[std::size_t(p) - 1];
    dst += weight == 1.0 ? f : f * weight;
}

ChaosVector& ChaosVector::operator+=(const ChaosVector& o) {
    if (dim_ != o.dim_) throw std::invalid_argument("ChaosVector +=: dim mismatch");
    f0_ += o.f0_;
    for (int p = 1; p <= o.max_order(); ++p) add_kernel(p, o.kernel(p));
    return *this;
}

ChaosVector& ChaosVector::operator*=(double c) {
    f0_ *= c;
    for (auto& k : kernels_) k *= c;
    return *this;
}

double mean(const ChaosVector& F) { return F.constant(); }

double l2_inner(const ChaosVector& F, const ChaosVector& G) {
    if (F.dim() != G.dim()) throw std::invalid_argument("l2_inner: dim mismatch");
    double acc = F.constant() * G.constant();
    const int m = std::min(F.max_order(), G.max_order());
    for (int p = 1; p <= m; ++p) acc += factorial(p) * inner(F.kernel(p), G.kernel(p));
    return acc;
}

double l2_norm(const ChaosVector& F) { return std::sqrt(l2_inner(F, F)); }

double variance(const ChaosVector& F) {
    return l2_inner(F, F) - F.constant() * F.constant();
}

ChaosVector wick_product(const ChaosVector& F, const ChaosVector& G) {
    if (F.dim() != G.dim()) throw std::invalid_argument("wick_product: dim mismatch");
    ChaosVector out(F.dim(), F.constant() * G.constant());
    for (int p = 1; p <= F.max_order(); ++p) out.add_kernel(p, F.kernel(p), G.constant());
    for (int q = 1; q <= G.max_order(); ++q) out.add_kernel(q, G.kernel(q), F.constant());
    for (int p = 1; p <= F.max_order(); ++p) {
        for (int q = 1; q <= G.max_order(); ++q) {
            for (int r = 0; r <= std::min(p, q); ++r) {
                const double w = factorial(r) * binomial(p, r) * binomial(q, r);
                out.add_kernel(p + q - 2 * r, sym_contract(F.kernel(p), G.kernel(q), r), w);
            }
        }
    }
    return out;
}

ChaosVector gamma_step(const ChaosVector& F, const ChaosVector& G) {
    if (F.dim() != G.dim()) throw std::invalid_argument("gamma_step: dim mismatch");
    ChaosVector out(F.dim(), 0.0);
    for (int p = 1; p <= F.max_order(); ++p) {
        for (int q = 1; q <= G.max_order(); ++q) {
            const int rmax = std::min(p - 1, q - 1);
            for (int r = 0; r <= rmax; ++r) {
                const double w =
                    double(p) * factorial(r) * binomial(p - 1, r) * binomial(q - 1, r);
                out.add_kernel(p + q - 2 - 2 * r,
                               sym_contract(F.kernel(p), G.kernel(q), r + 1), w);
            }
        }
    }
    return out;
}

ChaosVector gamma(const ChaosVector& F, int k) {
    if (k < 0) throw std::invalid_argument("gamma: k must be >= 0");
    ChaosVector out = F;
    for (int i = 0; i < k; ++i) out = gamma_step(F, out);
    return out;
}

ChaosVector m_centered(const ChaosVector& F, int k) {
    ChaosVector out = gamma(F, k);
    out.set_constant(0.0);
    return out;
}

std::vector<ChaosVector> gamma_chain(const ChaosVector& F, int k) {
    std::vector<ChaosVector> chain;
    chain.reserve(std::size_t(k) + 1);
    chain.push_back(F);
    for (int i = 1; i <= k; ++i) chain.push_back(gamma_step(F, chain.back()));
    return chain;
}

double cumulant(const ChaosVector& F, int r) {
    if (r < 1) throw std::invalid_argument("cumulant: r must be >= 1");
    if (r == 1) return mean(F);
    return factorial(r - 1) * mean(gamma(F, r - 1));
}

std::vector<double> cumulants(const ChaosVector& F, int r_max) {
    if (r_max < 1) throw std::invalid_argument("cumulants: r_max must be >= 1");
    std::vector<double> out(std::size_t(r_max) + 1, 0.0);  // out[r] = kappa_r, out[0] unused
    const auto chain = gamma_chain(F, r_max - 1);
    out[1] = mean(F);
    for (int r = 2; r <= r_max; ++r) out[std::size_t(r)] = factorial(r - 1) * mean(chain[std::size_t(r) - 1]);
    return out;
}

}  // namespace ck
