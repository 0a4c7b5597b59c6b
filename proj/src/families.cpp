#include "chaoskit/families.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace ck {

namespace {

void require_n(int n, int lo) {
    if (n < lo) throw std::invalid_argument("family: n too small for this family");
}

// F_n = I_2( n^{-1/2} sum_{i=1}^n e_{2i-1} (~x) e_{2i} ) on R^{2n};
// all eigenvalue pairs are +-(2 sqrt(n))^{-1}, so kappa_2 = 1 and every odd
// cumulant vanishes: the sequence obeys the fourth-moment theorem for N(0,1)
ChaosVector make_fourth_moment(int n) {
    require_n(n, 1);
    const int d = 2 * n;
    SymTensor f(d, 2);
    const double w = 1.0 / std::sqrt(double(n));
    for (int i = 0; i < n; ++i) {
        const SymTensor a = SymTensor::basis(d, 2 * i);
        const SymTensor b = SymTensor::basis(d, 2 * i + 1);
        f += w * sym_contract(a, b, 0);
    }
    ChaosVector F(d, 0.0);
    F.set_kernel(2, f);
    return F;
}

// F_n = I_2( e_0 (x) e_0 + n^{-1/2} e_1 (~x) e_2 ): the unit eigenvalue gives
// the chi-square-one limit, the off-diagonal block contributes eigenvalues
// +-(2 sqrt(n))^{-1} that wash out of every cumulant
ChaosVector make_chi_square(int n) {
    require_n(n, 1);
    const int d = 3;
    const SymTensor e0 = SymTensor::basis(d, 0);
    const SymTensor e1 = SymTensor::basis(d, 1);
    const SymTensor e2 = SymTensor::basis(d, 2);
    SymTensor f = sym_contract(e0, e0, 0);
    f += (1.0 / std::sqrt(double(n))) * sym_contract(e1, e2, 0);
    ChaosVector F(d, 0.0);
    F.set_kernel(2, f);
    return F;
}

// exact embedding of X = N + (xi^2 - 1) plus a vanishing off-diagonal block
ChaosVector make_decaying_perturbation(int n) {
    require_n(n, 1);
    TargetSpec X;
    X.a = 1.0;
    X.b = {1.0};
    const int d = 5;
    ChaosVector F = to_chaos(X, SpaceDim(d));
    const SymTensor e3 = SymTensor::basis(d, 3);
    const SymTensor e4 = SymTensor::basis(d, 4);
    F.add_kernel(2, sym_contract(e3, e4, 0), 1.0 / std::sqrt(double(n)));
    return F;
}

// g_n = n^{-1/2} sum_{i=1}^n e_i^{(x)3} on R^n: unit norm, and the disjoint
// blocks make g_n (x)_2 g_n = n^{-1} sum e_i (x) e_i of norm exactly n^{-1/2}
ChaosVector make_stable_block(int n) {
    require_n(n, 1);
    SymTensor g(n, 3);
    const double w = 1.0 / std::sqrt(double(n));
    std::vector<double> v(std::size_t(n), 0.0);
    for (int i = 0; i < n; ++i) {
        v[std::size_t(i)] = 1.0;
        g += w * SymTensor::rank_one(n, v, 3);
        v[std::size_t(i)] = 0.0;
    }
    ChaosVector F(n, 0.0);
    F.set_kernel(3, g);
    return F;
}

TargetSpec gaussian_target(double a) {
    TargetSpec X;
    X.a = a;
    return X;
}

TargetSpec chi_square_target() {
    TargetSpec X;
    X.b = {1.0};
    return X;
}

TargetSpec mixed_target() {
    TargetSpec X;
    X.a = 1.0;
    X.b = {1.0};
    return X;
}

const std::array<Family, 4>& registry() {
    static const std::array<Family, 4> fams = {
        Family{"fourth-moment", "I_2 off-diagonal block kernels converging to N(0,1)",
               gaussian_target(1.0), &make_fourth_moment},
        Family{"chi-square", "rank-one I_2 kernel plus a vanishing off-block",
               chi_square_target(), &make_chi_square},
        Family{"decaying-perturbation", "exact mixed embedding plus a vanishing block",
               mixed_target(), &make_decaying_perturbation},
        Family{"stable-block", "I_3 disjoint rank-one blocks with unit total norm",
               gaussian_target(std::sqrt(6.0)), &make_stable_block},
    };
    return fams;
}

}  // namespace

const Family& family(const std::string& name) {
    for (const Family& f : registry())
        if (f.name == name) return f;
    std::ostringstream msg;
    msg << "unknown family '" << name << "'; available:";
    for (const Family& f : registry()) msg << ' ' << f.name;
    throw std::invalid_argument(msg.str());
}

std::vector<std::string> family_names() {
    std::vector<std::string> out;
    for (const Family& f : registry()) out.push_back(f.name);
    return out;
}

std::vector<std::pair<double, ChaosVector>> family_sequence(const std::string& name,
                                                            const std::vector<int>& ns) {
    const Family& f = family(name);
    std::vector<std::pair<double, ChaosVector>> out;
    out.reserve(ns.size());
    for (int n : ns) out.emplace_back(double(n), f.make(n));
    return out;
}

}  // namespace ck
