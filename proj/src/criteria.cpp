#include "chaoskit/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <set>
#include <sstream>

namespace ck {

using cplx = std::complex<double>;
namespace {
constexpr cplx I{0.0, 1.0};
}

CriterionPolynomial build_polynomial(const TargetSpec& X) {
    X.validate();
    CriterionPolynomial P;
    P.a_nonzero = X.a != 0.0;
    P.k1 = X.k1();
    P.k2 = X.k2();
    P.roots.assign(P.a_nonzero ? 2 : 1, 0.0);
    for (double b : X.b) P.roots.push_back(b);
    for (auto [c, d] : X.cd) {
        (void)d;
        P.roots.push_back(c);
        P.roots.push_back(c);
    }
    P.degree = int(P.roots.size());

    P.coeffs.assign(1, 1.0);
    for (double root : P.roots) {
        std::vector<double> next(P.coeffs.size() + 1, 0.0);
        for (std::size_t i = 0; i < P.coeffs.size(); ++i) {
            next[i + 1] += P.coeffs[i];
            next[i] -= root * P.coeffs[i];
        }
        P.coeffs = std::move(next);
    }

    P.weights.assign(std::size_t(P.degree) + 1, 0.0);
    for (int r = 1; r <= P.degree; ++r)
        P.weights[std::size_t(r)] = P.coeffs[std::size_t(r)] / std::pow(2.0, r - 1);

    // a coincidence among the distinct factors (b with b, c with c, or b with
    // c) means a polynomial of smaller degree annihilates the same cumulant
    // sequence; the built-in squared (x - c_j) factors do not count
    std::multiset<double> factors(X.b.begin(), X.b.end());
    for (auto [c, d] : X.cd) {
        (void)d;
        factors.insert(c);
    }
    P.has_repeated_roots =
        std::adjacent_find(factors.begin(), factors.end()) != factors.end();
    return P;
}

std::vector<double> elementary_symmetric(const std::vector<double>& values) {
    std::vector<double> e(1, 1.0);
    for (double v : values) {
        e.push_back(0.0);
        for (std::size_t j = e.size() - 1; j >= 1; --j) e[j] += v * e[j - 1];
    }
    return e;
}

std::vector<double> elementary_symmetric_excluding(const std::vector<double>& values,
                                                   std::size_t l) {
    if (l >= values.size())
        throw std::out_of_range("elementary_symmetric_excluding: index out of range");
    std::vector<double> rest;
    rest.reserve(values.size() - 1);
    for (std::size_t i = 0; i < values.size(); ++i)
        if (i != l) rest.push_back(values[i]);
    return elementary_symmetric(rest);
}

ChaosVector gamma_combination(const ChaosVector& F, const CriterionPolynomial& P) {
    const auto chain = gamma_chain(F, P.degree - 1);
    ChaosVector acc(F.dim(), 0.0);
    for (int r = 1; r <= P.degree; ++r) {
        const double w = P.weights[std::size_t(r)];
        if (w != 0.0) acc += w * chain[std::size_t(r) - 1];
    }
    acc.set_constant(0.0);
    return acc;
}

double loglog_slope(const std::vector<double>& ns, const std::vector<double>& values) {
    if (ns.size() != values.size()) throw std::invalid_argument("loglog_slope: size mismatch");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        if (!(ns[i] > 0.0) || !(values[i] > 0.0)) continue;
        const double x = std::log(ns[i]), y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++m;
    }
    if (m < 2) return std::numeric_limits<double>::quiet_NaN();
    const double det = m * sxx - sx * sx;
    if (det == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (m * sxy - sx * sy) / det;
}

namespace {

ConvergenceRow make_row(double n, const ChaosVector& F, const TargetSpec& X, int r_max,
                        const CriterionPolynomial& P) {
    ConvergenceRow row;
    row.n = n;
    const auto kf = cumulants(F, r_max);
    for (int r = 1; r <= r_max; ++r) {
        row.kappa_F.push_back(kf[std::size_t(r)]);
        row.kappa_X.push_back(target_cumulant(X, r));
        row.kappa_gaps.push_back(std::abs(row.kappa_F.back() - row.kappa_X.back()));
    }
    row.combo_l2 = l2_norm(gamma_combination(F, P));
    return row;
}

}  // namespace

ConvergenceReport main_theorem_check(const ChaosVector& F, const TargetSpec& X,
                                     const CheckOptions& opts) {
    const CriterionPolynomial P = build_polynomial(X);
    ConvergenceReport rep;
    rep.poly_degree = P.degree;
    rep.r_max = std::max(P.degree, 4);
    rep.rows.push_back(make_row(1.0, F, X, rep.r_max, P));
    rep.kappa_slopes.assign(std::size_t(rep.r_max), std::numeric_limits<double>::quiet_NaN());
    rep.combo_slope = std::numeric_limits<double>::quiet_NaN();
    const auto& row = rep.rows.front();
    const bool gaps_ok = std::all_of(row.kappa_gaps.begin(), row.kappa_gaps.end(),
                                     [&](double g) { return g <= opts.kappa_tol; });
    rep.verdict = gaps_ok && row.combo_l2 <= opts.combo_tol ? "pass" : "fail";
    return rep;
}

ConvergenceReport sequence_check(const std::vector<std::pair<double, ChaosVector>>& seq,
                                 const TargetSpec& X, const CheckOptions& opts) {
    if (seq.empty()) throw std::invalid_argument("sequence_check: empty sequence");
    for (std::size_t i = 1; i < seq.size(); ++i)
        if (!(seq[i].first > seq[i - 1].first))
            throw std::invalid_argument("sequence_check: n values must be strictly increasing");

    const CriterionPolynomial P = build_polynomial(X);
    ConvergenceReport rep;
    rep.poly_degree = P.degree;
    rep.r_max = std::max(P.degree, 4);
    std::vector<double> ns;
    for (const auto& [n, F] : seq) {
        ns.push_back(n);
        rep.rows.push_back(make_row(n, F, X, rep.r_max, P));
    }

    std::vector<double> combo;
    for (const auto& row : rep.rows) combo.push_back(row.combo_l2);
    rep.combo_slope = loglog_slope(ns, combo);
    for (int r = 0; r < rep.r_max; ++r) {
        std::vector<double> gaps;
        for (const auto& row : rep.rows) gaps.push_back(row.kappa_gaps[std::size_t(r)]);
        rep.kappa_slopes.push_back(loglog_slope(ns, gaps));
    }

    // trend rule per statistic still above the exact threshold at the last n:
    // the fitted slope must be at most slope_max and the last value must be
    // below the (looser) trend tolerance
    const auto& last = rep.rows.back();
    bool exact = true, trend = true, within_trend_tol = true;
    auto judge = [&](double last_value, double slope, double tol, double trend_tol) {
        if (last_value <= tol) return;
        exact = false;
        if (!(last_value <= trend_tol)) within_trend_tol = false;
        if (!(slope <= opts.slope_max)) trend = false;
    };
    for (int r = 0; r < rep.r_max; ++r)
        judge(last.kappa_gaps[std::size_t(r)], rep.kappa_slopes[std::size_t(r)], opts.kappa_tol,
              opts.trend_kappa_tol);
    judge(last.combo_l2, rep.combo_slope, opts.combo_tol, opts.trend_combo_tol);

    if (exact)
        rep.verdict = "pass";
    else if (trend && within_trend_tol)
        rep.verdict = "pass(trend)";
    else if (within_trend_tol)
        rep.verdict = "inconclusive";
    else
        rep.verdict = "fail";
    return rep;
}

namespace {

double half_contraction_constant(int p) {
    return 2.0 * factorial(p / 2) * std::pow(binomial(p - 1, p / 2 - 1), 2);
}

std::vector<std::pair<int, double>> offhalf_contraction_norms(const SymTensor& f) {
    const int p = f.order();
    std::vector<std::pair<int, double>> out;
    for (int l = 1; l <= p - 1; ++l) {
        if (l == p / 2) continue;
        out.emplace_back(l, norm(sym_contract(f, f, l)));
    }
    return out;
}

double half_combo_norm(const SymTensor& f, const CriterionPolynomial& P, double c_p) {
    SymTensor acc(f.dim(), f.order());
    for (int r = 1; r <= P.degree; ++r) {
        const double w = P.weights[std::size_t(r)];
        if (w != 0.0) acc += w * std::pow(c_p, r) * iter_contract_half(f, r);
    }
    return norm(acc);
}

}  // namespace

ContractionReport sufficient_contraction_check(const SymTensor& f, const TargetSpec& X) {
    const int p = f.order();
    if (p < 2 || p % 2 != 0)
        throw std::invalid_argument("sufficient_contraction_check: kernel order must be even");
    const CriterionPolynomial P = build_polynomial(X);
    ContractionReport rep;
    rep.c_p = half_contraction_constant(p);
    ChaosVector F(f.dim(), 0.0);
    F.set_kernel(p, f);
    const auto kf = cumulants(F, P.degree);
    for (int r = 1; r <= P.degree; ++r)
        rep.kappa_gaps.push_back(std::abs(kf[std::size_t(r)] - target_cumulant(X, r)));
    rep.offhalf_norms = offhalf_contraction_norms(f);
    rep.combo_norm = half_combo_norm(f, P, rep.c_p);
    return rep;
}

ChiSquareReport chi_square_check(const SymTensor& f, int k1, double tol) {
    const int p = f.order();
    if (p < 2 || p % 2 != 0)
        throw std::invalid_argument("chi_square_check: kernel order must be even");
    if (k1 < 1) throw std::invalid_argument("chi_square_check: k1 must be >= 1");
    TargetSpec X;
    X.b.assign(std::size_t(k1), 1.0);
    const CriterionPolynomial P = build_polynomial(X);

    ChiSquareReport rep;
    rep.tol = tol;
    rep.c_p = half_contraction_constant(p);
    rep.b2_statistic = norm(sym_contract(f, f, p / 2) - (2.0 / rep.c_p) * f);
    rep.combo_statistic = half_combo_norm(f, P, rep.c_p);
    rep.offhalf_norms = offhalf_contraction_norms(f);
    ChaosVector F(f.dim(), 0.0);
    F.set_kernel(p, f);
    const auto kf = cumulants(F, P.degree);
    for (int r = 1; r <= P.degree; ++r)
        rep.kappa_gaps.push_back(std::abs(kf[std::size_t(r)] - target_cumulant(X, r)));
    rep.sides_agree = (rep.b2_statistic <= tol) == (rep.combo_statistic <= tol);
    return rep;
}

ClReport remark_Cl_check(const SymTensor& f, double a, double b) {
    const int p = f.order();
    if (p < 4 || p % 2 != 0)
        throw std::invalid_argument("remark_Cl_check: kernel order must be even and >= 4");
    if (b == 0.0) throw std::invalid_argument("remark_Cl_check: b must be non-zero");
    (void)a;  // the statistics do not depend on the Gaussian coefficient
    ClReport rep;
    for (int l = 2; l <= 3 * p - 4; l += 2) {
        SymTensor acc(f.dim(), l);
        for (int s = 1; s <= p - 1; ++s) {
            for (int t = 1; t <= std::min(p, 2 * p - 2 * s); ++t) {
                if (3 * p - 2 * (s + t) != l) continue;
                const double c = p * factorial(s - 1) * factorial(t - 1) *
                                 std::pow(binomial(p - 1, s - 1), 2) * binomial(p - 1, t - 1) *
                                 binomial(2 * p - 2 * s - 1, t - 1);
                acc += c * sym_contract(sym_contract(f, f, s), f, t);
            }
        }
        for (int s = 1; s <= p - 1; ++s) {
            if (2 * p - 2 * s != l) continue;
            const double k = factorial(s - 1) * std::pow(binomial(p - 1, s - 1), 2);
            acc += (-2.0 * b * k) * sym_contract(f, f, s);
        }
        rep.statistics.emplace_back(l, norm(acc));
    }
    return rep;
}

StableKernelReport stable_kernel_stats(const SymTensor& g, const SymTensor& f) {
    if (f.order() != 1) throw std::invalid_argument("stable_kernel_stats: f must have order 1");
    if (g.order() < 2) throw std::invalid_argument("stable_kernel_stats: g must have order >= 2");
    if (g.dim() != f.dim()) throw std::invalid_argument("stable_kernel_stats: dim mismatch");
    if (std::abs(norm(f) - 1.0) > 1e-8)
        throw std::invalid_argument("stable_kernel_stats: f must have unit norm");
    const int p = g.order();
    StableKernelReport rep;
    const RawTensor gg = contract(g, g, p - 1);
    const RawTensor gf = contract(g, f, 1);
    const RawTensor ff = contract(f, f, 0);
    rep.g_pm1_norm = norm(gg);
    rep.gf_norm = norm(gf);
    rep.chain_lhs = rep.gf_norm * rep.gf_norm;
    rep.chain_mid = inner(gg, ff);
    rep.chain_rhs = rep.g_pm1_norm * inner(f, f);
    return rep;
}

MixedStableReport mixed_chaos_stable_stats(const ChaosVector& F, const SymTensor& f) {
    if (f.order() != 1)
        throw std::invalid_argument("mixed_chaos_stable_stats: f must have order 1");
    if (f.dim() != F.dim()) throw std::invalid_argument("mixed_chaos_stable_stats: dim mismatch");
    const int p = F.max_order();
    MixedStableReport rep;
    const SymTensor ff = sym_contract(f, f, 0);
    for (int l = 2; l <= p - 1; ++l)
        rep.cross_term += factorial(l + 1) *
                          inner(sym_contract(F.kernel(l - 1), F.kernel(l + 1), l - 1), ff);

    // <DI_1(f), DF> = sum_l l I_{l-1}(g_l (~x)_1 f), computed exactly
    ChaosVector pairing(F.dim(), 0.0);
    for (int l = 1; l <= p; ++l)
        pairing.add_kernel(l - 1, sym_contract(F.kernel(l), f, 1), double(l));
    rep.pairing_second_moment = l2_inner(pairing, pairing);
    rep.total = rep.cross_term + rep.pairing_second_moment;
    return rep;
}

namespace {

FeasibilityVerdict block_gate(const std::vector<double>& coef, const std::vector<double>& weight,
                              bool correlated) {
    FeasibilityVerdict v;
    std::vector<int> active;  // 0-based indices with a non-zero block coefficient
    for (std::size_t i = 0; i < coef.size(); ++i)
        if (coef[i] != 0.0) active.push_back(int(i));
    const int m = int(active.size());
    std::ostringstream msg;

    if (m % 2 != 0) {
        v.failed_conditions.push_back(1);
        msg << "condition 1: " << m << " non-zero coefficients (odd); ";
    }

    std::sort(active.begin(), active.end(), [&](int i, int j) {
        return std::abs(coef[std::size_t(i)]) < std::abs(coef[std::size_t(j)]);
    });
    bool cond2_ok = true, cond3_ok = true;
    std::size_t pos = 0;
    while (pos < active.size()) {
        std::size_t end = pos + 1;
        while (end < active.size()) {
            const double lo = std::abs(coef[std::size_t(active[end - 1])]);
            const double hi = std::abs(coef[std::size_t(active[end])]);
            if (hi - lo > 1e-9 * std::max(lo, hi)) break;
            ++end;
        }
        std::vector<int> block(active.begin() + long(pos), active.begin() + long(end));
        std::sort(block.begin(), block.end());
        for (int& i : block) ++i;  // report 1-based
        int beta = 0, gamma = 0;
        double signed_w = 0.0, w_scale = 0.0;
        for (int i1 : block) {
            const double c = coef[std::size_t(i1) - 1];
            const double w = weight[std::size_t(i1) - 1];
            (c > 0.0 ? beta : gamma)++;
            signed_w += w * w * (c > 0.0 ? 1.0 : -1.0);
            w_scale += w * w;
        }
        bool bad = false;
        if (block.size() % 2 != 0 || beta != gamma) {
            cond2_ok = false;
            bad = true;
        }
        if (std::abs(signed_w) > 1e-9 * std::max(1.0, w_scale)) {
            cond3_ok = false;
            bad = true;
        }
        if (bad) v.failing_blocks.push_back(block);
        v.blocks.push_back(std::move(block));
        v.beta.push_back(beta);
        v.gamma_counts.push_back(gamma);
        pos = end;
    }
    if (!cond2_ok) {
        v.failed_conditions.push_back(2);
        msg << "condition 2: a block is not evenly split by sign; ";
    }
    if (!cond3_ok) {
        v.failed_conditions.push_back(3);
        msg << "condition 3: signed " << (correlated ? "sigma^2" : "d^2")
            << " sums do not cancel within a block; ";
    }

    v.excluded = !v.failed_conditions.empty();
    v.message = v.excluded
                    ? "infeasible as an odd-chaos limit: " + msg.str()
                    : "not excluded by the odd-chaos feasibility conditions";
    return v;
}

}  // namespace

FeasibilityVerdict feasibility_gate(const std::vector<double>& c, const std::vector<double>& d) {
    if (c.size() != d.size()) throw std::invalid_argument("feasibility_gate: c/d size mismatch");
    return block_gate(c, d, false);
}

FeasibilityVerdict correlated_feasibility_gate(const CorrelatedSpec& Y) {
    Y.validate();
    FeasibilityVerdict v = block_gate(Y.lambdas, Y.sigmas, true);
    double pos = 0.0, neg = 0.0;
    for (std::size_t i = 0; i < Y.lambdas.size(); ++i) {
        (Y.lambdas[i] > 0.0 ? pos : neg) += Y.sigmas[i] * Y.sigmas[i];
    }
    // the two signed halves must carry equal correlation mass, each below 1/2
    if (std::abs(pos - neg) > 1e-9 * std::max(1.0, pos + neg) || !(pos < 0.5) || !(neg < 0.5)) {
        v.failed_conditions.push_back(4);
        v.excluded = true;
        std::ostringstream msg;
        msg << "condition 4: correlation mass split " << pos << " / " << neg
            << " violates equality below 1/2; ";
        if (v.message.rfind("not excluded", 0) == 0)
            v.message = "infeasible as an odd-chaos limit: " + msg.str();
        else
            v.message += msg.str();
    }
    return v;
}

double appendix_identity_residual(const TargetSpec& X, double x) {
    const CriterionPolynomial P = build_polynomial(X);
    const int D = P.degree;
    if (x == 0.0) return 0.0;

    std::vector<double> kap(std::size_t(D) + 1, 0.0);
    for (int r = 2; r <= D; ++r) kap[std::size_t(r)] = target_cumulant(X, r);

    const cplx ix = I * x;
    cplx sum = 0.0;
    for (int r = 2; r <= D; ++r) sum += P.weights[std::size_t(r)] * kap[std::size_t(r)] / factorial(r - 1);
    for (int m = 1; m <= D - 2; ++m) {
        cplx inner_sum = 0.0;
        for (int r = m + 2; r <= D; ++r)
            inner_sum += P.weights[std::size_t(r)] * kap[std::size_t(r - m)] / factorial(r - m - 1);
        sum += std::pow(ix, -m) * inner_sum;
    }
    const cplx lhs = std::pow(2.0 * ix, D - 1) * sum;

    cplx g1 = 1.0, g2 = 1.0;
    for (double b : X.b) g1 *= 1.0 - 2.0 * ix * b;
    for (auto [c, d] : X.cd) {
        (void)d;
        const cplx f = 1.0 - 2.0 * ix * c;
        g2 *= f * f;
    }
    cplx rhs = ix * X.a * X.a * g1 * g2;
    for (std::size_t l = 0; l < X.b.size(); ++l) {
        cplx prod = 1.0;
        for (std::size_t j = 0; j < X.b.size(); ++j)
            if (j != l) prod *= 1.0 - 2.0 * ix * X.b[j];
        rhs += 2.0 * ix * g2 * X.b[l] * X.b[l] * prod;
    }
    for (std::size_t l = 0; l < X.cd.size(); ++l) {
        const auto [cl, dl] = X.cd[l];
        const double delta = 4.0 * cl * cl + dl * dl;
        cplx prod = 1.0;
        for (std::size_t j = 0; j < X.cd.size(); ++j) {
            if (j == l) continue;
            const cplx f = 1.0 - 2.0 * ix * X.cd[j].first;
            prod *= f * f;
        }
        const cplx fl = 1.0 - 2.0 * ix * cl;
        rhs += g1 * prod * (ix * delta * fl + ix * ix * cl * delta - 2.0 * ix * cl * cl);
    }
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return std::abs(lhs - rhs) / scale;
}

}  // namespace ck
