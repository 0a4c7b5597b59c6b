#include "chaoskit/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <thread>

#include "chaoskit/criteria.hpp"
#include "chaoskit/rng.hpp"

namespace ck {

namespace {

using cplx = std::complex<double>;
constexpr cplx I{0.0, 1.0};

// ---------------------------------------------------------------------------
// compiled form of a chaos expansion: one term per non-zero multiset
// coefficient, holding the multinomial weight and the Hermite degrees
// ---------------------------------------------------------------------------

struct HermiteFactor {
    int var;
    int degree;
};

struct ChaosTerm {
    double coef;  // (p!/prod m_j!) * a_mu
    std::vector<HermiteFactor> factors;
};

struct CompiledChaos {
    int dim = 0;
    int max_degree = 0;  // highest Hermite degree appearing
    double f0 = 0.0;
    std::vector<ChaosTerm> terms;
};

CompiledChaos compile_chaos(const ChaosVector& F) {
    CompiledChaos out;
    out.dim = F.dim();
    out.f0 = F.constant();
    const int d = F.dim();
    for (int p = 1; p <= F.max_order(); ++p) {
        const SymTensor& f = F.kernel(p);
        std::vector<int> idx(std::size_t(p), 0);  // non-decreasing index tuple
        while (true) {
            const double a = f.at(idx);
            if (a != 0.0) {
                ChaosTerm term;
                term.coef = a * factorial(p);
                for (std::size_t i = 0; i < idx.size();) {
                    std::size_t j = i;
                    while (j < idx.size() && idx[j] == idx[i]) ++j;
                    const int mult = int(j - i);
                    term.coef /= factorial(mult);
                    term.factors.push_back({idx[i], mult});
                    out.max_degree = std::max(out.max_degree, mult);
                    i = j;
                }
                out.terms.push_back(std::move(term));
            }
            // advance to the next non-decreasing tuple
            int pos = p - 1;
            while (pos >= 0 && idx[std::size_t(pos)] == d - 1) --pos;
            if (pos < 0) break;
            const int v = idx[std::size_t(pos)] + 1;
            for (int i = pos; i < p; ++i) idx[std::size_t(i)] = v;
        }
    }
    return out;
}

// hermite[j * stride + k] = H_k(xi_j), probabilists' three-term recurrence
void hermite_table(std::span<const double> xi, int max_degree, std::vector<double>& table) {
    const std::size_t stride = std::size_t(max_degree) + 1;
    table.assign(xi.size() * stride, 1.0);
    for (std::size_t j = 0; j < xi.size(); ++j) {
        double* h = table.data() + j * stride;
        if (max_degree >= 1) h[1] = xi[j];
        for (int k = 2; k <= max_degree; ++k)
            h[k] = xi[j] * h[k - 1] - double(k - 1) * h[k - 2];
    }
}

double evaluate_compiled(const CompiledChaos& c, std::span<const double> table_row_major) {
    const std::size_t stride = std::size_t(c.max_degree) + 1;
    double acc = c.f0;
    for (const ChaosTerm& t : c.terms) {
        double prod = t.coef;
        for (const HermiteFactor& fac : t.factors)
            prod *= table_row_major[std::size_t(fac.var) * stride + std::size_t(fac.degree)];
        acc += prod;
    }
    return acc;
}

// run fn over [0, n) split into contiguous ranges, one per worker; every
// index is a pure function of itself, so partitioning cannot change results
template <class Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
    int t = threads > 0 ? threads : int(std::thread::hardware_concurrency());
    if (t < 1) t = 1;
    t = int(std::min<std::size_t>(std::size_t(t), std::max<std::size_t>(1, n / 1024)));
    if (t <= 1) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    const std::size_t step = (n + std::size_t(t) - 1) / std::size_t(t);
    for (int w = 0; w < t; ++w) {
        const std::size_t lo = std::size_t(w) * step;
        const std::size_t hi = std::min(n, lo + step);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

// fill out[i] for each sampled path, evaluating the given compiled expansions
// on a shared normal vector (counters i*dim .. i*dim+dim-1)
void sample_paths(const std::vector<const CompiledChaos*>& exprs, int dim, std::size_t n,
                  std::uint64_t seed, std::uint64_t stream, int threads,
                  const std::vector<double*>& out) {
    int max_degree = 1;
    for (const auto* e : exprs) max_degree = std::max(max_degree, e->max_degree);
    parallel_for(n, threads, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> xi(std::size_t(dim), 0.0);
        std::vector<double> table;
        for (std::size_t i = lo; i < hi; ++i) {
            for (int j = 0; j < dim; ++j)
                xi[std::size_t(j)] =
                    random_normal(seed, stream, i * std::size_t(dim) + std::size_t(j));
            hermite_table(xi, max_degree, table);
            // all expressions share one table, hence one common stride
            const std::size_t stride = std::size_t(max_degree) + 1;
            for (std::size_t e = 0; e < exprs.size(); ++e) {
                double acc = exprs[e]->f0;
                for (const ChaosTerm& t : exprs[e]->terms) {
                    double prod = t.coef;
                    for (const HermiteFactor& fac : t.factors)
                        prod *= table[std::size_t(fac.var) * stride + std::size_t(fac.degree)];
                    acc += prod;
                }
                out[e][i] = acc;
            }
        }
    });
}

// ---------------------------------------------------------------------------
// unbiased k-statistics in power sums S_a = sum x_i^a (frozen coefficients)
// ---------------------------------------------------------------------------

double kstat(int r, double n, const double* S) {
    const double S1 = S[1], S2 = S[2], S3 = S[3], S4 = S[4], S5 = S[5], S6 = S[6];
    switch (r) {
        case 1:
            return S1 / n;
        case 2:
            return S2 / (n - 1) - S1 * S1 / (n * (n - 1));
        case 3:
            return n * S3 / ((n - 2) * (n - 1)) - 3 * S2 * S1 / ((n - 2) * (n - 1)) +
                   2 * S1 * S1 * S1 / (n * (n - 2) * (n - 1));
        case 4: {
            const double d3 = (n - 3) * (n - 2) * (n - 1);
            return n * (n + 1) * S4 / d3 - 4 * (n + 1) * S3 * S1 / d3 -
                   3 * S2 * S2 / ((n - 3) * (n - 2)) + 12 * S2 * S1 * S1 / d3 -
                   6 * S1 * S1 * S1 * S1 / (n * d3);
        }
        case 5: {
            const double d3 = (n - 4) * (n - 3) * (n - 2);
            const double d4 = d3 * (n - 1);
            return n * n * (n + 5) * S5 / d4 - 5 * n * (n + 5) * S4 * S1 / d4 -
                   10 * n * S3 * S2 / d3 + 20 * (n + 2) * S3 * S1 * S1 / d4 +
                   30 * S2 * S2 * S1 / d3 - 60 * S2 * S1 * S1 * S1 / d4 +
                   24 * std::pow(S1, 5) / (n * d4);
        }
        case 6: {
            const double d4 = (n - 5) * (n - 4) * (n - 3) * (n - 2);
            const double d5 = d4 * (n - 1);
            const double q = n * n + 15 * n - 4;
            return n * (n + 1) * q * S6 / d5 - 6 * (n + 1) * q * S5 * S1 / d5 -
                   15 * (n - 1) * (n + 4) * S4 * S2 / d4 +
                   30 * (n * n + 9 * n + 2) * S4 * S1 * S1 / d5 -
                   10 * (n * n - n + 4) * S3 * S3 / d4 + 120 * (n + 1) * S3 * S2 * S1 / d4 -
                   120 * (n + 3) * S3 * S1 * S1 * S1 / d5 +
                   30 * S2 * S2 * S2 / ((n - 5) * (n - 4) * (n - 3)) -
                   270 * S2 * S2 * S1 * S1 / d4 + 360 * S2 * std::pow(S1, 4) / d5 -
                   120 * std::pow(S1, 6) / (n * d5);
        }
        default:
            throw std::invalid_argument("kstat: order must be 1..6");
    }
}

cplx ipow_c(cplx z, int e) {
    cplx out = 1.0;
    for (int i = 0; i < e; ++i) out *= z;
    return out;
}

}  // namespace

void McConfig::validate() const {
    if (N < 100) throw std::invalid_argument("McConfig: N must be >= 100");
    if (bins < 2) throw std::invalid_argument("McConfig: bins must be >= 2");
    for (double x : x_grid)
        if (!std::isfinite(x)) throw std::invalid_argument("McConfig: non-finite x-grid entry");
    for (auto [t1, t2] : t_grid)
        if (!std::isfinite(t1) || !std::isfinite(t2))
            throw std::invalid_argument("McConfig: non-finite t-grid entry");
}

double evaluate_chaos(const ChaosVector& F, std::span<const double> xi) {
    if (int(xi.size()) != F.dim())
        throw std::invalid_argument("evaluate_chaos: xi length must equal dim");
    const CompiledChaos c = compile_chaos(F);
    std::vector<double> table;
    hermite_table(xi, c.max_degree, table);
    return evaluate_compiled(c, table);
}

std::vector<double> sample_chaos(const ChaosVector& F, const McConfig& cfg,
                                 std::uint64_t stream) {
    cfg.validate();
    const CompiledChaos c = compile_chaos(F);
    std::vector<double> out(cfg.N);
    sample_paths({&c}, F.dim(), cfg.N, cfg.seed, stream, cfg.threads, {out.data()});
    return out;
}

std::vector<McEstimate> empirical_cumulants(std::span<const double> sample, int r_max) {
    if (r_max < 1 || r_max > 6)
        throw std::invalid_argument("empirical_cumulants: r_max must be in 1..6");
    const std::size_t n = sample.size();
    if (n < std::size_t(r_max) + 2)
        throw std::invalid_argument("empirical_cumulants: sample too small");

    // centre by the full-sample mean for numerical stability; k_r with r >= 2
    // is shift-invariant, and the shift is added back to k_1
    double mean0 = 0.0;
    for (double x : sample) mean0 += x;
    mean0 /= double(n);

    const std::size_t blocks = std::min<std::size_t>(100, n / std::size_t(r_max + 2));
    std::vector<std::array<double, 7>> block_s(blocks, std::array<double, 7>{});
    std::vector<std::size_t> block_n(blocks, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t b = std::min(blocks - 1, i * blocks / n);
        const double x = sample[i] - mean0;
        double pw = 1.0;
        for (int a = 1; a <= r_max; ++a) {
            pw *= x;
            block_s[b][std::size_t(a)] += pw;
        }
        ++block_n[b];
    }
    std::array<double, 7> total{};
    std::size_t check = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
        for (int a = 1; a <= r_max; ++a) total[std::size_t(a)] += block_s[b][std::size_t(a)];
        check += block_n[b];
    }
    (void)check;

    std::vector<McEstimate> out(std::size_t(r_max) + 1);
    for (int r = 1; r <= r_max; ++r) {
        McEstimate est;
        est.N = n;
        est.value = kstat(r, double(n), total.data()) + (r == 1 ? mean0 : 0.0);
        // delete-one-block jackknife
        std::vector<double> loo(blocks);
        double loo_mean = 0.0;
        for (std::size_t b = 0; b < blocks; ++b) {
            std::array<double, 7> s{};
            for (int a = 1; a <= r_max; ++a)
                s[std::size_t(a)] = total[std::size_t(a)] - block_s[b][std::size_t(a)];
            loo[b] = kstat(r, double(n - block_n[b]), s.data());
            loo_mean += loo[b];
        }
        loo_mean /= double(blocks);
        double ss = 0.0;
        for (double v : loo) ss += (v - loo_mean) * (v - loo_mean);
        est.se = std::sqrt(ss * double(blocks - 1) / double(blocks));
        out[std::size_t(r)] = est;
    }
    return out;
}

std::vector<McEstimate> empirical_cumulants(const ChaosVector& F, int r_max,
                                            const McConfig& cfg) {
    const std::vector<double> s = sample_chaos(F, cfg);
    return empirical_cumulants(s, r_max);
}

std::vector<CfPoint> empirical_cf(std::span<const double> sample,
                                  const std::vector<double>& x_grid) {
    if (sample.empty()) throw std::invalid_argument("empirical_cf: empty sample");
    std::vector<CfPoint> out;
    out.reserve(x_grid.size());
    const double ci = 4.0 / std::sqrt(double(sample.size()));
    for (double x : x_grid) {
        cplx acc = 0.0;
        for (double s : sample) acc += std::exp(I * (x * s));
        out.push_back({x, acc / double(sample.size()), ci});
    }
    return out;
}

std::vector<CfPoint> empirical_cf(const ChaosVector& F, const McConfig& cfg) {
    const std::vector<double> s = sample_chaos(F, cfg);
    return empirical_cf(s, cfg.x_grid);
}

ConditionalL1 conditional_l1(const ChaosVector& F, const ChaosVector& G, const McConfig& cfg) {
    cfg.validate();
    if (F.dim() != G.dim()) throw std::invalid_argument("conditional_l1: dim mismatch");
    if (variance(F) == 0.0)
        throw std::invalid_argument("conditional_l1: conditioning variable is degenerate");

    const CompiledChaos cf = compile_chaos(F);
    const CompiledChaos cg = compile_chaos(G);
    std::vector<double> vf(cfg.N), vg(cfg.N);
    sample_paths({&cf, &cg}, F.dim(), cfg.N, cfg.seed, 0, cfg.threads, {vf.data(), vg.data()});

    std::vector<std::size_t> order(cfg.N);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return vf[a] < vf[b]; });

    const std::size_t bins = std::min<std::size_t>(std::size_t(cfg.bins), cfg.N / 2);
    double value = 0.0, var_acc = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        const std::size_t lo = b * cfg.N / bins, hi = (b + 1) * cfg.N / bins;
        const double nb = double(hi - lo);
        double m = 0.0, m2 = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m += vg[order[i]];
        m /= nb;
        for (std::size_t i = lo; i < hi; ++i) {
            const double d = vg[order[i]] - m;
            m2 += d * d;
        }
        const double w = nb / double(cfg.N);
        value += w * std::abs(m);
        var_acc += w * w * (m2 / (nb - 1.0)) / nb;  // se^2 of the bin mean
    }
    ConditionalL1 out;
    out.bins = int(bins);
    out.estimate = {value, std::sqrt(var_acc), cfg.N};
    return out;
}

std::vector<JointFunctionalRow> joint_stable_functionals(const ChaosVector& F,
                                                         const SymTensor& f,
                                                         const TargetSpec& X,
                                                         const McConfig& cfg) {
    cfg.validate();
    if (f.order() != 1)
        throw std::invalid_argument("joint_stable_functionals: f must have order 1");
    if (f.dim() != F.dim())
        throw std::invalid_argument("joint_stable_functionals: dim mismatch");
    if (std::abs(norm(f) - 1.0) > 1e-8)
        throw std::invalid_argument("joint_stable_functionals: f must have unit norm");

    const CriterionPolynomial P = build_polynomial(X);
    const int D = P.degree;
    const int power_base = X.k1() + 2 * X.k2() + (X.a != 0.0 ? 1 : 0);

    // exact chaos expansions of the pairings
    ChaosVector If(F.dim(), 0.0);
    If.set_kernel(1, f);
    ChaosVector pairD(F.dim(), 0.0);  // <DI_1(f), DF>
    for (int l = 1; l <= F.max_order(); ++l)
        pairD.add_kernel(l - 1, sym_contract(F.kernel(l), f, 1), double(l));
    const auto chain = gamma_chain(F, std::max(0, D - 2));
    std::vector<ChaosVector> pairB;  // <DI_1(f), -DL^{-1} Gamma_beta(F)>
    for (int beta = 0; beta <= D - 2; ++beta)
        pairB.push_back(gamma_step(If, chain[std::size_t(beta)]));

    // pathwise values, one array per expansion
    const CompiledChaos c_if = compile_chaos(If);
    const CompiledChaos c_F = compile_chaos(F);
    const CompiledChaos c_pd = compile_chaos(pairD);
    std::vector<CompiledChaos> c_pb;
    for (const auto& pb : pairB) c_pb.push_back(compile_chaos(pb));
    std::vector<const CompiledChaos*> exprs = {&c_if, &c_F, &c_pd};
    for (const auto& c : c_pb) exprs.push_back(&c);
    std::vector<std::vector<double>> vals(exprs.size(), std::vector<double>(cfg.N));
    std::vector<double*> ptrs;
    for (auto& v : vals) ptrs.push_back(v.data());
    sample_paths(exprs, F.dim(), cfg.N, cfg.seed, 0, cfg.threads, ptrs);
    const std::vector<double>& vf = vals[0];
    const std::vector<double>& vF = vals[1];
    const std::vector<double>& vD = vals[2];

    std::vector<JointFunctionalRow> out;
    for (auto [t1, t2] : cfg.t_grid) {
        // weight of pair_beta inside the alpha/beta sum, alpha = r - 1 - beta
        std::vector<cplx> cbeta(std::size_t(std::max(0, D - 1)), 0.0);
        for (int beta = 0; beta <= D - 2; ++beta)
            for (int r = beta + 2; r <= D; ++r)
                cbeta[std::size_t(beta)] += P.weights[std::size_t(r)] *
                                            ipow_c(I * t2, power_base - (r - 1 - beta));

        cplx s1 = 0.0, s2 = 0.0;
        double q1r = 0.0, q1i = 0.0, q2r = 0.0, q2i = 0.0;
        for (std::size_t i = 0; i < cfg.N; ++i) {
            const cplx z = std::exp(I * (t1 * vf[i] + t2 * vF[i]));
            const cplx a = z * vD[i];
            cplx b = 0.0;
            for (int beta = 0; beta <= D - 2; ++beta)
                b += cbeta[std::size_t(beta)] * vals[std::size_t(3 + beta)][i];
            b *= z * (I * t1);
            s1 += a;
            s2 += b;
            q1r += a.real() * a.real();
            q1i += a.imag() * a.imag();
            q2r += b.real() * b.real();
            q2i += b.imag() * b.imag();
        }
        const double n = double(cfg.N);
        JointFunctionalRow row;
        row.t1 = t1;
        row.t2 = t2;
        row.pairing_mean = s1 / n;
        row.weighted_mean = s2 / n;
        auto se_of = [n](cplx mean_v, double qr, double qi) {
            const double vr = std::max(0.0, qr / n - mean_v.real() * mean_v.real());
            const double vi = std::max(0.0, qi / n - mean_v.imag() * mean_v.imag());
            return std::sqrt((vr + vi) / n);
        };
        row.pairing_se = se_of(row.pairing_mean, q1r, q1i);
        row.weighted_se = se_of(row.weighted_mean, q2r, q2i);
        out.push_back(row);
    }
    return out;
}

}  // namespace ck
