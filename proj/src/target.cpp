#include "chaoskit/target.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "chaoskit/rng.hpp"

namespace ck {

using cplx = std::complex<double>;
namespace {
constexpr cplx I{0.0, 1.0};
}

void TargetSpec::validate() const {
    for (double bi : b)
        if (bi == 0.0) throw std::invalid_argument("TargetSpec: b entries must be non-zero");
    for (auto [c, d] : cd)
        if (c * d == 0.0) throw std::invalid_argument("TargetSpec: c*d must be non-zero");
    if (a == 0.0 && b.empty() && cd.empty())
        throw std::invalid_argument("TargetSpec: at least one of a, k1, k2 must be non-zero");
}

void CorrelatedSpec::validate() const {
    if (lambdas.size() != sigmas.size())
        throw std::invalid_argument("CorrelatedSpec: lambda/sigma length mismatch");
    for (double l : lambdas)
        if (l == 0.0) throw std::invalid_argument("CorrelatedSpec: lambda entries must be non-zero");
    double s2 = 0.0;
    for (double s : sigmas) s2 += s * s;
    if (!(1.0 - s2 > 0.0))
        throw std::invalid_argument("CorrelatedSpec: covariance matrix not positive definite (1 - sum sigma^2 <= 0)");
    if (a0 == 0.0 && lambdas.empty())
        throw std::invalid_argument("CorrelatedSpec: empty spec");
}

double target_cumulant(const TargetSpec& X, int r) {
    if (r < 1) throw std::invalid_argument("target_cumulant: r must be >= 1");
    if (r == 1) return 0.0;
    double acc = (r == 2) ? X.a * X.a : 0.0;
    const double pre = std::pow(2.0, r - 1) * factorial(r - 1);
    for (double b : X.b) acc += pre * std::pow(b, r);
    for (auto [c, d] : X.cd)
        acc += pre * std::pow(c, r) + std::pow(2.0, r - 3) * factorial(r) * std::pow(c, r - 2) * d * d;
    return acc;
}

std::complex<double> target_cf(const TargetSpec& X, double x) {
    // each factor (1 - 2ix beta)^{-1/2} stays on the principal branch:
    // the argument has constant real part 1, so no branch cut is crossed
    // for any real x
    cplx expo = -0.5 * X.a * X.a * x * x;
    double bsum = 0.0;
    for (double b : X.b) bsum += b;
    expo -= I * x * bsum;
    for (auto [c, d] : X.cd) {
        const double delta = 4.0 * c * c + d * d;
        expo += (x * x * delta + 2.0 * I * c * x) / (4.0 * I * x * c - 2.0);
    }
    cplx prod = 1.0;
    for (double b : X.b) prod *= std::pow(1.0 - 2.0 * I * x * b, -0.5);
    for (auto [c, d] : X.cd) prod *= std::pow(1.0 - 2.0 * I * x * c, -0.5);
    return std::exp(expo) * prod;
}

namespace {

// logarithmic derivative phi'/phi of the closed form
cplx cf_log_derivative(const TargetSpec& X, double x) {
    cplx acc = -x * X.a * X.a;
    for (double b : X.b) acc += -I * b + I * b / (1.0 - 2.0 * I * x * b);
    for (auto [c, d] : X.cd) {
        const double delta = 4.0 * c * c + d * d;
        const cplx g = 1.0 - 2.0 * I * x * c;
        acc += -x * delta / g - x * x * I * c * delta / (g * g) + 2.0 * x * c * c / (g * g);
    }
    return acc;
}

}  // namespace

std::complex<double> ode_residual(const TargetSpec& X, double x) {
    const cplx phi = target_cf(X, x);
    const cplx dphi = phi * cf_log_derivative(X, x);
    cplx g1 = 1.0, g2 = 1.0;
    for (double b : X.b) g1 *= 1.0 - 2.0 * I * x * b;
    for (auto [c, d] : X.cd) {
        const cplx f = 1.0 - 2.0 * I * x * c;
        g2 *= f * f;
    }
    const cplx lhs = dphi * g1 * g2;

    double bsum = 0.0;
    for (double b : X.b) bsum += b;
    cplx rhs = phi * (-x * X.a * X.a - I * bsum) * g1 * g2;
    for (std::size_t l = 0; l < X.cd.size(); ++l) {
        const auto [cl, dl] = X.cd[l];
        const double delta = 4.0 * cl * cl + dl * dl;
        cplx prod = 1.0;
        for (std::size_t j = 0; j < X.cd.size(); ++j) {
            if (j == l) continue;
            const cplx f = 1.0 - 2.0 * I * x * X.cd[j].first;
            prod *= f * f;
        }
        const cplx fl = 1.0 - 2.0 * I * x * cl;
        rhs += phi * g1 * prod * (-x * delta * fl - x * x * I * cl * delta + 2.0 * x * cl * cl);
    }
    for (std::size_t l = 0; l < X.b.size(); ++l) {
        cplx prod = 1.0;
        for (std::size_t j = 0; j < X.b.size(); ++j)
            if (j != l) prod *= 1.0 - 2.0 * I * x * X.b[j];
        rhs += phi * g2 * I * X.b[l] * prod;
    }
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return (lhs - rhs) / scale;
}

ChaosVector to_chaos(const TargetSpec& X, SpaceDim dim) {
    X.validate();
    const int need = 1 + X.k1() + X.k2();
    if (dim.d < need) throw std::invalid_argument("to_chaos: dim too small for spec");
    ChaosVector F(dim.d, 0.0);
    SymTensor f1(dim, 1);
    SymTensor f2(dim, 2);
    if (X.a != 0.0) f1 += X.a * SymTensor::basis(dim.d, 0);
    for (int i = 0; i < X.k1(); ++i) {
        const SymTensor h = SymTensor::basis(dim.d, 1 + i);
        f2 += X.b[std::size_t(i)] * sym_contract(h, h, 0);
    }
    for (int j = 0; j < X.k2(); ++j) {
        const SymTensor h = SymTensor::basis(dim.d, 1 + X.k1() + j);
        f2 += X.cd[std::size_t(j)].first * sym_contract(h, h, 0);
        f1 += X.cd[std::size_t(j)].second * h;
    }
    if (norm(f1) != 0.0) F.set_kernel(1, std::move(f1));
    if (norm(f2) != 0.0) F.set_kernel(2, std::move(f2));
    return F;
}

TargetSpec canonicalize(const SymTensor& f1, const SymTensor& f2) {
    if (f1.order() != 1 || f2.order() != 2)
        throw std::invalid_argument("canonicalize: expects orders 1 and 2");
    if (f1.dim() != f2.dim()) throw std::invalid_argument("canonicalize: dim mismatch");
    const int d = f1.dim();
    const double n2 = norm(f2);
    if (norm(f1) == 0.0 && n2 == 0.0) throw std::invalid_argument("canonicalize: zero input");

    Eigen::MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = f2.data()[std::size_t(i) * d + j];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.info() != Eigen::Success)
        throw std::runtime_error("canonicalize: eigendecomposition failed");

    const double eig_tol = 1e-10 * n2;
    const double d_tol = 1e-10 * std::max(1.0, norm(f1));
    Eigen::VectorXd v1(d);
    for (int i = 0; i < d; ++i) v1(i) = f1.data()[std::size_t(i)];

    TargetSpec out;
    double a2 = v1.squaredNorm();
    for (int i = 0; i < d; ++i) {
        const double lam = eig.eigenvalues()(i);
        if (std::abs(lam) <= eig_tol) continue;  // f1 mass here folds into a
        const double proj = eig.eigenvectors().col(i).dot(v1);
        a2 -= proj * proj;
        if (std::abs(proj) <= d_tol)
            out.b.push_back(lam);
        else
            out.cd.emplace_back(lam, std::abs(proj));
    }
    out.a = std::sqrt(std::max(0.0, a2));
    std::sort(out.b.begin(), out.b.end(), std::greater<>());
    std::sort(out.cd.begin(), out.cd.end(),
              [](const auto& x, const auto& y) { return x.first > y.first; });
    return out;
}

TargetSpec from_correlated(const CorrelatedSpec& Y) {
    Y.validate();
    double s2 = 0.0;
    for (double s : Y.sigmas) s2 += s * s;
    TargetSpec out;
    out.a = Y.a0 * std::sqrt(1.0 - s2);
    for (std::size_t i = 0; i < Y.lambdas.size(); ++i) {
        const double sig = Y.sigmas[i];
        if (Y.a0 * sig == 0.0)
            out.b.push_back(Y.lambdas[i]);
        else
            out.cd.emplace_back(Y.lambdas[i], Y.a0 * sig);
    }
    out.validate();
    return out;
}

std::vector<double> sample_target(const TargetSpec& X, std::size_t n, std::uint64_t seed,
                                  std::uint64_t stream) {
    X.validate();
    const std::size_t vars = 1 + X.b.size() + X.cd.size();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t ctr = i * vars;
        double x = X.a * random_normal(seed, stream, ctr++);
        for (double b : X.b) {
            const double r = random_normal(seed, stream, ctr++);
            x += b * (r * r - 1.0);
        }
        for (auto [c, d] : X.cd) {
            const double p = random_normal(seed, stream, ctr++);
            x += c * (p * p - 1.0) + d * p;
        }
        out[i] = x;
    }
    return out;
}

}  // namespace ck
