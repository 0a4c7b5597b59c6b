#include "chaoskit/tensor.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace ck {

namespace {

constexpr int kMaxOrder = 16;

// advance a 0-based multi-index in row-major order, returns false on wrap
inline bool next_index(std::span<int> idx, int d) {
    for (int k = int(idx.size()) - 1; k >= 0; --k) {
        if (++idx[k] < d) return true;
        idx[k] = 0;
    }
    return false;
}

}  // namespace

std::size_t RawTensor::flat_index(std::span<const int> idx) const {
    if (int(idx.size()) != order_) throw std::invalid_argument("flat_index: wrong tuple length");
    std::size_t flat = 0;
    for (int k : idx) {
        if (k < 0 || k >= dim_) throw std::out_of_range("flat_index: index out of range");
        flat = flat * std::size_t(dim_) + std::size_t(k);
    }
    return flat;
}

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return std::round(r);
}

SymTensor SymTensor::scalar(int dim, double value) {
    RawTensor t(dim, 0);
    t[0] = value;
    return SymTensor(std::move(t));
}

SymTensor SymTensor::basis(int dim, int i) {
    RawTensor t(dim, 1);
    t.at(std::array<int, 1>{i}) = 1.0;
    return SymTensor(std::move(t));
}

SymTensor SymTensor::rank_one(int dim, std::span<const double> v, int order) {
    if (int(v.size()) != dim) throw std::invalid_argument("rank_one: vector length != dim");
    RawTensor t(dim, order);
    std::array<int, kMaxOrder> idx{};
    std::span<int> is(idx.data(), order);
    std::size_t flat = 0;
    do {
        double prod = 1.0;
        for (int k = 0; k < order; ++k) prod *= v[idx[k]];
        t[flat++] = prod;
    } while (next_index(is, dim));
    return SymTensor(std::move(t));
}

SymTensor SymTensor::from_matrix(int dim, std::span<const double> m) {
    if (m.size() != std::size_t(dim) * dim) throw std::invalid_argument("from_matrix: wrong size");
    RawTensor t(dim, 2);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
            double v = 0.5 * (m[std::size_t(i) * dim + j] + m[std::size_t(j) * dim + i]);
            t[std::size_t(i) * dim + j] = v;
        }
    return SymTensor(std::move(t));
}

SymTensor& SymTensor::operator+=(const SymTensor& o) {
    if (dim() != o.dim() || order() != o.order())
        throw std::invalid_argument("SymTensor +=: shape mismatch");
    for (std::size_t i = 0; i < t_.size(); ++i) t_[i] += o.t_[i];
    return *this;
}

SymTensor& SymTensor::operator-=(const SymTensor& o) {
    if (dim() != o.dim() || order() != o.order())
        throw std::invalid_argument("SymTensor -=: shape mismatch");
    for (std::size_t i = 0; i < t_.size(); ++i) t_[i] -= o.t_[i];
    return *this;
}

SymTensor& SymTensor::operator*=(double c) {
    for (std::size_t i = 0; i < t_.size(); ++i) t_[i] *= c;
    return *this;
}

SymTensor symmetrize(const RawTensor& t) {
    const int p = t.order();
    const int d = t.dim();
    if (p <= 1) {
        RawTensor out = t;
        return SymTensor(std::move(out));
    }
    // already-symmetric input passes through unchanged: averaging p! equal
    // values can round in the last ulp, and exactness here keeps round trips
    // and symmetric no-op calls bit-identical
    {
        std::array<int, kMaxOrder> idx{}, sorted{};
        std::span<int> is(idx.data(), p);
        std::size_t flat = 0;
        bool symmetric = true;
        do {
            std::copy(idx.begin(), idx.begin() + p, sorted.begin());
            std::sort(sorted.begin(), sorted.begin() + p);
            if (t[flat] != t[t.flat_index(std::span<const int>(sorted.data(), p))]) {
                symmetric = false;
                break;
            }
            ++flat;
        } while (next_index(is, d));
        if (symmetric) {
            RawTensor out = t;
            return SymTensor(std::move(out));
        }
    }
    // accumulate each tuple's value onto its sorted representative, then
    // spread the class average back; this is the permutation average
    // without enumerating p! permutations
    RawTensor acc(d, p);
    std::array<int, kMaxOrder> idx{}, sorted{};
    std::span<int> is(idx.data(), p);
    std::size_t flat = 0;
    do {
        std::copy(idx.begin(), idx.begin() + p, sorted.begin());
        std::sort(sorted.begin(), sorted.begin() + p);
        acc[acc.flat_index(std::span<const int>(sorted.data(), p))] += t[flat];
        ++flat;
    } while (next_index(is, d));

    RawTensor out(d, p);
    std::fill(idx.begin(), idx.begin() + p, 0);
    flat = 0;
    do {
        std::copy(idx.begin(), idx.begin() + p, sorted.begin());
        std::sort(sorted.begin(), sorted.begin() + p);
        // class size = p! / prod(multiplicity!)
        double nperm = factorial(p);
        int run = 1;
        for (int k = 1; k < p; ++k) {
            if (sorted[k] == sorted[k - 1]) {
                ++run;
                nperm /= run;
            } else {
                run = 1;
            }
        }
        out[flat] = acc[out.flat_index(std::span<const int>(sorted.data(), p))] / nperm;
        ++flat;
    } while (next_index(is, d));
    return SymTensor(std::move(out));
}

RawTensor contract(const SymTensor& f, const SymTensor& g, int r) {
    if (f.dim() != g.dim()) throw std::invalid_argument("contract: dim mismatch");
    const int p = f.order(), q = g.order();
    if (r < 0 || r > std::min(p, q)) throw std::invalid_argument("contract: invalid r");
    const int d = f.dim();
    const std::size_t nf = detail::ipow(std::size_t(d), p - r);
    const std::size_t ng = detail::ipow(std::size_t(d), q - r);
    const std::size_t ns = detail::ipow(std::size_t(d), r);
    // by symmetry the r contracted slots can be taken as the trailing slots
    // of both kernels; both tensors are then (free x shared) matrices and the
    // contraction is a plain matrix product against the shared axis
    RawTensor out(d, p + q - 2 * r);
    const auto fd = f.data();
    const auto gd = g.data();
    auto od = out.data();
    for (std::size_t a = 0; a < nf; ++a) {
        const double* frow = fd.data() + a * ns;
        double* orow = od.data() + a * ng;
        for (std::size_t b = 0; b < ng; ++b) {
            const double* grow = gd.data() + b * ns;
            double acc = 0.0;
            for (std::size_t s = 0; s < ns; ++s) acc += frow[s] * grow[s];
            orow[b] = acc;
        }
    }
    return out;
}

SymTensor sym_contract(const SymTensor& f, const SymTensor& g, int r) {
    return symmetrize(contract(f, g, r));
}

SymTensor iter_contract_half(const SymTensor& f, int r) {
    const int p = f.order();
    if (p % 2 != 0 || p == 0) throw std::invalid_argument("iter_contract_half: order must be even and positive");
    if (r < 1) throw std::invalid_argument("iter_contract_half: r must be >= 1");
    SymTensor out = f;
    for (int i = 1; i < r; ++i) out = sym_contract(out, f, p / 2);
    return out;
}

double inner(const RawTensor& f, const RawTensor& g) {
    if (f.dim() != g.dim() || f.order() != g.order())
        throw std::invalid_argument("inner: shape mismatch");
    const auto a = f.data();
    const auto b = g.data();
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double inner(const SymTensor& f, const SymTensor& g) { return inner(f.raw(), g.raw()); }

double norm(const RawTensor& f) { return std::sqrt(inner(f, f)); }
double norm(const SymTensor& f) { return std::sqrt(inner(f, f)); }

}  // namespace ck
