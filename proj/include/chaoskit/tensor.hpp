#pragma once

// Dense symmetric tensors over R^d with the full-tensor coefficient
// convention: a value a_{i1..ip} is stored for every index tuple, and
// symmetric tensors satisfy a_{i1..ip} = a_{sigma(i1)..sigma(ip)}.

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace ck {

struct SpaceDim {
    int d = 1;
    explicit SpaceDim(int dim) : d(dim) {
        if (d < 1) throw std::invalid_argument("SpaceDim: d must be >= 1");
    }
};

namespace detail {
inline std::size_t ipow(std::size_t base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}
}  // namespace detail

// Unconstrained dense tensor, the intermediate result of products and
// contractions before symmetrization. Order 0 is a scalar.
class RawTensor {
  public:
    RawTensor(int dim, int order)
        : dim_(dim), order_(order), coeffs_(detail::ipow(std::size_t(dim), order), 0.0) {
        if (dim < 1) throw std::invalid_argument("RawTensor: dim must be >= 1");
        if (order < 0) throw std::invalid_argument("RawTensor: order must be >= 0");
    }

    int dim() const { return dim_; }
    int order() const { return order_; }
    std::size_t size() const { return coeffs_.size(); }

    double& operator[](std::size_t flat) { return coeffs_[flat]; }
    double operator[](std::size_t flat) const { return coeffs_[flat]; }

    // flat index of a 0-based index tuple, first index varies slowest
    std::size_t flat_index(std::span<const int> idx) const;
    double at(std::span<const int> idx) const { return coeffs_[flat_index(idx)]; }
    double& at(std::span<const int> idx) { return coeffs_[flat_index(idx)]; }

    std::span<const double> data() const { return coeffs_; }
    std::span<double> data() { return coeffs_; }

  private:
    int dim_;
    int order_;
    std::vector<double> coeffs_;
};

// Symmetric tensor; always constructed through symmetrization or through
// builders that preserve symmetry by construction.
class SymTensor {
  public:
    SymTensor(SpaceDim dim, int order) : t_(dim.d, order) {}
    SymTensor(int dim, int order) : t_(dim, order) {}

    // order-0 scalar
    static SymTensor scalar(int dim, double value);
    // basis vector e_i (0-based), order 1
    static SymTensor basis(int dim, int i);
    // symmetric rank-one power v x v x ... x v (order copies)
    static SymTensor rank_one(int dim, std::span<const double> v, int order);
    // order-2 tensor from a symmetric matrix in row-major layout
    static SymTensor from_matrix(int dim, std::span<const double> m);

    int dim() const { return t_.dim(); }
    int order() const { return t_.order(); }
    std::size_t size() const { return t_.size(); }

    double operator[](std::size_t flat) const { return t_[flat]; }
    double at(std::span<const int> idx) const { return t_.at(idx); }
    std::size_t flat_index(std::span<const int> idx) const { return t_.flat_index(idx); }

    std::span<const double> data() const { return t_.data(); }
    const RawTensor& raw() const { return t_; }

    // in-place linear algebra (symmetry is preserved)
    SymTensor& operator+=(const SymTensor& o);
    SymTensor& operator-=(const SymTensor& o);
    SymTensor& operator*=(double c);
    friend SymTensor operator+(SymTensor a, const SymTensor& b) { return a += b; }
    friend SymTensor operator-(SymTensor a, const SymTensor& b) { return a -= b; }
    friend SymTensor operator*(SymTensor a, double c) { return a *= c; }
    friend SymTensor operator*(double c, SymTensor a) { return a *= c; }

    friend SymTensor symmetrize(const RawTensor& t);

  private:
    explicit SymTensor(RawTensor t) : t_(std::move(t)) {}
    RawTensor t_;
};

// average of t over all permutations of its index slots
SymTensor symmetrize(const RawTensor& t);

// (f (x)_r g): contraction over r shared index slots; r = 0 is the plain
// tensor product. Result order is p + q - 2r, f's free slots first.
RawTensor contract(const SymTensor& f, const SymTensor& g, int r);

// symmetrize(contract(f, g, r)): the contraction written f (~x)_r g
SymTensor sym_contract(const SymTensor& f, const SymTensor& g, int r);

// iterated half-order self-contraction of an even-order tensor:
// r = 1 gives f itself, r+1 applies (. (~x)_{p/2} f) once more
SymTensor iter_contract_half(const SymTensor& f, int r);

double inner(const SymTensor& f, const SymTensor& g);
double inner(const RawTensor& f, const RawTensor& g);
double norm(const SymTensor& f);
double norm(const RawTensor& f);

double factorial(int n);
double binomial(int n, int k);

}  // namespace ck
