#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "chaoskit/rng.hpp"
#include "chaoskit/tensor.hpp"

using namespace ck;

namespace {

RawTensor random_raw(int d, int p, std::uint64_t stream) {
    RawTensor t(d, p);
    for (std::size_t i = 0; i < t.size(); ++i)
        t[i] = 2.0 * random_uniform(99, stream, i) - 1.0;
    return t;
}

// brute-force permutation average of one entry
double sym_oracle(const RawTensor& t, std::vector<int> idx) {
    std::sort(idx.begin(), idx.end());
    double acc = 0.0;
    int count = 0;
    do {
        acc += t.at(idx);
        ++count;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return acc / count;
}

// direct index-sum contraction oracle over r trailing slots of both kernels
double contract_oracle(const SymTensor& f, const SymTensor& g, int r,
                       const std::vector<int>& free_f, const std::vector<int>& free_g) {
    const int d = f.dim();
    std::vector<int> shared(std::size_t(r), 0);
    double acc = 0.0;
    while (true) {
        std::vector<int> fi = free_f;
        fi.insert(fi.end(), shared.begin(), shared.end());
        std::vector<int> gi = free_g;
        gi.insert(gi.end(), shared.begin(), shared.end());
        acc += f.at(fi) * g.at(gi);
        int k = r - 1;
        while (k >= 0 && ++shared[std::size_t(k)] == d) {
            shared[std::size_t(k)] = 0;
            --k;
        }
        if (k < 0) break;
    }
    return acc;
}

}  // namespace

TEST_CASE("flat indexing is row-major with bounds checks") {
    RawTensor t(3, 2);
    t[std::size_t(1) * 3 + 2] = 5.0;
    CHECK(t.at(std::array<int, 2>{1, 2}) == 5.0);
    CHECK_THROWS_AS((void)t.at(std::array<int, 2>{3, 0}), std::out_of_range);
    CHECK_THROWS_AS((void)t.at(std::array<int, 1>{0}), std::invalid_argument);
}

TEST_CASE("symmetrize equals the permutation-average oracle") {
    const RawTensor t = random_raw(3, 3, 1);
    const SymTensor s = symmetrize(t);
    std::array<int, 3> idx{};
    for (idx[0] = 0; idx[0] < 3; ++idx[0])
        for (idx[1] = 0; idx[1] < 3; ++idx[1])
            for (idx[2] = 0; idx[2] < 3; ++idx[2]) {
                const double want = sym_oracle(t, {idx[0], idx[1], idx[2]});
                CHECK(s.at(idx) == doctest::Approx(want).epsilon(1e-14));
            }
}

TEST_CASE("symmetrize is exact and idempotent on symmetric input") {
    const SymTensor s = symmetrize(random_raw(3, 4, 2));
    const SymTensor s2 = symmetrize(s.raw());
    for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i] == s2[i]);  // bitwise
}

TEST_CASE("order-2 contraction with r=1 is the matrix product") {
    const SymTensor a = symmetrize(random_raw(4, 2, 3));
    const SymTensor b = symmetrize(random_raw(4, 2, 4));
    const RawTensor ab = contract(a, b, 1);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double want = 0.0;
            for (int k = 0; k < 4; ++k)
                want += a.at(std::array<int, 2>{i, k}) * b.at(std::array<int, 2>{j, k});
            CHECK(ab.at(std::array<int, 2>{i, j}) == doctest::Approx(want).epsilon(1e-14));
        }
}

TEST_CASE("contraction of two order-3 kernels matches the index-sum oracle") {
    const SymTensor f = symmetrize(random_raw(3, 3, 5));
    const SymTensor g = symmetrize(random_raw(3, 3, 6));
    const RawTensor fg = contract(f, g, 2);  // order 2 result
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const double want = contract_oracle(f, g, 2, {i}, {j});
            CHECK(fg.at(std::array<int, 2>{i, j}) == doctest::Approx(want).epsilon(1e-13));
        }
    // r = 0 is the plain tensor product
    const RawTensor prod = contract(f, g, 0);
    CHECK(prod.order() == 6);
    CHECK(prod.at(std::array<int, 6>{0, 1, 2, 2, 1, 0}) ==
          doctest::Approx(f.at(std::array<int, 3>{0, 1, 2}) *
                          g.at(std::array<int, 3>{2, 1, 0})));
    // full contraction equals the inner product
    const RawTensor full = contract(f, g, 3);
    CHECK(full[0] == doctest::Approx(inner(f, g)).epsilon(1e-13));
}

TEST_CASE("sym_contract is the symmetrized contraction") {
    const SymTensor f = symmetrize(random_raw(3, 3, 7));
    const SymTensor g = symmetrize(random_raw(3, 2, 8));
    const SymTensor sc = sym_contract(f, g, 1);
    const SymTensor want = symmetrize(contract(f, g, 1));
    for (std::size_t i = 0; i < sc.size(); ++i) CHECK(sc[i] == want[i]);
}

TEST_CASE("builders produce the expected tensors") {
    const SymTensor e1 = SymTensor::basis(3, 1);
    CHECK(e1.at(std::array<int, 1>{1}) == 1.0);
    CHECK(norm(e1) == 1.0);

    const std::vector<double> v{1.0, 2.0, 0.0};
    const SymTensor vv = SymTensor::rank_one(3, v, 2);
    CHECK(vv.at(std::array<int, 2>{0, 1}) == 2.0);
    CHECK(vv.at(std::array<int, 2>{1, 1}) == 4.0);

    const std::vector<double> m{1.0, 5.0, 3.0, 2.0};  // asymmetric 2x2
    const SymTensor sm = SymTensor::from_matrix(2, m);
    CHECK(sm.at(std::array<int, 2>{0, 1}) == 4.0);
    CHECK(sm.at(std::array<int, 2>{1, 0}) == 4.0);

    CHECK(SymTensor::scalar(3, 2.5)[0] == 2.5);
}

TEST_CASE("half-order contraction iterates obey the trace chain identity") {
    const SymTensor f = symmetrize(random_raw(3, 4, 9));
    CHECK(norm(iter_contract_half(f, 1) - f) == 0.0);
    for (int k = 1; k <= 3; ++k)
        for (int l = 2; l <= 3; ++l) {
            const double a = inner(iter_contract_half(f, k), iter_contract_half(f, l));
            const double b = inner(iter_contract_half(f, k + 1), iter_contract_half(f, l - 1));
            CHECK(a == doctest::Approx(b).epsilon(1e-12));
        }
}

TEST_CASE("contraction norms obey the Cauchy-Schwarz chain") {
    const SymTensor f = symmetrize(random_raw(3, 3, 13));
    const SymTensor g = symmetrize(random_raw(3, 3, 14));
    for (int r = 1; r <= 2; ++r) {
        const double sym_norm = norm(sym_contract(f, g, r));
        const double raw_norm = norm(contract(f, g, r));
        CHECK(sym_norm <= raw_norm * (1.0 + 1e-12));
        // ||f (x)_r g||^2 = <f (x)_{p-r} f, g (x)_{q-r} g>
        const double mid = inner(contract(f, f, 3 - r), contract(g, g, 3 - r));
        CHECK(raw_norm * raw_norm == doctest::Approx(std::abs(mid)).epsilon(1e-10));
        CHECK(raw_norm * raw_norm <=
              norm(f) * norm(f) * norm(g) * norm(g) * (1.0 + 1e-12));
    }
    // <f x g, f x g> = ||f||^2 ||g||^2
    const RawTensor prod = contract(f, g, 0);
    CHECK(inner(prod, prod) ==
          doctest::Approx(norm(f) * norm(f) * norm(g) * norm(g)).epsilon(1e-12));
}

TEST_CASE("factorial and binomial helpers") {
    CHECK(factorial(0) == 1.0);
    CHECK(factorial(5) == 120.0);
    CHECK(binomial(6, 2) == 15.0);
    CHECK(binomial(5, 0) == 1.0);
    CHECK(binomial(4, 7) == 0.0);
    CHECK(binomial(4, -1) == 0.0);
}

TEST_CASE("shape mismatches are rejected") {
    const SymTensor a = symmetrize(random_raw(3, 2, 10));
    const SymTensor b = symmetrize(random_raw(4, 2, 11));
    CHECK_THROWS_AS((void)contract(a, b, 1), std::invalid_argument);
    CHECK_THROWS_AS((void)contract(a, a, 3), std::invalid_argument);
    SymTensor c = a;
    CHECK_THROWS_AS(c += b, std::invalid_argument);
    CHECK_THROWS_AS((void)inner(a.raw(), random_raw(3, 3, 12)), std::invalid_argument);
}
