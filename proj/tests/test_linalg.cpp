#include <gtest/gtest.h>

#include <set>

#include "iwalab/linalg.hpp"
#include "iwalab/random.hpp"

using namespace iwalab;

namespace {

Matrix<Word> random_matrix(Rng& rng, const PadicContext<Word>& c, std::size_t r, std::size_t k) {
    Matrix<Word> m(r, k);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            // bias towards non-units so the invariant factors vary
            Word x = rng.below(c.modulus());
            if (rng.chance(1, 2)) x = c.mul(x, c.p_power(static_cast<int>(rng.below(c.precision()))));
            m(i, j) = x;
        }
    return m;
}

// all vectors of (Z/q)^n, q small
std::vector<Vec<Word>> all_vectors(std::size_t n, Word q) {
    std::vector<Vec<Word>> out;
    Vec<Word> v(n, 0);
    for (;;) {
        out.push_back(v);
        std::size_t i = 0;
        while (i < n && ++v[i] == q) v[i++] = 0;
        if (i == n) break;
    }
    return out;
}

std::set<Vec<Word>> brute_span(const PadicContext<Word>& c, const Matrix<Word>& m) {
    std::set<Vec<Word>> out;
    for (const auto& z : all_vectors(m.cols(), c.modulus())) out.insert(apply(c, m, z));
    return out;
}

int log_p(std::size_t n, unsigned p) {
    int e = 0;
    while (n > 1) {
        EXPECT_EQ(n % p, 0u);
        n /= p;
        ++e;
    }
    return e;
}

}  // namespace

TEST(Smith, FactorisationIdentities) {
    Rng rng(21);
    for (unsigned p : {3u, 5u}) {
        PadicContext<Word> c(p, 5);
        for (int t = 0; t < 60; ++t) {
            const std::size_t r = 1 + rng.below(5), k = 1 + rng.below(5);
            auto m = random_matrix(rng, c, r, k);
            auto s = smith_form(c, m);
            EXPECT_EQ(mat_mul(c, mat_mul(c, s.U, m), s.V), s.diagonal);
            EXPECT_EQ(mat_mul(c, s.U, s.U_inv), Matrix<Word>::identity(r));
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < k; ++j) {
                    if (i != j) {
                        EXPECT_EQ(s.diagonal(i, j), 0u);
                    } else {
                        EXPECT_EQ(s.diagonal(i, i), c.p_power(s.diag_val[i]));
                    }
                }
            for (std::size_t i = 1; i < s.diag_val.size(); ++i) EXPECT_LE(s.diag_val[i - 1], s.diag_val[i]);
        }
    }
}

TEST(Smith, SpanOrderMatchesEnumeration) {
    Rng rng(22);
    PadicContext<Word> c(3, 2);
    for (int t = 0; t < 40; ++t) {
        const std::size_t r = 1 + rng.below(3), k = 1 + rng.below(3);
        auto m = random_matrix(rng, c, r, k);
        EXPECT_EQ(span_log_size(c, m), log_p(brute_span(c, m).size(), 3));
    }
}

TEST(Span, BasisSpansTheSameSubmodule) {
    Rng rng(27);
    PadicContext<Word> c(3, 2);
    for (int t = 0; t < 40; ++t) {
        const std::size_t r = 1 + rng.below(3), k = 1 + rng.below(6);
        auto m = random_matrix(rng, c, r, k);
        auto b = span_basis(c, m);
        EXPECT_LE(b.cols(), r);
        EXPECT_EQ(brute_span(c, b.cols() ? b : Matrix<Word>(r, 1)), brute_span(c, m));
    }
}

TEST(Kernel, MatchesEnumeration) {
    Rng rng(23);
    PadicContext<Word> c(3, 2);
    for (int t = 0; t < 40; ++t) {
        const std::size_t r = 1 + rng.below(3), k = 1 + rng.below(3);
        auto m = random_matrix(rng, c, r, k);
        std::set<Vec<Word>> ker;
        for (const auto& z : all_vectors(k, c.modulus()))
            if (is_zero(apply(c, m, z))) ker.insert(z);
        auto K = kernel(c, m);
        EXPECT_TRUE(is_zero(apply(c, m, Vec<Word>(k, 0))));
        for (std::size_t j = 0; j < K.cols(); ++j) EXPECT_TRUE(is_zero(apply(c, m, K.column(j))));
        EXPECT_EQ(brute_span(c, K.cols() ? K : Matrix<Word>(k, 1)), ker);
    }
}

TEST(Kernel, ExactKernelKeepsOnlyVanishingDirections) {
    PadicContext<Word> c(3, 4);
    // diag(3, 0): the exact kernel is the second axis only
    Matrix<Word> m(2, 2);
    m(0, 0) = 3;
    auto k = exact_kernel(c, m);
    ASSERT_EQ(k.generators.cols(), 1u);
    EXPECT_EQ(k.generators(0, 0), 0u);
    EXPECT_TRUE(c.is_unit(k.generators(1, 0)));
    EXPECT_EQ(k.cokernel_torsion, 1);
}

TEST(Solve, FindsSolutionsExactlyWhenTheyExist) {
    Rng rng(24);
    PadicContext<Word> c(3, 2);
    for (int t = 0; t < 40; ++t) {
        const std::size_t r = 1 + rng.below(3), k = 1 + rng.below(3);
        auto m = random_matrix(rng, c, r, k);
        auto span = brute_span(c, m);
        Vec<Word> b(r);
        for (auto& x : b) x = rng.below(c.modulus());
        auto z = solve(c, m, b);
        EXPECT_EQ(z.has_value(), span.count(b) == 1);
        if (z) { EXPECT_EQ(apply(c, m, *z), b); }
    }
}

TEST(Saturation, ContainsSpanAndIsSaturated) {
    PadicContext<Word> c(5, 4);
    Matrix<Word> m(2, 1);
    m(0, 0) = 25;
    m(1, 0) = 50;
    auto s = saturated_span(c, m);
    ASSERT_EQ(s.cols(), 1u);
    // (1, 2) up to a unit
    EXPECT_TRUE(c.is_unit(s(0, 0)));
    EXPECT_EQ(c.mul(s(1, 0), c.inverse(s(0, 0))), 2u);
}

TEST(Inverse, RoundTripAndFailure) {
    Rng rng(25);
    PadicContext<Word> c(7, 6);
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = 1 + rng.below(5);
        Matrix<Word> m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = rng.below(c.modulus());
        // unit upper triangular times random unit lower triangular: always invertible
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < i; ++j) m(i, j) = c.mul(m(i, j), 7);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = c.add(c.mul(m(i, i), 7), 1);
        auto inv = inverse_matrix(c, m);
        EXPECT_EQ(mat_mul(c, m, inv), Matrix<Word>::identity(n));
        EXPECT_EQ(mat_mul(c, inv, m), Matrix<Word>::identity(n));
    }
    Matrix<Word> sing(2, 2);
    sing(0, 0) = 7;
    sing(1, 1) = 1;
    EXPECT_THROW(inverse_matrix(c, sing), NotAUnit);
}

TEST(Smith, BigIntBackend) {
    Rng rng(26);
    PadicContext<BigInt> c(5, 32);
    for (int t = 0; t < 10; ++t) {
        Matrix<BigInt> m(3, 3);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = c.mul(rng.residue_below(c.modulus()), c.p_power(rng.below(20)));
        auto s = smith_form(c, m);
        EXPECT_EQ(mat_mul(c, mat_mul(c, s.U, m), s.V), s.diagonal);
    }
}
