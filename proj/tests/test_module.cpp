#include <gtest/gtest.h>

#include <set>

#include "iwalab/module.hpp"

using namespace iwalab;

namespace {

using IntPoly = std::vector<BigInt>;  // ascending, over Z

IntPoly int_mul(const IntPoly& a, const IntPoly& b) {
    IntPoly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

// remainder of a by a monic g over Z
IntPoly int_mod(IntPoly a, const IntPoly& g) {
    const std::size_t d = g.size() - 1;
    for (std::size_t i = a.size(); i-- > d;) {
        const BigInt c = a[i];
        if (c == 0) continue;
        for (std::size_t j = 0; j <= d; ++j) a[i - d + j] -= c * g[j];
    }
    a.resize(d, 0);
    return a;
}

IntPoly int_omega(unsigned p, int n, int k) {
    const int e = std::max(n, k) - k;
    unsigned long long q = 1;
    for (int i = 0; i < e; ++i) q *= p;
    IntPoly w(q + 1, 0);
    BigInt b = 1;
    for (unsigned long long j = 0; j <= q; ++j) {
        w[j] = b;
        b = b * (q - j) / (j + 1);
    }
    w[0] -= 1;
    return w;
}

// fraction-free Bareiss determinant
BigInt bareiss_det(std::vector<std::vector<BigInt>> m) {
    const std::size_t n = m.size();
    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t s = k + 1;
            while (s < n && m[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(m[s], m[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j) m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

int vp(BigInt x, unsigned p) {
    if (x < 0) x = -x;
    int v = 0;
    while (x != 0 && x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

// log_p |Z[T]/(g, omega_n)| via the determinant of multiplication by omega_n; -1 when infinite
int size_oracle(const std::vector<long long>& g_signed, unsigned e, unsigned p, int n, int k) {
    IntPoly g{1};
    IntPoly f(g_signed.begin(), g_signed.end());
    for (unsigned i = 0; i < e; ++i) g = int_mul(g, f);
    const std::size_t d = g.size() - 1;
    const IntPoly w = int_omega(p, n, k);
    std::vector<std::vector<BigInt>> m(d, std::vector<BigInt>(d, 0));
    for (std::size_t j = 0; j < d; ++j) {
        IntPoly tj(j + 1, 0);
        tj[j] = 1;
        IntPoly col = int_mod(int_mul(tj, w), g);
        for (std::size_t i = 0; i < d; ++i) m[i][j] = col[i];
    }
    const BigInt det = bareiss_det(m);
    return det == 0 ? -1 : vp(det, p);
}

ElementaryModule<Word> single(const PadicContext<Word>& c, std::initializer_list<long long> f, int e, int k = 1) {
    return ElementaryModule<Word>(c, TowerParams{c.p(), k, {}}, {{LambdaPoly<Word>::from_signed(c, f), e}});
}

}  // namespace

TEST(Module, Construction) {
    PadicContext<Word> c(3, 10);
    TowerParams tp{3, 1, {}};
    auto f = LambdaPoly<Word>::from_signed(c, {-3, 1});
    ElementaryModule<Word> M(c, tp, {{f, 2}}, {{1}});
    EXPECT_EQ(M.lambda_invariant(), 2);
    EXPECT_EQ(M.mu_invariant(), 1);
    EXPECT_FALSE(M.mu_free());
    EXPECT_THROW(ElementaryModule<Word>(c, tp, {{LambdaPoly<Word>::from_signed(c, {1, 1}), 1}}), NotDistinguished);
    EXPECT_THROW(ElementaryModule<Word>(c, tp, {}, {}), Error);
    EXPECT_THROW(ElementaryModule<Word>(c, TowerParams{5, 1, {}}, {{f, 1}}), ContextMismatch);
}

TEST(Levels, CyclicExamples) {
    PadicContext<Word> c(3, 10);
    auto M = single(c, {-3, 1}, 1);
    for (int n = 1; n <= 4; ++n) {
        auto L = finite_level(M, n);
        EXPECT_EQ(L->invariant_exponents(), std::vector<int>{n});
        EXPECT_FALSE(L->unresolved());
    }
    TowerParams tp{3, 1, {}};
    ElementaryModule<Word> P(c, tp, {}, {{1}});
    EXPECT_EQ(finite_level(P, 1)->p_rank(), 1);
    EXPECT_EQ(finite_level(P, 2)->p_rank(), 3);
    EXPECT_EQ(finite_level(P, 3)->p_rank(), 9);
    EXPECT_EQ(finite_level(P, 3)->size_exp(), 9);
    EXPECT_THROW(finite_level(M, -1), BadLevels);
}

TEST(Levels, FreeModuleIsFlagged) {
    PadicContext<Word> c(3, 6);
    auto M = single(c, {0, 1}, 1);
    auto L = finite_level(M, 2);
    EXPECT_TRUE(L->unresolved());
    EXPECT_THROW(L->require_resolved(), PrecisionExhausted);
}

TEST(LevelsProperty, SizesMatchDeterminantOracle) {
    struct Case {
        unsigned p;
        std::vector<long long> f;
        unsigned e;
        int k;
    };
    const std::vector<Case> cases = {
        {3, {-3, 1}, 1, 1}, {3, {-3, 1}, 2, 1}, {3, {3, 3, 1}, 1, 1}, {3, {6, 0, 3, 1}, 1, 1}, {5, {5, 1}, 1, 1},
        {5, {10, 15, 1}, 1, 1}, {3, {-3, 1}, 3, 2}, {7, {14, 1}, 2, 1}, {3, {12, 9, 1}, 1, 1},
    };
    for (const auto& cs : cases) {
        PadicContext<Word> c(cs.p, 12);
        TowerParams tp{cs.p, cs.k, {}};
        std::vector<Word> coeffs;
        for (long long x : cs.f) coeffs.push_back(c.from_signed(x));
        ElementaryModule<Word> M(c, tp, {{LambdaPoly<Word>(c, coeffs), static_cast<int>(cs.e)}});
        for (int n = 0; n <= 3; ++n) {
            auto L = finite_level(M, n);
            const int want = size_oracle(cs.f, cs.e, cs.p, n, cs.k);
            // T^2 + 3T + 3 divides omega_2, so that level is infinite
            EXPECT_EQ(L->unresolved(), want < 0);
            if (want >= 0) { EXPECT_EQ(L->size_exp(), want) << "p=" << cs.p << " n=" << n; }
            // omega_n and the summand both act as zero
            EXPECT_TRUE(L->kills(multiplication_matrix(*L, omega(c, n, tp))));
            EXPECT_TRUE(L->kills(poly_eval_matrix(poly_pow(M.poly_summands()[0].f, cs.e), L->t_action())));
        }
    }
}

TEST(LevelsProperty, EnumerationAndOrders) {
    PadicContext<Word> c(3, 10);
    auto M = single(c, {-3, 1}, 2);
    Rng rng(41);
    for (int n = 1; n <= 3; ++n) {
        auto L = finite_level(M, n);
        auto all = L->enumerate();
        std::size_t expected = 1;
        for (int i = 0; i < L->size_exp(); ++i) expected *= 3;
        ASSERT_EQ(all.size(), expected);
        // pairwise distinct in M_n
        std::set<Vec<Word>> coords;
        for (const auto& x : all) coords.insert(L->group_coords(x));
        EXPECT_EQ(coords.size(), expected);
        for (int t = 0; t < 50; ++t) {
            auto x = L->random_element(rng);
            int o = 0;
            Vec<Word> y = x;
            while (!L->is_zero(y)) {
                y = vec_scale(c, y, Word(3));
                ++o;
            }
            EXPECT_EQ(L->order_exp(x), o);
        }
    }
}

TEST(Maps, CircIdentities) {
    PadicContext<Word> c(5, 10);
    TowerParams tp{5, 1, {}};
    ElementaryModule<Word> M(c, tp, {{LambdaPoly<Word>::from_signed(c, {10, 5, 1}), 1}}, {{1}});
    for (int n = 1; n <= 2; ++n) {
        auto a = finite_level(M, n), b = finite_level(M, n + 1);
        auto N = norm_map(*b, *a).matrix;
        auto I = lift_map(*a, *b).matrix;
        auto pI = mat_scale(c, Matrix<Word>::identity(a->rank()), Word(5));
        auto NI = mat_mul(c, N, I);
        for (std::size_t j = 0; j < a->rank(); ++j) EXPECT_TRUE(a->equal(NI.column(j), pI.column(j)));
        auto IN = mat_mul(c, I, N);
        auto nuM = multiplication_matrix(*b, nu(c, n + 1, n, tp));
        for (std::size_t j = 0; j < b->rank(); ++j) EXPECT_TRUE(b->equal(IN.column(j), nuM.column(j)));
    }
    auto a = finite_level(M, 1), b = finite_level(M, 2);
    EXPECT_THROW(norm_map(*a, *b), BadLevels);
    EXPECT_THROW(lift_map(*b, *a), BadLevels);
}

TEST(Subgroups, SizesAgreeWithEnumeration) {
    PadicContext<Word> c(3, 10);
    auto M = single(c, {-3, 1}, 2);
    auto L = finite_level(M, 2);
    Rng rng(42);
    auto all = L->enumerate();
    for (int t = 0; t < 20; ++t) {
        std::vector<Vec<Word>> gens;
        const int g = 1 + static_cast<int>(rng.below(2));
        for (int i = 0; i < g; ++i) gens.push_back(L->random_element(rng));
        Subgroup<Word> S(L, Matrix<Word>::from_columns(L->rank(), gens));
        // brute-force closure of the generators
        std::set<Vec<Word>> span{L->group_coords(Vec<Word>(L->rank(), 0))};
        std::vector<Vec<Word>> frontier{Vec<Word>(L->rank(), 0)};
        while (!frontier.empty()) {
            auto x = frontier.back();
            frontier.pop_back();
            for (const auto& gen : gens) {
                auto y = vec_add(c, x, gen);
                if (span.insert(L->group_coords(y)).second) frontier.push_back(y);
            }
        }
        int e = 0;
        for (std::size_t s = span.size(); s > 1; s /= 3) ++e;
        EXPECT_EQ(S.size_exp(), e);
        int member = 0;
        for (const auto& x : all) member += S.contains(x);
        EXPECT_EQ(static_cast<std::size_t>(member), span.size());
        auto inv = S.invariant_exponents();
        int sum = 0;
        for (int v : inv) sum += v;
        EXPECT_EQ(sum, e);
    }
}

TEST(Subgroups, IntersectionAndSum) {
    PadicContext<Word> c(3, 10);
    auto M = single(c, {-3, 1}, 1);
    auto L = finite_level(M, 3);  // Z/27
    auto A = Subgroup<Word>::p_power_multiple(L, 1), B = Subgroup<Word>::p_power_multiple(L, 2);
    EXPECT_EQ(A.size_exp(), 2);
    EXPECT_EQ(B.size_exp(), 1);
    EXPECT_TRUE(A.contains(B));
    EXPECT_FALSE(B.contains(A));
    EXPECT_TRUE(A.intersect(B).equals(B));
    EXPECT_TRUE(A.sum(B).equals(A));
    EXPECT_TRUE(Subgroup<Word>::trivial(L).is_trivial());
    EXPECT_EQ(Subgroup<Word>::whole(L).size_exp(), 3);
}
