#include <gtest/gtest.h>

#include "iwalab/lambda.hpp"
#include "iwalab/random.hpp"

using namespace iwalab;

namespace {

using P3 = LambdaPoly<Word>;
using Tr = LambdaTrunc<Word>;

// schoolbook product over Z, reduced mod (q, T^D) at the end
std::vector<Word> naive_mul(const std::vector<Word>& a, const std::vector<Word>& b, Word q, std::size_t D) {
    std::vector<unsigned __int128> acc(D, 0);
    for (std::size_t i = 0; i < a.size() && i < D; ++i)
        for (std::size_t j = 0; j < b.size() && i + j < D; ++j)
            acc[i + j] = (acc[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % q;
    return std::vector<Word>(acc.begin(), acc.end());
}

BigInt binom(unsigned long long n, unsigned long long k) {
    BigInt r = 1;
    for (unsigned long long i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

Tr random_series(Rng& rng, const PadicContext<Word>& c, std::size_t D) {
    std::vector<Word> cs(D);
    for (auto& x : cs) x = rng.below(c.modulus());
    return Tr(c, D, cs);
}

// random distinguished polynomial of degree d
P3 random_distinguished(Rng& rng, const PadicContext<Word>& c, int d) {
    std::vector<Word> cs(d + 1);
    for (int i = 0; i < d; ++i) cs[i] = c.mul(c.p_power(1), rng.below(c.modulus()));
    cs[d] = 1;
    return P3(c, cs);
}

}  // namespace

TEST(LambdaPoly, Examples) {
    PadicContext<Word> c(3, 2);
    EXPECT_EQ(P3::T(c) * P3::from_signed(c, {3, 1}), P3::from_signed(c, {0, 3, 1}));
    auto f = P3::from_signed(c, {1, 3});
    EXPECT_EQ(f * P3::one(c), f);
    EXPECT_EQ(f * f, P3::from_signed(c, {1, 6}));
    EXPECT_EQ(P3(c, {1, 2, 0, 0}).degree(), 1);
    EXPECT_EQ(P3(c).degree(), -1);
    EXPECT_EQ(P3::from_signed(c, {3, 3, 1}).to_string(), "T^2 + 3*T + 3");
}

TEST(LambdaPoly, Distinguished) {
    PadicContext<Word> c(3, 4);
    EXPECT_TRUE(is_distinguished(P3::from_signed(c, {3, 3, 1})));
    EXPECT_FALSE(is_distinguished(P3::from_signed(c, {1, 1})));
    EXPECT_FALSE(is_distinguished(P3::from_signed(c, {0, 2})));
    EXPECT_THROW(is_distinguished(P3(c)), ZeroPolynomial);
}

TEST(LambdaPoly, MismatchedContexts) {
    PadicContext<Word> a(3, 4), b(5, 4);
    EXPECT_THROW(P3::T(a) * P3::T(b), ContextMismatch);
}

TEST(LambdaProperty, ProductsMatchSchoolbook) {
    Rng rng(31);
    PadicContext<Word> c(5, 6);
    for (int t = 0; t < 100; ++t) {
        auto a = random_series(rng, c, 10), b = random_series(rng, c, 10);
        EXPECT_EQ((a * b).coeffs(), naive_mul(a.coeffs(), b.coeffs(), c.modulus(), 10));
        if (a.is_unit()) { EXPECT_EQ(a * a.inverse(), Tr(c, 10, {1})); }
    }
}

TEST(Weierstrass, DivisionExamples) {
    PadicContext<Word> c(3, 6);
    auto f = Tr::from_signed(c, 12, {3, 4, 1});
    auto g = P3::from_signed(c, {3, 1});
    auto d = weierstrass_divide(f, g);
    EXPECT_EQ(d.q, Tr::from_signed(c, 12, {1, 1}));
    EXPECT_TRUE(d.r.is_zero());
    auto self = weierstrass_divide(Tr::from_poly(g, 12), g);
    EXPECT_EQ(self.q, Tr(c, 12, {1}));
    EXPECT_TRUE(self.r.is_zero());

    PadicContext<Word> c4(3, 4);
    auto one = Tr(c4, 12, {1});
    auto g4 = P3::from_signed(c4, {3, 1});
    auto w = weierstrass_divide(one, g4);
    EXPECT_LE(w.r.degree(), 0);
    EXPECT_EQ(w.q * Tr::from_poly(g4, 12) + Tr::from_poly(w.r, 12), one);
    // 1 = q (T + 3) + r forces r = 1 - q(-3) ... the remainder is a unit mod 3
    EXPECT_TRUE(c4.is_unit(w.r.coeff(0)));
}

TEST(Weierstrass, DivisionErrors) {
    PadicContext<Word> c(3, 4);
    auto f = Tr(c, 8, {1, 1});
    EXPECT_THROW(weierstrass_divide(f, P3::from_signed(c, {1, 1})), NotDistinguished);
    EXPECT_THROW(weierstrass_divide(Tr(c, 2, {1}), P3::from_signed(c, {3, 0, 0, 1})), InsufficientDegreeCap);
    PadicContext<Word> other(5, 4);
    EXPECT_THROW(weierstrass_divide(f, P3::from_signed(other, {5, 1})), ContextMismatch);
}

TEST(WeierstrassProperty, DivisionMultiplyBack) {
    Rng rng(32);
    for (unsigned p : {3u, 5u}) {
        PadicContext<Word> c(p, 6);
        for (int t = 0; t < 80; ++t) {
            const int d = 1 + static_cast<int>(rng.below(4));
            auto g = random_distinguished(rng, c, d);
            auto f = random_series(rng, c, 16);
            auto w = weierstrass_divide(f, g);
            EXPECT_LT(w.r.degree(), d);
            const auto qg = naive_mul(w.q.coeffs(), g.coeffs(), c.modulus(), 16);
            std::vector<Word> back(16);
            for (std::size_t i = 0; i < 16; ++i) back[i] = c.add(qg[i], w.r.coeff(i));
            EXPECT_EQ(back, f.coeffs());
        }
    }
}

TEST(Weierstrass, PreparationExamples) {
    PadicContext<Word> c(3, 10);
    auto w = weierstrass_prepare(Tr::from_signed(c, 8, {3, 4, 1}));
    EXPECT_EQ(w.mu, 0);
    EXPECT_EQ(w.distinguished, P3::from_signed(c, {3, 1}));
    EXPECT_EQ(w.unit, Tr::from_signed(c, 8, {1, 1}));

    auto w2 = weierstrass_prepare(Tr::from_signed(c, 8, {9, 3}));
    EXPECT_EQ(w2.mu, 1);
    EXPECT_EQ(w2.distinguished, P3::from_signed(c, {3, 1}));
    EXPECT_EQ(w2.unit, Tr(c, 8, {1}));

    auto w3 = weierstrass_prepare(Tr::from_signed(c, 8, {5}));
    EXPECT_EQ(w3.mu, 0);
    EXPECT_EQ(w3.lambda(), 0);
    EXPECT_EQ(w3.distinguished, P3::one(c));
    EXPECT_EQ(w3.unit, Tr::from_signed(c, 8, {5}));

    EXPECT_THROW(weierstrass_prepare(Tr(c, 8)), PrecisionExhausted);
    // mu is read off the truncated coefficients, so f / p^mu always has a unit below the cap
    auto w4 = weierstrass_prepare(Tr::from_signed(c, 3, {3, 3, 3}));
    EXPECT_EQ(w4.mu, 1);
    EXPECT_EQ(w4.lambda(), 0);
}

TEST(WeierstrassProperty, PreparationMultiplyBack) {
    Rng rng(33);
    for (unsigned p : {3u, 5u}) {
        PadicContext<Word> c(p, 8);
        for (int t = 0; t < 100; ++t) {
            auto f = random_series(rng, c, 24);
            const int scale = static_cast<int>(rng.below(3));
            for (std::size_t i = 0; i < 24; ++i) {
                if (i < 4) f[i] = c.mul(f[i], p);  // push lambda up
                f[i] = c.mul(f[i], c.p_power(scale));
            }
            if (f.is_zero()) continue;
            auto w = weierstrass_prepare(f);
            // independent mu and lambda: minimum valuation, then first index attaining it
            int mu = c.precision();
            for (std::size_t i = 0; i < 24; ++i) mu = std::min(mu, c.valuation(f[i]));
            int lam = 0;
            while (c.valuation(f[lam]) != mu) ++lam;
            EXPECT_EQ(w.mu, mu);
            EXPECT_EQ(w.lambda(), lam);
            EXPECT_TRUE(is_distinguished(w.distinguished));
            EXPECT_TRUE(c.is_unit(w.unit[0]));
            auto back = naive_mul(naive_mul(w.distinguished.coeffs(), w.unit.coeffs(), c.modulus(), 24),
                                  {c.p_power(mu)}, c.modulus(), 24);
            EXPECT_EQ(back, f.coeffs());
        }
    }
}

TEST(WeierstrassProperty, BigIntBackend) {
    Rng rng(34);
    PadicContext<BigInt> c(5, 32);
    for (int t = 0; t < 5; ++t) {
        std::vector<BigInt> cs(10);
        for (auto& x : cs) x = rng.residue_below(c.modulus());
        cs[0] = c.mul(cs[0], 5);
        LambdaTrunc<BigInt> f(c, 10, cs);
        auto w = weierstrass_prepare(f);
        EXPECT_EQ(recombine(w), f);
    }
}

TEST(Tower, OmegaExamples) {
    PadicContext<Word> c(3, 6);
    TowerParams tp{3, 1, {}};
    EXPECT_EQ(omega(c, 1, tp), P3::T(c));
    EXPECT_EQ(omega(c, 0, tp), P3::T(c));
    EXPECT_EQ(omega(c, 2, tp), P3::from_signed(c, {0, 3, 3, 1}));
    EXPECT_THROW(omega(c, -1, tp), BadLevels);
    TowerParams tp2{3, 2, {}};
    EXPECT_EQ(omega(c, 0, tp2), omega(c, 2, tp2));
    EXPECT_EQ(omega(c, 2, tp2), P3::T(c));
}

TEST(Tower, OmegaMatchesBinomialExpansion) {
    for (unsigned p : {3u, 5u}) {
        PadicContext<Word> c(p, 7);
        TowerParams tp{p, 1, {}};
        for (int n = 1; n <= 3; ++n) {
            const unsigned long long e = static_cast<unsigned long long>(std::pow(p, n - 1));
            auto w = omega(c, n, tp);
            ASSERT_EQ(w.degree(), static_cast<int>(e));
            EXPECT_EQ(w.coeff(0), 0u);
            for (unsigned long long j = 1; j <= e; ++j)
                EXPECT_EQ(BigInt(w.coeff(j)), binom(e, j) % BigInt(c.modulus())) << "p=" << p << " n=" << n << " j=" << j;
        }
    }
}

TEST(Tower, NuIdentities) {
    PadicContext<Word> c(3, 8);
    TowerParams tp{3, 1, {}};
    EXPECT_EQ(nu(c, 2, 1, tp), P3::from_signed(c, {3, 3, 1}));
    EXPECT_EQ(nu(c, 3, 1, tp), nu(c, 3, 2, tp) * nu(c, 2, 1, tp));
    EXPECT_THROW(nu(c, 1, 1, tp), BadLevels);
    for (int n = 1; n < 4; ++n) {
        for (int m = n + 1; m <= 4; ++m) EXPECT_EQ(nu(c, m, n, tp) * omega(c, n, tp), omega(c, m, tp));
        EXPECT_EQ(poly_mod(nu(c, n + 1, n, tp), omega(c, n, tp)), P3::constant(c, 3));
    }
}

TEST(Involution, Example) {
    PadicContext<Word> c(3, 2);
    TowerParams tp{3, 1, {}};
    EXPECT_EQ(iwasawa_involution(Tr::from_signed(c, 3, {0, 1}), tp), Tr::from_signed(c, 3, {3, 5, 4}));
    EXPECT_EQ(involution_of_T(c, 3, tp), Tr::from_signed(c, 3, {3, 5, 4}));
    EXPECT_EQ(iwasawa_involution(Tr::from_signed(c, 3, {7}), tp), Tr::from_signed(c, 3, {7}));
}

TEST(InvolutionProperty, InvolutiveAndMultiplicative) {
    Rng rng(35);
    for (unsigned p : {3u, 5u}) {
        PadicContext<Word> c(p, 3);
        TowerParams tp{p, 1, {}};
        // first cap at which T^D generates an ideal fixed by the substitution
        std::size_t D = 3;
        while (!truncation_is_involution_stable(c, tp, D)) ++D;
        EXPECT_EQ(D, p == 3 ? 9u : 25u);
        EXPECT_FALSE(truncation_is_involution_stable(c, tp, D - 1));
        for (int t = 0; t < 50; ++t) {
            auto f = random_series(rng, c, D), g = random_series(rng, c, D);
            auto fs = iwasawa_involution(f, tp);
            EXPECT_EQ(iwasawa_involution(fs, tp), f);
            EXPECT_EQ(iwasawa_involution(f * g, tp), fs * iwasawa_involution(g, tp));
            EXPECT_EQ(iwasawa_involution(f + g, tp), fs + iwasawa_involution(g, tp));
        }
    }
}

TEST(Involution, GeometricSeriesOracle) {
    // T* = kappa (1+T)^{-1} - 1 = (kappa - 1) + kappa sum_{j>=1} (-1)^j T^j
    PadicContext<Word> c(5, 5);
    TowerParams tp{5, 2, {}};
    const long long kappa = 26;
    auto ts = involution_of_T(c, 8, tp);
    EXPECT_EQ(ts[0], c.from_signed(kappa - 1));
    for (std::size_t j = 1; j < 8; ++j) EXPECT_EQ(ts[j], c.from_signed(j % 2 ? -kappa : kappa));
}
