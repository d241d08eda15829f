#pragma once

// Arithmetic in Lambda = Z_p[[T]] truncated to (p^N, T^D).
//
// LambdaPoly is an honest polynomial over Z/p^N, LambdaTrunc a power series
// cut at T^D. Weierstrass division and preparation, the cyclotomic family
// omega_n / nu_{m,n} and the involution tau -> kappa tau^{-1} live here too.

#include <algorithm>
#include <initializer_list>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "iwalab/linalg.hpp"
#include "iwalab/padic.hpp"

namespace iwalab {

template <ResidueInt Int>
class LambdaPoly {
public:
    explicit LambdaPoly(const PadicContext<Int>& ctx) : ctx_(ctx) {}
    LambdaPoly(const PadicContext<Int>& ctx, std::vector<Int> coeffs) : ctx_(ctx), coeffs_(std::move(coeffs)) {
        for (auto& c : coeffs_) c = ctx_.reduce_nonneg(c);
        trim();
    }

    static LambdaPoly from_signed(const PadicContext<Int>& ctx, std::initializer_list<long long> cs) {
        std::vector<Int> v;
        for (long long c : cs) v.push_back(ctx.from_signed(c));
        return LambdaPoly(ctx, std::move(v));
    }
    static LambdaPoly constant(const PadicContext<Int>& ctx, const Int& c) { return LambdaPoly(ctx, {c}); }
    static LambdaPoly one(const PadicContext<Int>& ctx) { return constant(ctx, ctx.one()); }
    static LambdaPoly T(const PadicContext<Int>& ctx) { return LambdaPoly(ctx, {Int(0), ctx.one()}); }
    static LambdaPoly monomial(const PadicContext<Int>& ctx, std::size_t deg) {
        std::vector<Int> v(deg + 1, Int(0));
        v[deg] = ctx.one();
        return LambdaPoly(ctx, std::move(v));
    }

    const PadicContext<Int>& context() const { return ctx_; }
    const std::vector<Int>& coeffs() const { return coeffs_; }
    bool is_zero() const { return coeffs_.empty(); }
    /// -1 for the zero polynomial.
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    Int coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Int(0); }
    const Int& leading() const { return coeffs_.back(); }
    bool is_monic() const { return !is_zero() && leading() == ctx_.one(); }

    friend LambdaPoly operator+(const LambdaPoly& a, const LambdaPoly& b) {
        check(a, b);
        std::vector<Int> v(std::max(a.coeffs_.size(), b.coeffs_.size()), Int(0));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.ctx_.add(a.coeff(i), b.coeff(i));
        return LambdaPoly(a.ctx_, std::move(v));
    }
    friend LambdaPoly operator-(const LambdaPoly& a, const LambdaPoly& b) {
        check(a, b);
        std::vector<Int> v(std::max(a.coeffs_.size(), b.coeffs_.size()), Int(0));
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = a.ctx_.sub(a.coeff(i), b.coeff(i));
        return LambdaPoly(a.ctx_, std::move(v));
    }
    friend LambdaPoly operator*(const LambdaPoly& a, const LambdaPoly& b) {
        check(a, b);
        if (a.is_zero() || b.is_zero()) return LambdaPoly(a.ctx_);
        std::vector<Int> v(a.coeffs_.size() + b.coeffs_.size() - 1, Int(0));
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
                v[i + j] = a.ctx_.add(v[i + j], a.ctx_.mul(a.coeffs_[i], b.coeffs_[j]));
        }
        return LambdaPoly(a.ctx_, std::move(v));
    }
    LambdaPoly scaled(const Int& s) const {
        std::vector<Int> v(coeffs_);
        for (auto& c : v) c = ctx_.mul(c, s);
        return LambdaPoly(ctx_, std::move(v));
    }
    LambdaPoly operator-() const { return LambdaPoly(ctx_) - *this; }

    friend bool operator==(const LambdaPoly& a, const LambdaPoly& b) {
        return a.ctx_ == b.ctx_ && a.coeffs_ == b.coeffs_;
    }

    /// Human readable, descending degree, e.g. "T^2 + 3*T + 3".
    std::string to_string() const {
        if (is_zero()) return "0";
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            const Int& c = coeffs_[i];
            if (c == 0) continue;
            if (!first) os << " + ";
            first = false;
            if (i == 0) {
                os << to_decimal(c);
            } else {
                if (c != 1) os << to_decimal(c) << "*";
                os << "T";
                if (i > 1) os << "^" << i;
            }
        }
        return os.str();
    }

private:
    void trim() {
        while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
    }
    static void check(const LambdaPoly& a, const LambdaPoly& b) {
        if (!(a.ctx_ == b.ctx_)) throw ContextMismatch();
    }

    PadicContext<Int> ctx_;
    std::vector<Int> coeffs_;
};

template <ResidueInt Int>
LambdaPoly<Int> poly_mul(const LambdaPoly<Int>& f, const LambdaPoly<Int>& g) { return f * g; }

template <ResidueInt Int>
LambdaPoly<Int> poly_pow(const LambdaPoly<Int>& f, unsigned e) {
    LambdaPoly<Int> r = LambdaPoly<Int>::one(f.context());
    for (unsigned i = 0; i < e; ++i) r = r * f;
    return r;
}

/// Euclidean division by a monic polynomial: f = q g + r, deg r < deg g.
template <ResidueInt Int>
std::pair<LambdaPoly<Int>, LambdaPoly<Int>> poly_divmod_monic(const LambdaPoly<Int>& f, const LambdaPoly<Int>& g) {
    const auto& ctx = f.context();
    if (!g.is_monic()) throw Error("poly_divmod_monic: divisor must be monic");
    const int dg = g.degree();
    if (f.degree() < dg) return {LambdaPoly<Int>(ctx), f};
    std::vector<Int> r(f.coeffs());
    std::vector<Int> q(f.degree() - dg + 1, Int(0));
    for (int i = f.degree(); i >= dg; --i) {
        const Int c = r[i];
        if (c == 0) continue;
        q[i - dg] = c;
        for (int j = 0; j <= dg; ++j) r[i - dg + j] = ctx.sub(r[i - dg + j], ctx.mul(c, g.coeffs()[j]));
    }
    r.resize(dg);
    return {LambdaPoly<Int>(ctx, std::move(q)), LambdaPoly<Int>(ctx, std::move(r))};
}

template <ResidueInt Int>
LambdaPoly<Int> poly_mod(const LambdaPoly<Int>& f, const LambdaPoly<Int>& g) {
    return poly_divmod_monic(f, g).second;
}

/// f(A) for a square matrix A.
template <ResidueInt Int>
Matrix<Int> poly_eval_matrix(const LambdaPoly<Int>& f, const Matrix<Int>& a) {
    const auto& ctx = f.context();
    const std::size_t n = a.rows();
    Matrix<Int> acc(n, n);
    for (int i = f.degree(); i >= 0; --i) {
        acc = mat_mul(ctx, acc, a);
        for (std::size_t d = 0; d < n; ++d) acc(d, d) = ctx.add(acc(d, d), f.coeffs()[i]);
    }
    return acc;
}

/// Distinguished: monic with every lower coefficient divisible by p.
template <ResidueInt Int>
bool is_distinguished(const LambdaPoly<Int>& f) {
    if (f.is_zero()) throw ZeroPolynomial();
    if (!f.is_monic()) return false;
    for (int i = 0; i < f.degree(); ++i)
        if (f.context().is_unit(f.coeffs()[i])) return false;
    return true;
}

/// An element of Lambda mod (p^N, T^D).
template <ResidueInt Int>
class LambdaTrunc {
public:
    LambdaTrunc(const PadicContext<Int>& ctx, std::size_t degree_cap)
        : ctx_(ctx), coeffs_(degree_cap, Int(0)) {}
    LambdaTrunc(const PadicContext<Int>& ctx, std::size_t degree_cap, const std::vector<Int>& coeffs)
        : LambdaTrunc(ctx, degree_cap) {
        for (std::size_t i = 0; i < std::min(coeffs.size(), degree_cap); ++i) coeffs_[i] = ctx_.reduce_nonneg(coeffs[i]);
    }
    static LambdaTrunc from_poly(const LambdaPoly<Int>& f, std::size_t degree_cap) {
        return LambdaTrunc(f.context(), degree_cap, f.coeffs());
    }
    static LambdaTrunc from_signed(const PadicContext<Int>& ctx, std::size_t degree_cap, std::initializer_list<long long> cs) {
        return from_poly(LambdaPoly<Int>::from_signed(ctx, cs), degree_cap);
    }

    const PadicContext<Int>& context() const { return ctx_; }
    std::size_t degree_cap() const { return coeffs_.size(); }
    const std::vector<Int>& coeffs() const { return coeffs_; }
    const Int& operator[](std::size_t i) const { return coeffs_[i]; }
    Int& operator[](std::size_t i) { return coeffs_[i]; }

    LambdaPoly<Int> to_poly() const { return LambdaPoly<Int>(ctx_, coeffs_); }
    bool is_zero() const { return is_zero_vec(coeffs_); }
    bool is_unit() const { return !coeffs_.empty() && ctx_.is_unit(coeffs_[0]); }

    friend LambdaTrunc operator+(const LambdaTrunc& a, const LambdaTrunc& b) {
        check(a, b);
        LambdaTrunc c(a.ctx_, a.degree_cap());
        for (std::size_t i = 0; i < c.degree_cap(); ++i) c.coeffs_[i] = a.ctx_.add(a.coeffs_[i], b.coeffs_[i]);
        return c;
    }
    friend LambdaTrunc operator-(const LambdaTrunc& a, const LambdaTrunc& b) {
        check(a, b);
        LambdaTrunc c(a.ctx_, a.degree_cap());
        for (std::size_t i = 0; i < c.degree_cap(); ++i) c.coeffs_[i] = a.ctx_.sub(a.coeffs_[i], b.coeffs_[i]);
        return c;
    }
    friend LambdaTrunc operator*(const LambdaTrunc& a, const LambdaTrunc& b) {
        check(a, b);
        const std::size_t D = a.degree_cap();
        LambdaTrunc c(a.ctx_, D);
        for (std::size_t i = 0; i < D; ++i) {
            if (a.coeffs_[i] == 0) continue;
            for (std::size_t j = 0; i + j < D; ++j)
                c.coeffs_[i + j] = a.ctx_.add(c.coeffs_[i + j], a.ctx_.mul(a.coeffs_[i], b.coeffs_[j]));
        }
        return c;
    }
    LambdaTrunc scaled(const Int& s) const {
        LambdaTrunc c(*this);
        for (auto& x : c.coeffs_) x = ctx_.mul(x, s);
        return c;
    }

    /// Power-series inverse; requires a unit constant term.
    LambdaTrunc inverse() const {
        const std::size_t D = degree_cap();
        if (D == 0) return *this;
        const Int a0_inv = ctx_.inverse(coeffs_[0]);
        LambdaTrunc b(ctx_, D);
        b.coeffs_[0] = a0_inv;
        for (std::size_t i = 1; i < D; ++i) {
            Int s = 0;
            for (std::size_t j = 1; j <= i; ++j) s = ctx_.add(s, ctx_.mul(coeffs_[j], b.coeffs_[i - j]));
            b.coeffs_[i] = ctx_.neg(ctx_.mul(a0_inv, s));
        }
        return b;
    }

    friend bool operator==(const LambdaTrunc& a, const LambdaTrunc& b) {
        return a.ctx_ == b.ctx_ && a.coeffs_ == b.coeffs_;
    }

private:
    static bool is_zero_vec(const std::vector<Int>& v) {
        return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
    }
    static void check(const LambdaTrunc& a, const LambdaTrunc& b) {
        if (!(a.ctx_ == b.ctx_) || a.degree_cap() != b.degree_cap()) throw ContextMismatch();
    }

    PadicContext<Int> ctx_;
    std::vector<Int> coeffs_;
};

template <ResidueInt Int>
struct WeierstrassDivision {
    LambdaTrunc<Int> q;
    LambdaPoly<Int> r;
};

namespace detail {

// Division by g whose first unit coefficient sits at index d (all lower ones
// divisible by p). Write g = g_lo + T^d G with G a unit series; each pass
// moves the part of the dividend at degrees >= d into the quotient and the
// remainder picks up a multiple of g_lo, which is one p-power smaller.
//
// The dividend is read as its polynomial lift. Work runs at a larger degree
// cap so that the remainder is the exact remainder of that lift: a monomial
// T^j reduces to a multiple of p^{floor(j/d)} modulo g, so terms beyond
// d(N+1) cannot reach the remainder, and the quotient is then exact below D.
template <ResidueInt Int>
WeierstrassDivision<Int> weierstrass_divide_at(const LambdaTrunc<Int>& f_in, const LambdaTrunc<Int>& g_in, std::size_t d) {
    const auto& ctx = f_in.context();
    const std::size_t D_out = f_in.degree_cap();
    const std::size_t D = D_out + d * static_cast<std::size_t>(ctx.precision() + 1) + 1;
    const LambdaTrunc<Int> f(ctx, D, f_in.coeffs());
    const LambdaTrunc<Int> g(ctx, D, g_in.coeffs());
    LambdaTrunc<Int> g_lo(ctx, D), G(ctx, D);
    for (std::size_t i = 0; i < D; ++i) {
        if (i < d)
            g_lo[i] = g[i];
        else
            G[i - d] = g[i];
    }
    const LambdaTrunc<Int> G_inv = G.inverse();
    LambdaTrunc<Int> q(ctx, D), h = f;
    for (int pass = 0; pass <= ctx.precision() + 1; ++pass) {
        LambdaTrunc<Int> hi(ctx, D), lo(ctx, D);
        bool any = false;
        for (std::size_t i = 0; i < D; ++i) {
            if (i < d) {
                lo[i] = h[i];
            } else {
                hi[i - d] = h[i];
                any = any || h[i] != 0;
            }
        }
        if (!any) {
            std::vector<Int> r(lo.coeffs().begin(), lo.coeffs().begin() + static_cast<std::ptrdiff_t>(d));
            return {LambdaTrunc<Int>(ctx, D_out, q.coeffs()), LambdaPoly<Int>(ctx, std::move(r))};
        }
        const LambdaTrunc<Int> step = hi * G_inv;
        q = q + step;
        h = lo - step * g_lo;
    }
    throw PrecisionExhausted("Weierstrass iteration did not converge");
}

}  // namespace detail

/// f = q g + r mod (p^N, T^D) with deg r < deg g, for distinguished g.
template <ResidueInt Int>
WeierstrassDivision<Int> weierstrass_divide(const LambdaTrunc<Int>& f, const LambdaPoly<Int>& g) {
    if (!(f.context() == g.context())) throw ContextMismatch();
    if (!is_distinguished(g)) throw NotDistinguished("divisor " + g.to_string() + " is not distinguished");
    const std::size_t d = static_cast<std::size_t>(g.degree());
    if (f.degree_cap() < d) throw InsufficientDegreeCap("degree cap below the divisor degree");
    return detail::weierstrass_divide_at(f, LambdaTrunc<Int>::from_poly(g, f.degree_cap()), d);
}

template <ResidueInt Int>
struct WeierstrassData {
    int mu;
    LambdaPoly<Int> distinguished;
    LambdaTrunc<Int> unit;
    int lambda() const { return distinguished.degree(); }
};

/// f = p^mu P u mod (p^N, T^D).
template <ResidueInt Int>
WeierstrassData<Int> weierstrass_prepare(const LambdaTrunc<Int>& f) {
    const auto& ctx = f.context();
    const std::size_t D = f.degree_cap();
    int mu = ctx.precision();
    for (const auto& c : f.coeffs()) mu = std::min(mu, ctx.valuation(c));
    if (mu >= ctx.precision()) throw PrecisionExhausted("all coefficients vanish mod p^" + std::to_string(ctx.precision()));

    LambdaTrunc<Int> reduced(ctx, D);
    for (std::size_t i = 0; i < D; ++i) reduced[i] = ctx.div_p_power(f[i], mu);
    std::size_t lambda = D;
    for (std::size_t i = 0; i < D; ++i)
        if (ctx.is_unit(reduced[i])) {
            lambda = i;
            break;
        }
    if (lambda >= D) throw InsufficientDegreeCap("no unit coefficient below the degree cap");

    // T^lambda = q f' + r, so f' = q^{-1} (T^lambda - r).
    LambdaTrunc<Int> t_lambda(ctx, D);
    t_lambda[lambda] = ctx.one();
    auto [q, r] = detail::weierstrass_divide_at(t_lambda, reduced, lambda);
    LambdaPoly<Int> P = LambdaPoly<Int>::monomial(ctx, lambda) - r;
    return {mu, std::move(P), q.inverse()};
}

/// p^mu P u, the multiply-back of a preparation.
template <ResidueInt Int>
LambdaTrunc<Int> recombine(const WeierstrassData<Int>& w) {
    const auto& ctx = w.distinguished.context();
    auto prod = LambdaTrunc<Int>::from_poly(w.distinguished, w.unit.degree_cap()) * w.unit;
    return prod.scaled(ctx.p_power(w.mu));
}

/// Tower data: the level k at which omega flattens, and the involution constant.
struct TowerParams {
    unsigned p = 3;
    int k = 1;
    /// kappa for tau -> kappa tau^{-1}; defaults to 1 + p^k.
    std::optional<long long> kappa;

    template <ResidueInt Int>
    Int kappa_residue(const PadicContext<Int>& ctx) const {
        if (kappa) return ctx.from_signed(*kappa);
        return ctx.add(ctx.one(), ctx.p_power(k));
    }
};

/// (T+1)^{p^{n-k}} - 1, flattened to omega_k below level k.
template <ResidueInt Int>
LambdaPoly<Int> omega(const PadicContext<Int>& ctx, int n, const TowerParams& params) {
    if (n < 0) throw BadLevels("level must be non-negative");
    const int steps = std::max(n, params.k) - params.k;
    const LambdaPoly<Int> one = LambdaPoly<Int>::one(ctx);
    LambdaPoly<Int> tau = LambdaPoly<Int>::T(ctx) + one;
    for (int s = 0; s < steps; ++s) tau = poly_pow(tau, ctx.p());
    return tau - one;
}

template <ResidueInt Int>
std::size_t omega_degree(const PadicContext<Int>& ctx, int n, const TowerParams& params) {
    std::size_t d = 1;
    for (int s = params.k; s < n; ++s) d *= ctx.p();
    return d;
}

/// omega_m / omega_n (exact).
template <ResidueInt Int>
LambdaPoly<Int> nu(const PadicContext<Int>& ctx, int m, int n, const TowerParams& params) {
    if (m <= n || n < 0) throw BadLevels("nu(m, n) needs m > n >= 0");
    auto [q, r] = poly_divmod_monic(omega(ctx, m, params), omega(ctx, n, params));
    if (!r.is_zero()) throw Error("omega_n does not divide omega_m");
    return q;
}

/// T* = kappa (1+T)^{-1} - 1 as a truncated series.
template <ResidueInt Int>
LambdaTrunc<Int> involution_of_T(const PadicContext<Int>& ctx, std::size_t degree_cap, const TowerParams& params) {
    LambdaTrunc<Int> tau = LambdaTrunc<Int>::from_signed(ctx, degree_cap, {1, 1});
    LambdaTrunc<Int> t_star = tau.inverse().scaled(params.kappa_residue(ctx));
    if (degree_cap > 0) t_star[0] = ctx.sub(t_star[0], ctx.one());
    return t_star;
}

/// f(T*) mod (p^N, T^D).
template <ResidueInt Int>
LambdaTrunc<Int> iwasawa_involution(const LambdaTrunc<Int>& f, const TowerParams& params) {
    const auto& ctx = f.context();
    const std::size_t D = f.degree_cap();
    const LambdaTrunc<Int> s = involution_of_T(ctx, D, params);
    LambdaTrunc<Int> acc(ctx, D);
    for (std::size_t i = D; i-- > 0;) {
        acc = acc * s;
        if (D > 0) acc[0] = ctx.add(acc[0], f[i]);
    }
    return acc;
}

/// Whether the involution is well defined and involutive on Lambda/(p^N, T^D).
/// T* has constant term kappa - 1, so (T*)^D can leak into low degrees; this
/// holds iff every binomial term (kappa-1)^{D-j} C(D,j) vanishes mod p^N for j < D.
template <ResidueInt Int>
bool truncation_is_involution_stable(const PadicContext<Int>& ctx, const TowerParams& params, std::size_t degree_cap) {
    const int v_shift = ctx.valuation(ctx.sub(params.kappa_residue(ctx), ctx.one()));
    const int N = ctx.precision();
    if (v_shift >= N) return true;
    const std::size_t D = degree_cap;
    for (std::size_t j = 0; j < D; ++j) {
        // v_p(C(D, j)) by Kummer: number of borrows of j from D in base p.
        int borrows = 0, carry = 0;
        std::size_t a = D, b = j;
        while (a > 0 || b > 0) {
            int da = static_cast<int>(a % ctx.p()), db = static_cast<int>(b % ctx.p()) + carry;
            if (db > da) {
                ++borrows;
                carry = 1;
            } else {
                carry = 0;
            }
            a /= ctx.p();
            b /= ctx.p();
        }
        if (static_cast<long long>(v_shift) * static_cast<long long>(D - j) + borrows < N) return false;
    }
    return true;
}

}  // namespace iwalab
