#pragma once

// Truncated p-adic integers: residues modulo p^N for an odd prime p.
//
// Two residue backends are supported. `Word` keeps residues in a machine word
// and requires p^N < 2^63; `BigInt` lifts that limit. Every other component of
// the library is a template over the backend.

#include <concepts>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "iwalab/errors.hpp"

namespace iwalab {

using Word = std::uint64_t;
using BigInt = boost::multiprecision::cpp_int;

template <class Int>
concept ResidueInt = std::same_as<Int, Word> || std::same_as<Int, BigInt>;

inline bool is_odd_prime(unsigned p) {
    if (p < 3 || p % 2 == 0) return false;
    for (unsigned d = 3; d * d <= p; d += 2)
        if (p % d == 0) return false;
    return true;
}

template <ResidueInt Int>
inline std::string to_decimal(const Int& x) {
    if constexpr (std::same_as<Int, Word>)
        return std::to_string(x);
    else
        return x.str();
}

/// The ring Z/p^N standing in for Z_p at working precision N.
template <ResidueInt Int>
class PadicContext {
public:
    PadicContext(unsigned p, int precision_exp) : p_(p), precision_(precision_exp) {
        if (!is_odd_prime(p)) throw Error("p must be an odd prime, got " + std::to_string(p));
        if (precision_exp < 1) throw Error("precision exponent must be >= 1");
        if constexpr (std::same_as<Int, Word>) {
            unsigned __int128 m = 1;
            for (int i = 0; i < precision_exp; ++i) {
                m *= p;
                if (m >= (static_cast<unsigned __int128>(1) << 63))
                    throw Error("p^N does not fit the 64-bit residue backend; use BigInt");
            }
            modulus_ = static_cast<Word>(m);
        } else {
            modulus_ = 1;
            for (int i = 0; i < precision_exp; ++i) modulus_ *= p;
        }
    }

    unsigned p() const { return p_; }
    int precision() const { return precision_; }
    const Int& modulus() const { return modulus_; }

    friend bool operator==(const PadicContext& a, const PadicContext& b) {
        return a.p_ == b.p_ && a.precision_ == b.precision_;
    }

    Int zero() const { return Int(0); }
    Int one() const { return modulus_ == 1 ? Int(0) : Int(1); }

    Int from_signed(long long v) const {
        if (v >= 0) return reduce_nonneg(Int(static_cast<unsigned long long>(v)));
        Int r = reduce_nonneg(Int(static_cast<unsigned long long>(-(v + 1))) + Int(1));
        return neg(r);
    }

    /// Parses an optionally signed base-10 integer and reduces it.
    Int from_decimal(std::string_view text) const {
        bool negative = false;
        std::size_t i = 0;
        if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
            negative = text[0] == '-';
            i = 1;
        }
        if (i == text.size()) throw ParseError("empty integer literal");
        Int acc = 0;
        const Int ten = 10;
        for (; i < text.size(); ++i) {
            char c = text[i];
            if (c < '0' || c > '9') throw ParseError("bad digit in integer literal '" + std::string(text) + "'");
            acc = add(mul(acc, ten % modulus_), Int(static_cast<unsigned>(c - '0')) % modulus_);
        }
        return negative ? neg(acc) : acc;
    }

    Int reduce_nonneg(const Int& v) const { return v % modulus_; }

    Int add(const Int& a, const Int& b) const {
        Int s = a + b;
        if (s >= modulus_) s -= modulus_;
        return s;
    }

    Int sub(const Int& a, const Int& b) const {
        if (a >= b) return a - b;
        return modulus_ - (b - a);
    }

    Int neg(const Int& a) const { return a == 0 ? Int(0) : modulus_ - a; }

    Int mul(const Int& a, const Int& b) const {
        if constexpr (std::same_as<Int, Word>) {
            return static_cast<Word>(static_cast<unsigned __int128>(a) * b % modulus_);
        } else {
            return Int(a * b) % modulus_;
        }
    }

    /// Largest v <= N with p^v dividing the residue; the zero residue reports N.
    int valuation(const Int& a) const {
        if (a == 0) return precision_;
        Int x = a;
        int v = 0;
        while (x % p_ == 0) {
            x /= p_;
            ++v;
        }
        return v;
    }

    bool is_unit(const Int& a) const { return a % p_ != 0; }

    /// p^e reduced mod p^N (zero once e >= N).
    Int p_power(int e) const {
        if (e >= precision_) return Int(0);
        Int r = 1;
        for (int i = 0; i < e; ++i) r *= p_;
        return r;
    }

    /// Exact integer quotient of a residue by p^v; requires p^v | a.
    Int div_p_power(const Int& a, int v) const {
        Int x = a;
        for (int i = 0; i < v; ++i) x /= p_;
        return x;
    }

    Int pow(Int base, unsigned long long e) const {
        Int r = one();
        while (e) {
            if (e & 1) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }

    /// Inverse of a unit: Fermat mod p, then Newton lifting y <- y(2 - xy).
    Int inverse(const Int& a) const {
        if (!is_unit(a)) throw NotAUnit("residue " + to_decimal(a) + " has positive valuation");
        unsigned long long a0 = static_cast<unsigned long long>(a % p_);
        unsigned long long y0 = 1, b = a0, e = p_ - 2;
        while (e) {
            if (e & 1) y0 = y0 * b % p_;
            b = b * b % p_;
            e >>= 1;
        }
        Int y = Int(y0) % modulus_;
        const Int two = Int(2) % modulus_;
        for (int prec = 1; prec < precision_; prec *= 2) y = mul(y, sub(two, mul(a, y)));
        return y;
    }

private:
    unsigned p_;
    int precision_;
    Int modulus_;
};

/// A residue together with its context.
template <ResidueInt Int>
class PadicInt {
public:
    PadicInt(const PadicContext<Int>& ctx, const Int& residue) : ctx_(ctx), residue_(ctx.reduce_nonneg(residue)) {}
    static PadicInt from_signed(const PadicContext<Int>& ctx, long long v) { return PadicInt(ctx, ctx.from_signed(v)); }

    const Int& residue() const { return residue_; }
    const PadicContext<Int>& context() const { return ctx_; }

    int valuation() const { return ctx_.valuation(residue_); }
    /// True when the value is the zero residue, i.e. sits at the precision floor.
    bool at_precision_floor() const { return residue_ == 0; }

    PadicInt invert_unit() const { return PadicInt(ctx_, ctx_.inverse(residue_)); }

    friend PadicInt operator+(const PadicInt& x, const PadicInt& y) {
        check(x, y);
        return PadicInt(x.ctx_, x.ctx_.add(x.residue_, y.residue_));
    }
    friend PadicInt operator-(const PadicInt& x, const PadicInt& y) {
        check(x, y);
        return PadicInt(x.ctx_, x.ctx_.sub(x.residue_, y.residue_));
    }
    friend PadicInt operator*(const PadicInt& x, const PadicInt& y) {
        check(x, y);
        return PadicInt(x.ctx_, x.ctx_.mul(x.residue_, y.residue_));
    }
    PadicInt operator-() const { return PadicInt(ctx_, ctx_.neg(residue_)); }

    friend bool operator==(const PadicInt& x, const PadicInt& y) {
        return x.ctx_ == y.ctx_ && x.residue_ == y.residue_;
    }

    friend std::ostream& operator<<(std::ostream& os, const PadicInt& x) { return os << to_decimal(x.residue_); }

private:
    static void check(const PadicInt& x, const PadicInt& y) {
        if (!(x.ctx_ == y.ctx_)) throw ContextMismatch();
    }

    PadicContext<Int> ctx_;
    Int residue_;
};

template <ResidueInt Int>
PadicInt<Int> add(const PadicInt<Int>& x, const PadicInt<Int>& y) { return x + y; }

template <ResidueInt Int>
PadicInt<Int> mul(const PadicInt<Int>& x, const PadicInt<Int>& y) { return x * y; }

template <ResidueInt Int>
int valuation(const PadicInt<Int>& x) { return x.valuation(); }

template <ResidueInt Int>
PadicInt<Int> invert_unit(const PadicInt<Int>& x) { return x.invert_unit(); }

}  // namespace iwalab
