#pragma once

// Seeded randomness. std::mt19937_64 has a standard-mandated output sequence;
// the distribution helpers below are written out (rejection sampling) because
// the std:: distributions are implementation defined.

#include <cstdint>
#include <random>

#include "iwalab/padic.hpp"

namespace iwalab {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, bound), bound > 0.
    std::uint64_t below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        // 2^64 mod bound values at the bottom are rejected
        const std::uint64_t threshold = (0 - bound) % bound;
        std::uint64_t x;
        do {
            x = next();
        } while (x < threshold);
        return x % bound;
    }

    /// Uniform in [lo, hi].
    long long between(long long lo, long long hi) {
        return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool chance(std::uint64_t num, std::uint64_t den) { return below(den) < num; }

    template <ResidueInt Int>
    Int residue_below(const Int& bound) {
        if constexpr (std::same_as<Int, Word>) {
            return below(bound);
        } else {
            if (bound <= 1) return Int(0);
            const std::size_t bits = boost::multiprecision::msb(bound) + 1;
            const std::size_t words = (bits + 63) / 64;
            const Int span = Int(1) << (64 * words);
            const Int limit = span - span % bound;
            for (;;) {
                Int x = 0;
                for (std::size_t i = 0; i < words; ++i) x = (x << 64) | Int(next());
                if (x < limit) return x % bound;
            }
        }
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace iwalab
