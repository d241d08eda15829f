#pragma once

// Growth series e_n = log_p |M_n| and the exact fit e_n = mu p^{n-k} + lambda n + nu.

#include <optional>
#include <string>
#include <vector>

#include "iwalab/errors.hpp"

namespace iwalab {

struct GrowthEntry {
    int level;
    long long size_exp;
    long long p_rank;
    bool unresolved = false;
};

struct GrowthSeries {
    unsigned p = 3;
    int k = 1;
    std::vector<GrowthEntry> entries;

    void validate() const {
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const auto& e = entries[i];
            if (i > 0 && e.level <= entries[i - 1].level) throw Error("growth series levels must be strictly increasing");
            if (e.p_rank < 0 || e.size_exp < e.p_rank) throw Error("growth series needs size_exp >= p_rank >= 0");
        }
    }

    /// Entries at levels >= k (below k the tower is flattened) that carry no precision flag.
    std::vector<GrowthEntry> usable() const {
        std::vector<GrowthEntry> out;
        for (const auto& e : entries)
            if (e.level >= k && !e.unresolved) out.push_back(e);
        return out;
    }
};

enum class EstimateStatus { Stabilized, SizeFrozen, Undetermined };

inline const char* to_string(EstimateStatus s) {
    switch (s) {
        case EstimateStatus::Stabilized: return "Stabilized";
        case EstimateStatus::SizeFrozen: return "SizeFrozen";
        case EstimateStatus::Undetermined: return "Undetermined";
    }
    return "?";
}

struct InvariantEstimate {
    int n0 = -1;
    long long lambda = 0, mu = 0, nu = 0;
    EstimateStatus status = EstimateStatus::Undetermined;
    /// First level from which the p-ranks stay constant, if they do.
    std::optional<int> rank_stable_from;
};

namespace detail {

inline long long ipow(long long b, int e) {
    long long r = 1;
    for (int i = 0; i < e; ++i) r *= b;
    return r;
}

inline long long growth_at(const InvariantEstimate& est, unsigned p, int k, int n) {
    return est.mu * ipow(p, n - k) + est.lambda * n + est.nu;
}

// Exact solve of the 3x3 system e_i = mu x_i + lambda n_i + nu.
inline std::optional<InvariantEstimate> fit_three(const GrowthEntry& a, const GrowthEntry& b, const GrowthEntry& c,
                                                  unsigned p, int k) {
    using I = __int128;
    const I x[3] = {ipow(p, a.level - k), ipow(p, b.level - k), ipow(p, c.level - k)};
    const I n[3] = {a.level, b.level, c.level};
    const I e[3] = {a.size_exp, b.size_exp, c.size_exp};
    auto det3 = [](const I m[3][3]) {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    };
    const I A[3][3] = {{x[0], n[0], 1}, {x[1], n[1], 1}, {x[2], n[2], 1}};
    const I D = det3(A);
    if (D == 0) return std::nullopt;
    I sol[3];
    for (int col = 0; col < 3; ++col) {
        I B[3][3];
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) B[i][j] = j == col ? e[i] : A[i][j];
        const I num = det3(B);
        if (num % D != 0) return std::nullopt;
        sol[col] = num / D;
    }
    InvariantEstimate est;
    est.mu = static_cast<long long>(sol[0]);
    est.lambda = static_cast<long long>(sol[1]);
    est.nu = static_cast<long long>(sol[2]);
    return est;
}

}  // namespace detail

/// Stabilization detection and invariant fit on the usable part of a series.
inline InvariantEstimate detect_stabilization(const GrowthSeries& series) {
    series.validate();
    const auto pts = series.usable();
    if (pts.size() < 3) throw InsufficientData("need at least 3 flag-free entries at levels >= k");

    InvariantEstimate est;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        bool constant = true;
        for (std::size_t j = i + 1; j < pts.size(); ++j) constant = constant && pts[j].p_rank == pts[i].p_rank;
        if (constant && i + 1 < pts.size()) {
            est.rank_stable_from = pts[i].level;
            break;
        }
    }

    // equal consecutive sizes freeze the tower from there on
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1].level == pts[i].level + 1 && pts[i + 1].size_exp == pts[i].size_exp) {
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                if (pts[j].size_exp != pts[i].size_exp)
                    throw InconsistentSeries("size frozen at level " + std::to_string(pts[i].level) +
                                             " but changes at level " + std::to_string(pts[j].level));
            est.status = EstimateStatus::SizeFrozen;
            est.n0 = pts[i].level;
            est.nu = pts[i].size_exp;
            return est;
        }
    }

    const std::size_t m = pts.size();
    auto fit = detail::fit_three(pts[m - 3], pts[m - 2], pts[m - 1], series.p, series.k);
    if (!fit || fit->mu < 0 || fit->lambda < 0) return est;
    std::size_t start = m - 3;
    while (start > 0 && detail::growth_at(*fit, series.p, series.k, pts[start - 1].level) == pts[start - 1].size_exp)
        --start;
    est.mu = fit->mu;
    est.lambda = fit->lambda;
    est.nu = fit->nu;
    est.n0 = pts[start].level;
    est.status = EstimateStatus::Stabilized;
    return est;
}

struct RankFreeze {
    bool ok;
    bool freeze_observed;
};

/// After the first equality r_n = r_{n+1} all later ranks must agree.
inline RankFreeze rank_freeze_check(const GrowthSeries& series) {
    series.validate();
    std::vector<GrowthEntry> pts;
    for (const auto& e : series.entries)
        if (e.level >= series.k) pts.push_back(e);
    if (pts.size() < 2) throw InsufficientData("need at least 2 entries at levels >= k");
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i].p_rank == pts[i + 1].p_rank) {
            for (std::size_t j = i + 1; j < pts.size(); ++j)
                if (pts[j].p_rank != pts[i].p_rank) return {false, true};
            return {true, true};
        }
    }
    return {true, false};
}

}  // namespace iwalab
