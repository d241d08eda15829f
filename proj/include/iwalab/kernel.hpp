#pragma once

// Structural operations on finite levels: norm/lift identities, socles and
// primary parts, saturation, the T-part splitting, transitions C_n, norm
// kernels, property F, element order profiles, and the level-pair checks
// (Lemma ab, stable-regime ordering, semistable transitions).

#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "iwalab/module.hpp"

namespace iwalab {

namespace detail {

// First `rows` coordinates of each column of m.
template <ResidueInt Int>
Matrix<Int> top_rows(const Matrix<Int>& m, std::size_t rows) {
    Matrix<Int> out(rows, m.cols());
    for (std::size_t j = 0; j < m.cols(); ++j)
        for (std::size_t i = 0; i < rows; ++i) out(i, j) = m(i, j);
    return out;
}

template <ResidueInt Int>
std::string format_vec(const Vec<Int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + to_decimal(v[i]);
    return s + ")";
}

inline std::string format_exps(unsigned p, const std::vector<int>& exps) {
    if (exps.empty()) return "1";
    std::string s;
    for (std::size_t i = 0; i < exps.size(); ++i) s += (i ? "," : "") + std::to_string(p) + "^" + std::to_string(exps[i]);
    return s;
}

}  // namespace detail

/// { x in M_from : m x = 0 in M_to } for a map given by its lattice matrix.
template <ResidueInt Int>
Subgroup<Int> map_kernel(const LevelPtr<Int>& from, const FiniteLevel<Int>& to, const Matrix<Int>& m) {
    Matrix<Int> k = kernel(from->context(), hcat(m, to.relation_matrix()));
    return Subgroup<Int>(from, detail::top_rows(k, from->rank()));
}

/// Image of M_from in M_to.
template <ResidueInt Int>
Subgroup<Int> map_image(const LevelPtr<Int>& to, const Matrix<Int>& m) {
    return Subgroup<Int>(to, m);
}

/// M_n[p^e].
template <ResidueInt Int>
Subgroup<Int> p_torsion(const LevelPtr<Int>& L, int e) {
    const auto& ctx = L->context();
    return map_kernel(L, *L, mat_scale(ctx, Matrix<Int>::identity(L->rank()), ctx.p_power(e)));
}

struct CircReport {
    bool norm_lift_ok = false;  // N o iota = p on M_n
    bool lift_norm_ok = false;  // iota o N = nu_{n+1,n} on M_{n+1}
    bool ok() const { return norm_lift_ok && lift_norm_ok; }
};

template <ResidueInt Int>
CircReport verify_circ(const FiniteLevel<Int>& Mn, const FiniteLevel<Int>& Mm) {
    if (Mm.level() != Mn.level() + 1) throw BadLevels("verify_circ needs m = n + 1");
    const auto& ctx = Mn.context();
    const auto N = norm_map(Mm, Mn).matrix;
    const auto I = lift_map(Mn, Mm).matrix;
    CircReport rep;
    const Matrix<Int> p_id = mat_scale(ctx, Matrix<Int>::identity(Mn.rank()), ctx.p_power(1));
    rep.norm_lift_ok = Mn.kills(mat_sub(ctx, mat_mul(ctx, N, I), p_id));
    const auto nu_mat = multiplication_matrix(Mm, nu(ctx, Mm.level(), Mn.level(), Mn.params()));
    rep.lift_norm_ok = Mm.kills(mat_sub(ctx, mat_mul(ctx, I, N), nu_mat));
    return rep;
}

template <ResidueInt Int>
CircReport verify_circ(const ElementaryModule<Int>& M, int n, int m) {
    if (m != n + 1) throw BadLevels("verify_circ needs m = n + 1");
    return verify_circ(*finite_level(M, n), *finite_level(M, m));
}

/// Lattice socle M[f] = ker f(T).
template <ResidueInt Int>
Subgroup<Int> socle(const LevelPtr<Int>& L, const LambdaPoly<Int>& f) {
    if (f.is_zero()) throw ZeroPolynomial();
    auto k = exact_kernel(L->context(), multiplication_matrix(*L, f));
    return Subgroup<Int>(L, std::move(k.generators));
}

template <ResidueInt Int>
struct PrimaryPart {
    Subgroup<Int> part;
    /// Valuation of the index of f^B M in its saturation (a resultant valuation).
    int c_estimate;
    bool reliable;
};

/// Lattice primary part M(f) = ker f(T)^B with B the lattice rank.
template <ResidueInt Int>
PrimaryPart<Int> primary_part(const LevelPtr<Int>& L, const LambdaPoly<Int>& f) {
    if (f.is_zero()) throw ZeroPolynomial();
    const unsigned B = static_cast<unsigned>(std::max<std::size_t>(L->rank(), 1));
    auto k = exact_kernel(L->context(), power_multiplication_matrix(*L, f, B));
    const int c = k.cokernel_torsion;
    return {Subgroup<Int>(L, std::move(k.generators)), c, c < L->context().precision()};
}

/// Z_p-saturation { x : p^j x in A } of the lattice spanned by A.
template <ResidueInt Int>
Subgroup<Int> saturate(const Subgroup<Int>& A) {
    return Subgroup<Int>(A.ambient(), saturated_span(A.level().context(), A.generators()));
}

template <ResidueInt Int>
struct TClosure {
    Subgroup<Int> closure;
    bool enlarged;
};

/// Smallest T-stable lattice containing A.
template <ResidueInt Int>
TClosure<Int> t_closure(const Subgroup<Int>& A) {
    Subgroup<Int> cur = A;
    bool enlarged = false;
    for (std::size_t it = 0; it <= A.level().rank() * A.level().context().precision() + 1; ++it) {
        Subgroup<Int> moved = cur.transformed(A.level().t_action());
        if (cur.lattice_contains(moved)) return {cur, enlarged};
        cur = Subgroup<Int>(A.ambient(), span_basis(A.level().context(), hcat(cur.generators(), moved.generators())));
        enlarged = true;
    }
    throw Error("T-closure did not stabilise");
}

/// Smallest saturated T-stable lattice containing A. Over Z/p^N a saturation can
/// lose T-stability in the truncated digits, so closure and saturation alternate.
template <ResidueInt Int>
Subgroup<Int> saturated_t_closure(const Subgroup<Int>& A) {
    Subgroup<Int> cur = saturate(t_closure(A).closure);
    for (std::size_t it = 0; it <= A.level().rank() * A.level().context().precision(); ++it) {
        if (cur.is_t_stable()) return cur;
        cur = saturate(t_closure(cur).closure);
    }
    throw Error("saturated T-closure did not stabilise");
}

template <ResidueInt Int>
bool is_coalescence_closed(const Subgroup<Int>& A) {
    if (!A.is_t_stable()) throw NotTStable("subgroup is not stable under T");
    return saturate(A).lattice_equals(A);
}

template <ResidueInt Int>
struct TSplit {
    Subgroup<Int> socle_T;
    Subgroup<Int> complement;
    /// The two lattices are complementary: ranks add up and the sum is unimodular.
    bool lattice_direct;
    /// Sum is M_n and intersection trivial, tested in M_n (absent when the level is unresolved).
    std::optional<bool> level_direct;
    bool verified;
};

template <ResidueInt Int>
TSplit<Int> split_t_part(const LevelPtr<Int>& L) {
    const auto& ctx = L->context();
    Subgroup<Int> s = socle(L, LambdaPoly<Int>::T(ctx));
    Subgroup<Int> w = saturate(Subgroup<Int>(L, L->t_action()));
    const int r = static_cast<int>(L->rank());
    const bool lattice_direct = s.lattice_rank() + w.lattice_rank() == r &&
                                span_log_size(ctx, hcat(s.generators(), w.generators())) == ctx.precision() * r;
    std::optional<bool> level_direct;
    if (!L->unresolved()) level_direct = s.sum(w).size_exp() == L->size_exp() && s.intersect(w).is_trivial();
    const bool verified = lattice_direct && level_direct.value_or(true);
    return {std::move(s), std::move(w), lattice_direct, level_direct, verified};
}

enum class TransitionType { Stable, Semistable, Tame, Wild };

inline const char* to_string(TransitionType t) {
    switch (t) {
        case TransitionType::Stable: return "Stable";
        case TransitionType::Semistable: return "Semistable";
        case TransitionType::Tame: return "Tame";
        case TransitionType::Wild: return "Wild";
    }
    return "?";
}

/// Most specific class: Stable (k = 1), Semistable (k < p-1), Tame (k <= p-1), Wild.
inline TransitionType classify_growth(int k, unsigned p) {
    const int pm1 = static_cast<int>(p) - 1;
    if (k == 1) return TransitionType::Stable;
    if (k < pm1) return TransitionType::Semistable;
    if (k <= pm1) return TransitionType::Tame;
    return TransitionType::Wild;
}

struct TransitionReport {
    int level;
    int growth_factor;
    TransitionType classification;
    std::vector<int> quotient_invariant_exps;
    bool lift_injective;
};

/// C_n = M_{n+1} / iota(M_n) and the least k >= 1 with omega_n^k C_n = 0.
template <ResidueInt Int>
TransitionReport transition(const LevelPtr<Int>& Mn, const LevelPtr<Int>& Mm) {
    if (Mm->level() != Mn->level() + 1) throw BadLevels("transition needs consecutive levels");
    const auto& ctx = Mn->context();
    const auto I = lift_map(*Mn, *Mm).matrix;
    const Matrix<Int> Q = hcat(Mm->relation_matrix(), I);

    auto s = smith_form(ctx, Q, {.left = true, .right = false});
    std::vector<int> cexps;
    for (std::size_t t = 0; t < Mm->rank(); ++t) {
        int v = t < s.diag_val.size() ? s.diag_val[t] : ctx.precision();
        if (v > 0) cexps.push_back(v);
    }
    std::sort(cexps.rbegin(), cexps.rend());
    int csize = 0;
    for (int v : cexps) csize += v;

    auto in_Q = [&](const Vec<Int>& x) {
        Vec<Int> y = apply(ctx, s.U, x);
        for (std::size_t t = 0; t < y.size(); ++t) {
            int v = t < s.diag_val.size() ? s.diag_val[t] : ctx.precision();
            if (y[t] != 0 && ctx.valuation(y[t]) < v) return false;
        }
        return true;
    };

    const Matrix<Int> W = multiplication_matrix(*Mm, omega(ctx, Mn->level(), Mn->params()));
    Matrix<Int> X = W;
    int k = 1;
    // omega_n lies in the maximal ideal, so each power shrinks C_n until it dies
    for (; k <= csize + 1; ++k) {
        bool dead = true;
        for (std::size_t j = 0; j < X.cols() && dead; ++j) dead = in_Q(X.column(j));
        if (dead) break;
        X = mat_mul(ctx, W, X);
    }
    const bool injective = map_kernel(Mn, *Mm, I).is_trivial();
    return {Mn->level(), k, classify_growth(k, ctx.p()), std::move(cexps), injective};
}

template <ResidueInt Int>
TransitionReport transition(const ElementaryModule<Int>& M, int n) {
    return transition(finite_level(M, n), finite_level(M, n + 1));
}

/// ker(N_{H,n}) inside M_H.
template <ResidueInt Int>
Subgroup<Int> y_kernel(const LevelPtr<Int>& Mn, const LevelPtr<Int>& MH) {
    if (MH->level() <= Mn->level()) throw BadLevels("horizon must exceed the level");
    return map_kernel(MH, *Mn, norm_map(*MH, *Mn).matrix);
}

template <ResidueInt Int>
Subgroup<Int> y_kernel(const ElementaryModule<Int>& M, int n, int H) {
    if (H <= n) throw BadLevels("horizon must exceed the level");
    return y_kernel(finite_level(M, n), finite_level(M, H));
}

template <ResidueInt Int>
struct PropertyFReport {
    bool pass;
    /// Invariant factor exponents of ker(N_{H,n}) cap A and of omega_n A.
    std::vector<int> kernel_part_exps;
    std::vector<int> omega_part_exps;
    /// An element of ker(N_{H,n}) cap A outside omega_n A, in lattice coordinates.
    std::optional<Vec<Int>> witness;
};

/// ker(N_{H,n}) cap A = omega_n A inside M_H, A given at level H.
template <ResidueInt Int>
PropertyFReport<Int> property_f_check(const Subgroup<Int>& A, const LevelPtr<Int>& Mn) {
    if (!A.is_t_stable()) throw NotTStable("subgroup is not stable under T");
    const auto& MH = A.ambient();
    const auto& ctx = MH->context();
    Subgroup<Int> lhs = y_kernel(Mn, MH).intersect(A);
    Subgroup<Int> rhs = A.transformed(multiplication_matrix(*MH, omega(ctx, Mn->level(), MH->params())));
    PropertyFReport<Int> rep{true, lhs.invariant_exponents(), rhs.invariant_exponents(), std::nullopt};
    for (std::size_t j = 0; j < lhs.generators().cols(); ++j) {
        Vec<Int> x = lhs.generator(j);
        if (!rhs.contains(x)) {
            rep.pass = false;
            rep.witness = std::move(x);
            break;
        }
    }
    return rep;
}

enum class OrderKind { Zero, Geometric, MuType, Irregular };

inline const char* to_string(OrderKind k) {
    switch (k) {
        case OrderKind::Zero: return "zero";
        case OrderKind::Geometric: return "geometric";
        case OrderKind::MuType: return "mu-type";
        case OrderKind::Irregular: return "irregular";
    }
    return "?";
}

struct OrderProfile {
    std::vector<int> levels;
    std::vector<int> order_exps;
    OrderKind kind = OrderKind::Irregular;
    /// ord(x_n) = p^{max(0, n+1+z)} from fit_start on; z = INT_MIN stands for -infinity.
    int z = std::numeric_limits<int>::min();
    int fit_start = -1;
};

/// Orders of the norms x_n of an element x given at the top level.
/// `levels` must be ascending, x lives at levels.back().
template <ResidueInt Int>
OrderProfile order_profile(const std::vector<LevelPtr<Int>>& levels, const Vec<Int>& x) {
    OrderProfile prof;
    const auto& top = *levels.back();
    for (const auto& L : levels) {
        Vec<Int> xn = L->level() == top.level() ? x : apply(L->context(), norm_map(top, *L).matrix, x);
        prof.levels.push_back(L->level());
        prof.order_exps.push_back(L->order_exp(xn));
    }
    const auto& o = prof.order_exps;
    const std::size_t n = o.size();
    if (std::all_of(o.begin(), o.end(), [](int v) { return v == 0; })) {
        prof.kind = OrderKind::Zero;
        prof.fit_start = prof.levels.front();
        return prof;
    }
    if (n >= 2 && o[n - 1] == o[n - 2] && o[n - 1] > 0) {
        prof.kind = OrderKind::MuType;
        return prof;
    }
    // longest tail on which o = n + 1 + z with o > 0
    if (o[n - 1] > 0) {
        const int z = o[n - 1] - (prof.levels[n - 1] + 1);
        std::size_t start = n - 1;
        while (start > 0 && o[start - 1] == std::max(0, prof.levels[start - 1] + 1 + z)) --start;
        if (n - start >= 2) {
            prof.kind = OrderKind::Geometric;
            prof.z = z;
            prof.fit_start = prof.levels[start];
        }
    }
    return prof;
}

struct PairCheck {
    bool applicable = false;  // hypotheses hold
    bool pass = true;         // conclusions hold (vacuous when not applicable)
    std::string detail;
};

/// Lemma ab on the pair (M_n, M_{n+1}) with A = M_n, B = M_{n+1}.
template <ResidueInt Int>
PairCheck lemma_ab_check(const LevelPtr<Int>& Mn, const LevelPtr<Int>& Mm, Rng& rng, int samples) {
    const auto& ctx = Mn->context();
    PairCheck out;
    const auto N = norm_map(*Mm, *Mn).matrix;
    const auto I = lift_map(*Mn, *Mm).matrix;
    const int r = Mn->p_rank();
    const bool sexp_ok = Mn->subexponent_exp() >= 2 && Mm->subexponent_exp() >= 2;
    const bool rank_ok = Mm->p_rank() == r && Mm->size_exp() - Mn->size_exp() == r;
    const bool surj = map_image(Mn, N).size_exp() == Mn->size_exp();
    const bool circ = verify_circ(*Mn, *Mm).norm_lift_ok;
    const bool rank_pres = map_image(Mm, I).p_rank() == r;
    out.applicable = sexp_ok && rank_ok && surj && circ && rank_pres && !Mn->unresolved() && !Mm->unresolved();
    if (!out.applicable) return out;

    std::ostringstream why;
    if (!map_kernel(Mn, *Mm, I).is_trivial()) {
        out.pass = false;
        why << "lift not injective; ";
    }
    const auto pB = Subgroup<Int>::p_power_multiple(Mm, 1);
    if (!map_image(Mm, I).equals(pB)) {
        out.pass = false;
        why << "lift image differs from pB; ";
    }
    for (int s = 0; s < samples; ++s) {
        Vec<Int> x = Mm->random_element(rng);
        if (Mm->order_exp(x) != 1 + Mn->order_exp(apply(ctx, N, x)) && Mm->order_exp(x) > 0) {
            out.pass = false;
            why << "ord(x) != p ord(Nx) at x=" << detail::format_vec(x) << "; ";
            break;
        }
    }
    out.detail = why.str();
    return out;
}

/// omega_n x in iota(M_n[p]) for sampled x in M_{n+1}.
template <ResidueInt Int>
PairCheck stable_ordering_check(const LevelPtr<Int>& Mn, const LevelPtr<Int>& Mm, Rng& rng, int samples) {
    const auto& ctx = Mn->context();
    PairCheck out;
    out.applicable = !Mn->unresolved() && !Mm->unresolved();
    if (!out.applicable) return out;
    const auto I = lift_map(*Mn, *Mm).matrix;
    const auto target = p_torsion(Mn, 1).mapped(Mm, I);
    const auto W = multiplication_matrix(*Mm, omega(ctx, Mn->level(), Mn->params()));
    for (int s = 0; s < samples; ++s) {
        Vec<Int> x = Mm->random_element(rng);
        if (!target.contains(apply(ctx, W, x))) {
            out.pass = false;
            out.detail = "omega_n x outside iota(M_n[p]) at x=" + detail::format_vec(x);
            break;
        }
    }
    return out;
}

/// For a semistable transition C_n: p M_{n+1} = iota(M_n).
template <ResidueInt Int>
PairCheck semistable_check(const LevelPtr<Int>& Mn, const LevelPtr<Int>& Mm) {
    PairCheck out;
    auto tr = transition(Mn, Mm);
    out.applicable = (tr.classification == TransitionType::Stable || tr.classification == TransitionType::Semistable) &&
                     !Mn->unresolved() && !Mm->unresolved();
    if (!out.applicable) return out;
    const auto I = lift_map(*Mn, *Mm).matrix;
    if (!map_image(Mm, I).equals(Subgroup<Int>::p_power_multiple(Mm, 1))) {
        out.pass = false;
        out.detail = "p M_{n+1} != iota(M_n)";
    }
    return out;
}

}  // namespace iwalab
