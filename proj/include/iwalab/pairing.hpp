#pragma once

// Finite-level model of the Kummer pairing.
//
// For a resolved level G = M_n = (+) Z/p^{a_i} with exponent p^e, the dual is
// Hom(G, Z/p^e) in coordinates rho: <x, rho> = sum_i p^{e-a_i} y_i(x) rho_i,
// where y(x) are the invariant-factor coordinates of x. Lambda acts on the
// dual through the involution: (lambda . rho)(x) = rho(lambda*(T) x). The
// action of T on the dual, C, is built from the matrix of T* = kappa(1+T)^{-1} - 1
// on G; check_reflection evaluates lambda*(C) independently by substitution.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "iwalab/kernel.hpp"

namespace iwalab {

namespace detail {

// Matrix of a lattice endomorphism in invariant-factor coordinates.
template <ResidueInt Int>
Matrix<Int> group_matrix(const FiniteLevel<Int>& L, const Matrix<Int>& lattice_map) {
    const std::size_t s = L.invariant_exponents().size();
    Matrix<Int> q(s, s);
    for (std::size_t j = 0; j < s; ++j) q.set_column(j, L.group_coords(apply(L.context(), lattice_map, L.factor_generator(j))));
    return q;
}

// Transpose-conjugate of a group endomorphism: rho -> rho o Q in dual coordinates.
// Entry (k, i) is p^{a_k - a_i} Q_{ik}; when a_i > a_k the division is exact.
template <ResidueInt Int>
Matrix<Int> dual_of(const PadicContext<Int>& ctx, const std::vector<int>& exps, const Matrix<Int>& q) {
    const std::size_t s = exps.size();
    Matrix<Int> c(s, s);
    for (std::size_t k = 0; k < s; ++k)
        for (std::size_t i = 0; i < s; ++i) {
            const int d = exps[k] - exps[i];
            c(k, i) = d >= 0 ? ctx.mul(ctx.p_power(d), q(i, k)) : ctx.div_p_power(q(i, k), -d);
        }
    return c;
}

}  // namespace detail

template <ResidueInt Int>
struct TwistedDual {
    LevelPtr<Int> base;
    TowerParams params;
    int e;
    std::vector<int> exps;
    /// T on the base in invariant-factor coordinates.
    Matrix<Int> t_base;
    /// T* = kappa (1+T)^{-1} - 1 on the base, same coordinates.
    Matrix<Int> t_star_base;
    /// T acting on the dual (dual coordinates).
    Matrix<Int> t_action_dual;
    /// The dual group as a level: relations diag(p^{a_i}), T acting by t_action_dual.
    LevelPtr<Int> dual_level;
    /// Least j with t_action_dual^j = 0 on the dual group.
    int nilpotency;
};

template <ResidueInt Int>
struct PairingTable {
    LevelPtr<Int> base;
    int e;
    std::vector<int> exps;
    /// Row i: values <lattice generator i, chi_j> over the dual basis chi_j.
    Matrix<Int> matrix;

    Int modulus() const { return base->context().p_power(e); }

    /// <x, rho> for a lattice vector x and dual coordinates rho.
    Int pair(const Vec<Int>& x, const Vec<Int>& rho) const {
        const auto& ctx = base->context();
        Vec<Int> y = base->group_coords(x);
        Int acc = 0;
        for (std::size_t i = 0; i < y.size(); ++i)
            acc = ctx.add(acc, ctx.mul(ctx.p_power(e - exps[i]), ctx.mul(y[i], rho[i])));
        return acc % modulus();
    }
};

template <ResidueInt Int>
struct Pairing {
    TwistedDual<Int> dual;
    PairingTable<Int> table;
};

template <ResidueInt Int>
Pairing<Int> build_pairing(const LevelPtr<Int>& Mn, const TowerParams& params) {
    Mn->require_resolved();
    const auto& ctx = Mn->context();
    const auto& exps = Mn->invariant_exponents();
    const std::size_t s = exps.size(), r = Mn->rank();
    const int e = Mn->exponent_exp();

    Matrix<Int> one_plus_A = Mn->t_action();
    for (std::size_t i = 0; i < r; ++i) one_plus_A(i, i) = ctx.add(one_plus_A(i, i), ctx.one());
    Matrix<Int> B = mat_scale(ctx, inverse_matrix(ctx, one_plus_A), params.kappa_residue(ctx));
    for (std::size_t i = 0; i < r; ++i) B(i, i) = ctx.sub(B(i, i), ctx.one());

    Matrix<Int> Q = detail::group_matrix(*Mn, Mn->t_action());
    Matrix<Int> QB = detail::group_matrix(*Mn, B);
    Matrix<Int> C = detail::dual_of(ctx, exps, QB);

    Matrix<Int> rel(s, s);
    for (std::size_t i = 0; i < s; ++i) rel(i, i) = ctx.p_power(exps[i]);
    auto dual_level = std::make_shared<const FiniteLevel<Int>>(ctx, params, Mn->level(), std::vector<Block<Int>>{}, rel, C);

    int nil = 0;
    Matrix<Int> P = Matrix<Int>::identity(s);
    while (!dual_level->kills(P)) {
        P = mat_mul(ctx, C, P);
        ++nil;
        if (nil > Mn->size_exp() + 1) throw Error("dual T action is not nilpotent");
    }

    Matrix<Int> table(r, s);
    for (std::size_t i = 0; i < r; ++i) {
        Vec<Int> x(r, Int(0));
        x[i] = ctx.one();
        Vec<Int> y = Mn->group_coords(x);
        for (std::size_t j = 0; j < s; ++j) table(i, j) = ctx.mul(ctx.p_power(e - exps[j]), y[j]) % ctx.p_power(e);
    }

    TwistedDual<Int> dual{Mn, params, e, exps, std::move(Q), std::move(QB), std::move(C), dual_level, nil};
    return {std::move(dual), PairingTable<Int>{Mn, e, exps, std::move(table)}};
}

/// SNF of the table over Z/p^e reproduces the invariant factors of the group.
template <ResidueInt Int>
bool is_nondegenerate(const PairingTable<Int>& t) {
    const auto& ctx = t.base->context();
    if (t.exps.empty()) return true;
    PadicContext<Int> ce(ctx.p(), t.e);
    Matrix<Int> m(t.matrix.rows(), t.matrix.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = t.matrix(i, j) % ce.modulus();
    auto s = smith_form(ce, m, {.left = false, .right = false});
    std::vector<int> orders;
    for (int v : s.diag_val)
        if (v < t.e) orders.push_back(t.e - v);
    std::sort(orders.rbegin(), orders.rend());
    return orders == t.exps;
}

/// lambda(T) evaluated on the dual action by Horner; lambda given as a truncated series.
template <ResidueInt Int>
Matrix<Int> eval_on_dual(const TwistedDual<Int>& d, const LambdaTrunc<Int>& lambda) {
    const auto& ctx = d.base->context();
    const std::size_t s = d.exps.size();
    Matrix<Int> acc(s, s);
    for (std::size_t i = lambda.degree_cap(); i-- > 0;) {
        acc = mat_mul(ctx, d.t_action_dual, acc);
        for (std::size_t k = 0; k < s; ++k) acc(k, k) = ctx.add(acc(k, k), lambda[i]);
    }
    return acc;
}

/// lambda* acting on the dual, by substituting T* into lambda.
template <ResidueInt Int>
Matrix<Int> involuted_on_dual(const TwistedDual<Int>& d, const LambdaTrunc<Int>& lambda) {
    const std::size_t cap = std::max<std::size_t>(lambda.degree_cap(), static_cast<std::size_t>(d.nilpotency) + 1);
    LambdaTrunc<Int> widened(lambda.context(), cap, lambda.coeffs());
    return eval_on_dual(d, iwasawa_involution(widened, d.params));
}

struct ReflectionReport {
    bool matrix_identity;
    bool samples_ok;
    bool ok() const { return matrix_identity && samples_ok; }
};

/// <lambda a, r> = <a, lambda* r>, as a matrix identity on basis pairs and on sampled pairs.
template <ResidueInt Int>
ReflectionReport check_reflection(const Pairing<Int>& P, const LambdaTrunc<Int>& lambda, Rng& rng, int samples) {
    const auto& L = *P.dual.base;
    const auto& ctx = L.context();
    const Matrix<Int> left = multiplication_matrix(L, lambda.to_poly());
    const Matrix<Int> right = involuted_on_dual(P.dual, lambda);
    const std::size_t s = P.dual.exps.size();
    ReflectionReport rep{true, true};
    for (std::size_t j = 0; j < s && rep.matrix_identity; ++j) {
        const Vec<Int> a = L.factor_generator(j);
        const Vec<Int> la = apply(ctx, left, a);
        for (std::size_t i = 0; i < s; ++i) {
            Vec<Int> chi(s, Int(0));
            chi[i] = ctx.one();
            if (P.table.pair(la, chi) != P.table.pair(a, apply(ctx, right, chi))) {
                rep.matrix_identity = false;
                break;
            }
        }
    }
    for (int t = 0; t < samples; ++t) {
        const Vec<Int> a = L.random_element(rng);
        const Vec<Int> rho = P.dual.dual_level->random_element(rng);
        if (P.table.pair(apply(ctx, left, a), rho) != P.table.pair(a, apply(ctx, right, rho))) {
            rep.samples_ok = false;
            break;
        }
    }
    return rep;
}

template <ResidueInt Int>
struct DualBaseCertificate {
    std::vector<Vec<Int>> base;
    std::vector<Vec<Int>> dual;
    /// exponents(i, j) = <a_j, beta_i>, which should be delta_ij q / ord(a_i).
    Matrix<Int> exponents;
    Int q;
};

/// Dual coordinates rho with <x_i, rho> = t_i mod p^e, if any.
template <ResidueInt Int>
std::optional<Vec<Int>> solve_dual(const PairingTable<Int>& t, const std::vector<Vec<Int>>& xs, const Vec<Int>& targets) {
    const auto& ctx = t.base->context();
    PadicContext<Int> ce(ctx.p(), t.e);
    const std::size_t s = t.exps.size();
    Matrix<Int> m(xs.size(), s);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        Vec<Int> y = t.base->group_coords(xs[i]);
        for (std::size_t k = 0; k < s; ++k) m(i, k) = ctx.mul(ctx.p_power(t.e - t.exps[k]), y[k]) % ce.modulus();
    }
    Vec<Int> tg(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) tg[i] = targets[i] % ce.modulus();
    auto sol = solve(ce, m, tg);
    if (!sol) return std::nullopt;
    for (std::size_t k = 0; k < s; ++k) (*sol)[k] = (*sol)[k] % ctx.p_power(t.exps[k]);
    return sol;
}

template <ResidueInt Int>
bool is_p_base(const FiniteLevel<Int>& L, const std::vector<Vec<Int>>& base) {
    int prod = 0;
    for (const auto& a : base) {
        if (L.is_zero(a)) return false;
        prod += L.order_exp(a);
    }
    Matrix<Int> gens = Matrix<Int>::from_columns(L.rank(), base);
    const auto& ctx = L.context();
    const int span = span_log_size(ctx, hcat(gens, L.relation_matrix())) - span_log_size(ctx, L.relation_matrix());
    return span == prod;
}

template <ResidueInt Int>
DualBaseCertificate<Int> dual_base(const PairingTable<Int>& t, const std::vector<Vec<Int>>& base) {
    const auto& L = *t.base;
    const auto& ctx = L.context();
    if (!is_p_base(L, base)) throw NotAPBase("elements are not independent (or contain zero)");
    DualBaseCertificate<Int> cert;
    cert.base = base;
    cert.q = ctx.p_power(t.e);
    for (std::size_t i = 0; i < base.size(); ++i) {
        Vec<Int> targets(base.size(), Int(0));
        targets[i] = ctx.p_power(t.e - L.order_exp(base[i]));
        auto beta = solve_dual(t, base, targets);
        if (!beta) throw NotAPBase("no dual element found");
        cert.dual.push_back(std::move(*beta));
    }
    cert.exponents = Matrix<Int>(base.size(), base.size());
    for (std::size_t i = 0; i < base.size(); ++i)
        for (std::size_t j = 0; j < base.size(); ++j) cert.exponents(i, j) = t.pair(base[j], cert.dual[i]);
    return cert;
}

struct CompatReport {
    bool ok = true;
    bool exhaustive = false;
    long long pairs_checked = 0;
};

/// <iota_{n,m}(N_{m,n} x), r>_m = p^{m-n} <x, r>_m on M_m.
template <ResidueInt Int>
CompatReport check_projective_compat(const LevelPtr<Int>& Mn, const Pairing<Int>& Pm, Rng& rng, int samples = 200,
                                     int exhaust_exp = 6) {
    const auto& Mm = Pm.dual.base;
    if (Mm->level() <= Mn->level()) throw BadLevels("projective compatibility needs m > n");
    const auto& ctx = Mm->context();
    const Matrix<Int> IN = mat_mul(ctx, lift_map(*Mn, *Mm).matrix, norm_map(*Mm, *Mn).matrix);
    const Int scale = ctx.p_power(Mm->level() - Mn->level());
    CompatReport rep;
    auto check = [&](const Vec<Int>& x, const Vec<Int>& rho) {
        ++rep.pairs_checked;
        const Int lhs = Pm.table.pair(apply(ctx, IN, x), rho);
        const Int rhs = ctx.mul(scale, Pm.table.pair(x, rho)) % Pm.table.modulus();
        return lhs == rhs;
    };
    if (Mm->size_exp() <= exhaust_exp) {
        rep.exhaustive = true;
        const auto xs = Mm->enumerate();
        const auto rs = Pm.dual.dual_level->enumerate();
        for (const auto& x : xs)
            for (const auto& rho : rs)
                if (!check(x, rho)) {
                    rep.ok = false;
                    return rep;
                }
        return rep;
    }
    for (int t = 0; t < samples; ++t)
        if (!check(Mm->random_element(rng), Pm.dual.dual_level->random_element(rng))) {
            rep.ok = false;
            return rep;
        }
    return rep;
}

/// The double dual, with the twist applied twice, is isomorphic to the base as a Lambda-module.
template <ResidueInt Int>
bool double_dual_check(const Pairing<Int>& P) {
    const auto& base = P.dual.base;
    const auto& ctx = base->context();
    const Pairing<Int> PP = build_pairing(P.dual.dual_level, P.dual.params);
    const std::size_t s = P.dual.exps.size();
    // Phi(a) is the functional rho -> <a, rho> on the dual, written in double-dual coordinates.
    std::vector<Vec<Int>> dual_basis;
    for (std::size_t k = 0; k < s; ++k) {
        Vec<Int> chi(s, Int(0));
        chi[k] = ctx.one();
        dual_basis.push_back(chi);
    }
    std::vector<Vec<Int>> phi;
    for (std::size_t j = 0; j < s; ++j) {
        Vec<Int> targets;
        for (const auto& chi : dual_basis) targets.push_back(P.table.pair(base->factor_generator(j), chi));
        auto sigma = solve_dual(PP.table, dual_basis, targets);
        if (!sigma) return false;
        phi.push_back(PP.dual.dual_level->from_group_coords(*sigma));
    }
    auto phi_of = [&](const Vec<Int>& a) {
        Vec<Int> y = base->group_coords(a);
        Vec<Int> out(s, Int(0));
        for (std::size_t j = 0; j < s; ++j) out = vec_add(ctx, out, vec_scale(ctx, phi[j], y[j]));
        return out;
    };
    // Phi is a bijection and intertwines T with the double-dual action.
    Matrix<Int> phi_mat = Matrix<Int>::from_columns(s, phi);
    if (Subgroup<Int>(PP.dual.dual_level, phi_mat).size_exp() != base->size_exp()) return false;
    for (std::size_t j = 0; j < s; ++j) {
        const Vec<Int> a = base->factor_generator(j);
        const Vec<Int> lhs = phi_of(apply(ctx, base->t_action(), a));
        const Vec<Int> rhs = apply(ctx, PP.dual.t_action_dual, phi_of(a));
        if (!PP.dual.dual_level->equal(lhs, rhs)) return false;
    }
    return true;
}

struct ReversalReport {
    int k = 0;
    bool degenerate = false;
    /// vanishes[j-1][l-1], 1 <= j, l <= k+1: every a in M[f^j] pairs to 0 with every rho in the dual socle of f*^l.
    std::vector<std::vector<bool>> vanishes;
    /// Largest s such that the pairing vanishes whenever j + l <= s (0 if none).
    int vanishing_up_to = 0;
    /// Whether vanishing happens exactly for j + l <= vanishing_up_to.
    bool threshold_shaped = false;
    /// The stated rule: zero for all j + l > k + 1, and a nonzero value at some j + l = k + 1.
    bool stated_rule_holds = false;
    bool boundary_witness = false;
    /// ann(f^i M_n) has order |M_n| / |f^i M_n| and equals the dual socle of f*^i, for 0 < i < k.
    bool annihilator_correspondence = false;
};

/// Order reversal scan on a level of Lambda/(f^k).
template <ResidueInt Int>
ReversalReport check_order_reversal(const Pairing<Int>& P, const LambdaPoly<Int>& f, int k) {
    ReversalReport rep;
    rep.k = k;
    if (k < 2) {
        rep.degenerate = true;
        rep.stated_rule_holds = true;
        rep.threshold_shaped = true;
        rep.annihilator_correspondence = true;
        return rep;
    }
    const auto& L = P.dual.base;
    const auto& ctx = L->context();
    const auto& D = P.dual.dual_level;

    // dual socle of f*^l: rho with (f*)^l . rho = 0, i.e. rho o f^l(T) = 0
    auto dual_action_of_power = [&](int l) {
        return detail::dual_of(ctx, P.dual.exps, detail::group_matrix(*L, power_multiplication_matrix(*L, f, static_cast<unsigned>(l))));
    };
    const int top = k + 1;
    std::vector<Subgroup<Int>> socles, dual_socles;
    for (int j = 1; j <= top; ++j) {
        socles.push_back(socle(L, poly_pow(f, static_cast<unsigned>(j))));
        dual_socles.push_back(map_kernel(D, *D, dual_action_of_power(j)));
    }
    rep.vanishes.assign(top, std::vector<bool>(top, true));
    for (int j = 1; j <= top; ++j)
        for (int l = 1; l <= top; ++l) {
            const auto& A = socles[j - 1];
            const auto& R = dual_socles[l - 1];
            bool zero = true;
            for (std::size_t a = 0; a < A.generators().cols() && zero; ++a)
                for (std::size_t b = 0; b < R.generators().cols() && zero; ++b)
                    if (P.table.pair(A.generator(a), R.generator(b)) != 0) zero = false;
            rep.vanishes[j - 1][l - 1] = zero;
        }

    for (int s = 2; s <= 2 * top; ++s) {
        bool all = true;
        for (int j = 1; j <= top; ++j)
            for (int l = 1; l <= top; ++l)
                if (j + l <= s && !rep.vanishes[j - 1][l - 1]) all = false;
        if (all) rep.vanishing_up_to = s;
    }
    rep.threshold_shaped = true;
    for (int j = 1; j <= top; ++j)
        for (int l = 1; l <= top; ++l)
            if (rep.vanishes[j - 1][l - 1] != (j + l <= rep.vanishing_up_to)) rep.threshold_shaped = false;

    bool above_zero = true;
    for (int j = 1; j <= top; ++j)
        for (int l = 1; l <= top; ++l) {
            if (j + l > k + 1 && !rep.vanishes[j - 1][l - 1]) above_zero = false;
            if (j + l == k + 1 && !rep.vanishes[j - 1][l - 1]) rep.boundary_witness = true;
        }
    rep.stated_rule_holds = above_zero && rep.boundary_witness;

    // ann(f^i M_n) solved directly from the table, against the dual socle of f*^i
    rep.annihilator_correspondence = true;
    for (int i = 1; i < k; ++i) {
        Subgroup<Int> image = Subgroup<Int>::whole(L).transformed(power_multiplication_matrix(*L, f, static_cast<unsigned>(i)));
        const std::size_t g = image.generators().cols(), s = P.dual.exps.size();
        Matrix<Int> rel = mat_scale(ctx, Matrix<Int>::identity(g), ctx.p_power(P.dual.e));
        FiniteLevel<Int> target(ctx, P.dual.params, L->level(), {}, rel, Matrix<Int>(g, g));
        Matrix<Int> eval(g, s);
        for (std::size_t a = 0; a < g; ++a) {
            Vec<Int> y = L->group_coords(image.generator(a));
            for (std::size_t c = 0; c < s; ++c) eval(a, c) = ctx.mul(ctx.p_power(P.dual.e - P.dual.exps[c]), y[c]);
        }
        Subgroup<Int> ann = map_kernel(D, target, eval);
        if (ann.size_exp() != L->size_exp() - image.size_exp() || !ann.equals(dual_socles[i - 1]))
            rep.annihilator_correspondence = false;
    }
    return rep;
}

}  // namespace iwalab
