#pragma once

// Elementary torsion Lambda-modules and their finite levels M_n = M / omega_n M.
//
// Every level is a quotient L / span(R) of a lattice L = (Z/p^N)^r by a
// relation matrix R, together with the matrix of T on L. A summand
// Lambda/(g), g = f^e distinguished, uses the basis 1, T, ..., T^{deg g - 1}
// of Z_p[T]/(g) (the same lattice at every level) with relations
// omega_n T^j mod g. A summand Lambda/(p^m) uses the basis of Z_p[T]/(omega_n)
// with relations p^m.

#include <algorithm>
#include <memory>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "iwalab/lambda.hpp"
#include "iwalab/linalg.hpp"
#include "iwalab/random.hpp"

namespace iwalab {

template <ResidueInt Int>
struct PolySummand {
    LambdaPoly<Int> f;
    int e = 1;
};

struct MuSummand {
    int m = 1;
};

template <ResidueInt Int>
class ElementaryModule {
public:
    ElementaryModule(const PadicContext<Int>& ctx, const TowerParams& params, std::vector<PolySummand<Int>> poly,
                     std::vector<MuSummand> mu = {})
        : ctx_(ctx), params_(params), poly_(std::move(poly)), mu_(std::move(mu)) {
        if (params_.p != ctx_.p()) throw ContextMismatch();
        if (params_.k < 1) throw Error("tower parameter k must be >= 1");
        for (const auto& s : poly_) {
            if (!(s.f.context() == ctx_)) throw ContextMismatch();
            if (!is_distinguished(s.f)) throw NotDistinguished("summand " + s.f.to_string() + " is not distinguished");
            if (s.f.degree() < 1) throw NotDistinguished("summand polynomial must have degree >= 1");
            if (s.e < 1) throw Error("summand exponent must be >= 1");
        }
        for (const auto& s : mu_)
            if (s.m < 1) throw Error("mu exponent must be >= 1");
        if (poly_.empty() && mu_.empty()) throw Error("module needs at least one summand");
    }

    const PadicContext<Int>& context() const { return ctx_; }
    const TowerParams& params() const { return params_; }
    const std::vector<PolySummand<Int>>& poly_summands() const { return poly_; }
    const std::vector<MuSummand>& mu_summands() const { return mu_; }

    int lambda_invariant() const {
        int l = 0;
        for (const auto& s : poly_) l += s.e * s.f.degree();
        return l;
    }
    int mu_invariant() const {
        int m = 0;
        for (const auto& s : mu_) m += s.m;
        return m;
    }
    bool mu_free() const { return mu_.empty(); }

    std::string describe() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& s : poly_) {
            os << (first ? "" : " + ") << "L/(" << s.f.to_string() << ")";
            if (s.e > 1) os << "^" << s.e;
            first = false;
        }
        for (const auto& s : mu_) {
            os << (first ? "" : " + ") << "L/(p^" << s.m << ")";
            first = false;
        }
        return os.str();
    }

private:
    PadicContext<Int> ctx_;
    TowerParams params_;
    std::vector<PolySummand<Int>> poly_;
    std::vector<MuSummand> mu_;
};

template <ResidueInt Int>
struct Block {
    enum class Kind { Poly, Mu };
    Kind kind;
    std::size_t summand;
    std::size_t offset;
    std::size_t width;
    /// The polynomial the block's lattice is reduced by: f^e, or omega_n for mu blocks.
    LambdaPoly<Int> modulus;
    int mu_exp = 0;
};

namespace detail {

template <ResidueInt Int>
Vec<Int> poly_coords(const LambdaPoly<Int>& h, std::size_t width) {
    Vec<Int> v(width, Int(0));
    for (std::size_t i = 0; i < width && i < h.coeffs().size(); ++i) v[i] = h.coeffs()[i];
    return v;
}

// T * v in Z_p[T]/(c), c monic of degree width.
template <ResidueInt Int>
Vec<Int> times_T(const PadicContext<Int>& ctx, const Vec<Int>& v, const LambdaPoly<Int>& c) {
    const std::size_t w = v.size();
    Vec<Int> out(w, Int(0));
    const Int top = v[w - 1];
    for (std::size_t i = w - 1; i > 0; --i) out[i] = v[i - 1];
    if (top != 0)
        for (std::size_t i = 0; i < w; ++i) out[i] = ctx.sub(out[i], ctx.mul(top, c.coeffs()[i]));
    return out;
}

// Columns h T^j mod c for j < cols, as rows = deg c vectors.
template <ResidueInt Int>
std::vector<Vec<Int>> multiplication_columns(const PadicContext<Int>& ctx, const LambdaPoly<Int>& h,
                                             const LambdaPoly<Int>& c, std::size_t cols) {
    const std::size_t w = static_cast<std::size_t>(c.degree());
    std::vector<Vec<Int>> out;
    out.reserve(cols);
    Vec<Int> col = poly_coords(poly_mod(h, c), w);
    for (std::size_t j = 0; j < cols; ++j) {
        out.push_back(col);
        if (j + 1 < cols) col = times_T(ctx, col, c);
    }
    return out;
}

template <ResidueInt Int>
void place(Matrix<Int>& m, std::size_t row0, std::size_t col0, const std::vector<Vec<Int>>& cols) {
    for (std::size_t j = 0; j < cols.size(); ++j)
        for (std::size_t i = 0; i < cols[j].size(); ++i) m(row0 + i, col0 + j) = cols[j][i];
}

}  // namespace detail

/// M_n as L / span(R) with the T action on L.
template <ResidueInt Int>
class FiniteLevel {
public:
    FiniteLevel(const PadicContext<Int>& ctx, const TowerParams& params, int level, std::vector<Block<Int>> blocks,
                Matrix<Int> relations, Matrix<Int> t_action)
        : ctx_(ctx), params_(params), level_(level), blocks_(std::move(blocks)),
          relations_(std::move(relations)), t_action_(std::move(t_action)) {
        auto s = smith_form(ctx_, relations_, {.left = true, .right = false});
        U_ = std::move(s.U);
        U_inv_ = std::move(s.U_inv);
        diag_val_ = s.diag_val;
        diag_val_.resize(rank(), ctx_.precision());
        for (std::size_t t = 0; t < diag_val_.size(); ++t)
            if (diag_val_[t] > 0) factor_index_.push_back(t);
        std::stable_sort(factor_index_.begin(), factor_index_.end(),
                         [&](std::size_t a, std::size_t b) { return diag_val_[a] > diag_val_[b]; });
        for (std::size_t t : factor_index_) {
            invariant_exps_.push_back(diag_val_[t]);
            size_exp_ += diag_val_[t];
            if (diag_val_[t] >= ctx_.precision()) unresolved_ = true;
        }
    }

    const PadicContext<Int>& context() const { return ctx_; }
    const TowerParams& params() const { return params_; }
    int level() const { return level_; }
    const std::vector<Block<Int>>& blocks() const { return blocks_; }
    std::size_t rank() const { return t_action_.rows(); }
    const Matrix<Int>& relation_matrix() const { return relations_; }
    const Matrix<Int>& t_action() const { return t_action_; }

    /// Exponents a_1 >= a_2 >= ... > 0 of the invariant factors p^{a_i}.
    const std::vector<int>& invariant_exponents() const { return invariant_exps_; }
    int size_exp() const { return size_exp_; }
    int p_rank() const { return static_cast<int>(invariant_exps_.size()); }
    /// log_p of the exponent of the group.
    int exponent_exp() const { return invariant_exps_.empty() ? 0 : invariant_exps_.front(); }
    /// log_p of the subexponent min{ord(x) : x not in pM}.
    int subexponent_exp() const { return invariant_exps_.empty() ? 0 : invariant_exps_.back(); }

    /// Some invariant factor equals p^N: the order is not resolved at this precision.
    bool unresolved() const { return unresolved_; }
    void require_resolved() const {
        if (unresolved_)
            throw PrecisionExhausted("level " + std::to_string(level_) + " has an invariant factor p^" +
                                     std::to_string(ctx_.precision()) + " (order not resolved)");
    }

    /// Human readable labels of the lattice basis, summand-major, degree-ascending.
    std::vector<std::string> generator_labels() const {
        std::vector<std::string> out;
        for (const auto& b : blocks_)
            for (std::size_t j = 0; j < b.width; ++j)
                out.push_back("s" + std::to_string(b.summand) + (b.kind == Block<Int>::Kind::Mu ? "m" : "") + ":T^" +
                              std::to_string(j));
        return out;
    }

    /// Coordinates of x in the invariant-factor decomposition, one per factor, each reduced mod p^{a_i}.
    Vec<Int> group_coords(const Vec<Int>& x) const {
        Vec<Int> y = apply(ctx_, U_, x);
        Vec<Int> out;
        out.reserve(factor_index_.size());
        for (std::size_t t : factor_index_) out.push_back(y[t] % factor_modulus(t));
        return out;
    }

    Vec<Int> from_group_coords(const Vec<Int>& g) const {
        Vec<Int> y(rank(), Int(0));
        for (std::size_t i = 0; i < factor_index_.size(); ++i) y[factor_index_[i]] = ctx_.reduce_nonneg(g[i]);
        return apply(ctx_, U_inv_, y);
    }

    /// Lattice vector representing the i-th invariant-factor generator.
    Vec<Int> factor_generator(std::size_t i) const { return U_inv_.column(factor_index_[i]); }

    bool is_zero(const Vec<Int>& x) const {
        Vec<Int> y = apply(ctx_, U_, x);
        for (std::size_t t = 0; t < rank(); ++t)
            if (y[t] != 0 && ctx_.valuation(y[t]) < diag_val_[t]) return false;
        return true;
    }

    bool equal(const Vec<Int>& a, const Vec<Int>& b) const {
        Vec<Int> d(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) d[i] = ctx_.sub(a[i], b[i]);
        return is_zero(d);
    }

    /// log_p of the order of x in M_n.
    int order_exp(const Vec<Int>& x) const {
        Vec<Int> y = apply(ctx_, U_, x);
        int o = 0;
        for (std::size_t t = 0; t < rank(); ++t) {
            int v = y[t] == 0 ? ctx_.precision() : ctx_.valuation(y[t]);
            o = std::max(o, diag_val_[t] - v);
        }
        return o;
    }

    /// Whether every column of m is zero in M_n.
    bool kills(const Matrix<Int>& m) const {
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!is_zero(m.column(j))) return false;
        return true;
    }

    Vec<Int> random_element(Rng& rng) const {
        Vec<Int> g;
        for (std::size_t t : factor_index_) g.push_back(rng.residue_below<Int>(factor_modulus(t)));
        return from_group_coords(g);
    }

    /// Every element, in group-coordinate lexicographic order. Only sensible for tiny groups.
    std::vector<Vec<Int>> enumerate() const {
        std::vector<Vec<Int>> out;
        Vec<Int> g(factor_index_.size(), Int(0));
        for (;;) {
            out.push_back(from_group_coords(g));
            std::size_t i = 0;
            for (; i < g.size(); ++i) {
                g[i] += 1;
                if (g[i] < factor_modulus(factor_index_[i])) break;
                g[i] = 0;
            }
            if (i == g.size()) break;
        }
        return out;
    }

private:
    Int factor_modulus(std::size_t t) const {
        return diag_val_[t] >= ctx_.precision() ? ctx_.modulus() : ctx_.p_power(diag_val_[t]);
    }

    PadicContext<Int> ctx_;
    TowerParams params_;
    int level_;
    std::vector<Block<Int>> blocks_;
    Matrix<Int> relations_;
    Matrix<Int> t_action_;
    Matrix<Int> U_, U_inv_;
    std::vector<int> diag_val_;
    std::vector<std::size_t> factor_index_;
    std::vector<int> invariant_exps_;
    int size_exp_ = 0;
    bool unresolved_ = false;
};

template <ResidueInt Int>
using LevelPtr = std::shared_ptr<const FiniteLevel<Int>>;

template <ResidueInt Int>
LevelPtr<Int> finite_level(const ElementaryModule<Int>& M, int n) {
    if (n < 0) throw BadLevels("level must be non-negative");
    const auto& ctx = M.context();
    const LambdaPoly<Int> w = omega(ctx, n, M.params());
    std::vector<Block<Int>> blocks;
    std::size_t offset = 0;
    for (std::size_t i = 0; i < M.poly_summands().size(); ++i) {
        const auto& s = M.poly_summands()[i];
        LambdaPoly<Int> g = poly_pow(s.f, static_cast<unsigned>(s.e));
        std::size_t width = static_cast<std::size_t>(g.degree());
        blocks.push_back({Block<Int>::Kind::Poly, i, offset, width, std::move(g), 0});
        offset += width;
    }
    for (std::size_t i = 0; i < M.mu_summands().size(); ++i) {
        std::size_t width = static_cast<std::size_t>(w.degree());
        blocks.push_back({Block<Int>::Kind::Mu, i, offset, width, w, M.mu_summands()[i].m});
        offset += width;
    }
    const std::size_t r = offset;
    Matrix<Int> rel(r, r), t_act(r, r);
    const LambdaPoly<Int> T = LambdaPoly<Int>::T(ctx);
    for (const auto& b : blocks) {
        detail::place(t_act, b.offset, b.offset, detail::multiplication_columns(ctx, T, b.modulus, b.width));
        if (b.kind == Block<Int>::Kind::Poly) {
            detail::place(rel, b.offset, b.offset, detail::multiplication_columns(ctx, w, b.modulus, b.width));
        } else {
            const Int pm = ctx.p_power(b.mu_exp);
            for (std::size_t j = 0; j < b.width; ++j) rel(b.offset + j, b.offset + j) = pm;
        }
    }
    return std::make_shared<const FiniteLevel<Int>>(ctx, M.params(), n, std::move(blocks), std::move(rel),
                                                    std::move(t_act));
}

/// Matrix of multiplication by h on the lattice of a level (h(t_action), computed blockwise).
template <ResidueInt Int>
Matrix<Int> multiplication_matrix(const FiniteLevel<Int>& L, const LambdaPoly<Int>& h) {
    Matrix<Int> mat(L.rank(), L.rank());
    for (const auto& b : L.blocks())
        detail::place(mat, b.offset, b.offset, detail::multiplication_columns(L.context(), h, b.modulus, b.width));
    return mat;
}

/// Matrix of multiplication by h^e, reducing modulo each block's modulus as it goes.
template <ResidueInt Int>
Matrix<Int> power_multiplication_matrix(const FiniteLevel<Int>& L, const LambdaPoly<Int>& h, unsigned e) {
    Matrix<Int> mat(L.rank(), L.rank());
    for (const auto& b : L.blocks()) {
        LambdaPoly<Int> acc = LambdaPoly<Int>::one(L.context());
        const LambdaPoly<Int> base = poly_mod(h, b.modulus);
        for (unsigned i = 0; i < e; ++i) acc = poly_mod(acc * base, b.modulus);
        detail::place(mat, b.offset, b.offset, detail::multiplication_columns(L.context(), acc, b.modulus, b.width));
    }
    return mat;
}

template <ResidueInt Int>
struct LevelMap {
    enum class Kind { Norm, Lift };
    Kind kind;
    int from_level;
    int to_level;
    Matrix<Int> matrix;
};

/// N_{m,n}: M_m -> M_n, reduction mod omega_n.
template <ResidueInt Int>
LevelMap<Int> norm_map(const FiniteLevel<Int>& Mm, const FiniteLevel<Int>& Mn) {
    if (Mm.level() <= Mn.level()) throw BadLevels("norm map needs m > n");
    const auto& ctx = Mm.context();
    Matrix<Int> mat(Mn.rank(), Mm.rank());
    const LambdaPoly<Int> one = LambdaPoly<Int>::one(ctx);
    for (std::size_t i = 0; i < Mm.blocks().size(); ++i) {
        const auto& bm = Mm.blocks()[i];
        const auto& bn = Mn.blocks()[i];
        detail::place(mat, bn.offset, bm.offset, detail::multiplication_columns(ctx, one, bn.modulus, bm.width));
    }
    return {LevelMap<Int>::Kind::Norm, Mm.level(), Mn.level(), std::move(mat)};
}

/// iota_{n,m}: M_n -> M_m, multiplication by nu_{m,n}.
template <ResidueInt Int>
LevelMap<Int> lift_map(const FiniteLevel<Int>& Mn, const FiniteLevel<Int>& Mm) {
    if (Mm.level() <= Mn.level()) throw BadLevels("lift map needs m > n");
    const auto& ctx = Mn.context();
    const LambdaPoly<Int> v = nu(ctx, Mm.level(), Mn.level(), Mn.params());
    Matrix<Int> mat(Mm.rank(), Mn.rank());
    for (std::size_t i = 0; i < Mn.blocks().size(); ++i) {
        const auto& bn = Mn.blocks()[i];
        const auto& bm = Mm.blocks()[i];
        detail::place(mat, bm.offset, bn.offset, detail::multiplication_columns(ctx, v, bm.modulus, bn.width));
    }
    return {LevelMap<Int>::Kind::Lift, Mn.level(), Mm.level(), std::move(mat)};
}

/// A subgroup of M_n given by lattice generators (columns). The same columns
/// also span a Z_p-sublattice of L; the lattice_* operations refer to that.
template <ResidueInt Int>
class Subgroup {
public:
    Subgroup(LevelPtr<Int> ambient, Matrix<Int> generators) : ambient_(std::move(ambient)), gens_(std::move(generators)) {
        if (gens_.rows() != ambient_->rank()) throw Error("subgroup generators have the wrong dimension");
    }

    static Subgroup whole(LevelPtr<Int> ambient) {
        auto r = ambient->rank();
        return Subgroup(std::move(ambient), Matrix<Int>::identity(r));
    }
    static Subgroup trivial(LevelPtr<Int> ambient) {
        auto r = ambient->rank();
        return Subgroup(std::move(ambient), Matrix<Int>(r, 0));
    }
    /// p^c times the whole lattice.
    static Subgroup p_power_multiple(LevelPtr<Int> ambient, int c) {
        const auto& ctx = ambient->context();
        auto r = ambient->rank();
        return Subgroup(std::move(ambient), mat_scale(ctx, Matrix<Int>::identity(r), ctx.p_power(c)));
    }

    const LevelPtr<Int>& ambient() const { return ambient_; }
    const FiniteLevel<Int>& level() const { return *ambient_; }
    const Matrix<Int>& generators() const { return gens_; }

    /// log_p of the order of the image in M_n.
    int size_exp() const {
        const auto& ctx = ambient_->context();
        if (gens_.cols() == 0) return 0;
        return span_log_size(ctx, hcat(gens_, ambient_->relation_matrix())) -
               span_log_size(ctx, ambient_->relation_matrix());
    }
    bool is_trivial() const { return ambient_->kills(gens_); }

    bool contains(const Vec<Int>& x) const {
        return solve(ambient_->context(), hcat(gens_, ambient_->relation_matrix()), x).has_value();
    }
    bool contains(const Subgroup& other) const {
        for (std::size_t j = 0; j < other.gens_.cols(); ++j)
            if (!contains(other.gens_.column(j))) return false;
        return true;
    }
    /// Equality of images in M_n.
    bool equals(const Subgroup& other) const { return contains(other) && other.contains(*this); }

    /// Exponents of the invariant factors of the image in M_n, descending.
    std::vector<int> invariant_exponents() const {
        const auto& ctx = ambient_->context();
        const std::size_t g = gens_.cols();
        if (g == 0) return {};
        // relations among the generators: the first g coordinates of ker [S | R]
        Matrix<Int> k = kernel(ctx, hcat(gens_, ambient_->relation_matrix()));
        Matrix<Int> rel(g, k.cols());
        for (std::size_t j = 0; j < k.cols(); ++j)
            for (std::size_t i = 0; i < g; ++i) rel(i, j) = k(i, j);
        auto s = smith_form(ctx, rel, {.left = false, .right = false});
        std::vector<int> out;
        for (std::size_t t = 0; t < g; ++t) {
            int v = t < s.diag_val.size() ? s.diag_val[t] : ctx.precision();
            if (v > 0) out.push_back(v);
        }
        std::sort(out.rbegin(), out.rend());
        return out;
    }
    int p_rank() const { return static_cast<int>(invariant_exponents().size()); }

    /// Intersection of images in M_n.
    Subgroup intersect(const Subgroup& other) const {
        const auto& ctx = ambient_->context();
        const std::size_t a = gens_.cols(), b = other.gens_.cols();
        Matrix<Int> neg_b = mat_scale(ctx, other.gens_, ctx.neg(ctx.one()));
        Matrix<Int> k = kernel(ctx, hcat(hcat(gens_, neg_b), ambient_->relation_matrix()));
        Matrix<Int> coeffs(a, k.cols());
        for (std::size_t j = 0; j < k.cols(); ++j)
            for (std::size_t i = 0; i < a; ++i) coeffs(i, j) = k(i, j);
        (void)b;
        return Subgroup(ambient_, mat_mul(ctx, gens_, coeffs));
    }

    /// Image under a matrix acting on the same lattice.
    Subgroup transformed(const Matrix<Int>& m) const { return Subgroup(ambient_, mat_mul(ambient_->context(), m, gens_)); }

    /// Image under a map into another level, given by its lattice matrix.
    Subgroup mapped(LevelPtr<Int> to, const Matrix<Int>& m) const {
        auto prod = mat_mul(ambient_->context(), m, gens_);
        return Subgroup(std::move(to), std::move(prod));
    }

    Subgroup sum(const Subgroup& other) const { return Subgroup(ambient_, hcat(gens_, other.gens_)); }

    /// Same lattice generators viewed inside another level with the same lattice.
    Subgroup at_level(LevelPtr<Int> other) const {
        if (other->rank() != ambient_->rank()) throw BadLevels("levels do not share a lattice");
        return Subgroup(std::move(other), gens_);
    }

    bool lattice_contains(const Vec<Int>& x) const { return solve(ambient_->context(), gens_, x).has_value(); }
    bool lattice_contains(const Subgroup& other) const {
        for (std::size_t j = 0; j < other.gens_.cols(); ++j)
            if (!lattice_contains(other.gens_.column(j))) return false;
        return true;
    }
    bool lattice_equals(const Subgroup& other) const { return lattice_contains(other) && other.lattice_contains(*this); }
    int lattice_rank() const {
        auto s = smith_form(ambient_->context(), gens_, {.left = false, .right = false});
        return static_cast<int>(std::count_if(s.diag_val.begin(), s.diag_val.end(),
                                              [&](int v) { return v < ambient_->context().precision(); }));
    }
    bool is_t_stable() const { return lattice_contains(transformed(ambient_->t_action())); }

    /// Image of the i-th generator in group coordinates, for witness printing.
    Vec<Int> generator(std::size_t j) const { return gens_.column(j); }

private:
    LevelPtr<Int> ambient_;
    Matrix<Int> gens_;
};

}  // namespace iwalab
