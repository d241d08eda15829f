#pragma once

// Dense matrices over Z/p^N and the Smith normal form over that local ring.
//
// Z/p^N is a chain ring, so every matrix is equivalent to a diagonal matrix
// with entries p^{v_1}, p^{v_2}, ... (v_i = N meaning zero). The transforms
// are kept so kernels, spans and saturations can be read off in the original
// coordinates.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <vector>

#include "iwalab/padic.hpp"

namespace iwalab {

template <ResidueInt Int>
using Vec = std::vector<Int>;

template <ResidueInt Int>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Int(0)) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
        return m;
    }

    static Matrix from_columns(std::size_t rows, const std::vector<Vec<Int>>& cols) {
        Matrix m(rows, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Int& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec<Int> column(std::size_t j) const {
        Vec<Int> v(rows_);
        for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
        return v;
    }

    void set_column(std::size_t j, const Vec<Int>& v) {
        for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v[i];
    }

    std::vector<Vec<Int>> columns() const {
        std::vector<Vec<Int>> out;
        out.reserve(cols_);
        for (std::size_t j = 0; j < cols_; ++j) out.push_back(column(j));
        return out;
    }

    void swap_rows(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
    }

    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Int> data_;
};

/// Horizontal concatenation [a | b].
template <ResidueInt Int>
Matrix<Int> hcat(const Matrix<Int>& a, const Matrix<Int>& b) {
    std::size_t rows = a.cols() ? a.rows() : b.rows();
    Matrix<Int> m(rows, a.cols() + b.cols());
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
        for (std::size_t j = 0; j < b.cols(); ++j) m(i, a.cols() + j) = b(i, j);
    }
    return m;
}

template <ResidueInt Int>
Matrix<Int> mat_mul(const PadicContext<Int>& ctx, const Matrix<Int>& a, const Matrix<Int>& b) {
    Matrix<Int> c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Int& aik = a(i, k);
            if (aik == 0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = ctx.add(c(i, j), ctx.mul(aik, b(k, j)));
        }
    return c;
}

template <ResidueInt Int>
Matrix<Int> mat_add(const PadicContext<Int>& ctx, const Matrix<Int>& a, const Matrix<Int>& b) {
    Matrix<Int> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = ctx.add(a(i, j), b(i, j));
    return c;
}

template <ResidueInt Int>
Matrix<Int> mat_sub(const PadicContext<Int>& ctx, const Matrix<Int>& a, const Matrix<Int>& b) {
    Matrix<Int> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = ctx.sub(a(i, j), b(i, j));
    return c;
}

template <ResidueInt Int>
Matrix<Int> mat_scale(const PadicContext<Int>& ctx, const Matrix<Int>& a, const Int& s) {
    Matrix<Int> c(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = ctx.mul(a(i, j), s);
    return c;
}

template <ResidueInt Int>
Matrix<Int> transpose(const Matrix<Int>& a) {
    Matrix<Int> t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

template <ResidueInt Int>
Vec<Int> apply(const PadicContext<Int>& ctx, const Matrix<Int>& a, const Vec<Int>& v) {
    Vec<Int> out(a.rows(), Int(0));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (v[j] != 0) out[i] = ctx.add(out[i], ctx.mul(a(i, j), v[j]));
    return out;
}

template <ResidueInt Int>
Vec<Int> vec_add(const PadicContext<Int>& ctx, const Vec<Int>& a, const Vec<Int>& b) {
    Vec<Int> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = ctx.add(a[i], b[i]);
    return out;
}

template <ResidueInt Int>
Vec<Int> vec_scale(const PadicContext<Int>& ctx, const Vec<Int>& a, const Int& s) {
    Vec<Int> out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = ctx.mul(a[i], s);
    return out;
}

template <ResidueInt Int>
bool is_zero(const Vec<Int>& v) {
    return std::all_of(v.begin(), v.end(), [](const Int& x) { return x == 0; });
}

/// U * M * V = D with D diagonal, diagonal entries p^{diag_val[t]}.
template <ResidueInt Int>
struct SmithForm {
    Matrix<Int> diagonal;
    Matrix<Int> U, U_inv, V;
    /// One valuation per t < min(rows, cols); N encodes a zero entry.
    std::vector<int> diag_val;
};

struct SmithOptions {
    bool left = true;   // track U and U^{-1}
    bool right = true;  // track V
};

template <ResidueInt Int>
SmithForm<Int> smith_form(const PadicContext<Int>& ctx, Matrix<Int> m, SmithOptions opts = {}) {
    const std::size_t r = m.rows(), c = m.cols();
    const int N = ctx.precision();
    SmithForm<Int> out;
    if (opts.left) {
        out.U = Matrix<Int>::identity(r);
        out.U_inv = Matrix<Int>::identity(r);
    }
    if (opts.right) out.V = Matrix<Int>::identity(c);
    const std::size_t steps = std::min(r, c);
    out.diag_val.assign(steps, N);

    for (std::size_t t = 0; t < steps; ++t) {
        int best = N;
        std::size_t bi = t, bj = t;
        for (std::size_t i = t; i < r && best > 0; ++i)
            for (std::size_t j = t; j < c; ++j) {
                if (m(i, j) == 0) continue;
                int v = ctx.valuation(m(i, j));
                if (v < best) {
                    best = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        if (best == N) break;

        m.swap_rows(t, bi);
        if (opts.left) {
            out.U.swap_rows(t, bi);
            out.U_inv.swap_cols(t, bi);
        }
        m.swap_cols(t, bj);
        if (opts.right) out.V.swap_cols(t, bj);

        // normalise the pivot to exactly p^best
        const Int unit = ctx.div_p_power(m(t, t), best);
        const Int unit_inv = ctx.inverse(unit);
        for (std::size_t j = t; j < c; ++j) m(t, j) = ctx.mul(m(t, j), unit_inv);
        if (opts.left) {
            for (std::size_t j = 0; j < r; ++j) out.U(t, j) = ctx.mul(out.U(t, j), unit_inv);
            for (std::size_t i = 0; i < r; ++i) out.U_inv(i, t) = ctx.mul(out.U_inv(i, t), unit);
        }

        for (std::size_t i = t + 1; i < r; ++i) {
            if (m(i, t) == 0) continue;
            const Int f = ctx.div_p_power(m(i, t), best);
            for (std::size_t j = t; j < c; ++j) m(i, j) = ctx.sub(m(i, j), ctx.mul(f, m(t, j)));
            if (opts.left) {
                for (std::size_t j = 0; j < r; ++j) out.U(i, j) = ctx.sub(out.U(i, j), ctx.mul(f, out.U(t, j)));
                for (std::size_t k = 0; k < r; ++k)
                    out.U_inv(k, t) = ctx.add(out.U_inv(k, t), ctx.mul(f, out.U_inv(k, i)));
            }
        }
        for (std::size_t j = t + 1; j < c; ++j) {
            if (m(t, j) == 0) continue;
            const Int f = ctx.div_p_power(m(t, j), best);
            m(t, j) = 0;
            if (opts.right)
                for (std::size_t k = 0; k < c; ++k) out.V(k, j) = ctx.sub(out.V(k, j), ctx.mul(f, out.V(k, t)));
        }
        out.diag_val[t] = best;
    }
    out.diagonal = std::move(m);
    return out;
}

/// log_p of the order of the column span of m inside (Z/p^N)^rows.
template <ResidueInt Int>
int span_log_size(const PadicContext<Int>& ctx, const Matrix<Int>& m) {
    if (m.cols() == 0 || m.rows() == 0) return 0;
    auto s = smith_form(ctx, m, {.left = false, .right = false});
    int total = 0;
    for (int v : s.diag_val) total += ctx.precision() - v;
    return total;
}

/// Generators (as columns) of { z : m z = 0 } in (Z/p^N)^cols.
template <ResidueInt Int>
Matrix<Int> kernel(const PadicContext<Int>& ctx, const Matrix<Int>& m) {
    const int N = ctx.precision();
    auto s = smith_form(ctx, m, {.left = false, .right = true});
    std::vector<Vec<Int>> gens;
    for (std::size_t t = 0; t < m.cols(); ++t) {
        int v = t < s.diag_val.size() ? s.diag_val[t] : N;
        if (v == 0) continue;
        Vec<Int> col = s.V.column(t);
        if (v < N) col = vec_scale(ctx, col, ctx.p_power(N - v));
        if (!is_zero(col)) gens.push_back(std::move(col));
    }
    return Matrix<Int>::from_columns(m.cols(), gens);
}

/// Generators of { z : m z = 0 } that survive over Z_p: only the directions
/// whose diagonal entry vanishes identically. The p^{N-v}-multiples of the
/// other directions are artefacts of truncation and are dropped.
template <ResidueInt Int>
struct ExactKernel {
    Matrix<Int> generators;
    /// Sum of the valuations of the nonzero diagonal entries (index of the image in its saturation).
    int cokernel_torsion = 0;
    int max_valuation = 0;
};

template <ResidueInt Int>
ExactKernel<Int> exact_kernel(const PadicContext<Int>& ctx, const Matrix<Int>& m) {
    const int N = ctx.precision();
    auto s = smith_form(ctx, m, {.left = false, .right = true});
    ExactKernel<Int> out;
    std::vector<Vec<Int>> gens;
    for (std::size_t t = 0; t < m.cols(); ++t) {
        int v = t < s.diag_val.size() ? s.diag_val[t] : N;
        if (v == N) {
            gens.push_back(s.V.column(t));
        } else {
            out.cokernel_torsion += v;
            out.max_valuation = std::max(out.max_valuation, v);
        }
    }
    out.generators = Matrix<Int>::from_columns(m.cols(), gens);
    return out;
}

/// At most rows() columns spanning the same submodule as the columns of m.
template <ResidueInt Int>
Matrix<Int> span_basis(const PadicContext<Int>& ctx, const Matrix<Int>& m) {
    if (m.cols() == 0) return Matrix<Int>(m.rows(), 0);
    auto s = smith_form(ctx, m, {.left = true, .right = false});
    std::vector<Vec<Int>> gens;
    for (std::size_t t = 0; t < s.diag_val.size(); ++t)
        if (s.diag_val[t] < ctx.precision()) gens.push_back(vec_scale(ctx, s.U_inv.column(t), ctx.p_power(s.diag_val[t])));
    return Matrix<Int>::from_columns(m.rows(), gens);
}

/// Basis of the saturation { x : p^j x in span(m) } of the column span, as columns.
template <ResidueInt Int>
Matrix<Int> saturated_span(const PadicContext<Int>& ctx, const Matrix<Int>& m) {
    if (m.cols() == 0) return Matrix<Int>(m.rows(), 0);
    auto s = smith_form(ctx, m, {.left = true, .right = false});
    std::vector<Vec<Int>> gens;
    for (std::size_t t = 0; t < s.diag_val.size(); ++t)
        if (s.diag_val[t] < ctx.precision()) gens.push_back(s.U_inv.column(t));
    return Matrix<Int>::from_columns(m.rows(), gens);
}

/// Some z with m z = b, if one exists.
template <ResidueInt Int>
std::optional<Vec<Int>> solve(const PadicContext<Int>& ctx, const Matrix<Int>& m, const Vec<Int>& b) {
    const int N = ctx.precision();
    if (m.cols() == 0) {
        if (is_zero(b)) return Vec<Int>{};
        return std::nullopt;
    }
    auto s = smith_form(ctx, m, {.left = true, .right = true});
    Vec<Int> ub = apply(ctx, s.U, b);
    Vec<Int> w(m.cols(), Int(0));
    for (std::size_t t = 0; t < m.rows(); ++t) {
        int v = t < s.diag_val.size() ? s.diag_val[t] : N;
        if (ub[t] == 0) continue;
        if (ctx.valuation(ub[t]) < v) return std::nullopt;
        if (t < m.cols()) w[t] = ctx.div_p_power(ub[t], v);
    }
    return apply(ctx, s.V, w);
}

/// Inverse of a square matrix that is invertible over Z/p^N (Gauss-Jordan with unit pivots).
template <ResidueInt Int>
Matrix<Int> inverse_matrix(const PadicContext<Int>& ctx, Matrix<Int> m) {
    const std::size_t n = m.rows();
    Matrix<Int> inv = Matrix<Int>::identity(n);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = n;
        for (std::size_t i = c; i < n; ++i)
            if (ctx.is_unit(m(i, c))) {
                piv = i;
                break;
            }
        if (piv == n) throw NotAUnit("matrix is not invertible over Z/p^N");
        m.swap_rows(c, piv);
        inv.swap_rows(c, piv);
        const Int s = ctx.inverse(m(c, c));
        for (std::size_t j = 0; j < n; ++j) {
            m(c, j) = ctx.mul(m(c, j), s);
            inv(c, j) = ctx.mul(inv(c, j), s);
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || m(i, c) == 0) continue;
            const Int f = m(i, c);
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = ctx.sub(m(i, j), ctx.mul(f, m(c, j)));
                inv(i, j) = ctx.sub(inv(i, j), ctx.mul(f, inv(c, j)));
            }
        }
    }
    return inv;
}

}  // namespace iwalab
