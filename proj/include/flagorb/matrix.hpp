#pragma once

#include "flagorb/field.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flagorb {

// Dense row-major matrix over a field policy F.
template <class F>
class Matrix {
public:
    using field_type = F;
    using value_type = typename F::value_type;

    Matrix() = default;
    Matrix(F field, std::size_t rows, std::size_t cols)
        : field_(field), rows_(rows), cols_(cols), data_(rows * cols, field.zero()) {}

    static Matrix identity(F field, std::size_t n) {
        Matrix m(field, n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field.one();
        return m;
    }

    // Row-major integer entries.
    static Matrix from_ints(F field, std::size_t rows, std::size_t cols, const std::vector<long>& v) {
        if (v.size() != rows * cols) throw std::invalid_argument("entry count does not match shape");
        Matrix m(field, rows, cols);
        for (std::size_t k = 0; k < v.size(); ++k) m.data_[k] = field.from_int(v[k]);
        return m;
    }

    static Matrix from_rows(F field, const std::vector<std::vector<long>>& rows) {
        std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
        Matrix m(field, r, c);
        for (std::size_t i = 0; i < r; ++i) {
            if (rows[i].size() != c) throw std::invalid_argument("ragged rows");
            for (std::size_t j = 0; j < c; ++j) m(i, j) = field.from_int(rows[i][j]);
        }
        return m;
    }

    const F& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    value_type& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const value_type& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<value_type>& data() const { return data_; }

    bool operator==(const Matrix& o) const {
        return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator*(const Matrix& o) const {
        check_field(o);
        if (cols_ != o.rows_) throw std::invalid_argument("size mismatch in product");
        Matrix r(field_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const value_type& a = (*this)(i, k);
                if (field_.is_zero(a)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) = field_.add(r(i, j), field_.mul(a, o(k, j)));
            }
        return r;
    }

    Matrix operator+(const Matrix& o) const {
        check_field(o);
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("size mismatch in sum");
        Matrix r = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = field_.add(data_[k], o.data_[k]);
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        check_field(o);
        if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("size mismatch in difference");
        Matrix r = *this;
        for (std::size_t k = 0; k < data_.size(); ++k) r.data_[k] = field_.sub(data_[k], o.data_[k]);
        return r;
    }

    Matrix transpose() const {
        Matrix r(field_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
        return r;
    }

    Matrix select_rows(const std::vector<std::size_t>& idx) const {
        Matrix r(field_, idx.size(), cols_);
        for (std::size_t a = 0; a < idx.size(); ++a) {
            if (idx[a] >= rows_) throw std::out_of_range("row index");
            for (std::size_t j = 0; j < cols_; ++j) r(a, j) = (*this)(idx[a], j);
        }
        return r;
    }

    Matrix select_cols(const std::vector<std::size_t>& idx) const {
        Matrix r(field_, rows_, idx.size());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t b = 0; b < idx.size(); ++b) {
                if (idx[b] >= cols_) throw std::out_of_range("column index");
                r(i, b) = (*this)(i, idx[b]);
            }
        return r;
    }

    Matrix left_cols(std::size_t k) const {
        if (k > cols_) throw std::out_of_range("column count");
        Matrix r(field_, rows_, k);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < k; ++j) r(i, j) = (*this)(i, j);
        return r;
    }

    Matrix column(std::size_t j) const { return select_cols({j}); }

    Matrix hconcat(const Matrix& o) const {
        check_field(o);
        if (rows_ != o.rows_) throw std::invalid_argument("row mismatch in concatenation");
        Matrix r(field_, rows_, cols_ + o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) r(i, j) = (*this)(i, j);
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, cols_ + j) = o(i, j);
        }
        return r;
    }

    bool is_zero() const {
        for (const auto& v : data_)
            if (!field_.is_zero(v)) return false;
        return true;
    }

    void swap_cols(std::size_t a, std::size_t b) {
        if (a == b) return;
        for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
    }

    std::string to_string() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << field_.to_string((*this)(i, j));
            os << '\n';
        }
        return os.str();
    }

private:
    void check_field(const Matrix& o) const {
        if (field_ != o.field_) throw std::invalid_argument("mixed-field arithmetic");
    }

    F field_{};
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<value_type> data_;
};

using QMatrix = Matrix<Rational>;
using FpMatrix = Matrix<PrimeField>;

// Row-reduce a copy and count pivots.
template <class F>
std::size_t rank(const Matrix<F>& m) {
    const F& K = m.field();
    Matrix<F> a = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t piv = r;
        while (piv < a.rows() && K.is_zero(a(piv, c))) ++piv;
        if (piv == a.rows()) continue;
        if (piv != r)
            for (std::size_t j = c; j < a.cols(); ++j) std::swap(a(piv, j), a(r, j));
        auto inv = K.inv(a(r, c));
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            if (K.is_zero(a(i, c))) continue;
            auto f = K.mul(a(i, c), inv);
            for (std::size_t j = c; j < a.cols(); ++j) a(i, j) = K.sub(a(i, j), K.mul(f, a(r, j)));
        }
        ++r;
    }
    return r;
}

// Column-reduce columns [c0, c1) of m in place against the already fixed
// pivots `prior` (pairs row, column; each such column is 1 at its row and 0 at
// every other prior pivot row). Pivots are chosen as the first nonzero entry
// scanning rows top to bottom; ties go to the leftmost column. The reduced
// columns are reordered by increasing pivot row and the new pivots appended to
// `prior`. Returns the number of nonzero columns produced.
template <class F>
std::size_t column_reduce_block(Matrix<F>& m, std::size_t c0, std::size_t c1,
                                std::vector<std::pair<std::size_t, std::size_t>>& prior) {
    const F& K = m.field();
    const std::size_t n = m.rows();
    for (std::size_t c = c0; c < c1; ++c)
        for (const auto& [pr, pc] : prior) {
            auto x = m(pr, c);
            if (K.is_zero(x)) continue;
            for (std::size_t i = 0; i < n; ++i) m(i, c) = K.sub(m(i, c), K.mul(x, m(i, pc)));
        }
    std::size_t next = c0;
    while (next < c1) {
        std::size_t best_row = n, best_col = c1;
        for (std::size_t c = next; c < c1; ++c)
            for (std::size_t i = 0; i < std::min(best_row, n); ++i)
                if (!K.is_zero(m(i, c))) {
                    if (i < best_row) best_row = i, best_col = c;
                    break;
                }
        if (best_col == c1) break;
        m.swap_cols(next, best_col);
        auto inv = K.inv(m(best_row, next));
        for (std::size_t i = 0; i < n; ++i) m(i, next) = K.mul(m(i, next), inv);
        for (std::size_t c = c0; c < c1; ++c) {
            if (c == next) continue;
            auto x = m(best_row, c);
            if (K.is_zero(x)) continue;
            for (std::size_t i = best_row; i < n; ++i) m(i, c) = K.sub(m(i, c), K.mul(x, m(i, next)));
        }
        prior.emplace_back(best_row, next);
        ++next;
    }
    return next - c0;
}

// Unique reduced column echelon form: nonzero columns first, ordered by pivot
// row, each pivot 1 and its row zero in every other column.
template <class F>
Matrix<F> reduced_column_echelon(const Matrix<F>& m) {
    Matrix<F> a = m;
    std::vector<std::pair<std::size_t, std::size_t>> piv;
    column_reduce_block(a, 0, a.cols(), piv);
    return a;
}

// Basis of the right null space, one column per free variable.
template <class F>
Matrix<F> kernel_basis(const Matrix<F>& m) {
    const F& K = m.field();
    Matrix<F> a = m;
    std::vector<std::size_t> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t piv = r;
        while (piv < a.rows() && K.is_zero(a(piv, c))) ++piv;
        if (piv == a.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(r, j));
        auto inv = K.inv(a(r, c));
        for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) = K.mul(a(r, j), inv);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || K.is_zero(a(i, c))) continue;
            auto f = a(i, c);
            for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = K.sub(a(i, j), K.mul(f, a(r, j)));
        }
        pivcol.push_back(c);
        ++r;
    }
    std::vector<bool> is_piv(a.cols(), false);
    for (auto c : pivcol) is_piv[c] = true;
    std::vector<std::size_t> freecols;
    for (std::size_t c = 0; c < a.cols(); ++c)
        if (!is_piv[c]) freecols.push_back(c);
    Matrix<F> k(K, a.cols(), freecols.size());
    for (std::size_t t = 0; t < freecols.size(); ++t) {
        std::size_t fc = freecols[t];
        k(fc, t) = K.one();
        for (std::size_t i = 0; i < pivcol.size(); ++i) k(pivcol[i], t) = K.neg(a(i, fc));
    }
    return k;
}

// Nonzero columns of the reduced column echelon form: a canonical basis of the
// column span.
template <class F>
Matrix<F> column_space_basis(const Matrix<F>& m) {
    Matrix<F> a = m;
    std::vector<std::pair<std::size_t, std::size_t>> piv;
    std::size_t r = column_reduce_block(a, 0, a.cols(), piv);
    return a.left_cols(r);
}

// Basis of span(a) ∩ span(b); columns of a and of b are assumed independent.
template <class F>
Matrix<F> subspace_intersection(const Matrix<F>& a, const Matrix<F>& b) {
    if (a.rows() != b.rows()) throw std::invalid_argument("dimension mismatch in intersection");
    const F& K = a.field();
    Matrix<F> negb = b;
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) negb(i, j) = K.neg(b(i, j));
    Matrix<F> ker = kernel_basis(a.hconcat(negb));
    std::vector<std::size_t> top(a.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) top[i] = i;
    Matrix<F> vecs = a * ker.select_rows(top);
    return column_space_basis(vecs);
}

template <class F>
std::optional<Matrix<F>> inverse(const Matrix<F>& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
    const F& K = m.field();
    const std::size_t n = m.rows();
    Matrix<F> a = m.hconcat(Matrix<F>::identity(K, n));
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t piv = c;
        while (piv < n && K.is_zero(a(piv, c))) ++piv;
        if (piv == n) return std::nullopt;
        if (piv != c)
            for (std::size_t j = 0; j < 2 * n; ++j) std::swap(a(piv, j), a(c, j));
        auto inv = K.inv(a(c, c));
        for (std::size_t j = 0; j < 2 * n; ++j) a(c, j) = K.mul(a(c, j), inv);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == c || K.is_zero(a(i, c))) continue;
            auto f = a(i, c);
            for (std::size_t j = 0; j < 2 * n; ++j) a(i, j) = K.sub(a(i, j), K.mul(f, a(c, j)));
        }
    }
    std::vector<std::size_t> right(n);
    for (std::size_t i = 0; i < n; ++i) right[i] = n + i;
    return a.select_cols(right);
}

// Some x with m x = b, if one exists.
template <class F>
std::optional<Matrix<F>> solve(const Matrix<F>& m, const Matrix<F>& b) {
    if (m.rows() != b.rows()) throw std::invalid_argument("size mismatch in solve");
    const F& K = m.field();
    Matrix<F> a = m.hconcat(b);
    const std::size_t nc = m.cols();
    std::vector<std::size_t> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < nc && r < a.rows(); ++c) {
        std::size_t piv = r;
        while (piv < a.rows() && K.is_zero(a(piv, c))) ++piv;
        if (piv == a.rows()) continue;
        if (piv != r)
            for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(piv, j), a(r, j));
        auto inv = K.inv(a(r, c));
        for (std::size_t j = 0; j < a.cols(); ++j) a(r, j) = K.mul(a(r, j), inv);
        for (std::size_t i = 0; i < a.rows(); ++i) {
            if (i == r || K.is_zero(a(i, c))) continue;
            auto f = a(i, c);
            for (std::size_t j = 0; j < a.cols(); ++j) a(i, j) = K.sub(a(i, j), K.mul(f, a(r, j)));
        }
        pivcol.push_back(c);
        ++r;
    }
    for (std::size_t i = r; i < a.rows(); ++i)
        for (std::size_t j = nc; j < a.cols(); ++j)
            if (!K.is_zero(a(i, j))) return std::nullopt;
    Matrix<F> x(K, nc, b.cols());
    for (std::size_t i = 0; i < pivcol.size(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) x(pivcol[i], j) = a(i, nc + j);
    return x;
}

// Reduce a rational matrix modulo p; throws if a denominator vanishes mod p.
FpMatrix reduce_mod(const QMatrix& m, const PrimeField& K);

// Lift a matrix with entries in [0, p) to integers; with `balanced` the
// residue p-1 becomes -1 and so on.
QMatrix lift(const FpMatrix& m, bool balanced = false);

}  // namespace flagorb
