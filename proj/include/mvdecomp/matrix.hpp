#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "field.hpp"

namespace mvd {

template <class K>
using Vec = std::vector<K>;

/// Dense row-major matrix over the field K.
template <class K>
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), d_(rows * cols, field_traits<K>::from_int(0)) {}

    Matrix(std::size_t rows, std::size_t cols, std::vector<K> entries)
        : rows_(rows), cols_(cols), d_(std::move(entries)) {
        if (d_.size() != rows_ * cols_)
            throw DimensionMismatch("matrix entry count does not match shape");
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = field_traits<K>::from_int(1);
        return m;
    }

    /// Builds a matrix from integer rows, e.g. from_rows({{1,2},{3,4}}).
    static Matrix from_rows(std::initializer_list<std::initializer_list<long>> rows) {
        const std::size_t r = rows.size();
        const std::size_t c = r == 0 ? 0 : rows.begin()->size();
        Matrix m(r, c);
        std::size_t i = 0;
        for (const auto& row : rows) {
            if (row.size() != c) throw DimensionMismatch("ragged row list");
            std::size_t j = 0;
            for (long v : row) m(i, j++) = field_traits<K>::from_int(v);
            ++i;
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    K& operator()(std::size_t i, std::size_t j) { return d_[i * cols_ + j]; }
    const K& operator()(std::size_t i, std::size_t j) const { return d_[i * cols_ + j]; }

    const std::vector<K>& entries() const { return d_; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && d_ == o.d_;
    }

    bool is_zero() const {
        for (const auto& x : d_)
            if (!field_traits<K>::is_zero(x)) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
        return t;
    }

    Matrix operator+(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < d_.size(); ++i) r.d_[i] = r.d_[i] + o.d_[i];
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        check_same_shape(o);
        Matrix r = *this;
        for (std::size_t i = 0; i < d_.size(); ++i) r.d_[i] = r.d_[i] - o.d_[i];
        return r;
    }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw SizeMismatch("matrix product shape");
        Matrix r(rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t k = 0; k < cols_; ++k) {
                const K& a = (*this)(i, k);
                if (field_traits<K>::is_zero(a)) continue;
                for (std::size_t j = 0; j < o.cols_; ++j)
                    r(i, j) = r(i, j) + a * o(k, j);
            }
        return r;
    }

    Matrix scaled(const K& s) const {
        Matrix r = *this;
        for (auto& x : r.d_) x = x * s;
        return r;
    }

    Vec<K> operator*(const Vec<K>& v) const {
        if (cols_ != v.size()) throw SizeMismatch("matrix-vector product shape");
        Vec<K> r(rows_, field_traits<K>::from_int(0));
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r[i] = r[i] + (*this)(i, j) * v[j];
        return r;
    }

    Vec<K> row(std::size_t i) const {
        Vec<K> r(cols_);
        for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
        return r;
    }

    Vec<K> col(std::size_t j) const {
        Vec<K> c(rows_);
        for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
        return c;
    }

    Matrix submatrix(const std::vector<std::size_t>& row_idx,
                     const std::vector<std::size_t>& col_idx) const {
        Matrix s(row_idx.size(), col_idx.size());
        for (std::size_t i = 0; i < row_idx.size(); ++i)
            for (std::size_t j = 0; j < col_idx.size(); ++j)
                s(i, j) = (*this)(row_idx[i], col_idx[j]);
        return s;
    }

    /// Rows [r0, r1) as a block.
    Matrix row_block(std::size_t r0, std::size_t r1) const {
        Matrix b(r1 - r0, cols_);
        for (std::size_t i = r0; i < r1; ++i)
            for (std::size_t j = 0; j < cols_; ++j) b(i - r0, j) = (*this)(i, j);
        return b;
    }

    static Matrix hcat(const std::vector<Matrix>& parts) {
        if (parts.empty()) return Matrix();
        std::size_t cols = 0;
        for (const auto& m : parts) {
            if (m.rows() != parts.front().rows())
                throw SizeMismatch("hcat row counts differ");
            cols += m.cols();
        }
        Matrix r(parts.front().rows(), cols);
        std::size_t off = 0;
        for (const auto& m : parts) {
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) r(i, off + j) = m(i, j);
            off += m.cols();
        }
        return r;
    }

    static Matrix vcat(const Matrix& top, const Matrix& bottom) {
        if (top.cols() != bottom.cols()) throw SizeMismatch("vcat column counts differ");
        Matrix r(top.rows() + bottom.rows(), top.cols());
        for (std::size_t i = 0; i < top.rows(); ++i)
            for (std::size_t j = 0; j < top.cols(); ++j) r(i, j) = top(i, j);
        for (std::size_t i = 0; i < bottom.rows(); ++i)
            for (std::size_t j = 0; j < bottom.cols(); ++j) r(top.rows() + i, j) = bottom(i, j);
        return r;
    }

private:
    void check_same_shape(const Matrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw SizeMismatch("matrix shapes differ");
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<K> d_;
};

/// Linear subspace of K^ambient given by a basis matrix whose columns are
/// linearly independent spanning vectors.
template <class K>
struct Subspace {
    std::size_t ambient = 0;
    Matrix<K> basis; // ambient x dim

    std::size_t dim() const { return basis.cols(); }
};

template <class K>
Matrix<K> outer_product(const Vec<K>& u, const Vec<K>& v) {
    Matrix<K> m(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = u[i] * v[j];
    return m;
}

template <class K>
bool is_zero_vector(const Vec<K>& v) {
    for (const auto& x : v)
        if (!field_traits<K>::is_zero(x)) return false;
    return true;
}

/// True when u and v span the same line (or either is zero).
template <class K>
bool colinear(const Vec<K>& u, const Vec<K>& v, double tol = 1e-9) {
    if (u.size() != v.size()) throw SizeMismatch("colinearity of different lengths");
    if (is_zero_vector(u) || is_zero_vector(v)) return true;
    if constexpr (is_exact_v<K>) {
        for (std::size_t i = 0; i < u.size(); ++i)
            for (std::size_t j = i + 1; j < u.size(); ++j)
                if (!field_traits<K>::is_zero(u[i] * v[j] - u[j] * v[i])) return false;
        return true;
    } else {
        double nu = 0, nv = 0, dot = 0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            nu += field_traits<K>::to_double(u[i]) * field_traits<K>::to_double(u[i]);
            nv += field_traits<K>::to_double(v[i]) * field_traits<K>::to_double(v[i]);
            dot += field_traits<K>::to_double(u[i]) * field_traits<K>::to_double(v[i]);
        }
        return dot * dot >= (1.0 - tol) * nu * nv;
    }
}

template <class K>
K dot(const Vec<K>& a, const Vec<K>& b) {
    if (a.size() != b.size()) throw SizeMismatch("dot product lengths differ");
    K s = field_traits<K>::from_int(0);
    for (std::size_t i = 0; i < a.size(); ++i) s = s + a[i] * b[i];
    return s;
}

} // namespace mvd
