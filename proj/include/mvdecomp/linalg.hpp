#pragma once

#include <cstddef>
#include <numeric>
#include <utility>
#include <vector>

#include "linalg_float.hpp"
#include "matrix.hpp"
#include "poly.hpp"

namespace mvd {

namespace detail {

/// Reduced row echelon form with pivot bookkeeping (exact fields).
/// pivot_rows holds original row indices, one per pivot, in pivot order.
template <class K>
struct Rref {
    Matrix<K> reduced;
    std::vector<std::size_t> pivot_rows;
    std::vector<std::size_t> pivot_cols;
    std::size_t rank = 0;
};

template <class K>
Rref<K> rref(const Matrix<K>& m) {
    static_assert(is_exact_v<K>, "rref is the exact-mode elimination");
    Rref<K> out;
    out.reduced = m;
    Matrix<K>& a = out.reduced;
    std::vector<std::size_t> origin(m.rows());
    std::iota(origin.begin(), origin.end(), 0);

    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t piv = row;
        while (piv < m.rows() && field_traits<K>::is_zero(a(piv, col))) ++piv;
        if (piv == m.rows()) continue;
        if (piv != row) {
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(a(piv, j), a(row, j));
            std::swap(origin[piv], origin[row]);
        }
        const K inv = field_traits<K>::from_int(1) / a(row, col);
        for (std::size_t j = col; j < m.cols(); ++j) a(row, j) = a(row, j) * inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || field_traits<K>::is_zero(a(i, col))) continue;
            const K f = a(i, col);
            for (std::size_t j = col; j < m.cols(); ++j)
                a(i, j) = a(i, j) - f * a(row, j);
        }
        out.pivot_rows.push_back(origin[row]);
        out.pivot_cols.push_back(col);
        ++row;
    }
    out.rank = out.pivot_cols.size();
    return out;
}

} // namespace detail

/// Rank: exact elimination in exact mode; singular values above
/// tol * sigma_max in float mode.
template <class K>
std::size_t rank(const Matrix<K>& m, double tol = kDefaultRankTol) {
    if constexpr (is_exact_v<K>) {
        (void)tol;
        return detail::rref(m).rank;
    } else {
        return detail::svd_rank(m, tol);
    }
}

/// Basis of ker(m); dimension = cols - rank (rank-nullity).
template <class K>
Subspace<K> nullspace(const Matrix<K>& m, double tol = kDefaultRankTol) {
    if constexpr (is_exact_v<K>) {
        (void)tol;
        const auto e = detail::rref(m);
        const std::size_t n = m.cols();
        std::vector<bool> is_pivot(n, false);
        for (std::size_t c : e.pivot_cols) is_pivot[c] = true;
        Matrix<K> basis(n, n - e.rank);
        std::size_t out_col = 0;
        for (std::size_t free_col = 0; free_col < n; ++free_col) {
            if (is_pivot[free_col]) continue;
            basis(free_col, out_col) = field_traits<K>::from_int(1);
            for (std::size_t pi = 0; pi < e.rank; ++pi) {
                // pivot rows of the reduced matrix appear in order 0..rank-1
                basis(e.pivot_cols[pi], out_col) =
                    -e.reduced(pi, free_col);
            }
            ++out_col;
        }
        return {n, std::move(basis)};
    } else {
        return detail::svd_nullspace(m, tol);
    }
}

/// Basis of the column space: pivot columns of m in exact mode, leading
/// left singular vectors in float mode.
template <class K>
Subspace<K> image(const Matrix<K>& m, double tol = kDefaultRankTol) {
    if constexpr (is_exact_v<K>) {
        (void)tol;
        const auto e = detail::rref(m);
        Matrix<K> basis(m.rows(), e.rank);
        for (std::size_t j = 0; j < e.rank; ++j)
            for (std::size_t i = 0; i < m.rows(); ++i)
                basis(i, j) = m(i, e.pivot_cols[j]);
        return {m.rows(), std::move(basis)};
    } else {
        return detail::svd_image(m, tol);
    }
}

/// Validates that the given columns are independent before wrapping them.
template <class K>
Subspace<K> subspace_from_basis(std::size_t ambient, Matrix<K> basis,
                                double tol = kDefaultRankTol) {
    if (basis.rows() != ambient) throw AmbientMismatch("basis rows != ambient dim");
    if (rank(basis, tol) != basis.cols())
        throw RankDeficient("subspace basis columns are dependent");
    return {ambient, std::move(basis)};
}

/// Row and column indices of an r x r submatrix of full rank r, chosen as the
/// pivot rows/columns of Gaussian elimination; deterministic in the input.
template <class K>
std::pair<std::vector<std::size_t>, std::vector<std::size_t>>
full_rank_submatrix(const Matrix<K>& m, std::size_t r, double tol = kDefaultRankTol) {
    Matrix<K> a = m;
    std::vector<std::size_t> origin(m.rows());
    std::iota(origin.begin(), origin.end(), 0);
    std::vector<std::size_t> rows, cols;

    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows() && rows.size() < r; ++col) {
        // exact mode takes the first nonzero candidate, float mode the largest
        std::size_t piv = m.rows();
        if constexpr (is_exact_v<K>) {
            for (std::size_t i = row; i < m.rows(); ++i)
                if (!field_traits<K>::is_zero(a(i, col))) { piv = i; break; }
        } else {
            double best = 0;
            for (std::size_t i = row; i < m.rows(); ++i) {
                const double v = std::abs(a(i, col));
                if (v > best) { best = v; piv = i; }
            }
            (void)tol;
        }
        if (piv == m.rows()) continue;
        if (piv != row) {
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(a(piv, j), a(row, j));
            std::swap(origin[piv], origin[row]);
        }
        for (std::size_t i = row + 1; i < m.rows(); ++i) {
            if (field_traits<K>::is_zero(a(i, col))) continue;
            const K f = a(i, col) / a(row, col);
            for (std::size_t j = col; j < m.cols(); ++j)
                a(i, j) = a(i, j) - f * a(row, j);
        }
        rows.push_back(origin[row]);
        cols.push_back(col);
        ++row;
    }
    if (rows.size() < r)
        throw RankDeficient("matrix rank below requested submatrix size");
    std::sort(rows.begin(), rows.end());
    return {std::move(rows), std::move(cols)};
}

/// Determinant by fraction-free (Bareiss) elimination.
template <class K>
K det(const Matrix<K>& m) {
    if (m.rows() != m.cols()) throw SizeMismatch("determinant of a non-square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return field_traits<K>::from_int(1);
    Matrix<K> a = m;
    K prev = field_traits<K>::from_int(1);
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        std::size_t piv = n;
        if constexpr (is_exact_v<K>) {
            for (std::size_t i = k; i < n; ++i)
                if (!field_traits<K>::is_zero(a(i, k))) { piv = i; break; }
        } else {
            double best = 0;
            for (std::size_t i = k; i < n; ++i) {
                const double v = std::abs(a(i, k));
                if (v > best) { best = v; piv = i; }
            }
        }
        if (piv == n) return field_traits<K>::from_int(0);
        if (piv != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(a(piv, j), a(k, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j)
                a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
            a(i, k) = field_traits<K>::from_int(0);
        }
        prev = a(k, k);
    }
    K d = a(n - 1, n - 1);
    return sign < 0 ? -d : d;
}

/// P(lambda) = det(Ma - lambda Mb), degree <= r, by evaluation at the
/// abscissas 0..r and interpolation.
template <class K>
UniPoly<K> pencil_det_poly(const Matrix<K>& ma, const Matrix<K>& mb) {
    if (ma.rows() != ma.cols() || mb.rows() != mb.cols() ||
        ma.rows() != mb.rows())
        throw SizeMismatch("pencil matrices must be square of equal size");
    const std::size_t r = ma.rows();
    std::vector<std::pair<K, K>> points;
    points.reserve(r + 1);
    for (std::size_t j = 0; j <= r; ++j) {
        const K x = field_traits<K>::from_int(static_cast<long>(j));
        points.emplace_back(x, det(ma - mb.scaled(x)));
    }
    return poly_interpolate(points);
}

/// True iff the concatenated bases have rank equal to the sum of dimensions.
template <class K>
bool direct_sum_check(const std::vector<Subspace<K>>& spaces,
                      double tol = kDefaultRankTol) {
    if (spaces.empty()) return true;
    const std::size_t ambient = spaces.front().ambient;
    std::size_t total = 0;
    std::vector<Matrix<K>> bases;
    for (const auto& s : spaces) {
        if (s.ambient != ambient) throw AmbientMismatch("subspace ambient dims differ");
        total += s.dim();
        bases.push_back(s.basis);
    }
    if (total == 0) return true;
    if (total > ambient) return false;
    return rank(Matrix<K>::hcat(bases), tol) == total;
}

/// Inverse of a square matrix (Gauss-Jordan in exact mode, LU in float mode).
template <class K>
Matrix<K> inverse(const Matrix<K>& m) {
    if (m.rows() != m.cols()) throw SizeMismatch("inverse of a non-square matrix");
    if constexpr (is_exact_v<K>) {
        const std::size_t n = m.rows();
        const auto e = detail::rref(Matrix<K>::hcat({m, Matrix<K>::identity(n)}));
        for (std::size_t j = 0; j < n; ++j)
            if (j >= e.pivot_cols.size() || e.pivot_cols[j] != j)
                throw SingularMatrix("matrix is not invertible");
        Matrix<K> inv(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) inv(i, j) = e.reduced(i, n + j);
        return inv;
    } else {
        const Eigen::MatrixXd a = detail::to_eigen(m);
        Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
        if (!lu.isInvertible()) throw SingularMatrix("matrix is numerically singular");
        return detail::from_eigen(lu.inverse());
    }
}

/// Invertible A mapping the l-th space onto the coordinate subspace spanned
/// by canonical vectors [sum of earlier dims, +dim_l). Built by completing
/// the concatenated bases with greedily chosen canonical vectors, then
/// inverting.
template <class K>
Matrix<K> extend_to_invertible(const std::vector<Subspace<K>>& spaces, std::size_t m,
                               double tol = kDefaultRankTol) {
    std::vector<Matrix<K>> parts;
    std::size_t total = 0;
    for (const auto& s : spaces) {
        if (s.ambient != m) throw AmbientMismatch("subspace ambient dim != m");
        parts.push_back(s.basis);
        total += s.dim();
    }
    if (!direct_sum_check(spaces, tol))
        throw NotDirectSum("spaces are not in direct sum");

    Matrix<K> b = parts.empty() ? Matrix<K>(m, 0) : Matrix<K>::hcat(parts);
    std::size_t cur = total;
    for (std::size_t i = 0; i < m && cur < m; ++i) {
        Matrix<K> e(m, 1);
        e(i, 0) = field_traits<K>::from_int(1);
        Matrix<K> candidate = Matrix<K>::hcat({b, e});
        if (rank(candidate, tol) > cur) {
            b = std::move(candidate);
            ++cur;
        }
    }
    if (cur != m) throw NotDirectSum("could not complete bases to an invertible matrix");
    return inverse(b);
}

/// Moore-Penrose inverse (float mode only).
template <class K>
Matrix<K> pseudoinverse(const Matrix<K>& m, double tol = kDefaultRankTol) {
    if constexpr (is_exact_v<K>) {
        (void)m; (void)tol;
        throw NotFloatMode("pseudoinverse requires float scalars");
    } else {
        return detail::pseudoinverse_impl(m, tol);
    }
}

/// Clustered eigendecomposition (float mode only); see eigendecompose_impl.
template <class K>
std::vector<EigenCluster> eigendecompose(const Matrix<K>& m,
                                         double tol_eig = kDefaultEigTol) {
    if constexpr (is_exact_v<K>) {
        (void)m; (void)tol_eig;
        throw NotFloatMode("eigendecompose requires float scalars");
    } else {
        return eigendecompose_impl(m, tol_eig);
    }
}

} // namespace mvd
