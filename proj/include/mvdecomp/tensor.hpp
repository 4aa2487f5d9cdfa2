#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "matrix.hpp"

namespace mvd {

/// Dense order-3 tensor in K^{m x n x p}, stored slice-major: the k-th
/// 3-slice is the m x n matrix T(.,.,k).
template <class K>
class Tensor3 {
public:
    Tensor3() = default;

    Tensor3(std::size_t m, std::size_t n, std::size_t p)
        : m_(m), n_(n), p_(p), d_(m * n * p, field_traits<K>::from_int(0)) {}

    std::size_t m() const { return m_; }
    std::size_t n() const { return n_; }
    std::size_t p() const { return p_; }

    K& operator()(std::size_t i, std::size_t j, std::size_t k) {
        return d_[(k * m_ + i) * n_ + j];
    }
    const K& operator()(std::size_t i, std::size_t j, std::size_t k) const {
        return d_[(k * m_ + i) * n_ + j];
    }

    bool operator==(const Tensor3& o) const {
        return m_ == o.m_ && n_ == o.n_ && p_ == o.p_ && d_ == o.d_;
    }

    bool is_zero() const {
        for (const auto& x : d_)
            if (!field_traits<K>::is_zero(x)) return false;
        return true;
    }

    const std::vector<K>& entries() const { return d_; }

private:
    std::size_t m_ = 0, n_ = 0, p_ = 0;
    std::vector<K> d_;
};

template <class K>
Matrix<K> slice(const Tensor3<K>& t, std::size_t k) {
    if (k >= t.p()) throw IndexOutOfRange("slice index out of range");
    Matrix<K> z(t.m(), t.n());
    for (std::size_t i = 0; i < t.m(); ++i)
        for (std::size_t j = 0; j < t.n(); ++j) z(i, j) = t(i, j, k);
    return z;
}

template <class K>
Tensor3<K> from_slices(const std::vector<Matrix<K>>& slices) {
    if (slices.empty()) throw EmptyInput("from_slices needs at least one slice");
    const std::size_t m = slices.front().rows();
    const std::size_t n = slices.front().cols();
    for (const auto& z : slices)
        if (z.rows() != m || z.cols() != n)
            throw DimensionMismatch("slices have differing shapes");
    Tensor3<K> t(m, n, slices.size());
    for (std::size_t k = 0; k < slices.size(); ++k)
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j) t(i, j, k) = slices[k](i, j);
    return t;
}

/// T_c = sum_k c_k Z_k.
template <class K>
Matrix<K> slice_combination(const Tensor3<K>& t, const Vec<K>& c) {
    if (c.size() != t.p()) throw DimensionMismatch("coefficient vector length != p");
    Matrix<K> r(t.m(), t.n());
    for (std::size_t k = 0; k < t.p(); ++k) {
        if (field_traits<K>::is_zero(c[k])) continue;
        for (std::size_t i = 0; i < t.m(); ++i)
            for (std::size_t j = 0; j < t.n(); ++j)
                r(i, j) = r(i, j) + c[k] * t(i, j, k);
    }
    return r;
}

/// One term M (x) w of a matrix-vector decomposition; M and w are nonzero.
template <class K>
struct MatrixVectorTerm {
    Matrix<K> M;
    Vec<K> w;
};

/// Matrix-vector decomposition: terms M_l (x) w_l with pairwise
/// non-colinear w_l; its rank is the sum of the matrix ranks.
template <class K>
class MatrixVectorDecomposition {
public:
    MatrixVectorDecomposition() = default;

    explicit MatrixVectorDecomposition(std::vector<MatrixVectorTerm<K>> terms,
                                       double tol = kDefaultRankTol)
        : terms_(std::move(terms)) {
        for (const auto& t : terms_) {
            if (t.M.is_zero()) throw InvalidDecomposition("zero matrix term");
            if (is_zero_vector(t.w)) throw InvalidDecomposition("zero weight vector");
            if (t.M.rows() != terms_.front().M.rows() ||
                t.M.cols() != terms_.front().M.cols() ||
                t.w.size() != terms_.front().w.size())
                throw DimensionMismatch("inconsistent term shapes");
        }
        for (std::size_t i = 0; i < terms_.size(); ++i)
            for (std::size_t j = i + 1; j < terms_.size(); ++j)
                if (colinear(terms_[i].w, terms_[j].w))
                    throw InvalidDecomposition("colinear weight vectors");
        rank_ = 0;
        for (const auto& t : terms_) rank_ += mvd::rank(t.M, tol);
    }

    const std::vector<MatrixVectorTerm<K>>& terms() const { return terms_; }
    std::size_t q() const { return terms_.size(); }
    std::size_t rank() const { return rank_; }

    std::size_t recompute_rank(double tol = kDefaultRankTol) const {
        std::size_t r = 0;
        for (const auto& t : terms_) r += mvd::rank(t.M, tol);
        return r;
    }

private:
    std::vector<MatrixVectorTerm<K>> terms_;
    std::size_t rank_ = 0;
};

/// T_{ijk} = sum_l (M_l)_{ij} (w_l)_k.
template <class K>
Tensor3<K> reconstruct(const MatrixVectorDecomposition<K>& d, std::size_t m,
                       std::size_t n, std::size_t p) {
    Tensor3<K> t(m, n, p);
    for (const auto& term : d.terms()) {
        if (term.M.rows() != m || term.M.cols() != n || term.w.size() != p)
            throw DimensionMismatch("term shape inconsistent with tensor shape");
        for (std::size_t k = 0; k < p; ++k) {
            if (field_traits<K>::is_zero(term.w[k])) continue;
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    t(i, j, k) = t(i, j, k) + term.M(i, j) * term.w[k];
        }
    }
    return t;
}

/// Rank-one decomposition T = sum_i u_i (x) v_i (x) w_i held as factor
/// matrices with the u_i, v_i, w_i as columns.
template <class K>
struct RankOneDecomposition {
    Matrix<K> U; // m x r
    Matrix<K> V; // n x r
    Matrix<K> W; // p x r

    std::size_t r() const { return U.cols(); }
};

template <class K>
Tensor3<K> reconstruct_rank_one(const RankOneDecomposition<K>& d) {
    if (d.U.cols() != d.V.cols() || d.U.cols() != d.W.cols())
        throw DimensionMismatch("factor matrices have differing term counts");
    Tensor3<K> t(d.U.rows(), d.V.rows(), d.W.rows());
    for (std::size_t r = 0; r < d.U.cols(); ++r)
        for (std::size_t k = 0; k < d.W.rows(); ++k) {
            if (field_traits<K>::is_zero(d.W(k, r))) continue;
            for (std::size_t i = 0; i < d.U.rows(); ++i)
                for (std::size_t j = 0; j < d.V.rows(); ++j)
                    t(i, j, k) = t(i, j, k) + d.U(i, r) * d.V(j, r) * d.W(k, r);
        }
    return t;
}

namespace detail {

template <class K>
bool lex_less(const Vec<K>& a, const Vec<K>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

template <class K>
struct CanonicalTermOrder {
    bool operator()(const std::pair<MatrixVectorTerm<K>, std::size_t>& x,
                    const std::pair<MatrixVectorTerm<K>, std::size_t>& y) const {
        if (x.second != y.second) return x.second < y.second;
        if (x.first.w != y.first.w) return lex_less(x.first.w, y.first.w);
        return lex_less(x.first.M.entries(), y.first.M.entries());
    }
};

} // namespace detail

/// Canonical form: each term is rescaled so the first nonzero entry of w is 1
/// (the scale moves into M), then terms are sorted by
/// (rank(M), w lexicographic, M entries lexicographic). Two exact-mode
/// decompositions are equivalent iff their canonical forms are identical.
template <class K>
MatrixVectorDecomposition<K> canonicalize(const MatrixVectorDecomposition<K>& d,
                                          double tol = kDefaultRankTol) {
    std::vector<std::pair<MatrixVectorTerm<K>, std::size_t>> keyed;
    keyed.reserve(d.q());
    for (const auto& t : d.terms()) {
        MatrixVectorTerm<K> c = t;
        std::size_t lead = 0;
        while (lead < c.w.size() && field_traits<K>::is_zero(c.w[lead])) ++lead;
        const K s = c.w[lead];
        for (auto& x : c.w) x = x / s;
        c.M = c.M.scaled(s);
        keyed.emplace_back(std::move(c), mvd::rank(t.M, tol));
    }
    std::sort(keyed.begin(), keyed.end(), detail::CanonicalTermOrder<K>{});
    std::vector<MatrixVectorTerm<K>> terms;
    terms.reserve(keyed.size());
    for (auto& kt : keyed) terms.push_back(std::move(kt.first));
    return MatrixVectorDecomposition<K>(std::move(terms), tol);
}

/// Entry-identical comparison of two decompositions (term lists must match
/// exactly; canonicalize first for order/scale independence).
template <class K>
bool identical_terms(const MatrixVectorDecomposition<K>& a,
                     const MatrixVectorDecomposition<K>& b) {
    if (a.q() != b.q()) return false;
    for (std::size_t i = 0; i < a.q(); ++i)
        if (!(a.terms()[i].M == b.terms()[i].M) || a.terms()[i].w != b.terms()[i].w)
            return false;
    return true;
}

} // namespace mvd
