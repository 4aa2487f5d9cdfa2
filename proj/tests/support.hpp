#pragma once

#include <mvdecomp/mvdecomp.hpp>

#include <vector>

namespace testsup {

using mvd::Matrix;
using mvd::Rational;
using mvd::Vec;

inline Rational q(long n) { return Rational(n); }
inline Rational q(long n, long d) { return Rational(n, d); }

inline Vec<Rational> qvec(std::initializer_list<long> xs) {
    Vec<Rational> v;
    for (long x : xs) v.push_back(Rational(x));
    return v;
}

inline Vec<double> dvec(std::initializer_list<double> xs) { return Vec<double>(xs); }

/// Unit coordinate vector e_i in dimension n.
template <class K>
Vec<K> unit(std::size_t n, std::size_t i) {
    Vec<K> v(n, mvd::field_traits<K>::from_int(0));
    v[i] = mvd::field_traits<K>::from_int(1);
    return v;
}

template <class K>
mvd::Subspace<K> span_of(std::size_t ambient, const std::vector<Vec<K>>& vectors) {
    Matrix<K> basis(ambient, vectors.size());
    for (std::size_t j = 0; j < vectors.size(); ++j)
        for (std::size_t i = 0; i < ambient; ++i) basis(i, j) = vectors[j][i];
    return mvd::subspace_from_basis(ambient, std::move(basis));
}

/// Equality of subspaces by mutual rank: rank[B1 | B2] = dim B1 = dim B2.
template <class K>
bool same_subspace(const mvd::Subspace<K>& a, const mvd::Subspace<K>& b,
                   double tol = mvd::kDefaultRankTol) {
    if (a.ambient != b.ambient || a.dim() != b.dim()) return false;
    return mvd::rank(Matrix<K>::hcat({a.basis, b.basis}), tol) == a.dim();
}

/// Vectorizes matrices as the rows of one big matrix (for span comparisons).
template <class K>
Matrix<K> stack_vectorized(const std::vector<Matrix<K>>& ms) {
    const std::size_t cells = ms.front().rows() * ms.front().cols();
    Matrix<K> s(ms.size(), cells);
    for (std::size_t r = 0; r < ms.size(); ++r)
        for (std::size_t i = 0; i < cells; ++i) s(r, i) = ms[r].entries()[i];
    return s;
}

template <class K>
bool matrices_colinear(const Matrix<K>& a, const Matrix<K>& b) {
    return mvd::colinear(a.entries(), b.entries());
}

/// Random per-term ranks with sum <= budget, each in [1, 3].
inline std::vector<std::size_t> random_ranks(mvd::RandomEngine& eng, std::size_t terms,
                                             std::size_t budget) {
    std::vector<std::size_t> ranks;
    for (std::size_t l = 0; l < terms; ++l) {
        const std::size_t room = budget - (terms - l - 1);
        const long hi = std::min<long>(3, static_cast<long>(room));
        const std::size_t r = static_cast<std::size_t>(mvd::bounded_int(eng, 1, hi));
        ranks.push_back(r);
        budget -= r;
    }
    return ranks;
}

} // namespace testsup
