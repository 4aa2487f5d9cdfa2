#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "decomp.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace mvd {

/// Parameters of a generated instance. ranks are the per-term ranks of the
/// hidden decomposition; entries are integers in [-entry_bound, entry_bound].
struct InstanceSpec {
    std::size_t m = 0, n = 0, p = 0;
    std::vector<std::size_t> ranks;
    std::uint64_t seed = 0;
    std::string mode = "exact"; // "exact" | "float"
    long entry_bound = 9;
};

inline void validate_spec(const InstanceSpec& s) {
    if (s.m == 0 || s.n == 0 || s.p == 0) throw SpecInvalid("zero dimension");
    if (s.ranks.empty()) throw SpecInvalid("no term ranks");
    if (s.entry_bound < 1) throw SpecInvalid("entry bound must be >= 1");
    std::size_t total = 0;
    for (std::size_t r : s.ranks) {
        if (r == 0) throw SpecInvalid("zero term rank");
        total += r;
    }
    if (total > std::min(s.m, s.n))
        throw SpecInvalid("sum of ranks exceeds min(m, n); not undercomplete");
    if (s.mode != "exact" && s.mode != "float") throw SpecInvalid("unknown mode");
}

template <class K>
struct GeneratedInstance {
    Tensor3<K> tensor;
    MatrixVectorDecomposition<K> hidden;
};

namespace detail {

template <class K>
Matrix<K> random_invertible(RandomEngine& eng, std::size_t n, long bound) {
    for (int tries = 0; tries < 256; ++tries) {
        Matrix<K> m = random_int_matrix<K>(eng, n, n, bound);
        if (rank(m) == n) return m;
    }
    throw Error("failed to draw an invertible matrix");
}

template <class K>
Matrix<K> column_block(const Matrix<K>& m, std::size_t c0, std::size_t c1) {
    Matrix<K> b(m.rows(), c1 - c0);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = c0; j < c1; ++j) b(i, j - c0) = m(i, j);
    return b;
}

/// Pairwise independent nonzero weight vectors; colinear redraws are rejected.
template <class K>
std::vector<Vec<K>> draw_weights(RandomEngine& eng, std::size_t q, std::size_t p,
                                 long bound) {
    std::vector<Vec<K>> ws;
    ws.reserve(q);
    while (ws.size() < q) {
        Vec<K> w = random_int_vector<K>(eng, p, bound);
        if (is_zero_vector(w)) continue;
        bool ok = true;
        for (const auto& prev : ws)
            if (colinear(prev, w)) { ok = false; break; }
        if (ok) ws.push_back(std::move(w));
    }
    return ws;
}

} // namespace detail

/// Hidden decomposition with both direct-sum hypotheses by construction:
/// M_l = X_l Y_l^T where X_l, Y_l are disjoint column blocks of random
/// invertible matrices.
template <class K>
GeneratedInstance<K> gen_instance(const InstanceSpec& spec) {
    validate_spec(spec);
    RandomEngine eng(spec.seed);
    const std::size_t q = spec.ranks.size();

    std::vector<MatrixVectorTerm<K>> terms;
    for (int tries = 0;; ++tries) {
        if (tries >= 64) throw Error("instance generation kept producing rank drops");
        terms.clear();
        const Matrix<K> x = detail::random_invertible<K>(eng, spec.m, spec.entry_bound);
        const Matrix<K> y = detail::random_invertible<K>(eng, spec.n, spec.entry_bound);
        std::vector<Vec<K>> ws =
            detail::draw_weights<K>(eng, q, spec.p, spec.entry_bound);

        bool ok = true;
        std::size_t off = 0;
        for (std::size_t l = 0; l < q; ++l) {
            const std::size_t rl = spec.ranks[l];
            const Matrix<K> xl = detail::column_block(x, off, off + rl);
            const Matrix<K> yl = detail::column_block(y, off, off + rl);
            off += rl;
            Matrix<K> ml = xl * yl.transpose();
            if (rank(ml) != rl) { ok = false; break; }
            terms.push_back({std::move(ml), std::move(ws[l])});
        }
        if (ok) break;
    }

    GeneratedInstance<K> out;
    out.hidden = MatrixVectorDecomposition<K>(std::move(terms));
    out.tensor = reconstruct(out.hidden, spec.m, spec.n, spec.p);
    return out;
}

/// Z_k = sum_l W(l, k) M_l: mixes a hidden basis by the columns of W.
template <class K>
std::vector<Matrix<K>> apply_change_of_basis(const std::vector<Matrix<K>>& hidden,
                                             const Matrix<K>& w) {
    if (w.rows() != hidden.size()) throw SizeMismatch("mixing matrix rows != basis size");
    std::vector<Matrix<K>> out;
    out.reserve(w.cols());
    for (std::size_t k = 0; k < w.cols(); ++k) {
        Matrix<K> z(hidden.front().rows(), hidden.front().cols());
        for (std::size_t l = 0; l < hidden.size(); ++l)
            z = z + hidden[l].scaled(w(l, k));
        out.push_back(std::move(z));
    }
    return out;
}

template <class K>
struct GeneratedBasis {
    std::vector<Matrix<K>> basis;  // the visible input: hidden mixed by W
    std::vector<Matrix<K>> hidden; // M_1..M_p
    Matrix<K> mixing;              // W, invertible p x p
};

/// Hidden basis as in gen_instance (requires q = p so it spans the space),
/// mixed by a random invertible change of basis.
template <class K>
GeneratedBasis<K> gen_minrank_basis(const InstanceSpec& spec) {
    validate_spec(spec);
    if (spec.ranks.size() != spec.p)
        throw SpecInvalid("minrank basis needs q = p hidden terms");
    GeneratedInstance<K> inst = gen_instance<K>(spec);

    RandomEngine eng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
    GeneratedBasis<K> out;
    out.mixing = detail::random_invertible<K>(eng, spec.p, spec.entry_bound);
    for (const auto& term : inst.hidden.terms()) out.hidden.push_back(term.M);
    out.basis = apply_change_of_basis(out.hidden, out.mixing);
    return out;
}

/// Basis of rank-one matrices u_l v^T sharing the right factor v: images are
/// in direct sum but transpose images are not, so the minrank certificate
/// must reject it.
template <class K>
std::vector<Matrix<K>> gen_shared_right_factor_basis(std::size_t m, std::size_t n,
                                                     std::size_t p, std::uint64_t seed,
                                                     long bound = 9) {
    if (p > m) throw SpecInvalid("need p <= m independent left factors");
    RandomEngine eng(seed);
    const Matrix<K> x = detail::random_invertible<K>(eng, m, bound);
    Vec<K> v;
    do {
        v = random_int_vector<K>(eng, n, bound);
    } while (is_zero_vector(v));
    std::vector<Matrix<K>> basis;
    for (std::size_t l = 0; l < p; ++l) basis.push_back(outer_product(x.col(l), v));
    return basis;
}

/// Rank-one-term tensor whose first two weight vectors are colinear; violates
/// the pairwise-independence hypothesis of simultaneous diagonalization.
template <class K>
GeneratedInstance<K> gen_colinear_w_instance(std::size_t m, std::size_t n,
                                             std::size_t p, std::size_t r,
                                             std::uint64_t seed, long bound = 9) {
    if (r < 2 || r > std::min(m, n)) throw SpecInvalid("need 2 <= r <= min(m, n)");
    RandomEngine eng(seed);
    const Matrix<K> x = detail::random_invertible<K>(eng, m, bound);
    const Matrix<K> y = detail::random_invertible<K>(eng, n, bound);
    std::vector<Vec<K>> ws = detail::draw_weights<K>(eng, r, p, bound);
    ws[1] = ws[0]; // the violation under test
    RankOneDecomposition<K> d{Matrix<K>(m, r), Matrix<K>(n, r), Matrix<K>(p, r)};
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t k = 0; k < p; ++k) d.W(k, i) = ws[i][k];
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t a = 0; a < m; ++a) d.U(a, i) = x(a, i);
        for (std::size_t a = 0; a < n; ++a) d.V(a, i) = y(a, i);
    }
    GeneratedInstance<K> out;
    out.tensor = reconstruct_rank_one(d);
    return out;
}

namespace detail {

template <class K>
double term_tensor_distance(const MatrixVectorTerm<K>& a, const MatrixVectorTerm<K>& b) {
    // scale-invariant: compare the rank-one "term tensors" M (x) w
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.M.rows(); ++i)
        for (std::size_t j = 0; j < a.M.cols(); ++j)
            for (std::size_t k = 0; k < a.w.size(); ++k) {
                const double x = field_traits<K>::to_double(a.M(i, j)) *
                                 field_traits<K>::to_double(a.w[k]);
                const double y = field_traits<K>::to_double(b.M(i, j)) *
                                 field_traits<K>::to_double(b.w[k]);
                num += (x - y) * (x - y);
                den += x * x;
            }
    return den == 0 ? (num == 0 ? 0 : 1) : std::sqrt(num / den);
}

} // namespace detail

/// Equality up to permutation and scaling. Exact mode compares canonical
/// forms entry-exactly (tol ignored); float mode matches terms greedily by
/// weight direction and compares the normalized term tensors within tol.
template <class K>
bool equivalent(const MatrixVectorDecomposition<K>& d1,
                const MatrixVectorDecomposition<K>& d2, double tol = 1e-6) {
    if (d1.q() != d2.q()) return false;
    if (d1.q() == 0) return true;
    const auto& t1 = d1.terms();
    const auto& t2 = d2.terms();
    if (t1.front().M.rows() != t2.front().M.rows() ||
        t1.front().M.cols() != t2.front().M.cols() ||
        t1.front().w.size() != t2.front().w.size())
        throw DimensionMismatch("decompositions live in different spaces");

    if constexpr (is_exact_v<K>) {
        return identical_terms(canonicalize(d1), canonicalize(d2));
    } else {
        const auto cosine = [](const Vec<double>& a, const Vec<double>& b) {
            double na = 0, nb = 0, d = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                na += a[i] * a[i];
                nb += b[i] * b[i];
                d += a[i] * b[i];
            }
            return std::abs(d) / std::sqrt(na * nb);
        };
        std::vector<bool> used(t2.size(), false);
        for (const auto& a : t1) {
            double best = -1;
            std::size_t pick = t2.size();
            for (std::size_t j = 0; j < t2.size(); ++j) {
                if (used[j]) continue;
                const double c = cosine(a.w, t2[j].w);
                if (c > best) { best = c; pick = j; }
            }
            if (pick == t2.size()) return false;
            used[pick] = true;
            // M (x) w is invariant under the (cM, w/c) term scaling
            if (detail::term_tensor_distance(a, t2[pick]) > tol) return false;
        }
        return true;
    }
}

} // namespace mvd
