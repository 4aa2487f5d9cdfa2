#pragma once

#include <cstdint>
#include <vector>

#include "decomp.hpp"
#include "tensor.hpp"

namespace mvd {

/// Checkable evidence that a minrank run can be trusted: the recovered basis
/// spans the input space (p = q), both families of images are in direct sum,
/// and every stacked pair N^{i,j} = [M_i; M_j] has rank above rank(M_i).
struct Certificate {
    bool p_equals_q = false;
    bool images_direct_sum = false;
    bool transpose_images_direct_sum = false;
    bool stacked_rank_ok = false;

    bool valid() const {
        return p_equals_q && images_direct_sum && transpose_images_direct_sum &&
               stacked_rank_ok;
    }
};

struct CertificateFailed : Error {
    Certificate certificate;

    explicit CertificateFailed(Certificate c)
        : Error("CertificateFailed: minrank output cannot be certified"),
          certificate(c) {}
};

template <class K>
struct MinrankResult {
    std::size_t rho = 0;
    std::vector<Matrix<K>> minimizers;   // all recovered matrices of rank rho
    std::vector<Matrix<K>> hidden_basis; // recovered basis, nondecreasing rank
    Certificate certificate;
};

/// Evaluates all four certificate conditions for a decomposition recovered
/// from a p-slice input. The stacked-rank condition is implied by the
/// transpose-image direct sum but is still checked on its own.
template <class K>
Certificate check_certificate(const MatrixVectorDecomposition<K>& d, std::size_t p,
                              double tol = kDefaultRankTol) {
    Certificate cert;
    cert.p_equals_q = (d.q() == p);

    std::vector<Subspace<K>> images, timages;
    std::vector<std::pair<std::size_t, const Matrix<K>*>> by_rank;
    for (const auto& term : d.terms()) {
        images.push_back(image(term.M, tol));
        timages.push_back(image(term.M.transpose(), tol));
        by_rank.emplace_back(images.back().dim(), &term.M);
    }
    cert.images_direct_sum = direct_sum_check(images, tol);
    cert.transpose_images_direct_sum = direct_sum_check(timages, tol);

    std::sort(by_rank.begin(), by_rank.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    cert.stacked_rank_ok = true;
    for (std::size_t i = 0; i < by_rank.size() && cert.stacked_rank_ok; ++i)
        for (std::size_t j = i + 1; j < by_rank.size(); ++j) {
            const Matrix<K> stacked = Matrix<K>::vcat(*by_rank[i].second, *by_rank[j].second);
            if (rank(stacked, tol) <= by_rank[i].first) {
                cert.stacked_rank_ok = false;
                break;
            }
        }
    return cert;
}

namespace detail {

/// Scale so one distinguished entry is 1: the first nonzero entry in exact
/// mode, the entry of largest magnitude in float mode. The recovered basis
/// matrices are only determined up to scale, and this normalization does not
/// depend on which input basis of the subspace was supplied.
template <class K>
Matrix<K> normalize_matrix_scale(const Matrix<K>& m) {
    if constexpr (is_exact_v<K>) {
        for (const auto& x : m.entries())
            if (!field_traits<K>::is_zero(x))
                return m.scaled(field_traits<K>::from_int(1) / x);
        return m;
    } else {
        double best = 0;
        for (const double& x : m.entries())
            if (std::abs(x) > std::abs(best)) best = x;
        return best == 0 ? m : m.scaled(1.0 / best);
    }
}

} // namespace detail

/// All matrices of minimum rank (up to scale) in the span of the input
/// matrices: stack them as the slices of a tensor, decompose, sort the
/// recovered basis by rank, and certify. An invalid certificate raises
/// CertificateFailed; the output is never returned uncertified.
template <class K>
MinrankResult<K> minrank(const std::vector<Matrix<K>>& basis, std::uint64_t seed,
                         const DecomposeOptions& opts = {}) {
    if (basis.empty()) throw BasisNotIndependent("empty basis list");
    for (const auto& m : basis) {
        if (m.rows() != basis.front().rows() || m.cols() != basis.front().cols())
            throw DimensionMismatch("basis matrices have differing shapes");
        if (m.is_zero()) throw BasisNotIndependent("zero matrix in basis list");
    }

    const Tensor3<K> t = from_slices(basis);
    const MatrixVectorDecomposition<K> d = decompose(t, seed, opts);

    MinrankResult<K> out;
    out.certificate = check_certificate(d, basis.size(), opts.tol_rank);
    if (!out.certificate.valid()) throw CertificateFailed(out.certificate);

    std::vector<std::pair<std::size_t, Matrix<K>>> sorted;
    for (const auto& term : d.terms())
        sorted.emplace_back(rank(term.M, opts.tol_rank),
                            detail::normalize_matrix_scale(term.M));
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return std::lexicographical_compare(
            a.second.entries().begin(), a.second.entries().end(),
            b.second.entries().begin(), b.second.entries().end());
    });

    out.rho = sorted.front().first;
    for (auto& [r, m] : sorted) {
        if (r == out.rho) out.minimizers.push_back(m);
        out.hidden_basis.push_back(std::move(m));
    }
    return out;
}

} // namespace mvd
