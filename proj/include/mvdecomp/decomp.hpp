#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "linalg.hpp"
#include "poly.hpp"
#include "rng.hpp"
#include "tensor.hpp"

namespace mvd {

struct DecomposeOptions {
    long coefficient_bound = 10000;
    std::size_t max_retries = 8;
    double tol_rank = kDefaultRankTol; // float rank / nullspace threshold
    double tol_eig = kDefaultEigTol;   // eigenvalue clustering / pairing
    double tol_prop = 1e-7;            // disjoint-rows proportionality residual
    double tol_resid = 1e-6;           // reconstruction residual
};

/// p integers drawn uniformly from [-bound, bound], embedded into the field.
template <class K>
Vec<K> draw_coefficients(std::size_t p, long bound, RandomEngine& eng) {
    return random_int_vector<K>(eng, p, bound);
}

template <class K>
Vec<K> draw_coefficients(std::size_t p, long bound, std::uint64_t seed) {
    RandomEngine eng(seed);
    return draw_coefficients<K>(p, bound, eng);
}

/// Pencil (T_a, T_b) of slice combinations, with the full-rank submatrix and
/// its determinant polynomial P(lambda) = det(M_a - lambda M_b) in exact mode.
template <class K>
struct Pencil {
    Vec<K> a, b;
    Matrix<K> Ta, Tb;
    std::size_t r = 0;
    std::vector<std::size_t> subrows, subcols;
    UniPoly<K> P;
};

/// Nontrivial eigenvalues of the pencil with their eigenspaces
/// V_l = ker(T_a - lambda_l T_b) and images T_b(V_l).
template <class K>
struct PencilSpectrum {
    std::vector<K> eigenvalues;
    std::vector<Subspace<K>> eigenspaces;
    std::vector<Subspace<K>> images;

    std::size_t q() const { return eigenvalues.size(); }
};

template <class K>
struct ImageComputation {
    Pencil<K> pencil;
    PencilSpectrum<K> spectrum;
    std::size_t r = 0;
};

namespace detail {

template <class K>
struct ImagesAttempt {
    std::size_t rank_seen = 0;
    std::optional<ImageComputation<K>> result;
};

/// One exact-mode image-recovery attempt for a fixed draw (a, b). The rank of
/// T_a is reported even when a genericity check fails.
inline ImagesAttempt<Rational>
images_attempt(const Tensor3<Rational>& t, Vec<Rational> a, Vec<Rational> b) {
    ImagesAttempt<Rational> attempt;
    ImageComputation<Rational> out;
    out.pencil.a = std::move(a);
    out.pencil.b = std::move(b);
    out.pencil.Ta = slice_combination(t, out.pencil.a);
    out.pencil.Tb = slice_combination(t, out.pencil.b);
    const std::size_t r = rank(out.pencil.Ta);
    out.pencil.r = r;
    out.r = r;
    attempt.rank_seen = r;
    if (r == 0) {
        out.pencil.P = UniPoly<Rational>::constant(Rational(1));
        attempt.result = std::move(out);
        return attempt;
    }

    auto [rows, cols] = full_rank_submatrix(out.pencil.Ta, r);
    out.pencil.subrows = rows;
    out.pencil.subcols = cols;
    const Matrix<Rational> ma = out.pencil.Ta.submatrix(rows, cols);
    const Matrix<Rational> mb = out.pencil.Tb.submatrix(rows, cols);
    out.pencil.P = pencil_det_poly(ma, mb);
    // P(0) = det(M_a) != 0 because the submatrix has full rank
    if (poly_eval(out.pencil.P, Rational(0)).is_zero())
        throw Error("pencil polynomial vanishes at 0 despite full-rank submatrix");

    const std::size_t n = t.n();
    std::size_t image_dim_total = 0;
    for (const Rational& lambda : rational_roots(out.pencil.P)) {
        const Subspace<Rational> eigenspace =
            nullspace(out.pencil.Ta - out.pencil.Tb.scaled(lambda));
        const Subspace<Rational> img = image(out.pencil.Tb * eigenspace.basis);
        // eigenspace dimension law: dim V = n - r + rank(M_l)
        if (eigenspace.dim() != n - r + img.dim()) return attempt;
        image_dim_total += img.dim();
        out.spectrum.eigenvalues.push_back(lambda);
        out.spectrum.eigenspaces.push_back(eigenspace);
        out.spectrum.images.push_back(img);
    }
    if (image_dim_total != r) return attempt;
    if (!direct_sum_check(out.spectrum.images)) return attempt;
    attempt.result = std::move(out);
    return attempt;
}

/// One float-mode attempt via the pseudoinverse route: the nonzero
/// eigenspaces of T_a T_b^+ are the images directly.
inline ImagesAttempt<double>
images_float_attempt(const Tensor3<double>& t, Vec<double> a, Vec<double> b,
                     const DecomposeOptions& opts) {
    ImagesAttempt<double> attempt;
    ImageComputation<double> out;
    out.pencil.a = std::move(a);
    out.pencil.b = std::move(b);
    out.pencil.Ta = slice_combination(t, out.pencil.a);
    out.pencil.Tb = slice_combination(t, out.pencil.b);
    const std::size_t m = t.m();
    const std::size_t r = rank(out.pencil.Ta, opts.tol_rank);
    out.pencil.r = r;
    out.r = r;
    attempt.rank_seen = r;
    if (r == 0) {
        attempt.result = std::move(out);
        return attempt;
    }

    const Matrix<double> op =
        out.pencil.Ta * pseudoinverse(out.pencil.Tb, opts.tol_rank);
    std::vector<EigenCluster> clusters;
    try {
        clusters = eigendecompose_impl(op, opts.tol_eig);
    } catch (const IllConditioned&) {
        return attempt;
    }

    double scale = 0;
    for (const auto& c : clusters) scale = std::max(scale, std::abs(c.value));
    std::size_t zero_dim = 0;
    std::size_t image_dim_total = 0;
    for (auto& c : clusters) {
        if (std::abs(c.value) <= opts.tol_eig * std::max(scale, 1e-300)) {
            zero_dim += c.multiplicity;
            continue;
        }
        image_dim_total += c.space.dim();
        out.spectrum.eigenvalues.push_back(c.value);
        out.spectrum.eigenspaces.push_back(c.space);
        out.spectrum.images.push_back(std::move(c.space));
    }
    // the zero eigenvalue has multiplicity m - r; everything else sums to r
    if (zero_dim != m - r) return attempt;
    if (image_dim_total != r) return attempt;
    if (!direct_sum_check(out.spectrum.images, opts.tol_rank)) return attempt;
    attempt.result = std::move(out);
    return attempt;
}

template <class K>
ImagesAttempt<K> images_one_draw(const Tensor3<K>& t, RandomEngine& eng,
                                 const DecomposeOptions& opts) {
    Vec<K> a = draw_coefficients<K>(t.p(), opts.coefficient_bound, eng);
    Vec<K> b = draw_coefficients<K>(t.p(), opts.coefficient_bound, eng);
    if constexpr (is_exact_v<K>)
        return images_attempt(t, std::move(a), std::move(b));
    else
        return images_float_attempt(t, std::move(a), std::move(b), opts);
}

/// Redraws coefficients until an attempt passes all genericity checks. The
/// rank estimate is the maximum rank of T_a seen across draws, including
/// failed ones; an attempt whose T_a falls below that maximum is discarded.
template <class K>
ImageComputation<K> images_with_retries(const Tensor3<K>& t, RandomEngine& eng,
                                        const DecomposeOptions& opts) {
    std::size_t rmax = 0;
    for (std::size_t attempt = 0; attempt < opts.max_retries; ++attempt) {
        auto res = images_one_draw(t, eng, opts);
        if (res.rank_seen > rmax) rmax = res.rank_seen;
        if (!res.result) continue;
        if (res.result->r < rmax) continue;
        return *std::move(res.result);
    }
    throw HypothesisViolation(
        "image recovery failed after " + std::to_string(opts.max_retries) +
        " coefficient draws; the direct-sum hypotheses likely fail");
}

} // namespace detail

/// Algorithm: recover the images Ima(M_1),...,Ima(M_q) of the (unknown)
/// minimum matrix-vector decomposition, exact mode. Also returns the pencil
/// used, including a, b, and r = rank(T_a).
inline ImageComputation<Rational> compute_images(const Tensor3<Rational>& t,
                                                 RandomEngine& eng,
                                                 const DecomposeOptions& opts = {}) {
    return detail::images_with_retries(t, eng, opts);
}

inline ImageComputation<Rational> compute_images(const Tensor3<Rational>& t,
                                                 std::uint64_t seed,
                                                 const DecomposeOptions& opts = {}) {
    RandomEngine eng(seed);
    return detail::images_with_retries(t, eng, opts);
}

/// Float-mode image recovery through T_a T_b^+ (Moore-Penrose route).
inline ImageComputation<double> compute_images_float(const Tensor3<double>& t,
                                                     RandomEngine& eng,
                                                     const DecomposeOptions& opts = {}) {
    return detail::images_with_retries(t, eng, opts);
}

inline ImageComputation<double> compute_images_float(const Tensor3<double>& t,
                                                     std::uint64_t seed,
                                                     const DecomposeOptions& opts = {}) {
    RandomEngine eng(seed);
    return detail::images_with_retries(t, eng, opts);
}

namespace detail {

template <class K>
double block_frobenius(const Matrix<K>& m) {
    double s = 0;
    for (const auto& x : m.entries()) {
        const double v = field_traits<K>::to_double(x);
        s += v * v;
    }
    return std::sqrt(s);
}

} // namespace detail

/// Decomposition of a tensor with the disjoint rows property: block l of the
/// rows holds a single matrix up to per-slice proportionality factors, which
/// become the entries of w_l. Proportionality is verified, never assumed.
template <class K>
MatrixVectorDecomposition<K>
disjoint_rows_decompose(const Tensor3<K>& t, const std::vector<std::size_t>& block_ranks,
                        double tol_prop = 1e-7) {
    const std::size_t m = t.m(), n = t.n(), p = t.p();
    std::size_t total = 0;
    for (std::size_t r : block_ranks) {
        if (r == 0) throw BlockRankMismatch("zero block rank");
        total += r;
    }
    if (total > m) throw BlockRankMismatch("block ranks exceed row count");

    std::vector<Matrix<K>> slices(p);
    for (std::size_t k = 0; k < p; ++k) slices[k] = slice(t, k);

    // rows below the blocks must vanish
    for (std::size_t k = 0; k < p; ++k) {
        const Matrix<K> bottom = slices[k].row_block(total, m);
        if constexpr (is_exact_v<K>) {
            if (!bottom.is_zero())
                throw NotDisjointRows("nonzero rows below the rank blocks");
        } else {
            if (detail::block_frobenius(bottom) >
                tol_prop * std::max(1.0, detail::block_frobenius(slices[k])))
                throw NotDisjointRows("nonzero rows below the rank blocks");
        }
    }

    std::vector<MatrixVectorTerm<K>> terms;
    std::size_t offset = 0;
    for (std::size_t block = 0; block < block_ranks.size(); ++block) {
        const std::size_t r0 = offset, r1 = offset + block_ranks[block];
        offset = r1;

        std::vector<Matrix<K>> zb(p);
        for (std::size_t k = 0; k < p; ++k) zb[k] = slices[k].row_block(r0, r1);

        // pick the slice carrying the block
        std::size_t kstar = p;
        if constexpr (is_exact_v<K>) {
            for (std::size_t k = 0; k < p; ++k)
                if (!zb[k].is_zero()) { kstar = k; break; }
        } else {
            double best = 0;
            for (std::size_t k = 0; k < p; ++k) {
                const double norm = detail::block_frobenius(zb[k]);
                if (norm > best) { best = norm; kstar = k; }
            }
        }
        if (kstar == p) throw NotDisjointRows("a rank block vanishes in every slice");

        const Matrix<K>& mp = zb[kstar];
        Vec<K> w(p, field_traits<K>::from_int(0));
        w[kstar] = field_traits<K>::from_int(1);

        if constexpr (is_exact_v<K>) {
            std::size_t pi = 0, pj = 0;
            bool found = false;
            for (std::size_t i = 0; i < mp.rows() && !found; ++i)
                for (std::size_t j = 0; j < mp.cols() && !found; ++j)
                    if (!field_traits<K>::is_zero(mp(i, j))) { pi = i; pj = j; found = true; }
            for (std::size_t k = 0; k < p; ++k) {
                if (k == kstar) continue;
                const K c = zb[k](pi, pj) / mp(pi, pj);
                if (!(zb[k] == mp.scaled(c)))
                    throw NotDisjointRows("slice block is not proportional");
                w[k] = c;
            }
        } else {
            double nn = 0;
            for (const auto& x : mp.entries()) nn += x * x;
            for (std::size_t k = 0; k < p; ++k) {
                if (k == kstar) continue;
                double num = 0;
                for (std::size_t idx = 0; idx < mp.entries().size(); ++idx)
                    num += zb[k].entries()[idx] * mp.entries()[idx];
                const double c = num / nn;
                const double resid = detail::block_frobenius(zb[k] - mp.scaled(c));
                if (resid > tol_prop * std::max(1.0, std::abs(c)) * std::sqrt(nn))
                    throw NotDisjointRows("slice block is not proportional");
                w[k] = c;
            }
        }

        Matrix<K> full(m, n);
        for (std::size_t i = r0; i < r1; ++i)
            for (std::size_t j = 0; j < n; ++j) full(i, j) = mp(i - r0, j);
        terms.push_back({std::move(full), std::move(w)});
    }
    return MatrixVectorDecomposition<K>(std::move(terms));
}

namespace detail {

template <class K>
double tensor_rel_residual(const Tensor3<K>& got, const Tensor3<K>& want) {
    double num = 0, den = 0;
    for (std::size_t idx = 0; idx < want.entries().size(); ++idx) {
        const double g = field_traits<K>::to_double(got.entries()[idx]);
        const double w = field_traits<K>::to_double(want.entries()[idx]);
        num += (g - w) * (g - w);
        den += w * w;
    }
    if (den == 0) return num == 0 ? 0 : 1;
    return std::sqrt(num / den);
}

/// Verification before returning a decomposition: reconstruction, both
/// direct-sum conditions, pairwise independent weights, total rank.
template <class K>
bool verify_output(const Tensor3<K>& t, const MatrixVectorDecomposition<K>& d,
                   std::size_t expected_rank, const DecomposeOptions& opts) {
    if constexpr (is_exact_v<K>) {
        if (!(reconstruct(d, t.m(), t.n(), t.p()) == t)) return false;
    } else {
        if (tensor_rel_residual(reconstruct(d, t.m(), t.n(), t.p()), t) >
            opts.tol_resid)
            return false;
    }
    if (d.rank() != expected_rank) return false;
    std::vector<Subspace<K>> images, timages;
    for (const auto& term : d.terms()) {
        images.push_back(image(term.M, opts.tol_rank));
        timages.push_back(image(term.M.transpose(), opts.tol_rank));
    }
    return direct_sum_check(images, opts.tol_rank) &&
           direct_sum_check(timages, opts.tol_rank);
}

} // namespace detail

/// Main decomposition algorithm: recover the images, map them to coordinate
/// blocks with an invertible A, decompose the transformed tensor by disjoint
/// rows, and undo the transformation. The result is verified before return;
/// genericity failures trigger fresh coefficient draws up to max_retries.
template <class K>
MatrixVectorDecomposition<K> decompose(const Tensor3<K>& t, std::uint64_t seed,
                                       const DecomposeOptions& opts = {}) {
    if (t.is_zero()) return MatrixVectorDecomposition<K>();

    RandomEngine eng(seed);
    std::string last = "no attempt succeeded";
    for (std::size_t attempt = 0; attempt < opts.max_retries; ++attempt) {
        ImageComputation<K> ic = [&] {
            if constexpr (is_exact_v<K>)
                return compute_images(t, eng, opts);
            else
                return compute_images_float(t, eng, opts);
        }();
        try {
            const std::vector<Subspace<K>>& images = ic.spectrum.images;
            std::vector<std::size_t> block_ranks;
            for (const auto& s : images) block_ranks.push_back(s.dim());

            const Matrix<K> a = extend_to_invertible(images, t.m(), opts.tol_rank);
            std::vector<Matrix<K>> transformed(t.p());
            for (std::size_t k = 0; k < t.p(); ++k) transformed[k] = a * slice(t, k);

            const MatrixVectorDecomposition<K> dd = disjoint_rows_decompose(
                from_slices(transformed), block_ranks, opts.tol_prop);

            const Matrix<K> ainv = inverse(a);
            std::vector<MatrixVectorTerm<K>> terms;
            for (const auto& term : dd.terms())
                terms.push_back({ainv * term.M, term.w});
            MatrixVectorDecomposition<K> result(std::move(terms), opts.tol_rank);

            if (detail::verify_output(t, result, ic.r, opts)) return result;
            last = "output verification failed";
        } catch (const NotDisjointRows& e) {
            last = e.what();
        } catch (const InvalidDecomposition& e) {
            last = e.what();
        } catch (const NotDirectSum& e) {
            last = e.what();
        } catch (const RankDeficient& e) {
            last = e.what();
        } catch (const SingularMatrix& e) {
            last = e.what();
        }
    }
    throw HypothesisViolation("decomposition failed after " +
                              std::to_string(opts.max_retries) +
                              " attempts; last failure: " + last);
}

/// Jennrich / simultaneous diagonalization output, with the pairing
/// residuals |lambda_i mu_i - 1| and the relative reconstruction residual.
struct JennrichOutcome {
    RankOneDecomposition<double> decomposition;
    std::vector<double> pairing_residuals;
    double reconstruction_residual = 0;
    Vec<double> a, b;
};

/// Classical simultaneous diagonalization for float tensors in the
/// undercomplete setting: u_i from T_a T_b^+, v_i from (T_a^+ T_b)^T,
/// paired by reciprocal eigenvalues, w_i by least squares.
inline JennrichOutcome jennrich_decompose_detailed(const Tensor3<double>& t,
                                                   std::uint64_t seed,
                                                   const DecomposeOptions& opts = {}) {
    JennrichOutcome out;
    if (t.is_zero()) {
        out.decomposition = {Matrix<double>(t.m(), 0), Matrix<double>(t.n(), 0),
                             Matrix<double>(t.p(), 0)};
        return out;
    }

    RandomEngine eng(seed);
    out.a = draw_coefficients<double>(t.p(), opts.coefficient_bound, eng);
    out.b = draw_coefficients<double>(t.p(), opts.coefficient_bound, eng);
    const Matrix<double> ta = slice_combination(t, out.a);
    const Matrix<double> tb = slice_combination(t, out.b);
    const std::size_t r = rank(ta, opts.tol_rank);

    const auto nonzero_simple = [&](const Matrix<double>& op)
        -> std::vector<std::pair<double, Vec<double>>> {
        std::vector<EigenCluster> clusters;
        try {
            clusters = eigendecompose_impl(op, opts.tol_eig);
        } catch (const IllConditioned& e) {
            throw DegenerateSpectrum(e.what());
        }
        double scale = 0;
        for (const auto& c : clusters) scale = std::max(scale, std::abs(c.value));
        std::vector<std::pair<double, Vec<double>>> out_pairs;
        for (const auto& c : clusters) {
            if (std::abs(c.value) <= opts.tol_eig * std::max(scale, 1e-300)) continue;
            if (c.multiplicity > 1)
                throw DegenerateSpectrum("repeated nonzero eigenvalue");
            out_pairs.emplace_back(c.value, c.space.basis.col(0));
        }
        return out_pairs;
    };

    auto us = nonzero_simple(ta * pseudoinverse(tb, opts.tol_rank));
    auto vs = nonzero_simple((pseudoinverse(ta, opts.tol_rank) * tb).transpose());
    if (us.size() != r || vs.size() != r)
        throw DegenerateSpectrum("nonzero eigenvalue count differs from rank");

    // pair reciprocal eigenvalues
    std::vector<bool> used(vs.size(), false);
    std::vector<std::size_t> match(us.size());
    for (std::size_t i = 0; i < us.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t pick = vs.size();
        for (std::size_t j = 0; j < vs.size(); ++j) {
            if (used[j]) continue;
            const double resid = std::abs(us[i].first * vs[j].first - 1.0);
            if (resid < best) { best = resid; pick = j; }
        }
        if (pick == vs.size() || best > opts.tol_eig)
            throw PairingFailure("no reciprocal eigenvalue within tolerance");
        used[pick] = true;
        match[i] = pick;
        out.pairing_residuals.push_back(best);
    }

    const std::size_t m = t.m(), n = t.n(), p = t.p();
    Matrix<double> u(m, r), v(n, r);
    for (std::size_t i = 0; i < r; ++i) {
        Vec<double> ui = us[i].second;
        Vec<double> vi = vs[match[i]].second;
        for (std::size_t x = 0; x < m; ++x) u(x, i) = ui[x];
        for (std::size_t x = 0; x < n; ++x) v(x, i) = vi[x];
    }

    // w_i from the least-squares system T = sum u_i (x) v_i (x) w_i
    Eigen::MatrixXd g(static_cast<Eigen::Index>(m * n), static_cast<Eigen::Index>(r));
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t x = 0; x < m; ++x)
            for (std::size_t y = 0; y < n; ++y)
                g(static_cast<Eigen::Index>(x * n + y), static_cast<Eigen::Index>(i)) =
                    u(x, i) * v(y, i);
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(g);
    Matrix<double> w(p, r);
    for (std::size_t k = 0; k < p; ++k) {
        Eigen::VectorXd zk(static_cast<Eigen::Index>(m * n));
        for (std::size_t x = 0; x < m; ++x)
            for (std::size_t y = 0; y < n; ++y)
                zk(static_cast<Eigen::Index>(x * n + y)) = t(x, y, k);
        const Eigen::VectorXd wk = qr.solve(zk);
        for (std::size_t i = 0; i < r; ++i)
            w(k, i) = wk(static_cast<Eigen::Index>(i));
    }

    out.decomposition = {std::move(u), std::move(v), std::move(w)};
    out.reconstruction_residual =
        detail::tensor_rel_residual(reconstruct_rank_one(out.decomposition), t);
    return out;
}

inline RankOneDecomposition<double> jennrich_decompose(const Tensor3<double>& t,
                                                       std::uint64_t seed,
                                                       const DecomposeOptions& opts = {}) {
    return jennrich_decompose_detailed(t, seed, opts).decomposition;
}

} // namespace mvd
