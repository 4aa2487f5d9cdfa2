#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "matrix.hpp"

namespace mvd {

inline constexpr double kDefaultRankTol = 1e-9;
inline constexpr double kDefaultEigTol = 1e-8;

namespace detail {

inline Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
    Eigen::MatrixXd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
    return e;
}

inline Matrix<double> from_eigen(const Eigen::MatrixXd& e) {
    Matrix<double> m(static_cast<std::size_t>(e.rows()), static_cast<std::size_t>(e.cols()));
    for (Eigen::Index i = 0; i < e.rows(); ++i)
        for (Eigen::Index j = 0; j < e.cols(); ++j)
            m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = e(i, j);
    return m;
}

inline std::size_t svd_rank(const Matrix<double>& m, double tol) {
    if (m.rows() == 0 || m.cols() == 0) return 0;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0.0) return 0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++r;
    return r;
}

inline Subspace<double> svd_nullspace(const Matrix<double>& m, double tol) {
    const std::size_t n = m.cols();
    if (m.rows() == 0 || n == 0)
        return {n, Matrix<double>::identity(n)};
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m), Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (smax > 0.0 && sv(i) > tol * smax) ++r;
    const Eigen::MatrixXd basis =
        svd.matrixV().rightCols(static_cast<Eigen::Index>(n - r));
    return {n, from_eigen(basis)};
}

inline Subspace<double> svd_image(const Matrix<double>& m, double tol) {
    const std::size_t rows = m.rows();
    if (rows == 0 || m.cols() == 0) return {rows, Matrix<double>(rows, 0)};
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m), Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    std::size_t r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (smax > 0.0 && sv(i) > tol * smax) ++r;
    const Eigen::MatrixXd basis = svd.matrixU().leftCols(static_cast<Eigen::Index>(r));
    return {rows, from_eigen(basis)};
}

inline Matrix<double> pseudoinverse_impl(const Matrix<double>& m, double tol) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m),
                                          Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (smax > 0.0 && sv(i) > tol * smax) inv(i) = 1.0 / sv(i);
    return from_eigen(svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose());
}

/// Basis of the k-dimensional near-nullspace of m: the right singular
/// vectors of the k smallest singular values.
inline Subspace<double> smallest_singular_subspace(const Matrix<double>& m, std::size_t k) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m), Eigen::ComputeFullV);
    const Eigen::MatrixXd basis = svd.matrixV().rightCols(static_cast<Eigen::Index>(k));
    return {m.cols(), from_eigen(basis)};
}

inline double frobenius(const Matrix<double>& m) {
    double s = 0;
    for (const double& x : m.entries()) s += x * x;
    return std::sqrt(s);
}

} // namespace detail

/// One eigenvalue cluster of a (near-)diagonalizable matrix.
struct EigenCluster {
    double value = 0;            // cluster mean
    std::size_t multiplicity = 0; // number of eigenvalues in the cluster
    Subspace<double> space;      // eigenspace basis
};

/// Eigendecomposition for the float pipeline: eigenvalues are clustered with
/// relative tolerance tol_eig, eigenspaces are extracted as the smallest
/// singular subspace of (M - lambda I), and the result is validated by
/// reassembly. The input must be diagonalizable with a real spectrum.
inline std::vector<EigenCluster> eigendecompose_impl(const Matrix<double>& m,
                                                     double tol_eig = kDefaultEigTol,
                                                     double reassembly_tol = 1e-6) {
    if (m.rows() != m.cols()) throw SizeMismatch("eigendecompose needs a square matrix");
    const std::size_t n = m.rows();
    if (n == 0) return {};

    const Eigen::MatrixXd a = detail::to_eigen(m);
    Eigen::EigenSolver<Eigen::MatrixXd> es(a);
    if (es.info() != Eigen::Success) throw IllConditioned("eigensolver failed");

    std::vector<double> vals(n);
    double scale = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> l = es.eigenvalues()(static_cast<Eigen::Index>(i));
        scale = std::max(scale, std::abs(l));
        vals[i] = l.real();
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::complex<double> l = es.eigenvalues()(static_cast<Eigen::Index>(i));
        if (std::abs(l.imag()) > tol_eig * std::max(scale, 1e-300))
            throw IllConditioned("complex eigenvalues; matrix not diagonalizable over R");
    }
    std::sort(vals.begin(), vals.end());

    std::vector<EigenCluster> clusters;
    if (scale == 0.0) {
        clusters.push_back({0.0, n, {n, Matrix<double>::identity(n)}});
        return clusters;
    }
    std::size_t start = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        if (i == n || std::abs(vals[i] - vals[i - 1]) > tol_eig * scale) {
            double mean = 0;
            for (std::size_t j = start; j < i; ++j) mean += vals[j];
            mean /= static_cast<double>(i - start);
            EigenCluster c;
            c.value = mean;
            c.multiplicity = i - start;
            Matrix<double> shifted = m - Matrix<double>::identity(n).scaled(mean);
            c.space = detail::smallest_singular_subspace(shifted, c.multiplicity);
            clusters.push_back(std::move(c));
            start = i;
        }
    }

    // reassembly check: A P = P D must hold for the eigenbasis P
    std::vector<Matrix<double>> bases;
    Eigen::VectorXd diag(static_cast<Eigen::Index>(n));
    std::size_t col = 0;
    for (const auto& c : clusters) {
        bases.push_back(c.space.basis);
        for (std::size_t j = 0; j < c.space.dim(); ++j)
            diag(static_cast<Eigen::Index>(col++)) = c.value;
    }
    if (col != n) throw IllConditioned("eigenspace dimensions do not sum to n");
    const Eigen::MatrixXd P = detail::to_eigen(Matrix<double>::hcat(bases));
    const double resid = (a * P - P * diag.asDiagonal()).norm();
    if (resid > reassembly_tol * std::max(1.0, a.norm()))
        throw IllConditioned("eigendecomposition reassembly residual too large");
    return clusters;
}

/// Largest principal angle between two subspaces of equal dimension,
/// in radians. Returns pi/2 for dimension mismatches.
inline double principal_angle(const Subspace<double>& s1, const Subspace<double>& s2) {
    if (s1.ambient != s2.ambient) throw AmbientMismatch("principal angle ambient dims");
    if (s1.dim() != s2.dim()) return std::acos(0.0);
    if (s1.dim() == 0) return 0.0;
    const Eigen::MatrixXd q1 =
        Eigen::HouseholderQR<Eigen::MatrixXd>(detail::to_eigen(s1.basis))
            .householderQ() *
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(s1.ambient),
                                  static_cast<Eigen::Index>(s1.dim()));
    const Eigen::MatrixXd q2 =
        Eigen::HouseholderQR<Eigen::MatrixXd>(detail::to_eigen(s2.basis))
            .householderQ() *
        Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(s2.ambient),
                                  static_cast<Eigen::Index>(s2.dim()));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(q1.transpose() * q2);
    const double c = std::clamp(svd.singularValues().minCoeff(), -1.0, 1.0);
    return std::acos(c);
}

} // namespace mvd
