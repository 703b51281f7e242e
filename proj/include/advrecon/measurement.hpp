#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "advrecon/types.hpp"

namespace advrecon {

enum class OperatorKind : std::uint8_t { Gaussian = 0, DctRows = 1, ModifiedSpectrum = 2 };

// Full SVD in increasing order. S has length n; for a wide m x n matrix the
// first n-m entries are structural zeros, V's first n-m columns span the null
// space, and U.col(j) pairs with S(n-m+j) / V.col(n-m+j).
template <class Scalar>
struct SvdFactors {
  MatX<Scalar> U; // m x m
  VecX<Scalar> S; // length n, non-decreasing
  MatX<Scalar> V; // n x n

  Index rows() const { return U.rows(); }
  Index cols() const { return V.rows(); }

  // Count of numerically nonzero singular values.
  Index rank(Scalar rel_tol = Scalar(1e-12)) const {
    const Scalar thresh = S(S.size() - 1) * rel_tol;
    Index r = 0;
    for (Index i = 0; i < S.size(); ++i)
      if (S(i) > thresh) ++r;
    return r;
  }

  // Nonzero part of the spectrum (ascending), i.e. S without the padding.
  VecX<Scalar> nonzero() const { return S.tail(rows()); }

  MatX<Scalar> reconstruct() const {
    const Index m = rows(), n = cols();
    return U * S.tail(m).asDiagonal() * V.rightCols(m).transpose();
  }
};

template <class Scalar>
struct MeasurementOperator {
  Index m = 0;
  Index n = 0;
  MatX<Scalar> entries;
  OperatorKind kind = OperatorKind::Gaussian;
  std::int64_t seed = 0;
  std::optional<SvdFactors<Scalar>> svd;
};

using MeasurementOperatorD = MeasurementOperator<double>;

// Orthonormal type-II DCT basis, D^T D = I.
template <class Scalar>
MatX<Scalar> dct_matrix(Index p) {
  if (p <= 0) throw std::invalid_argument("dct_matrix: p must be positive");
  MatX<Scalar> D(p, p);
  const Scalar pi = Scalar(3.14159265358979323846L);
  for (Index k = 0; k < p; ++k) {
    const Scalar c = (k == 0) ? std::sqrt(Scalar(1) / Scalar(p)) : std::sqrt(Scalar(2) / Scalar(p));
    for (Index j = 0; j < p; ++j)
      D(k, j) = c * std::cos(pi * Scalar(2 * j + 1) * Scalar(k) / Scalar(2 * p));
  }
  return D;
}

MeasurementOperatorD gen_gaussian_operator(Index m, Index n, std::int64_t seed);

// Random m rows x n columns of the p x p orthonormal DCT matrix, p > n.
MeasurementOperatorD gen_dct_operator(Index m, Index n, Index p, std::int64_t seed);

// Smallest power of two strictly greater than n, the default DCT ambient size.
Index default_dct_p(Index n);

// Wrap an existing matrix (tests, identity/diagonal cases, full DCT bases).
MeasurementOperatorD make_operator(Mat entries, OperatorKind kind = OperatorKind::Gaussian,
                                   std::int64_t seed = 0);

// SVD in the padded increasing-order convention above.
template <class Scalar>
SvdFactors<Scalar> svd_of(const MatX<Scalar>& A) {
  if (!A.allFinite()) throw std::invalid_argument("svd_of: non-finite entries");
  if (A.rows() > A.cols()) throw std::invalid_argument("svd_of: expected m <= n");
  Eigen::JacobiSVD<MatX<Scalar>> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) throw std::runtime_error("svd_of: SVD did not converge");
  const Index m = A.rows(), n = A.cols();
  SvdFactors<Scalar> out;
  // Eigen returns values in decreasing order; flip the column order so the
  // spectrum reads increasing and null-space columns land in front.
  out.U = svd.matrixU().rowwise().reverse();
  out.V = svd.matrixV().rowwise().reverse();
  out.S = VecX<Scalar>::Zero(n);
  for (Index i = 0; i < m; ++i) out.S(n - 1 - i) = svd.singularValues()(i);
  return out;
}

// Cached-SVD accessor; computes and stores on first use.
const SvdFactors<double>& ensure_svd(MeasurementOperatorD& op);
SvdFactors<double> compute_svd(const MeasurementOperatorD& op);

// Replace singular values at the given indices (0 = smallest nonzero). The
// spectrum is re-sorted afterwards if the new values break monotonicity, with
// U and V columns permuted alongside.
MeasurementOperatorD modify_spectrum(const MeasurementOperatorD& op,
                                     const std::vector<std::pair<Index, double>>& replacements);

template <class Scalar, class Derived>
VecX<Scalar> apply(const MeasurementOperator<Scalar>& op, const Eigen::MatrixBase<Derived>& x) {
  if (x.rows() != op.n || x.cols() != 1)
    throw std::invalid_argument("apply: signal length must equal n");
  return op.entries * x;
}

template <class Scalar, class Derived>
VecX<Scalar> adjoint_apply(const MeasurementOperator<Scalar>& op, const Eigen::MatrixBase<Derived>& y) {
  if (y.rows() != op.m || y.cols() != 1)
    throw std::invalid_argument("adjoint_apply: measurement length must equal m");
  return op.entries.transpose() * y;
}

struct HistogramBin {
  double lower = 0;
  double upper = 0;
  std::int64_t count = 0;
};

struct ConditioningReport {
  double sigma_min = 0; // smallest nonzero singular value
  double sigma_max = 0;
  double kappa = 0;
  std::vector<HistogramBin> histogram;
};

// Histogram uses 50 equal-width bins over [sigma_min, sigma_max] of the
// nonzero spectrum (one bin when the spectrum is constant).
ConditioningReport conditioning_report(MeasurementOperatorD& op);

} // namespace advrecon
