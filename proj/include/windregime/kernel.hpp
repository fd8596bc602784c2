#pragma once

#include <Eigen/Dense>

#include <cmath>

namespace wr::kernel {

template <typename Scalar>
inline constexpr Scalar kSqrt3 = Scalar(1.7320508075688772935274463415058723);

/// sum_i ((a_i - b_i) / ell_i)^2
template <typename DerivedA, typename DerivedB, typename DerivedL>
typename DerivedA::Scalar scaled_sq_dist(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                                         const Eigen::MatrixBase<DerivedL>& ell) {
  return ((a - b).array() / ell.array()).square().sum();
}

/// Squared-exponential correlation for a scaled squared distance.
template <typename Scalar>
Scalar rbf(Scalar r2) {
  using std::exp;
  return exp(Scalar(-0.5) * r2);
}

/// Matern nu = 3/2 correlation (1 + sqrt(3) r) exp(-sqrt(3) r) for a scaled squared distance.
template <typename Scalar>
Scalar matern32(Scalar r2) {
  using std::exp;
  using std::sqrt;
  const Scalar s = kSqrt3<Scalar> * sqrt(r2);
  return (Scalar(1) + s) * exp(-s);
}

/// d matern32 / d log(ell_i) divided by the per-dimension term (d_i / ell_i)^2:
/// 3 exp(-sqrt(3) r).
template <typename Scalar>
Scalar matern32_log_ell_weight(Scalar r2) {
  using std::exp;
  using std::sqrt;
  return Scalar(3) * exp(-kSqrt3<Scalar> * sqrt(r2));
}

/// Composite ARD kernel sigma_f^2 (RBF(ell_rbf) + Matern32(ell_mat)).
template <typename DerivedA, typename DerivedB, typename DerivedL1, typename DerivedL2>
typename DerivedA::Scalar composite(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
                                    typename DerivedA::Scalar sigma_f2, const Eigen::MatrixBase<DerivedL1>& ell_rbf,
                                    const Eigen::MatrixBase<DerivedL2>& ell_mat) {
  return sigma_f2 * (rbf(scaled_sq_dist(a, b, ell_rbf)) + matern32(scaled_sq_dist(a, b, ell_mat)));
}

/// Matrix of pairwise scaled squared distances between rows of `a` and `b`.
template <typename DerivedA, typename DerivedB, typename DerivedL>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> scaled_sq_dists(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b,
    const Eigen::MatrixBase<DerivedL>& ell) {
  using Scalar = typename DerivedA::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> inv = ell.cwiseInverse().transpose();
  // Column-major copies so each point is contiguous.
  const Mat as = (a.array().rowwise() * inv.array()).matrix().transpose();
  const Mat bs = (b.array().rowwise() * inv.array()).matrix().transpose();
  // Direct differences keep coincident rows at exactly zero distance.
  Mat d(as.cols(), bs.cols());
  for (Eigen::Index j = 0; j < bs.cols(); ++j) {
    for (Eigen::Index i = 0; i < as.cols(); ++i) d(i, j) = (as.col(i) - bs.col(j)).squaredNorm();
  }
  return d;
}

}  // namespace wr::kernel
