#pragma once

#include "windregime/data.hpp"
#include "windregime/vae.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace wr {

/// Latent (8) plus 12 physical predictors.
inline constexpr int kGpInputDim = 20;

using InputVector = Eigen::Matrix<double, kGpInputDim, 1>;

/// Forecast input for hour `t` of `series`: the period latent followed by
/// wind speed, roughness, power lags t-1 and t-2 (fraction of capacity), wind
/// lags t-1 and t-2, and sin/cos encodings of hour, month and direction.
InputVector build_input_vector(const Eigen::Ref<const LatentVector>& latent, const FarmSeries& series,
                               std::size_t t);

/// Kernel hyperparameters stored as logs (except the constant mean) so they
/// can be optimised without constraints.
struct GPHyperparams {
  double log_sigma_f2 = 0.0;
  double log_sigma_n2 = std::log(0.1);
  Eigen::VectorXd log_ell_rbf;
  Eigen::VectorXd log_ell_mat;
  double mean = 0.0;

  /// sigma_f^2 = 1, sigma_n^2 = 0.1, every length-scale 1.
  static GPHyperparams defaults(Eigen::Index dim, double mean);

  [[nodiscard]] Eigen::Index dim() const { return log_ell_rbf.size(); }
  [[nodiscard]] double sigma_f2() const { return std::exp(log_sigma_f2); }
  [[nodiscard]] double sigma_n2() const { return std::exp(log_sigma_n2); }
  [[nodiscard]] Eigen::VectorXd ell_rbf() const { return log_ell_rbf.array().exp(); }
  [[nodiscard]] Eigen::VectorXd ell_mat() const { return log_ell_mat.array().exp(); }

  /// Packed as [log sf2, log sn2, log ell_rbf (dim), log ell_mat (dim), mean].
  [[nodiscard]] Eigen::VectorXd pack() const;
  static GPHyperparams unpack(const Eigen::Ref<const Eigen::VectorXd>& theta, Eigen::Index dim);

  static Eigen::Index packed_size(Eigen::Index dim) { return 2 * dim + 3; }
  static Eigen::Index noise_index() { return 1; }
  static Eigen::Index mean_index(Eigen::Index dim) { return 2 * dim + 2; }
};

/// k(a, b) = sigma_f^2 (RBF + Matern-3/2), both ARD.
double gp_kernel(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                 const GPHyperparams& hp);

Eigen::MatrixXd kernel_matrix(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b,
                              const GPHyperparams& hp);

struct MllResult {
  double value = 0.0;
  Eigen::VectorXd gradient;  // w.r.t. the packed hyperparameters
  double jitter = 0.0;
};

/// Exact log marginal likelihood of y - mean under K_y = k + sigma_n^2 I.
MllResult mll_and_grad(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                       const GPHyperparams& hp);

struct GPModel {
  int cluster_id = -1;
  GPHyperparams hp;
  Eigen::MatrixXd x;        // N x dim
  Eigen::VectorXd y;        // targets, fraction of capacity
  Eigen::MatrixXd chol;     // lower Cholesky factor of K_y
  Eigen::VectorXd alpha;    // K_y^{-1} (y - mean)
  double jitter = 0.0;
};

/// Factorises K_y for fixed hyperparameters.
GPModel condition_gp(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                     const GPHyperparams& hp, int cluster_id = -1);

/// A model with no observations: predictions are the prior (mean, 2 sigma_f^2).
GPModel prior_gp(const GPHyperparams& hp, int cluster_id = -1);

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;  // latent f variance, clamped at 0
  [[nodiscard]] double observation_variance(const GPHyperparams& hp) const { return variance + hp.sigma_n2(); }
};

Prediction predict(const GPModel& model, const Eigen::Ref<const Eigen::VectorXd>& x_star);

struct GPFitOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;
  Eigen::Index max_points = 2000;
  bool fix_noise = false;
};

struct GPFitResult {
  GPModel model;
  double initial_mll = 0.0;
  double final_mll = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Maximises the exact marginal likelihood from `hp0`. Inputs beyond
/// `max_points` keep only the most recent (last) rows.
GPFitResult fit_gp(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                   const GPHyperparams& hp0, const GPFitOptions& options = {}, int cluster_id = -1);

}  // namespace wr
