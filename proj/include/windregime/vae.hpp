#pragma once

#include "windregime/autodiff.hpp"
#include "windregime/data.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace wr {

inline constexpr int kLatentDim = 8;
inline constexpr int kConv1Kernel = 5;
inline constexpr int kConv2Kernel = 3;

using LatentVector = Eigen::Matrix<double, kLatentDim, 1>;

struct VAEConfig {
  int p = 6;
  int conv1_channels = 16;
  int conv2_channels = 32;
  int hidden = 64;
  double beta_start = 0.01;
  double beta_end = 1.0;
  double anneal_fraction = 0.5;  // share of max_epochs over which beta ramps up
  int max_epochs = 200;
  int batch_size = 64;
  double learning_rate = 1e-3;
  double weight_decay = 1e-4;
  int patience = 20;
  double validation_fraction = 0.1;
  std::uint64_t seed = 42;

  void validate() const;
};

/// Beta used at a 0-based epoch: linear from beta_start to beta_end over the
/// annealing window, constant afterwards.
double beta_at_epoch(const VAEConfig& config, int epoch);

/// Named dense tensors in a fixed insertion order.
class ParameterSet {
 public:
  Eigen::MatrixXd& add(const std::string& name, Eigen::MatrixXd value);
  [[nodiscard]] const Eigen::MatrixXd& at(const std::string& name) const;
  Eigen::MatrixXd& at(const std::string& name);
  [[nodiscard]] const std::vector<std::string>& names() const { return order_; }
  [[nodiscard]] Eigen::Index total_size() const;

  [[nodiscard]] Eigen::VectorXd flatten() const;
  void unflatten(const Eigen::Ref<const Eigen::VectorXd>& flat);
  [[nodiscard]] ParameterSet zeros_like() const;

  bool operator==(const ParameterSet& other) const;

 private:
  std::map<std::string, Eigen::MatrixXd> tensors_;
  std::vector<std::string> order_;
};

struct VAEModel {
  VAEConfig config;
  FeatureStats stats;
  ParameterSet params;
};

struct EpochLog {
  int epoch = 0;
  double reconstruction = 0.0;  // mean squared error per element
  double kl = 0.0;              // mean KL per sample
  double beta = 0.0;
  double validation_reconstruction = 0.0;
};

struct TrainResult {
  VAEModel model;
  std::vector<EpochLog> log;
  int best_epoch = 0;
};

/// Fresh parameters drawn uniformly in +-1/sqrt(fan_in).
VAEModel init_vae(const VAEConfig& config, const FeatureStats& stats);

struct Encoding {
  LatentVector mu;
  LatentVector logvar;
};

Encoding encode(const VAEModel& model, const Eigen::Ref<const Eigen::MatrixXd>& x);
/// Batched posterior means: one row per period.
Eigen::MatrixXd encode_means(const VAEModel& model, const std::vector<Period>& standardized);
Eigen::MatrixXd decode(const VAEModel& model, const Eigen::Ref<const LatentVector>& z);

template <typename DerivedMu, typename DerivedLv, typename DerivedEps>
LatentVector reparameterize(const Eigen::MatrixBase<DerivedMu>& mu, const Eigen::MatrixBase<DerivedLv>& logvar,
                            const Eigen::MatrixBase<DerivedEps>& eps) {
  return (mu.array() + (0.5 * logvar.array()).exp() * eps.array()).matrix();
}

/// KL(N(mu, diag(exp(logvar))) || N(0, I)).
template <typename DerivedMu, typename DerivedLv>
double kl_divergence(const Eigen::MatrixBase<DerivedMu>& mu, const Eigen::MatrixBase<DerivedLv>& logvar) {
  return 0.5 * (logvar.array().exp() + mu.array().square() - 1.0 - logvar.array()).sum();
}

/// Mean squared reconstruction error per element plus beta * KL.
double vae_loss(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::MatrixXd>& xhat,
                const Eigen::Ref<const Eigen::VectorXd>& mu, const Eigen::Ref<const Eigen::VectorXd>& logvar,
                double beta);

struct BatchLoss {
  double total = 0.0;
  double reconstruction = 0.0;
  double kl = 0.0;
};

/// Loss of a batch with fixed noise draws `eps` (latent x batch); when `grads`
/// is non-null the parameter gradients are accumulated into it.
BatchLoss batch_loss(const VAEModel& model, const std::vector<const Eigen::MatrixXd*>& batch,
                     const Eigen::MatrixXd& eps, double beta, ParameterSet* grads);

TrainResult train_vae(const std::vector<Period>& standardized, const VAEConfig& config, const FeatureStats& stats);

struct Embedding {
  Eigen::MatrixXd raw;         // n x 8 posterior means
  Eigen::MatrixXd normalized;  // n x 8, unit rows (zero rows stay zero)
  std::size_t zero_rows = 0;
};

Embedding embed_periods(const VAEModel& model, const std::vector<Period>& standardized);

/// Row-wise L2 normalisation; zero rows map to zero.
Eigen::MatrixXd l2_normalize_rows(const Eigen::Ref<const Eigen::MatrixXd>& x, std::size_t* zero_rows = nullptr);

}  // namespace wr
