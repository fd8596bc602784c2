#pragma once

#include "windregime/data.hpp"
#include "windregime/eval.hpp"
#include "windregime/gp.hpp"
#include "windregime/library.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace wr {

/// Chronological split of period indices: the first ceil(gamma * n) train.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

Split split_fraction(std::size_t n, double gamma);

/// One hourly forecast target. `y` is power as a fraction of capacity.
struct ForecastSample {
  std::size_t period = 0;
  std::size_t hour = 0;  // index into FarmSeries::records
  Timestamp timestamp = 0;
  int cluster = 0;
  InputVector x;
  double y = 0.0;
};

/// A farm seen through a frozen encoder: its periods, their latents and
/// nearest-centroid labels.
struct ProjectedFarm {
  std::vector<Period> periods;
  Embedding embedding;
  std::vector<int> labels;
};

/// Periods are standardised with the library's own statistics.
ProjectedFarm project_and_align(const VAEModel& vae, const ClusterModel& clusters, const FarmSeries& series);

/// Hourly samples of the selected periods; each hour uses the latent of its
/// period. Hours without two preceding hours are skipped.
std::vector<ForecastSample> build_samples(const FarmSeries& series, const ProjectedFarm& projected,
                                          const std::vector<std::size_t>& period_indices);

struct SampleMatrix {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
};

/// Samples of one cluster (all when cluster < 0), in the given order.
SampleMatrix gather(const std::vector<ForecastSample>& samples, int cluster = -1);

struct SourceOptions {
  int k = 8;
  VAEConfig vae;
  GPFitOptions gp;
  double train_fraction = 0.8;
  Eigen::Index max_ward_points = 3000;
  std::size_t min_points = 10;
};

struct SourceTraining {
  SourceLibrary library;
  std::vector<EpochLog> vae_log;
  std::vector<int> train_labels;  // source training periods, farm by farm
  std::vector<int> test_labels;   // held-out source periods, farm by farm
};

/// Trains the encoder on the first `train_fraction` of every farm's periods,
/// clusters their latents and fits one GP per cluster on the pooled hours.
SourceTraining train_source_library(const std::vector<FarmSeries>& farms, const SourceOptions& options);

struct FinetuneResult {
  GPModel model;
  bool tuned = false;  // false: source model returned unchanged
  double initial_mll = 0.0;
  double final_mll = 0.0;
};

/// Re-optimises the source GP on target data from the source hyperparameters
/// with sigma_n^2 frozen. Fewer than `min_points` samples returns the source.
FinetuneResult finetune_gp(const GPModel& source, const SampleMatrix& target, const GPFitOptions& options,
                           std::size_t min_points = 10);

/// From-scratch baseline: default hyperparameters with c = train mean and
/// free noise. With fewer than `min_points` samples the defaults are kept.
GPModel fit_baseline_gp(const SampleMatrix& train, double fallback_mean, int cluster_id, const GPFitOptions& options,
                        std::size_t min_points = 10);

using Predictor = std::function<double(const ForecastSample&)>;

struct ForecastMetrics {
  std::vector<MetricRow> clusters;  // clusters with test samples, by id
  MetricRow aggregate;
};

/// Scores a predictor (fraction of capacity) on `samples` in MW.
ForecastMetrics evaluate_predictor(const std::vector<ForecastSample>& samples, double capacity, int k,
                                   const Predictor& predictor);

/// Predictor backed by one GP per cluster.
Predictor gp_predictor(const std::vector<GPModel>& models);

/// Scores the library on the held-out (last 1 - train_fraction) periods of a source farm.
ForecastMetrics evaluate_source(const SourceLibrary& library, const FarmSeries& farm, double train_fraction);

struct ClusterTransfer {
  int cluster = 0;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  bool tuned = false;
  GPHyperparams source_hp;
  GPHyperparams target_hp;
};

struct TransferResult {
  std::string farm_id;
  double gamma = 0.0;
  std::uint64_t seed = 0;
  Split split;
  std::vector<int> labels;  // per target period
  std::vector<ClusterTransfer> clusters;
  ForecastMetrics transfer;
  ForecastMetrics baseline;
};

struct TransferOptions {
  GPFitOptions gp;
  std::size_t min_points = 10;
};

TransferResult run_transfer_experiment(const SourceLibrary& library, const FarmSeries& target, double gamma,
                                       std::uint64_t seed, const TransferOptions& options = {});

enum class Method { kTransfer, kBaseline };

/// Columns farm, seed, gamma, cluster, n_test, mae_pct, rmse, r2; each
/// experiment ends with its "all" row.
void write_transfer_csv(const std::vector<TransferResult>& results, Method method, const std::filesystem::path& path);

}  // namespace wr
