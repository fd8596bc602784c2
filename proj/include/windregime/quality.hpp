#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace wr {

/// Weights of (S, D~, C~, M~, T, H) in the composite score.
inline constexpr std::array<double, 6> kQualityWeights = {0.2, 0.2, 0.2, 0.25, 0.1, 0.05};

/// Upper reference F for the separability normalisation.
inline constexpr double kAnovaFCap = 1000.0;

double silhouette(const Eigen::Ref<const Eigen::MatrixXd>& points, const std::vector<int>& labels);

struct DaviesBouldin {
  double index = 0.0;       // DB >= 0, lower is better
  double normalized = 0.0;  // 1 / (1 + DB)
};
DaviesBouldin davies_bouldin(const Eigen::Ref<const Eigen::MatrixXd>& points, const std::vector<int>& labels);

struct CalinskiHarabasz {
  double index = 0.0;       // +inf when within-cluster dispersion is zero
  double normalized = 0.0;  // log(1 + CH) / log(1 + n), clamped to [0, 1]
};
CalinskiHarabasz calinski_harabasz(const Eigen::Ref<const Eigen::MatrixXd>& points, const std::vector<int>& labels);

/// Classical one-way ANOVA F statistic of `values` grouped by `labels`.
/// Zero within-group variance yields kAnovaFCap (or 0 when groups are also equal).
double anova_f(const Eigen::Ref<const Eigen::VectorXd>& values, const std::vector<int>& labels);

/// Per-period summaries used by the separability score.
struct PeriodSummary {
  double mean_wind = 0.0;
  double wind_variance = 0.0;
  double mean_power = 0.0;  // fraction of capacity
};

/// log(1 + mean F) / log(1 + F_cap) over mean wind, wind variance and mean power.
double meteorological_separability(const std::vector<PeriodSummary>& periods, const std::vector<int>& labels);

/// Share-weighted lag-1 autocorrelation of the per-cluster membership indicators.
double temporal_coherence(const std::vector<int>& labels_in_time_order);

/// Lag-1 autocorrelation: mean lagged product over n-1 pairs divided by the
/// variance over n points. Constant series give 1.
double lag1_autocorrelation(const Eigen::Ref<const Eigen::VectorXd>& series);

/// Base-2 Jensen-Shannon divergence between two discrete distributions.
double jensen_shannon(const Eigen::Ref<const Eigen::VectorXd>& p, const Eigen::Ref<const Eigen::VectorXd>& q);

/// 1 - JSD of the cluster proportions of two label sets.
double distribution_consistency(const std::vector<int>& train_labels, const std::vector<int>& test_labels, int k);

struct QualityComponents {
  std::optional<double> silhouette;
  std::optional<double> davies_bouldin;       // normalised
  std::optional<double> calinski_harabasz;    // normalised
  std::optional<double> meteorological;       // normalised
  std::optional<double> temporal;
  std::optional<double> distribution;
};

double composite_score(const QualityComponents& components);

struct QualityReport {
  int p = 0;
  int k = 0;
  std::uint64_t seed = 0;
  double s = 0.0;
  double d_tilde = 0.0;
  double c_tilde = 0.0;
  double m_tilde = 0.0;
  double t = 0.0;
  double h = 0.0;
  double q = 0.0;
};

}  // namespace wr
