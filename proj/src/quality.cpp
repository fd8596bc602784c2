#include "windregime/quality.hpp"

#include "windregime/error.hpp"

#include <algorithm>
#include <cmath>

namespace wr {

namespace {

/// Cluster count after checking every label in [0, k) is populated.
int checked_cluster_count(const std::vector<int>& labels, Eigen::Index n) {
  if (static_cast<Eigen::Index>(labels.size()) != n) throw Error(ErrorCode::LengthMismatch, "labels vs points");
  if (labels.empty()) throw Error(ErrorCode::EmptyInput, "no points");
  int k = 0;
  for (const int l : labels) {
    if (l < 0) throw Error(ErrorCode::InvalidArgument, "negative label");
    k = std::max(k, l + 1);
  }
  std::vector<bool> seen(static_cast<std::size_t>(k), false);
  for (const int l : labels) seen[static_cast<std::size_t>(l)] = true;
  for (int j = 0; j < k; ++j) {
    if (!seen[static_cast<std::size_t>(j)]) throw Error(ErrorCode::EmptyClass, "label " + std::to_string(j));
  }
  if (k < 2) throw Error(ErrorCode::SingleCluster, "at least two clusters required");
  return k;
}

struct Groups {
  Eigen::MatrixXd centroids;
  Eigen::VectorXd counts;
};

Groups group_means(const Eigen::Ref<const Eigen::MatrixXd>& points, const std::vector<int>& labels, int k) {
  Groups g{Eigen::MatrixXd::Zero(k, points.cols()), Eigen::VectorXd::Zero(k)};
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    g.centroids.row(l) += points.row(i);
    g.counts(l) += 1.0;
  }
  for (int j = 0; j < k; ++j) g.centroids.row(j) /= g.counts(j);
  return g;
}

}  // namespace

double silhouette(const Eigen::Ref<const Eigen::MatrixXd>& points, const std::vector<int>& labels) {
  const Eigen::Index n = points.rows();
  const int k = checked_cluster_count(labels, n);
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(k);
  for (const int l : labels) counts(l) += 1.0;

  double total = 0.0;
  Eigen::VectorXd dist_sum(k);
  for (Eigen::Index i = 0; i < n; ++i) {
    const int own = labels[static_cast<std::size_t>(i)];
    if (counts(own) <= 1.0) continue;  // singleton: s(i) = 0
    dist_sum.setZero();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j == i) continue;
      dist_sum(labels[static_cast<std::size_t>(j)]) += (points.row(i) - points.row(j)).norm();
    }
    const double a = dist_sum(own) / (counts(own) - 1.0);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
      if (c != own) b = std::min(b, dist_sum(c) / counts(c));
    }
    const double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

DaviesBouldin davies_bouldin(const Eigen::Ref<const Eigen::MatrixXd>& points, const std::vector<int>& labels) {
  const int k = checked_cluster_count(labels, points.rows());
  const Groups g = group_means(points, labels, k);
  Eigen::VectorXd scatter = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const int l = labels[static_cast<std::size_t>(i)];
    scatter(l) += (points.row(i) - g.centroids.row(l)).norm();
  }
  scatter.array() /= g.counts.array();

  double total = 0.0;
  for (int i = 0; i < k; ++i) {
    double worst = 0.0;
    for (int j = 0; j < k; ++j) {
      if (i == j) continue;
      const double sep = (g.centroids.row(i) - g.centroids.row(j)).norm();
      if (!(sep > 0.0)) {
        throw Error(ErrorCode::CoincidentCentroids, "clusters " + std::to_string(i) + " and " + std::to_string(j));
      }
      worst = std::max(worst, (scatter(i) + scatter(j)) / sep);
    }
    total += worst;
  }
  DaviesBouldin out;
  out.index = total / static_cast<double>(k);
  out.normalized = 1.0 / (1.0 + out.index);
  return out;
}

CalinskiHarabasz calinski_harabasz(const Eigen::Ref<const Eigen::MatrixXd>& points, const std::vector<int>& labels) {
  const Eigen::Index n = points.rows();
  const int k = checked_cluster_count(labels, n);
  const Groups g = group_means(points, labels, k);
  const Eigen::RowVectorXd grand = points.colwise().mean();
  double between = 0.0;
  for (int j = 0; j < k; ++j) between += g.counts(j) * (g.centroids.row(j) - grand).squaredNorm();
  double within = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    within += (points.row(i) - g.centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  CalinskiHarabasz out;
  if (!(within > 0.0) || n == k) {
    out.index = std::numeric_limits<double>::infinity();
    out.normalized = 1.0;
    return out;
  }
  out.index = (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
  out.normalized = std::clamp(std::log1p(out.index) / std::log1p(static_cast<double>(n)), 0.0, 1.0);
  return out;
}

double anova_f(const Eigen::Ref<const Eigen::VectorXd>& values, const std::vector<int>& labels) {
  const Eigen::Index n = values.size();
  const int k = checked_cluster_count(labels, n);
  const Groups g = group_means(values, labels, k);
  const double grand = values.mean();
  double between = 0.0;
  for (int j = 0; j < k; ++j) between += g.counts(j) * std::pow(g.centroids(j, 0) - grand, 2);
  double within = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    within += std::pow(values(i) - g.centroids(labels[static_cast<std::size_t>(i)], 0), 2);
  }
  if (!(within > 0.0) || n <= k) return between > 0.0 ? kAnovaFCap : 0.0;
  return (between / static_cast<double>(k - 1)) / (within / static_cast<double>(n - k));
}

double meteorological_separability(const std::vector<PeriodSummary>& periods, const std::vector<int>& labels) {
  const auto n = static_cast<Eigen::Index>(periods.size());
  Eigen::VectorXd wind(n), variability(n), power(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = periods[static_cast<std::size_t>(i)];
    wind(i) = s.mean_wind;
    variability(i) = s.wind_variance;
    power(i) = s.mean_power;
  }
  const double f_mean = (anova_f(wind, labels) + anova_f(variability, labels) + anova_f(power, labels)) / 3.0;
  return std::clamp(std::log1p(f_mean) / std::log1p(kAnovaFCap), 0.0, 1.0);
}

double lag1_autocorrelation(const Eigen::Ref<const Eigen::VectorXd>& series) {
  const Eigen::Index n = series.size();
  if (n < 2) return 1.0;
  const double mean = series.mean();
  const Eigen::VectorXd d = series.array() - mean;
  const double var = d.squaredNorm() / static_cast<double>(n);
  if (!(var > 0.0)) return 1.0;
  const double cov = d.head(n - 1).dot(d.tail(n - 1)) / static_cast<double>(n - 1);
  return cov / var;
}

double temporal_coherence(const std::vector<int>& labels) {
  if (labels.size() < 3) throw Error(ErrorCode::InvalidArgument, "temporal coherence needs >= 3 periods");
  int k = 0;
  for (const int l : labels) k = std::max(k, l + 1);
  const auto n = static_cast<Eigen::Index>(labels.size());
  double total = 0.0;
  for (int c = 0; c < k; ++c) {
    Eigen::VectorXd indicator(n);
    for (Eigen::Index i = 0; i < n; ++i) indicator(i) = labels[static_cast<std::size_t>(i)] == c ? 1.0 : 0.0;
    const double share = indicator.sum() / static_cast<double>(n);
    if (share == 0.0) continue;
    total += share * lag1_autocorrelation(indicator);
  }
  return std::clamp(total, 0.0, 1.0);
}

double jensen_shannon(const Eigen::Ref<const Eigen::VectorXd>& p, const Eigen::Ref<const Eigen::VectorXd>& q) {
  if (p.size() != q.size()) throw Error(ErrorCode::LengthMismatch, "distribution sizes differ");
  const double sp = p.sum(), sq = q.sum();
  if (!(sp > 0.0) || !(sq > 0.0)) throw Error(ErrorCode::EmptyInput, "empty distribution");
  double js = 0.0;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double a = p(i) / sp, b = q(i) / sq, m = 0.5 * (a + b);
    if (a > 0.0) js += 0.5 * a * std::log2(a / m);
    if (b > 0.0) js += 0.5 * b * std::log2(b / m);
  }
  return std::clamp(js, 0.0, 1.0);
}

double distribution_consistency(const std::vector<int>& train_labels, const std::vector<int>& test_labels, int k) {
  if (train_labels.empty() || test_labels.empty()) throw Error(ErrorCode::EmptyInput, "label set is empty");
  Eigen::VectorXd p = Eigen::VectorXd::Zero(k), q = Eigen::VectorXd::Zero(k);
  for (const int l : train_labels) {
    if (l < 0 || l >= k) throw Error(ErrorCode::InvalidArgument, "label outside [0, K)");
    p(l) += 1.0;
  }
  for (const int l : test_labels) {
    if (l < 0 || l >= k) throw Error(ErrorCode::InvalidArgument, "label outside [0, K)");
    q(l) += 1.0;
  }
  return std::clamp(1.0 - jensen_shannon(p, q), 0.0, 1.0);
}

double composite_score(const QualityComponents& c) {
  const std::array<const std::optional<double>*, 6> parts = {
      &c.silhouette, &c.davies_bouldin, &c.calinski_harabasz, &c.meteorological, &c.temporal, &c.distribution};
  static constexpr std::array<const char*, 6> names = {"S", "D~", "C~", "M~", "T", "H"};
  double q = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (!parts[i]->has_value()) throw Error(ErrorCode::MissingComponent, names[i]);
    q += kQualityWeights[i] * parts[i]->value();
  }
  return q;
}

}  // namespace wr
