#include "windregime/farmselect.hpp"

#include "windregime/clustering.hpp"
#include "windregime/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>

namespace wr {

namespace {

constexpr double kCutIn = 3.0;
constexpr double kCutOut = 25.0;

// Linear-interpolation percentile of sorted data, q in [0, 100].
double percentile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double rank = q / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (rank - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;  // excess
};

Moments moments(const std::vector<double>& x) {
  Moments m;
  const auto n = static_cast<double>(x.size());
  m.mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (const double v : x) {
    const double d = v - m.mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  m.variance = m2;
  if (m2 > 0.0) {
    m.skewness = m3 / std::pow(m2, 1.5);
    m.kurtosis = m4 / (m2 * m2) - 3.0;
  }
  return m;
}

double autocorrelation(const std::vector<MeteoRecord>& recs, const std::vector<double>& x, int lag) {
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double var = 0.0;
  for (const double v : x) var += (v - mean) * (v - mean);
  var /= static_cast<double>(x.size());
  if (!(var > 0.0)) return 0.0;
  double cov = 0.0;
  std::size_t pairs = 0;
  std::size_t j = 0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const Timestamp want = recs[i].timestamp + lag * kSecondsPerHour;
    while (j < recs.size() && recs[j].timestamp < want) ++j;
    if (j == recs.size()) break;
    if (recs[j].timestamp == want) {
      cov += (x[i] - mean) * (x[j] - mean);
      ++pairs;
    }
  }
  if (pairs == 0) return 0.0;
  return (cov / static_cast<double>(pairs)) / var;
}

double group_mean_amplitude(const std::vector<MeteoRecord>& recs, int (*key)(Timestamp)) {
  std::map<int, std::pair<double, double>> groups;
  for (const auto& r : recs) {
    auto& g = groups[key(r.timestamp)];
    g.first += r.wind_speed;
    g.second += 1.0;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& [k, g] : groups) {
    const double m = g.first / g.second;
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  return hi - lo;
}

}  // namespace

const std::array<std::string_view, kNumFarmFeatures>& farm_feature_names() {
  static const std::array<std::string_view, kNumFarmFeatures> names = {
      "ws_mean",          "ws_var",           "ws_p05",           "ws_p25",         "ws_p50",
      "ws_p75",           "ws_p95",           "ws_skew",          "ws_kurt",        "rough_mean",
      "rough_var",        "rough_p25",        "rough_p50",        "rough_p75",      "dir_consistency",
      "dir_circular_var", "u100_mean",        "u100_var",         "v100_mean",      "v100_var",
      "power_mean",       "power_var",        "power_p25",        "power_p50",      "power_p75",
      "capacity_factor",  "efficiency",       "frac_ws_gt20",     "frac_ws_gt25",   "frac_ws_lt3",
      "rough_p99",        "diurnal_ws_amp",   "seasonal_ws_amp",  "ws_acf_lag1",    "ws_acf_lag24",
      "power_fill_ratio", "frac_at_rated",    "power_cv"};
  return names;
}

FarmFeatureVector extract_farm_features(const FarmSeries& series, std::optional<TimeWindow> window) {
  std::vector<MeteoRecord> recs = series.records;
  std::stable_sort(recs.begin(), recs.end(),
                   [](const MeteoRecord& a, const MeteoRecord& b) { return a.timestamp < b.timestamp; });
  if (window) {
    if (recs.empty() || recs.front().timestamp > window->begin ||
        recs.back().timestamp < window->end - kSecondsPerHour) {
      throw Error(ErrorCode::WindowNotCovered, series.farm_id);
    }
    std::erase_if(recs, [&](const MeteoRecord& r) { return r.timestamp < window->begin || r.timestamp >= window->end; });
  }
  if (recs.empty()) throw Error(ErrorCode::WindowNotCovered, series.farm_id + " has no records in window");

  const auto n = static_cast<double>(recs.size());
  std::vector<double> ws, rough, u, v, power;
  for (const auto& r : recs) {
    ws.push_back(r.wind_speed);
    rough.push_back(r.roughness);
    u.push_back(r.u100);
    v.push_back(r.v100);
    power.push_back(r.power);
  }
  const Moments ws_m = moments(ws);
  const Moments rough_m = moments(rough);
  const Moments u_m = moments(u);
  const Moments v_m = moments(v);
  const Moments p_m = moments(power);

  auto sorted = [](std::vector<double> x) {
    std::sort(x.begin(), x.end());
    return x;
  };
  const auto ws_s = sorted(ws);
  const auto rough_s = sorted(rough);
  const auto p_s = sorted(power);

  double sx = 0.0, cx = 0.0;
  for (const auto& r : recs) {
    const double theta = r.wind_direction * std::numbers::pi / 180.0;
    sx += std::sin(theta);
    cx += std::cos(theta);
  }
  const double resultant = std::hypot(sx / n, cx / n);

  const double cap = series.capacity;
  auto frac = [&](auto pred) {
    return static_cast<double>(std::count_if(recs.begin(), recs.end(), pred)) / n;
  };
  const double operating = frac([](const MeteoRecord& r) { return r.wind_speed >= kCutIn && r.wind_speed <= kCutOut; });
  const double capacity_factor = p_m.mean / cap;

  Eigen::Matrix<double, kNumFarmFeatures, 1> f;
  f << ws_m.mean, ws_m.variance, percentile_sorted(ws_s, 5), percentile_sorted(ws_s, 25),
      percentile_sorted(ws_s, 50), percentile_sorted(ws_s, 75), percentile_sorted(ws_s, 95), ws_m.skewness,
      ws_m.kurtosis,
      rough_m.mean, rough_m.variance, percentile_sorted(rough_s, 25), percentile_sorted(rough_s, 50),
      percentile_sorted(rough_s, 75),
      resultant, 1.0 - resultant,
      u_m.mean, u_m.variance, v_m.mean, v_m.variance,
      p_m.mean, p_m.variance, percentile_sorted(p_s, 25), percentile_sorted(p_s, 50), percentile_sorted(p_s, 75),
      capacity_factor, operating > 0.0 ? p_m.mean / (cap * operating) : 0.0,
      frac([](const MeteoRecord& r) { return r.wind_speed > 20.0; }),
      frac([](const MeteoRecord& r) { return r.wind_speed > 25.0; }),
      frac([](const MeteoRecord& r) { return r.wind_speed < 3.0; }),
      percentile_sorted(rough_s, 99),
      group_mean_amplitude(recs, &hour_of_day), group_mean_amplitude(recs, &month_of_year),
      autocorrelation(recs, ws, 1), autocorrelation(recs, ws, 24),
      frac([](const MeteoRecord& r) { return r.power > 0.0; }),
      frac([cap](const MeteoRecord& r) { return r.power >= 0.99 * cap; }),
      p_m.mean > 0.0 ? std::sqrt(p_m.variance) / p_m.mean : 0.0;
  return {series.farm_id, f};
}

Reduction reduce_dimensions(const std::vector<FarmFeatureVector>& vectors, int out_dims) {
  const auto n = static_cast<Eigen::Index>(vectors.size());
  if (out_dims < 1 || out_dims > kNumFarmFeatures) {
    throw Error(ErrorCode::InvalidArgument, "out_dims must be in [1, 38]");
  }
  if (n < out_dims + 1) {
    throw Error(ErrorCode::TooFewFarms, std::to_string(n) + " farms for " + std::to_string(out_dims) + " dimensions");
  }
  Eigen::MatrixXd x(n, kNumFarmFeatures);
  for (Eigen::Index i = 0; i < n; ++i) x.row(i) = vectors[static_cast<std::size_t>(i)].values.transpose();

  const Eigen::RowVectorXd mean = x.colwise().mean();
  x.rowwise() -= mean;
  Eigen::RowVectorXd sd = (x.array().square().colwise().sum() / static_cast<double>(n)).sqrt();
  for (Eigen::Index j = 0; j < sd.size(); ++j) {
    if (!(sd(j) > 1e-300)) sd(j) = 1.0;
  }
  x.array().rowwise() /= sd.array();

  const Eigen::MatrixXd cov = (x.transpose() * x) / static_cast<double>(n);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  // Eigen returns ascending eigenvalues.
  const Eigen::VectorXd values = eig.eigenvalues().reverse().cwiseMax(0.0);
  Eigen::MatrixXd vecs = eig.eigenvectors().rowwise().reverse();
  for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
    Eigen::Index arg = 0;
    vecs.col(c).cwiseAbs().maxCoeff(&arg);
    if (vecs(arg, c) < 0.0) vecs.col(c) *= -1.0;
  }
  const double total = values.sum();

  Reduction out;
  out.embedding = x * vecs.leftCols(out_dims);
  out.explained_variance_ratio = total > 0.0 ? Eigen::VectorXd(values.head(out_dims) / total)
                                             : Eigen::VectorXd(Eigen::VectorXd::Zero(out_dims));
  return out;
}

std::vector<int> cluster_farms(const Eigen::Ref<const Eigen::MatrixXd>& embeddings, int k) {
  return ward_cluster(embeddings, k);
}

std::vector<std::string> select_representatives(const Eigen::Ref<const Eigen::MatrixXd>& embeddings,
                                                const std::vector<int>& labels,
                                                const std::vector<std::string>& farm_ids) {
  const auto n = static_cast<std::size_t>(embeddings.rows());
  if (labels.size() != n || farm_ids.size() != n) {
    throw Error(ErrorCode::LengthMismatch, "embeddings, labels and ids must align");
  }
  const int k = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  std::vector<std::string> chosen(static_cast<std::size_t>(k));
  for (int c = 0; c < k; ++c) {
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] != c) continue;
      double total = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (labels[j] == c) {
          total += (embeddings.row(static_cast<Eigen::Index>(i)) - embeddings.row(static_cast<Eigen::Index>(j))).norm();
        }
      }
      // Sums equal up to rounding count as ties.
      const double tol = 1e-12 * std::max(1.0, std::abs(best));
      const bool tie = found && std::abs(total - best) <= tol;
      if (!found || (!tie && total < best) || (tie && farm_ids[i] < chosen[static_cast<std::size_t>(c)])) {
        best = total;
        chosen[static_cast<std::size_t>(c)] = farm_ids[i];
        found = true;
      }
    }
    if (!found) throw Error(ErrorCode::EmptyCluster, "cluster " + std::to_string(c) + " has no farms");
  }
  return chosen;
}

}  // namespace wr
