#include "windregime/grid_search.hpp"

#include "windregime/clustering.hpp"
#include "windregime/error.hpp"
#include "windregime/log.hpp"
#include "windregime/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>

namespace wr {

namespace {

PeriodSummary summarize(const Period& period, double capacity) {
  const Eigen::VectorXd wind = period.features.col(kWindSpeed);
  PeriodSummary s;
  s.mean_wind = wind.mean();
  s.wind_variance = (wind.array() - s.mean_wind).square().mean();
  s.mean_power = period.power.mean() / capacity;
  return s;
}

}  // namespace

PeriodEmbedding embed_for_grid(const std::vector<FarmSeries>& farms, int p, std::uint64_t seed,
                               const GridSearchOptions& options) {
  if (farms.empty()) throw Error(ErrorCode::EmptyInput, "no farms for grid search");
  std::vector<Period> train, test;
  PeriodEmbedding out;
  out.p = p;
  out.seed = seed;
  for (const auto& farm : farms) {
    const auto periods = segment_periods(farm, p);
    const auto n_train = std::min(
        periods.size(), static_cast<std::size_t>(std::ceil(options.train_fraction * static_cast<double>(periods.size()) - 1e-9)));
    for (std::size_t i = 0; i < periods.size(); ++i) {
      if (i < n_train) {
        train.push_back(periods[i]);
        out.train_summary.push_back(summarize(periods[i], farm.capacity));
      } else {
        test.push_back(periods[i]);
      }
    }
    out.farm_train_counts.push_back(n_train);
  }
  if (train.empty() || test.empty()) {
    throw Error(ErrorCode::EmptySplit, "p=" + std::to_string(p) + " leaves an empty train or test set");
  }
  VAEConfig config = options.vae;
  config.p = p;
  config.seed = seed;
  const FeatureStats stats = fit_standardizer(train);
  const auto std_train = apply_standardizer(train, stats);
  const TrainResult trained = train_vae(std_train, config, stats);
  out.train_latent = embed_periods(trained.model, std_train).normalized;
  out.test_latent = embed_periods(trained.model, apply_standardizer(test, stats)).normalized;
  log::info("grid: embedded p=" + std::to_string(p) + " seed=" + std::to_string(seed));
  return out;
}

CellOutcome evaluate_cell(const PeriodEmbedding& embedding, int k, const GridSearchOptions& options) {
  const ClusterModel model = fit_cluster_model(embedding.train_latent, k, options.max_ward_points);
  const std::vector<int> test_labels = assign_clusters(embedding.test_latent, model.centroids);
  CellOutcome out;
  out.train_labels = model.labels;
  QualityReport& r = out.report;
  r.p = embedding.p;
  r.k = k;
  r.seed = embedding.seed;
  r.s = silhouette(embedding.train_latent, model.labels);
  r.d_tilde = davies_bouldin(embedding.train_latent, model.labels).normalized;
  r.c_tilde = calinski_harabasz(embedding.train_latent, model.labels).normalized;
  r.m_tilde = meteorological_separability(embedding.train_summary, model.labels);
  r.t = temporal_coherence(model.labels);
  r.h = distribution_consistency(model.labels, test_labels, k);
  r.q = composite_score({r.s, r.d_tilde, r.c_tilde, r.m_tilde, r.t, r.h});
  return out;
}

double GridSearchResult::mean_of(int p, int k, double QualityReport::*field) const {
  double sum = 0.0;
  int count = 0;
  for (const auto& c : cells) {
    if (c.report.p == p && c.report.k == k) {
      sum += c.report.*field;
      ++count;
    }
  }
  if (count == 0) throw Error(ErrorCode::InvalidArgument, "no reports for the requested cell");
  return sum / count;
}

GridSearchResult grid_search(const std::vector<FarmSeries>& farms, const GridSearchOptions& options) {
  if (options.p_grid.empty() || options.k_grid.empty() || options.seeds.empty()) {
    throw Error(ErrorCode::InvalidArgument, "grid search needs non-empty p, K and seed lists");
  }
  const std::set<int> ps(options.p_grid.begin(), options.p_grid.end());
  const std::set<int> ks(options.k_grid.begin(), options.k_grid.end());
  std::vector<std::pair<int, std::uint64_t>> jobs;
  for (const int p : ps) {
    for (const auto seed : options.seeds) jobs.emplace_back(p, seed);
  }
  // The encoder depends on (p, seed) only, so one training serves every k.
  std::vector<std::vector<CellOutcome>> per_job(jobs.size());
  parallel_for(jobs.size(), [&](std::size_t j) {
    const PeriodEmbedding e = embed_for_grid(farms, jobs[j].first, jobs[j].second, options);
    for (const int k : ks) per_job[j].push_back(evaluate_cell(e, k, options));
  });

  GridSearchResult result;
  for (auto& cells : per_job) {
    for (auto& c : cells) result.cells.push_back(std::move(c));
  }
  bool first = true;
  for (const int p : ps) {
    for (const int k : ks) {
      const double q = result.mean_of(p, k, &QualityReport::q);
      if (first || q > result.best_q) {
        result.best_p = p;
        result.best_k = k;
        result.best_q = q;
        first = false;
      }
    }
  }
  return result;
}

namespace {

void write_table(const GridSearchResult& result, const std::set<int>& ps, const std::set<int>& ks,
                 double QualityReport::*field, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "p";
  for (const int k : ks) out << ",K=" << k;
  out << '\n';
  char buf[32];
  for (const int p : ps) {
    out << p;
    for (const int k : ks) {
      std::snprintf(buf, sizeof buf, "%.6f", result.mean_of(p, k, field));
      out << ',' << buf;
    }
    out << '\n';
  }
}

}  // namespace

void write_grid_reports(const GridSearchResult& result, const GridSearchOptions& options,
                        const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const std::set<int> ps(options.p_grid.begin(), options.p_grid.end());
  const std::set<int> ks(options.k_grid.begin(), options.k_grid.end());
  const std::vector<std::pair<const char*, double QualityReport::*>> metrics = {
      {"silhouette", &QualityReport::s},   {"davies_bouldin", &QualityReport::d_tilde},
      {"calinski_harabasz", &QualityReport::c_tilde}, {"separability", &QualityReport::m_tilde},
      {"temporal_coherence", &QualityReport::t}, {"distribution_consistency", &QualityReport::h},
      {"composite", &QualityReport::q},
  };
  for (const auto& [name, field] : metrics) write_table(result, ps, ks, field, dir / (std::string(name) + ".csv"));

  std::ofstream out(dir / "reports.csv");
  if (!out) throw Error(ErrorCode::IoError, "cannot write reports.csv");
  out << "p,K,seed,S,D_tilde,C_tilde,M_tilde,T,H,Q\n";
  char buf[256];
  for (const auto& c : result.cells) {
    const auto& r = c.report;
    std::snprintf(buf, sizeof buf, "%d,%d,%llu,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g\n", r.p, r.k,
                  static_cast<unsigned long long>(r.seed), r.s, r.d_tilde, r.c_tilde, r.m_tilde, r.t, r.h, r.q);
    out << buf;
  }
}

}  // namespace wr
