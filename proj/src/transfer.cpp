#include "windregime/transfer.hpp"

#include "windregime/error.hpp"
#include "windregime/log.hpp"
#include "windregime/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace wr {

Split split_fraction(std::size_t n, double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0, 1)");
  const auto n_train = static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(n) - 1e-9));
  if (n_train == 0 || n_train >= n) {
    throw Error(ErrorCode::EmptySplit, "gamma=" + std::to_string(gamma) + " on " + std::to_string(n) + " periods");
  }
  Split s;
  for (std::size_t i = 0; i < n; ++i) (i < n_train ? s.train : s.test).push_back(i);
  return s;
}

ProjectedFarm project_and_align(const VAEModel& vae, const ClusterModel& clusters, const FarmSeries& series) {
  ProjectedFarm out;
  out.periods = segment_periods(series, vae.config.p);
  if (out.periods.empty()) throw Error(ErrorCode::EmptyAfterFiltering, series.farm_id + " has no complete period");
  out.embedding = embed_periods(vae, apply_standardizer(out.periods, vae.stats));
  out.labels = assign_clusters(out.embedding.normalized, clusters.centroids);
  return out;
}

std::vector<ForecastSample> build_samples(const FarmSeries& series, const ProjectedFarm& projected,
                                          const std::vector<std::size_t>& period_indices) {
  const auto& recs = series.records;
  std::vector<ForecastSample> out;
  for (const std::size_t j : period_indices) {
    const Period& period = projected.periods.at(j);
    const LatentVector z = projected.embedding.normalized.row(static_cast<Eigen::Index>(j)).transpose();
    for (Eigen::Index i = 0; i < period.length(); ++i) {
      const std::size_t t = period.first_record + static_cast<std::size_t>(i);
      if (t < 2 || recs[t].timestamp - recs[t - 1].timestamp != kSecondsPerHour ||
          recs[t - 1].timestamp - recs[t - 2].timestamp != kSecondsPerHour) {
        continue;
      }
      ForecastSample s;
      s.period = j;
      s.hour = t;
      s.timestamp = recs[t].timestamp;
      s.cluster = projected.labels.at(j);
      s.x = build_input_vector(z, series, t);
      s.y = recs[t].power / series.capacity;
      out.push_back(s);
    }
  }
  return out;
}

SampleMatrix gather(const std::vector<ForecastSample>& samples, int cluster) {
  std::vector<const ForecastSample*> picked;
  for (const auto& s : samples) {
    if (cluster < 0 || s.cluster == cluster) picked.push_back(&s);
  }
  SampleMatrix m;
  m.x.resize(static_cast<Eigen::Index>(picked.size()), kGpInputDim);
  m.y.resize(static_cast<Eigen::Index>(picked.size()));
  for (std::size_t i = 0; i < picked.size(); ++i) {
    m.x.row(static_cast<Eigen::Index>(i)) = picked[i]->x.transpose();
    m.y(static_cast<Eigen::Index>(i)) = picked[i]->y;
  }
  return m;
}

namespace {

std::size_t train_count(std::size_t n, double fraction) {
  return std::min(n, static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n) - 1e-9)));
}

std::vector<std::size_t> index_range(std::size_t begin, std::size_t end) {
  std::vector<std::size_t> out;
  for (std::size_t i = begin; i < end; ++i) out.push_back(i);
  return out;
}

}  // namespace

SourceTraining train_source_library(const std::vector<FarmSeries>& farms, const SourceOptions& options) {
  if (farms.empty()) throw Error(ErrorCode::EmptyInput, "no source farms");
  if (!(options.train_fraction > 0.0 && options.train_fraction <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "train_fraction must lie in (0, 1]");
  }
  options.vae.validate();

  std::vector<std::vector<Period>> farm_periods;
  std::vector<Period> train_periods;
  for (const auto& farm : farms) {
    farm_periods.push_back(segment_periods(farm, options.vae.p));
    const auto& ps = farm_periods.back();
    const std::size_t n_train = train_count(ps.size(), options.train_fraction);
    train_periods.insert(train_periods.end(), ps.begin(), ps.begin() + static_cast<std::ptrdiff_t>(n_train));
  }
  if (train_periods.empty()) throw Error(ErrorCode::EmptyAfterFiltering, "source farms have no complete periods");

  SourceTraining out;
  const FeatureStats stats = fit_standardizer(train_periods);
  const std::vector<Period> standardized = apply_standardizer(train_periods, stats);
  TrainResult trained = train_vae(standardized, options.vae, stats);
  out.vae_log = std::move(trained.log);
  SourceLibrary& lib = out.library;
  lib.vae = std::move(trained.model);

  const Embedding train_embedding = embed_periods(lib.vae, standardized);
  lib.clusters = fit_cluster_model(train_embedding.normalized, options.k, options.max_ward_points);
  log::info("source clusters fitted on " + std::to_string(train_periods.size()) + " periods");

  std::vector<ForecastSample> samples;
  for (std::size_t f = 0; f < farms.size(); ++f) {
    const ProjectedFarm projected = project_and_align(lib.vae, lib.clusters, farms[f]);
    const std::size_t n = projected.periods.size();
    const std::size_t n_train = train_count(n, options.train_fraction);
    out.train_labels.insert(out.train_labels.end(), projected.labels.begin(),
                            projected.labels.begin() + static_cast<std::ptrdiff_t>(n_train));
    out.test_labels.insert(out.test_labels.end(), projected.labels.begin() + static_cast<std::ptrdiff_t>(n_train),
                           projected.labels.end());
    auto farm_samples = build_samples(farms[f], projected, index_range(0, n_train));
    samples.insert(samples.end(), farm_samples.begin(), farm_samples.end());
  }
  // Interleave farms in time so the most-recent cap spans all of them.
  std::stable_sort(samples.begin(), samples.end(),
                   [](const ForecastSample& a, const ForecastSample& b) { return a.timestamp < b.timestamp; });
  const SampleMatrix all = gather(samples);
  const double overall_mean = all.y.size() > 0 ? all.y.mean() : 0.0;

  const auto k = static_cast<std::size_t>(options.k);
  lib.gps.resize(k);
  lib.fallback.assign(k, false);
  std::vector<char> fallback(k, 0);
  parallel_for(k, [&](std::size_t c) {
    const int id = static_cast<int>(c);
    const SampleMatrix data = gather(samples, id);
    const double mean = data.y.size() > 0 ? data.y.mean() : overall_mean;
    const GPHyperparams hp0 = GPHyperparams::defaults(kGpInputDim, mean);
    if (static_cast<std::size_t>(data.y.size()) >= options.min_points) {
      lib.gps[c] = fit_gp(data.x, data.y, hp0, options.gp, id).model;
    } else {
      fallback[c] = 1;
      lib.gps[c] = data.y.size() > 0 ? condition_gp(data.x, data.y, hp0, id) : prior_gp(hp0, id);
    }
  });
  for (std::size_t c = 0; c < k; ++c) {
    lib.fallback[c] = fallback[c] != 0;
    if (lib.fallback[c]) log::warn("source cluster " + std::to_string(c) + " kept default hyperparameters");
  }
  return out;
}

FinetuneResult finetune_gp(const GPModel& source, const SampleMatrix& target, const GPFitOptions& options,
                           std::size_t min_points) {
  FinetuneResult out;
  if (static_cast<std::size_t>(target.y.size()) < min_points) {
    out.model = source;
    return out;
  }
  GPFitOptions frozen = options;
  frozen.fix_noise = true;
  GPFitResult fit = fit_gp(target.x, target.y, source.hp, frozen, source.cluster_id);
  out.model = std::move(fit.model);
  out.tuned = true;
  out.initial_mll = fit.initial_mll;
  out.final_mll = fit.final_mll;
  return out;
}

GPModel fit_baseline_gp(const SampleMatrix& train, double fallback_mean, int cluster_id, const GPFitOptions& options,
                        std::size_t min_points) {
  const double mean = train.y.size() > 0 ? train.y.mean() : fallback_mean;
  const GPHyperparams hp0 = GPHyperparams::defaults(kGpInputDim, mean);
  if (static_cast<std::size_t>(train.y.size()) >= min_points) {
    GPFitOptions free = options;
    free.fix_noise = false;
    return fit_gp(train.x, train.y, hp0, free, cluster_id).model;
  }
  if (train.y.size() > 0) return condition_gp(train.x, train.y, hp0, cluster_id);
  return prior_gp(hp0, cluster_id);
}

ForecastMetrics evaluate_predictor(const std::vector<ForecastSample>& samples, double capacity, int k,
                                   const Predictor& predictor) {
  if (samples.empty()) throw Error(ErrorCode::EmptyInput, "no samples to evaluate");
  ForecastMetrics out;
  for (int c = 0; c < k; ++c) {
    std::vector<double> y, yhat;
    for (const auto& s : samples) {
      if (s.cluster != c) continue;
      y.push_back(s.y * capacity);
      yhat.push_back(predictor(s) * capacity);
    }
    if (y.empty()) continue;
    const Eigen::Map<const Eigen::VectorXd> ym(y.data(), static_cast<Eigen::Index>(y.size()));
    const Eigen::Map<const Eigen::VectorXd> yhm(yhat.data(), static_cast<Eigen::Index>(yhat.size()));
    out.clusters.push_back(metric_row(std::to_string(c), ym, yhm, capacity));
  }
  if (out.clusters.empty()) throw Error(ErrorCode::EmptyInput, "no samples fall in clusters 0..k-1");
  out.aggregate = weighted_aggregate(out.clusters);
  return out;
}

Predictor gp_predictor(const std::vector<GPModel>& models) {
  return [&models](const ForecastSample& s) { return predict(models.at(static_cast<std::size_t>(s.cluster)), s.x).mean; };
}

ForecastMetrics evaluate_source(const SourceLibrary& library, const FarmSeries& farm, double train_fraction) {
  const ProjectedFarm projected = project_and_align(library.vae, library.clusters, farm);
  const std::size_t n = projected.periods.size();
  const auto test = build_samples(farm, projected, index_range(train_count(n, train_fraction), n));
  return evaluate_predictor(test, farm.capacity, library.clusters.k, gp_predictor(library.gps));
}

TransferResult run_transfer_experiment(const SourceLibrary& library, const FarmSeries& target, double gamma,
                                       std::uint64_t seed, const TransferOptions& options) {
  const int k = library.clusters.k;
  if (static_cast<int>(library.gps.size()) != k) {
    throw Error(ErrorCode::InvalidArgument, "library GP count differs from cluster count");
  }
  TransferResult out;
  out.farm_id = target.farm_id;
  out.gamma = gamma;
  out.seed = seed;

  const ProjectedFarm projected = project_and_align(library.vae, library.clusters, target);
  out.labels = projected.labels;
  out.split = split_fraction(projected.periods.size(), gamma);
  const auto train = build_samples(target, projected, out.split.train);
  const auto test = build_samples(target, projected, out.split.test);
  if (test.empty()) throw Error(ErrorCode::EmptySplit, "no forecastable test hours");
  const SampleMatrix all_train = gather(train);
  const double train_mean = all_train.y.size() > 0 ? all_train.y.mean() : 0.0;

  const auto kk = static_cast<std::size_t>(k);
  std::vector<GPModel> tuned(kk), baseline(kk);
  out.clusters.resize(kk);
  parallel_for(kk, [&](std::size_t c) {
    const int id = static_cast<int>(c);
    const SampleMatrix data = gather(train, id);
    FinetuneResult ft = finetune_gp(library.gps[c], data, options.gp, options.min_points);
    ClusterTransfer& info = out.clusters[c];
    info.cluster = id;
    info.n_train = static_cast<std::size_t>(data.y.size());
    info.n_test = static_cast<std::size_t>(std::count_if(test.begin(), test.end(),
                                                         [&](const ForecastSample& s) { return s.cluster == id; }));
    info.tuned = ft.tuned;
    info.source_hp = library.gps[c].hp;
    info.target_hp = ft.model.hp;
    tuned[c] = std::move(ft.model);
    baseline[c] = fit_baseline_gp(data, train_mean, id, options.gp, options.min_points);
  });
  for (const auto& info : out.clusters) {
    if (!info.tuned && info.n_test > 0) {
      log::warn(target.farm_id + ": cluster " + std::to_string(info.cluster) + " untuned (" +
                std::to_string(info.n_train) + " target hours)");
    }
  }
  out.transfer = evaluate_predictor(test, target.capacity, k, gp_predictor(tuned));
  out.baseline = evaluate_predictor(test, target.capacity, k, gp_predictor(baseline));
  return out;
}

namespace {

std::string format_number(double v) {
  if (!std::isfinite(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

void write_transfer_csv(const std::vector<TransferResult>& results, Method method, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "farm,seed,gamma,cluster,n_test,mae_pct,rmse,r2\n";
  for (const auto& r : results) {
    const ForecastMetrics& m = method == Method::kTransfer ? r.transfer : r.baseline;
    auto row = [&](const MetricRow& mr) {
      out << r.farm_id << ',' << r.seed << ',' << format_number(r.gamma) << ',' << mr.scope << ',' << mr.n << ','
          << format_number(mr.mae_pct) << ',' << format_number(mr.rmse) << ',' << format_number(mr.r2) << '\n';
    };
    for (const auto& mr : m.clusters) row(mr);
    row(m.aggregate);
  }
}

}  // namespace wr
