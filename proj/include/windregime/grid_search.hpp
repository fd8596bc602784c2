#pragma once

#include "windregime/data.hpp"
#include "windregime/quality.hpp"
#include "windregime/vae.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace wr {

struct GridSearchOptions {
  std::vector<int> p_grid = {6, 12, 24, 36, 48};
  std::vector<int> k_grid = {8, 10, 12, 14, 16};
  std::vector<std::uint64_t> seeds = {42, 63, 84};
  VAEConfig vae;  // p and seed are overridden per cell
  double train_fraction = 0.8;
  Eigen::Index max_ward_points = 3000;
};

/// Periods of length p split chronologically per farm, embedded by a VAE
/// trained on the training share only.
struct PeriodEmbedding {
  int p = 0;
  std::uint64_t seed = 0;
  Eigen::MatrixXd train_latent;  // normalised, farm by farm in time order
  Eigen::MatrixXd test_latent;
  std::vector<PeriodSummary> train_summary;
  std::vector<std::size_t> farm_train_counts;
};

PeriodEmbedding embed_for_grid(const std::vector<FarmSeries>& farms, int p, std::uint64_t seed,
                               const GridSearchOptions& options);

struct CellOutcome {
  QualityReport report;
  std::vector<int> train_labels;
};

/// Clusters the training latents into k regimes and scores the partition.
CellOutcome evaluate_cell(const PeriodEmbedding& embedding, int k, const GridSearchOptions& options);

struct GridSearchResult {
  std::vector<CellOutcome> cells;  // every (p, k, seed)
  int best_p = 0;
  int best_k = 0;
  double best_q = 0.0;

  /// Seed-averaged value of one report field for a grid cell.
  [[nodiscard]] double mean_of(int p, int k, double QualityReport::*field) const;
};

/// Evaluates every (p, k, seed); the best cell maximises the seed-averaged Q,
/// ties going to the smaller p and then the smaller k.
GridSearchResult grid_search(const std::vector<FarmSeries>& farms, const GridSearchOptions& options);

/// One CSV per metric (rows p, columns k, seed-averaged), the composite
/// table, and a long table of every per-seed report.
void write_grid_reports(const GridSearchResult& result, const GridSearchOptions& options,
                        const std::filesystem::path& dir);

}  // namespace wr
