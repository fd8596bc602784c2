#pragma once

#include "windregime/gp.hpp"
#include "windregime/synthetic.hpp"
#include "windregime/vae.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wr {

inline constexpr int kConfigVersion = 1;

struct FarmSource {
  std::string id;
  std::filesystem::path path;  // CSV; empty for synthetic farms
  double capacity = 0.0;
  double curve_shift = 0.0;  // synthetic only
};

struct SyntheticSpec {
  std::vector<RegimeSpec> regimes;
  std::size_t hours = 8760;
  std::vector<FarmSource> source;
  std::vector<FarmSource> target;
};

struct PipelineConfig {
  int version = kConfigVersion;
  std::filesystem::path output_dir = "runs/default";
  std::vector<std::uint64_t> seeds = {42, 63, 84};
  std::vector<FarmSource> source;  // CSV farms; when empty the synthetic spec is used
  std::vector<FarmSource> target;
  SyntheticSpec synthetic;
  std::vector<int> p_grid = {6, 12, 24, 36, 48};
  std::vector<int> k_grid = {8, 10, 12, 14, 16};
  int p = 6;
  int k = 8;
  VAEConfig vae;
  GPFitOptions gp;
  std::size_t min_points = 10;
  double train_fraction = 0.8;
  Eigen::Index max_ward_points = 3000;
  std::vector<double> gammas = {0.1, 0.2, 0.3, 0.4, 0.5};
  std::optional<std::string> selection_begin;  // ISO-8601 UTC
  std::optional<std::string> selection_end;
  int selection_k = 6;
  int selection_dims = 2;
  std::filesystem::path library;  // defaults to <output_dir>/library
};

/// Defaults with three planted synthetic regimes, two source farms and one target.
PipelineConfig default_config();

/// Missing keys keep their defaults; relative paths resolve against `base_dir`.
PipelineConfig config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path);

/// Source (or target) farms: loaded from CSV, or generated deterministically from `seed`.
std::vector<FarmSeries> load_farms(const PipelineConfig& config, bool target, std::uint64_t seed);

/// Parses argv and runs one subcommand. Returns the process exit status:
/// 0 success, 2 usage, 3 data, 4 numerical failure.
int run_command(int argc, const char* const* argv);

}  // namespace wr
