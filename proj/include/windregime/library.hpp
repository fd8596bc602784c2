#pragma once

#include "windregime/clustering.hpp"
#include "windregime/gp.hpp"
#include "windregime/vae.hpp"

#include <json.hpp>

#include <filesystem>
#include <vector>

namespace wr {

/// Everything needed to forecast on a new farm: the frozen encoder with its
/// standardisation, the regime centroids and one GP per regime.
struct SourceLibrary {
  VAEModel vae;
  ClusterModel clusters;
  std::vector<GPModel> gps;    // indexed by cluster id
  std::vector<bool> fallback;  // true where the GP kept default hyperparameters
};

nlohmann::json to_json(const VAEConfig& config);
/// Fields missing from `j` keep the values of `base`.
VAEConfig vae_config_from_json(const nlohmann::json& j, VAEConfig base = {});

void save_vae(const VAEModel& model, const std::filesystem::path& stem);
VAEModel load_vae(const std::filesystem::path& stem);

void save_cluster_model(const ClusterModel& model, const std::filesystem::path& stem);
ClusterModel load_cluster_model(const std::filesystem::path& stem);

/// Stores hyperparameters, X and y; the factorisation is recomputed on load.
void save_gp(const GPModel& model, const std::filesystem::path& stem);
GPModel load_gp(const std::filesystem::path& stem);

void save_library(const SourceLibrary& library, const std::filesystem::path& dir);
SourceLibrary load_library(const std::filesystem::path& dir);

}  // namespace wr
