#pragma once

#include "windregime/data.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wr {

inline constexpr int kNumFarmFeatures = 38;

/// Names of the 38 per-farm statistics, in vector order.
const std::array<std::string_view, kNumFarmFeatures>& farm_feature_names();

struct FarmFeatureVector {
  std::string farm_id;
  Eigen::Matrix<double, kNumFarmFeatures, 1> values;
};

/// Half-open [begin, end) time window.
struct TimeWindow {
  Timestamp begin = 0;
  Timestamp end = 0;
};

FarmFeatureVector extract_farm_features(const FarmSeries& series,
                                        std::optional<TimeWindow> window = std::nullopt);

struct Reduction {
  Eigen::MatrixXd embedding;                // n x out_dims
  Eigen::VectorXd explained_variance_ratio;  // out_dims, non-increasing
};

/// Principal-component projection of z-scored feature vectors. Each component
/// is oriented so its largest-magnitude loading is positive.
Reduction reduce_dimensions(const std::vector<FarmFeatureVector>& vectors, int out_dims);

std::vector<int> cluster_farms(const Eigen::Ref<const Eigen::MatrixXd>& embeddings, int k = 6);

/// Medoid of each cluster (minimum summed distance to its members); ties go
/// to the lexicographically smallest farm id. Result indexed by label.
std::vector<std::string> select_representatives(const Eigen::Ref<const Eigen::MatrixXd>& embeddings,
                                                const std::vector<int>& labels,
                                                const std::vector<std::string>& farm_ids);

}  // namespace wr
