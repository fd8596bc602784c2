#pragma once

#include "windregime/synthetic.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

namespace wr::test {

inline std::vector<RegimeSpec> three_regimes() {
  return {{4.0, 0.8, 0.5, 120.0, 45.0}, {10.0, 0.8, 1.0, 120.0, 180.0}, {17.0, 0.8, 1.0, 120.0, 270.0}};
}

inline std::vector<RegimeSpec> two_regimes() {
  return {{5.0, 0.8, 0.5, 120.0, 60.0}, {15.0, 0.8, 1.0, 120.0, 240.0}};
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("windregime_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

/// Majority planted regime of each period.
inline std::vector<int> majority_regime(const std::vector<Period>& periods, const std::vector<int>& regime,
                                        int n_regimes) {
  std::vector<int> out;
  for (const auto& p : periods) {
    std::vector<int> count(static_cast<std::size_t>(n_regimes), 0);
    for (Eigen::Index i = 0; i < p.length(); ++i) ++count[static_cast<std::size_t>(regime[p.first_record + static_cast<std::size_t>(i)])];
    out.push_back(static_cast<int>(std::max_element(count.begin(), count.end()) - count.begin()));
  }
  return out;
}

/// Share of points whose cluster's majority truth label matches their own.
inline double purity(const std::vector<int>& labels, const std::vector<int>& truth) {
  int k = 0, t = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    k = std::max(k, labels[i] + 1);
    t = std::max(t, truth[i] + 1);
  }
  std::vector<std::vector<int>> table(static_cast<std::size_t>(k), std::vector<int>(static_cast<std::size_t>(t), 0));
  for (std::size_t i = 0; i < labels.size(); ++i) ++table[static_cast<std::size_t>(labels[i])][static_cast<std::size_t>(truth[i])];
  int hit = 0;
  for (const auto& row : table) hit += *std::max_element(row.begin(), row.end());
  return static_cast<double>(hit) / static_cast<double>(labels.size());
}

}  // namespace wr::test
