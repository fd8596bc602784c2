#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace wr {

inline constexpr int kContainerVersion = 1;
inline constexpr std::string_view kContainerFormat = "windregime-container";

/// Versioned JSON manifest plus a little-endian float64 blob. Each tensor is
/// stored column-major at a recorded offset; the blob is covered by SHA-256.
struct Container {
  std::string kind;
  nlohmann::json meta = nlohmann::json::object();
  std::vector<std::pair<std::string, Eigen::MatrixXd>> tensors;

  void put(std::string name, Eigen::MatrixXd value) { tensors.emplace_back(std::move(name), std::move(value)); }
  [[nodiscard]] const Eigen::MatrixXd& get(std::string_view name) const;
};

/// Writes `<stem>.json` and `<stem>.bin`.
void save_container(const std::filesystem::path& stem, const Container& container);

/// Rejects unknown versions (VersionMismatch) and truncated or altered blobs (CorruptBlob).
Container load_container(const std::filesystem::path& stem, std::string_view expected_kind);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

}  // namespace wr
