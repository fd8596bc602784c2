#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace wr {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerHour = 3600;

/// Number of meteorological features per hour in a period matrix.
inline constexpr int kNumFeatures = 6;

/// Column order of a period matrix.
enum Feature : int {
  kWindSpeed = 0,
  kRoughness = 1,
  kSinDirection = 2,
  kCosDirection = 3,
  kU100 = 4,
  kV100 = 5,
};

struct MeteoRecord {
  Timestamp timestamp = 0;
  double wind_speed = 0.0;      // m/s
  double roughness = 0.0;       // sea surface roughness
  double wind_direction = 0.0;  // degrees in [0, 360)
  double u100 = 0.0;            // m/s
  double v100 = 0.0;            // m/s
  double power = 0.0;           // MW
};

struct FarmSeries {
  std::string farm_id;
  double capacity = 0.0;  // MW
  std::vector<MeteoRecord> records;
  std::size_t dropped_rows = 0;
  std::size_t clamped_rows = 0;
};

/// A p x 6 window of consecutive hours from one farm.
struct Period {
  std::string farm_id;
  Timestamp start = 0;
  std::size_t first_record = 0;  // index into FarmSeries::records
  Eigen::MatrixXd features;      // p x kNumFeatures
  Eigen::VectorXd power;         // p, MW

  [[nodiscard]] Eigen::Index length() const { return features.rows(); }
};

struct FeatureStats {
  Eigen::Matrix<double, kNumFeatures, 1> mean = Eigen::Matrix<double, kNumFeatures, 1>::Zero();
  Eigen::Matrix<double, kNumFeatures, 1> stddev = Eigen::Matrix<double, kNumFeatures, 1>::Ones();
};

// Time helpers.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp ts);
int hour_of_day(Timestamp ts);
int month_of_year(Timestamp ts);  // 1..12

/// Feature row (wind_speed, roughness, sin, cos, u100, v100) for one record.
Eigen::Matrix<double, 1, kNumFeatures> feature_row(const MeteoRecord& record);

FarmSeries load_farm_csv(const std::filesystem::path& path, double capacity,
                         std::string farm_id = {});
void write_farm_csv(const FarmSeries& series, const std::filesystem::path& path);

/// Half-open index ranges [begin, end) of hourly-contiguous records.
std::vector<std::pair<std::size_t, std::size_t>> contiguous_runs(const FarmSeries& series);

std::vector<Period> segment_periods(const FarmSeries& series, int p);

FeatureStats fit_standardizer(const std::vector<Period>& periods);
Period apply_standardizer(const Period& period, const FeatureStats& stats);
Period invert_standardizer(const Period& period, const FeatureStats& stats);
std::vector<Period> apply_standardizer(const std::vector<Period>& periods, const FeatureStats& stats);

}  // namespace wr
