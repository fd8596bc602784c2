#include "windregime/data.hpp"

#include "windregime/error.hpp"
#include "windregime/log.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <unordered_map>

namespace wr {

namespace {

constexpr std::array<const char*, 7> kColumns = {
    "timestamp", "wind_speed", "roughness", "wind_direction", "u100", "v100", "power"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '"')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '"'))
    s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

std::optional<double> parse_number(std::string_view s) {
  if (s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "null") return std::nullopt;
  std::string buf(s);
  char* end = nullptr;
  const double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  std::string buf(trim(text));
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char sep = 0;
  const int n = std::sscanf(buf.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s);
  if (n < 3 || (n > 3 && n < 6) || (n >= 4 && sep != 'T' && sep != ' ')) {
    throw Error(ErrorCode::InvalidArgument, "unparseable timestamp '" + buf + "'");
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h < 0 || h > 23 || mi < 0 || mi > 59 || s < 0 || s > 60) {
    throw Error(ErrorCode::InvalidArgument, "invalid timestamp '" + buf + "'");
  }
  const auto days_since_epoch = sys_days{ymd}.time_since_epoch().count();
  return static_cast<Timestamp>(days_since_epoch) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_timestamp(Timestamp ts) {
  using namespace std::chrono;
  const sys_seconds tp{seconds{ts}};
  const auto day_point = floor<days>(tp);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{tp - day_point};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

int hour_of_day(Timestamp ts) {
  const Timestamp r = ((ts % 86400) + 86400) % 86400;
  return static_cast<int>(r / 3600);
}

int month_of_year(Timestamp ts) {
  using namespace std::chrono;
  const year_month_day ymd{floor<days>(sys_seconds{seconds{ts}})};
  return static_cast<int>(static_cast<unsigned>(ymd.month()));
}

Eigen::Matrix<double, 1, kNumFeatures> feature_row(const MeteoRecord& r) {
  const double theta = r.wind_direction * std::numbers::pi / 180.0;
  Eigen::Matrix<double, 1, kNumFeatures> row;
  row << r.wind_speed, r.roughness, std::sin(theta), std::cos(theta), r.u100, r.v100;
  return row;
}

FarmSeries load_farm_csv(const std::filesystem::path& path, double capacity, std::string farm_id) {
  if (!(capacity > 0.0)) throw Error(ErrorCode::InvalidArgument, "capacity must be positive");
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyAfterFiltering, path.string() + " is empty");
  if (line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF) line.erase(0, 3);  // UTF-8 BOM

  std::unordered_map<std::string, std::size_t> index;
  const auto header = split_csv(line);
  for (std::size_t i = 0; i < header.size(); ++i) index.emplace(std::string(header[i]), i);
  std::array<std::size_t, kColumns.size()> col{};
  for (std::size_t c = 0; c < kColumns.size(); ++c) {
    const auto it = index.find(kColumns[c]);
    if (it == index.end()) throw Error(ErrorCode::MissingColumn, std::string("column '") + kColumns[c] + "' in " + path.string());
    col[c] = it->second;
  }

  FarmSeries series;
  series.farm_id = farm_id.empty() ? path.stem().string() : std::move(farm_id);
  series.capacity = capacity;

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    bool ok = fields.size() >= header.size();
    MeteoRecord rec;
    std::array<double, 6> values{};
    if (ok) {
      const auto ts_text = fields[col[0]];
      if (ts_text.empty()) {
        ok = false;
      } else {
        rec.timestamp = parse_timestamp(ts_text);
      }
      for (std::size_t c = 1; ok && c < kColumns.size(); ++c) {
        const auto v = parse_number(fields[col[c]]);
        if (!v) ok = false;
        else values[c - 1] = *v;
      }
    }
    if (!ok) {
      ++series.dropped_rows;
      continue;
    }
    rec.wind_speed = values[0];
    rec.roughness = values[1];
    rec.wind_direction = std::fmod(std::fmod(values[2], 360.0) + 360.0, 360.0);
    rec.u100 = values[3];
    rec.v100 = values[4];
    rec.power = values[5];
    if (rec.power > capacity || rec.power < 0.0) {
      ++series.clamped_rows;
      rec.power = std::clamp(rec.power, 0.0, capacity);
    }
    if (!series.records.empty() && rec.timestamp <= series.records.back().timestamp) {
      throw Error(ErrorCode::NonMonotonicTimestamps,
                  path.string() + " line " + std::to_string(line_no));
    }
    series.records.push_back(rec);
  }

  if (series.records.empty()) throw Error(ErrorCode::EmptyAfterFiltering, path.string());
  if (series.dropped_rows > 0) {
    log::warn(path.string() + ": dropped " + std::to_string(series.dropped_rows) + " rows with missing fields");
  }
  if (series.clamped_rows > 0) {
    log::warn(path.string() + ": clamped " + std::to_string(series.clamped_rows) + " power values to [0, capacity]");
  }
  return series;
}

void write_farm_csv(const FarmSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << "timestamp,wind_speed,roughness,wind_direction,u100,v100,power\n";
  char buf[256];
  for (const auto& r : series.records) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  format_timestamp(r.timestamp).c_str(), r.wind_speed, r.roughness, r.wind_direction,
                  r.u100, r.v100, r.power);
    out << buf;
  }
}

std::vector<std::pair<std::size_t, std::size_t>> contiguous_runs(const FarmSeries& series) {
  std::vector<std::pair<std::size_t, std::size_t>> runs;
  const auto& recs = series.records;
  std::size_t begin = 0;
  for (std::size_t i = 1; i <= recs.size(); ++i) {
    if (i == recs.size() || recs[i].timestamp - recs[i - 1].timestamp != kSecondsPerHour) {
      if (i > begin) runs.emplace_back(begin, i);
      begin = i;
    }
  }
  return runs;
}

std::vector<Period> segment_periods(const FarmSeries& series, int p) {
  if (p < 2) throw Error(ErrorCode::InvalidArgument, "period length must be >= 2");
  std::vector<Period> periods;
  for (const auto& [begin, end] : contiguous_runs(series)) {
    const std::size_t count = (end - begin) / static_cast<std::size_t>(p);
    for (std::size_t k = 0; k < count; ++k) {
      Period period;
      period.farm_id = series.farm_id;
      period.first_record = begin + k * static_cast<std::size_t>(p);
      period.start = series.records[period.first_record].timestamp;
      period.features.resize(p, kNumFeatures);
      period.power.resize(p);
      for (int t = 0; t < p; ++t) {
        const auto& rec = series.records[period.first_record + static_cast<std::size_t>(t)];
        period.features.row(t) = feature_row(rec);
        period.power(t) = rec.power;
      }
      periods.push_back(std::move(period));
    }
  }
  if (periods.empty()) {
    throw Error(ErrorCode::PeriodTooLong,
                "p=" + std::to_string(p) + " exceeds every contiguous run of " + series.farm_id);
  }
  return periods;
}

FeatureStats fit_standardizer(const std::vector<Period>& periods) {
  if (periods.size() < 2) throw Error(ErrorCode::InvalidArgument, "standardiser needs at least 2 periods");
  Eigen::Index rows = 0;
  Eigen::Matrix<double, 1, kNumFeatures> sum = Eigen::Matrix<double, 1, kNumFeatures>::Zero();
  for (const auto& period : periods) {
    sum += period.features.colwise().sum();
    rows += period.features.rows();
  }
  FeatureStats stats;
  stats.mean = (sum / static_cast<double>(rows)).transpose();
  Eigen::Matrix<double, 1, kNumFeatures> sq = Eigen::Matrix<double, 1, kNumFeatures>::Zero();
  for (const auto& period : periods) {
    sq += (period.features.rowwise() - stats.mean.transpose()).array().square().matrix().colwise().sum();
  }
  stats.stddev = (sq / static_cast<double>(rows)).cwiseSqrt().transpose();
  static constexpr std::array<const char*, kNumFeatures> names = {
      "wind_speed", "roughness", "sin_direction", "cos_direction", "u100", "v100"};
  for (int f = 0; f < kNumFeatures; ++f) {
    if (!(stats.stddev(f) > 1e-12 * std::max(1.0, std::abs(stats.mean(f))))) {
      throw Error(ErrorCode::DegenerateFeature, std::string(names[static_cast<std::size_t>(f)]) + " has zero variance");
    }
  }
  return stats;
}

Period apply_standardizer(const Period& period, const FeatureStats& stats) {
  Period out = period;
  out.features = ((period.features.rowwise() - stats.mean.transpose()).array().rowwise() /
                  stats.stddev.transpose().array())
                     .matrix();
  return out;
}

Period invert_standardizer(const Period& period, const FeatureStats& stats) {
  Period out = period;
  out.features = ((period.features.array().rowwise() * stats.stddev.transpose().array()).matrix().rowwise() +
                  stats.mean.transpose());
  return out;
}

std::vector<Period> apply_standardizer(const std::vector<Period>& periods, const FeatureStats& stats) {
  std::vector<Period> out;
  out.reserve(periods.size());
  for (const auto& period : periods) out.push_back(apply_standardizer(period, stats));
  return out;
}

}  // namespace wr
