#include "support/helpers.hpp"

#include "windregime/data.hpp"
#include "windregime/error.hpp"
#include "windregime/log.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>

using namespace wr;

namespace {

std::filesystem::path write_csv(const std::string& name, const std::vector<std::string>& rows,
                                const std::string& header = "timestamp,wind_speed,roughness,wind_direction,u100,v100,power") {
  const auto path = test::scratch_dir("data") / name;
  std::ofstream out(path);
  out << header << '\n';
  for (const auto& r : rows) out << r << '\n';
  return path;
}

std::string row(int hour, double power = 100.0, double dir = 90.0, int day = 1) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "2020-01-%02dT%02d:00:00Z,8.5,0.001,%g,3,4,%g", day, hour, dir, power);
  return buf;
}

FarmSeries hourly(std::size_t n, Timestamp start = 1577836800) {
  FarmSeries s;
  s.farm_id = "f";
  s.capacity = 10.0;
  for (std::size_t i = 0; i < n; ++i) {
    MeteoRecord r;
    r.timestamp = start + static_cast<Timestamp>(i) * kSecondsPerHour;
    r.wind_speed = static_cast<double>(i % 7);
    r.roughness = 0.001 * static_cast<double>(i % 3);
    r.wind_direction = static_cast<double>((i * 37) % 360);
    r.u100 = std::sin(static_cast<double>(i));
    r.v100 = std::cos(static_cast<double>(i));
    s.records.push_back(r);
  }
  return s;
}

}  // namespace

TEST_SUITE("data") {

TEST_CASE("timestamps round trip in UTC") {
  CHECK(parse_timestamp("2018-01-01T00:00:00Z") == 1514764800);
  CHECK(parse_timestamp("2020-02-29T06:00:00Z") == 1582956000);
  CHECK(format_timestamp(1582956000) == "2020-02-29T06:00:00Z");
  CHECK(hour_of_day(1582956000) == 6);
  CHECK(month_of_year(1582956000) == 2);
  CHECK_THROWS_AS(parse_timestamp("yesterday"), Error);
}

TEST_CASE("24 valid rows load as 24 records") {
  log::set_level(log::Level::Quiet);
  std::vector<std::string> rows;
  for (int h = 0; h < 24; ++h) rows.push_back(row(h));
  const auto s = load_farm_csv(write_csv("ok.csv", rows), 600.0);
  CHECK(s.records.size() == 24);
  CHECK(s.farm_id == "ok");
  const auto f = feature_row(s.records[0]);
  CHECK(f(kSinDirection) == doctest::Approx(1.0));
  CHECK(std::abs(f(kCosDirection)) < 1e-12);
}

TEST_CASE("power above capacity is clamped and counted") {
  log::set_level(log::Level::Quiet);
  const auto s = load_farm_csv(write_csv("clamp.csv", {row(0, 700.0), row(1, 300.0)}), 600.0);
  CHECK(s.records[0].power == 600.0);
  CHECK(s.records[1].power == 300.0);
  CHECK(s.clamped_rows == 1);
}

TEST_CASE("rows with missing fields are dropped") {
  log::set_level(log::Level::Quiet);
  const auto s = load_farm_csv(write_csv("drop.csv", {row(0), "2020-01-01T01:00:00Z,8.5,,90,3,4,1", row(2)}), 600.0);
  CHECK(s.records.size() == 2);
  CHECK(s.dropped_rows == 1);
}

TEST_CASE("ingestion errors") {
  log::set_level(log::Level::Quiet);
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code_of([&] { load_farm_csv(write_csv("missing.csv", {"2020-01-01T00:00:00Z,1,2,3,4,5"},
                                              "timestamp,wind_speed,roughness,wind_direction,u100,v100"), 1.0); }) ==
        ErrorCode::MissingColumn);
  CHECK(code_of([&] { load_farm_csv(write_csv("order.csv", {row(3), row(2)}), 600.0); }) ==
        ErrorCode::NonMonotonicTimestamps);
  CHECK(code_of([&] { load_farm_csv(write_csv("empty.csv", {"2020-01-01T00:00:00Z,,,,,,"}), 600.0); }) ==
        ErrorCode::EmptyAfterFiltering);
}

TEST_CASE("CSV write then load is lossless") {
  log::set_level(log::Level::Quiet);
  auto s = hourly(30);
  for (auto& r : s.records) r.power = 3.25;
  const auto path = test::scratch_dir("data_rt") / "f.csv";
  write_farm_csv(s, path);
  const auto back = load_farm_csv(path, s.capacity, "f");
  REQUIRE(back.records.size() == s.records.size());
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    CHECK(back.records[i].timestamp == s.records[i].timestamp);
    CHECK(back.records[i].wind_speed == s.records[i].wind_speed);
    CHECK(back.records[i].u100 == s.records[i].u100);
  }
}

TEST_CASE("segmentation counts") {
  CHECK(segment_periods(hourly(25), 6).size() == 4);
  CHECK(segment_periods(hourly(17520), 6).size() == 2920);

  auto s = hourly(10);
  auto tail = hourly(14, s.records.back().timestamp + 5 * kSecondsPerHour);
  s.records.insert(s.records.end(), tail.records.begin(), tail.records.end());
  const auto periods = segment_periods(s, 6);
  REQUIRE(periods.size() == 3);
  CHECK(periods[0].first_record == 0);
  CHECK(periods[1].first_record == 10);
  CHECK(periods[2].first_record == 16);
  CHECK(periods[1].start == s.records[10].timestamp);
  CHECK(periods[0].features.rows() == 6);
  CHECK(periods[0].features.cols() == kNumFeatures);

  CHECK_THROWS_AS(segment_periods(hourly(5), 6), Error);
  CHECK_THROWS_AS(segment_periods(hourly(20), 1), Error);
}

TEST_CASE("standardiser uses population moments") {
  std::vector<Period> periods(2);
  for (int i = 0; i < 2; ++i) {
    periods[static_cast<std::size_t>(i)].features = Eigen::MatrixXd::Zero(2, kNumFeatures);
    periods[static_cast<std::size_t>(i)].features.row(0).setConstant(0.0);
    periods[static_cast<std::size_t>(i)].features.row(1).setConstant(2.0);
  }
  const auto stats = fit_standardizer(periods);
  for (int f = 0; f < kNumFeatures; ++f) {
    CHECK(stats.mean(f) == doctest::Approx(1.0));
    CHECK(stats.stddev(f) == doctest::Approx(1.0));
  }
  const auto z = apply_standardizer(periods[0], stats);
  CHECK(z.features(0, 0) == doctest::Approx(-1.0));
  CHECK(z.features(1, 0) == doctest::Approx(1.0));
}

TEST_CASE("standardising is idempotent and invertible") {
  const auto periods = segment_periods(hourly(120), 6);
  const auto stats = fit_standardizer(periods);
  const auto z = apply_standardizer(periods, stats);
  const auto again = fit_standardizer(z);
  for (int f = 0; f < kNumFeatures; ++f) {
    CHECK(std::abs(again.mean(f)) < 1e-12);
    CHECK(again.stddev(f) == doctest::Approx(1.0).epsilon(1e-12));
  }
  for (std::size_t i = 0; i < periods.size(); ++i) {
    const auto back = invert_standardizer(z[i], stats);
    CHECK((back.features - periods[i].features).cwiseAbs().maxCoeff() < 1e-12);
  }
  Period at_mean;
  at_mean.features = stats.mean.transpose();
  CHECK(apply_standardizer(at_mean, stats).features.cwiseAbs().maxCoeff() < 1e-12);
  at_mean.features = (stats.mean + stats.stddev).transpose();
  CHECK((apply_standardizer(at_mean, stats).features.array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("constant feature is rejected") {
  auto s = hourly(60);
  for (auto& r : s.records) r.wind_speed = 8.0;
  const auto periods = segment_periods(s, 6);
  try {
    fit_standardizer(periods);
    FAIL("expected DegenerateFeature");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateFeature);
  }
}

}
