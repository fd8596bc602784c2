#include "support/helpers.hpp"

#include "windregime/error.hpp"
#include "windregime/farmselect.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

using namespace wr;

namespace {

// Reference statistics written against contiguous hourly series, using index lags.
double pct(Eigen::ArrayXd x, double q) {
  std::sort(x.data(), x.data() + x.size());
  const double h = (static_cast<double>(x.size()) - 1.0) * q / 100.0;
  const double fl = std::floor(h);
  const auto i = static_cast<Eigen::Index>(fl);
  const Eigen::Index j = std::min<Eigen::Index>(i + 1, x.size() - 1);
  return x(i) * (1.0 - (h - fl)) + x(j) * (h - fl);
}

double var(const Eigen::ArrayXd& x) { return (x - x.mean()).square().mean(); }

double acf(const Eigen::ArrayXd& x, Eigen::Index lag) {
  const Eigen::ArrayXd d = x - x.mean();
  const Eigen::Index n = x.size();
  return (d.head(n - lag) * d.tail(n - lag)).mean() / d.square().mean();
}

Eigen::VectorXd oracle(const FarmSeries& s) {
  const auto n = static_cast<Eigen::Index>(s.records.size());
  Eigen::ArrayXd ws(n), ro(n), dir(n), u(n), v(n), pw(n);
  Eigen::ArrayXi hour(n), month(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = s.records[static_cast<std::size_t>(i)];
    ws(i) = r.wind_speed;
    ro(i) = r.roughness;
    dir(i) = r.wind_direction * std::numbers::pi / 180.0;
    u(i) = r.u100;
    v(i) = r.v100;
    pw(i) = r.power;
    hour(i) = hour_of_day(r.timestamp);
    month(i) = month_of_year(r.timestamp);
  }
  const double sd = std::sqrt(var(ws));
  const Eigen::ArrayXd zw = (ws - ws.mean()) / sd;
  const double R = std::sqrt(std::pow(dir.sin().mean(), 2) + std::pow(dir.cos().mean(), 2));
  const double cap = s.capacity;
  auto share = [&](const Eigen::Array<bool, Eigen::Dynamic, 1>& m) { return m.cast<double>().mean(); };
  auto amplitude = [&](const Eigen::ArrayXi& key, int lo, int hi) {
    double mn = 1e300, mx = -1e300;
    for (int k = lo; k <= hi; ++k) {
      double sum = 0.0, c = 0.0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (key(i) == k) {
          sum += ws(i);
          c += 1.0;
        }
      }
      if (c > 0.0) {
        mn = std::min(mn, sum / c);
        mx = std::max(mx, sum / c);
      }
    }
    return mx - mn;
  };
  const double operating = share((ws >= 3.0) && (ws <= 25.0));
  Eigen::VectorXd f(38);
  f << ws.mean(), var(ws), pct(ws, 5), pct(ws, 25), pct(ws, 50), pct(ws, 75), pct(ws, 95), zw.cube().mean(),
      zw.square().square().mean() - 3.0, ro.mean(), var(ro), pct(ro, 25), pct(ro, 50), pct(ro, 75), R, 1.0 - R,
      u.mean(), var(u), v.mean(), var(v), pw.mean(), var(pw), pct(pw, 25), pct(pw, 50), pct(pw, 75),
      pw.mean() / cap, pw.mean() / (cap * operating), share(ws > 20.0), share(ws > 25.0), share(ws < 3.0),
      pct(ro, 99), amplitude(hour, 0, 23), amplitude(month, 1, 12), acf(ws, 1), acf(ws, 24), share(pw > 0.0),
      share(pw >= 0.99 * cap), std::sqrt(var(pw)) / pw.mean();
  return f;
}

FarmSeries constant_farm(double wind, double power, double capacity, std::size_t n = 100) {
  FarmSeries s;
  s.farm_id = "c";
  s.capacity = capacity;
  for (std::size_t i = 0; i < n; ++i) {
    MeteoRecord r;
    r.timestamp = 1514764800 + static_cast<Timestamp>(i) * kSecondsPerHour;
    r.wind_speed = wind;
    r.roughness = 0.0002;
    r.wind_direction = 270.0;
    r.u100 = wind;
    r.power = power;
    s.records.push_back(r);
  }
  return s;
}

std::vector<FarmFeatureVector> synthetic_fleet(int n) {
  std::vector<FarmFeatureVector> out;
  for (int i = 0; i < n; ++i) {
    SyntheticOptions opt;
    opt.farm_id = "farm_" + std::to_string(100 + i);
    opt.curve_shift = 0.1 * (i % 7) - 0.3;
    auto regimes = test::three_regimes();
    regimes[0].mean_wind += 0.2 * i;
    out.push_back(extract_farm_features(
        generate_synthetic_farm(static_cast<std::uint64_t>(i + 1), regimes, 2000, 100.0 + 10.0 * i, opt).series));
  }
  return out;
}

}  // namespace

TEST_SUITE("farmselect") {

TEST_CASE("feature vector matches the reference statistics") {
  const auto farm = generate_synthetic_farm(7, test::three_regimes(), 3000, 400.0).series;
  const auto got = extract_farm_features(farm);
  const Eigen::VectorXd want = oracle(farm);
  REQUIRE(farm_feature_names().size() == 38);
  for (int i = 0; i < kNumFarmFeatures; ++i) {
    INFO(farm_feature_names()[static_cast<std::size_t>(i)]);
    CHECK(test::rel_err(got.values(i), want(i)) < 1e-9);
  }
}

TEST_CASE("constant wind and full output") {
  const auto f = extract_farm_features(constant_farm(8.0, 50.0, 50.0)).values;
  CHECK(f(1) == 0.0);
  for (int i = 2; i <= 6; ++i) CHECK(f(i) == 8.0);
  CHECK(f(25) == doctest::Approx(1.0));
  CHECK(f(14) == doctest::Approx(1.0));
  CHECK(f(36) == doctest::Approx(1.0));
}

TEST_CASE("time window restricts the records") {
  const auto farm = generate_synthetic_farm(2, test::three_regimes(), 500, 100.0).series;
  const TimeWindow w{farm.records[100].timestamp, farm.records[300].timestamp};
  FarmSeries cut = farm;
  cut.records.assign(farm.records.begin() + 100, farm.records.begin() + 300);
  CHECK(extract_farm_features(farm, w).values == extract_farm_features(cut).values);
  const TimeWindow outside{farm.records[400].timestamp, farm.records[499].timestamp + 10 * kSecondsPerHour};
  CHECK_THROWS_AS(extract_farm_features(farm, outside), Error);
}

TEST_CASE("full-rank projection preserves pairwise distances") {
  auto fleet = synthetic_fleet(6);
  const auto red = reduce_dimensions(fleet, 5);
  Eigen::MatrixXd z(6, 38);
  for (int i = 0; i < 6; ++i) z.row(i) = fleet[static_cast<std::size_t>(i)].values.transpose();
  z.rowwise() -= z.colwise().mean();
  Eigen::RowVectorXd sd = (z.array().square().colwise().mean()).sqrt();
  for (Eigen::Index j = 0; j < sd.size(); ++j) if (!(sd(j) > 1e-300)) sd(j) = 1.0;
  z.array().rowwise() /= sd.array();
  // Six centred points span at most five dimensions.
  for (int i = 0; i < 6; ++i) {
    for (int j = i + 1; j < 6; ++j) {
      CHECK((red.embedding.row(i) - red.embedding.row(j)).norm() ==
            doctest::Approx((z.row(i) - z.row(j)).norm()).epsilon(1e-9));
    }
  }
}

TEST_CASE("rank-one data has no second component") {
  std::vector<FarmFeatureVector> line;
  for (int i = 0; i < 5; ++i) {
    FarmFeatureVector v;
    v.farm_id = std::to_string(i);
    v.values = Eigen::Matrix<double, 38, 1>::LinSpaced(1.0, 38.0) * static_cast<double>(i);
    line.push_back(v);
  }
  const auto red = reduce_dimensions(line, 2);
  CHECK(red.explained_variance_ratio(0) == doctest::Approx(1.0));
  CHECK(red.embedding.col(1).squaredNorm() < 1e-18);
}

TEST_CASE("explained variance ratios follow the covariance spectrum") {
  const auto fleet = synthetic_fleet(29);
  const auto red = reduce_dimensions(fleet, 5);
  for (Eigen::Index i = 1; i < 5; ++i) CHECK(red.explained_variance_ratio(i) <= red.explained_variance_ratio(i - 1));
  Eigen::MatrixXd x(29, 38);
  for (int i = 0; i < 29; ++i) x.row(i) = fleet[static_cast<std::size_t>(i)].values.transpose();
  x.rowwise() -= x.colwise().mean();
  for (Eigen::Index j = 0; j < 38; ++j) {
    const double s = std::sqrt(x.col(j).squaredNorm() / 29.0);
    if (s > 1e-300) x.col(j) /= s;
  }
  // Singular values of the standardised data give the same spectrum.
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(x);
  const Eigen::VectorXd ev = svd.singularValues().array().square();
  for (Eigen::Index i = 0; i < 5; ++i) {
    CHECK(red.explained_variance_ratio(i) == doctest::Approx(ev(i) / ev.sum()).epsilon(1e-9));
  }
  CHECK_THROWS_AS(reduce_dimensions(std::vector<FarmFeatureVector>(fleet.begin(), fleet.begin() + 2), 2), Error);
}

TEST_CASE("farm clustering edge cases") {
  Eigen::MatrixXd pts(6, 2);
  pts << 0, 0, 0.1, 0, 0, 0.1, 10, 10, 10.1, 10, 10, 10.1;
  const auto six = cluster_farms(pts, 6);
  CHECK(std::set<int>(six.begin(), six.end()).size() == 6);
  const auto two = cluster_farms(pts, 2);
  CHECK(two == std::vector<int>{0, 0, 0, 1, 1, 1});
  const auto one = cluster_farms(pts, 1);
  CHECK(std::all_of(one.begin(), one.end(), [](int l) { return l == 0; }));
}

TEST_CASE("representatives are medoids") {
  Eigen::MatrixXd line(3, 1);
  line << 0, 1, 10;
  CHECK(select_representatives(line, {0, 0, 0}, {"a", "b", "c"}) == std::vector<std::string>{"b"});

  Eigen::MatrixXd tri(3, 2);
  tri << 0, 0, 1, 0, 0.5, std::sqrt(3.0) / 2.0;
  CHECK(select_representatives(tri, {0, 0, 0}, {"m", "k", "z"}) == std::vector<std::string>{"k"});

  Eigen::MatrixXd two(2, 1);
  two << 4, 9;
  CHECK(select_representatives(two, {1, 0}, {"x", "y"}) == std::vector<std::string>{"y", "x"});
}

}
