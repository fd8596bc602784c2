#include "windregime/eval.hpp"

#include <doctest.h>

#include <cmath>

using namespace wr;

TEST_SUITE("eval") {

TEST_CASE("mean absolute error as a share of capacity") {
  const Eigen::Vector2d y(10, 20), yhat(12, 18);
  CHECK(mae_pct(y, yhat, 100.0) == doctest::Approx(2.0));
  CHECK(mae_pct(y, y, 100.0) == 0.0);
  CHECK(mae_pct(y, (y.array() + 3.0).matrix(), 60.0) == doctest::Approx(5.0));
}

TEST_CASE("root mean squared error") {
  const Eigen::Vector2d y(0, 0), yhat(3, 4);
  CHECK(rmse(y, yhat) == doctest::Approx(std::sqrt(12.5)));
  CHECK(rmse(y, y) == 0.0);
  Eigen::VectorXd one(1), e(1);
  one << 1.0;
  e << -2.5;
  CHECK(rmse(one, e) == doctest::Approx(3.5));
}

TEST_CASE("coefficient of determination") {
  const Eigen::Vector3d y(0, 1, 2);
  CHECK(r2(y, y) == 1.0);
  CHECK(r2(y, Eigen::Vector3d::Constant(1.0)) == doctest::Approx(0.0));
  CHECK(r2(y, Eigen::Vector3d(0, 1, 1)) == doctest::Approx(0.5));
  const auto flat = metric_row("0", Eigen::Vector2d(1, 1), Eigen::Vector2d(1, 2), 10.0);
  CHECK(std::isnan(flat.r2));
  const auto single = metric_row("0", Eigen::VectorXd::Ones(1), Eigen::VectorXd::Ones(1), 10.0);
  CHECK(std::isnan(single.r2));
}

TEST_CASE("cluster-weighted aggregation") {
  MetricRow a{"0", 100, 2.0, 1.0, 0.5};
  MetricRow b{"1", 300, 4.0, 2.0, 0.9};
  const auto agg = weighted_aggregate({a, b});
  CHECK(agg.scope == "all");
  CHECK(agg.n == 400);
  CHECK(agg.mae_pct == doctest::Approx(3.5));
  CHECK(agg.r2 == doctest::Approx(0.8));
  CHECK(agg.rmse == doctest::Approx(std::sqrt((100 * 1.0 + 300 * 4.0) / 400.0)));
  const auto same = weighted_aggregate({a});
  CHECK(same.mae_pct == a.mae_pct);
  CHECK(same.rmse == doctest::Approx(a.rmse));
  MetricRow c{"2", 50, 2.0, 1.0, std::nan("")};
  CHECK(weighted_aggregate({a, c}).r2 == doctest::Approx(0.5));
  CHECK(weighted_aggregate({a, c}).mae_pct == doctest::Approx(2.0));
}

}
