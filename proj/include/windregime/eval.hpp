#pragma once

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <vector>

namespace wr {

double mae_pct(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& yhat,
               double capacity);
double rmse(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& yhat);
double r2(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& yhat);

struct MetricRow {
  std::string scope;  // cluster id or "all"
  std::size_t n = 0;
  double mae_pct = 0.0;
  double rmse = 0.0;  // MW
  double r2 = std::numeric_limits<double>::quiet_NaN();  // NaN when undefined
};

/// Metrics for one group; R^2 is NaN when fewer than two samples or zero variance.
MetricRow metric_row(std::string scope, const Eigen::Ref<const Eigen::VectorXd>& y,
                     const Eigen::Ref<const Eigen::VectorXd>& yhat, double capacity);

/// n-weighted MAE% and R^2 (over rows with defined R^2), pooled RMSE.
MetricRow weighted_aggregate(const std::vector<MetricRow>& rows);

}  // namespace wr
