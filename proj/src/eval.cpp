#include "windregime/eval.hpp"

#include "windregime/error.hpp"

#include <cmath>

namespace wr {

namespace {

void check_lengths(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& yhat) {
  if (y.size() != yhat.size()) throw Error(ErrorCode::LengthMismatch, "observed vs predicted");
  if (y.size() == 0) throw Error(ErrorCode::EmptyInput, "no samples");
}

}  // namespace

double mae_pct(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& yhat,
               double capacity) {
  check_lengths(y, yhat);
  if (!(capacity > 0.0)) throw Error(ErrorCode::InvalidArgument, "capacity must be positive");
  return 100.0 * (y - yhat).cwiseAbs().mean() / capacity;
}

double rmse(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& yhat) {
  check_lengths(y, yhat);
  return std::sqrt((y - yhat).squaredNorm() / static_cast<double>(y.size()));
}

double r2(const Eigen::Ref<const Eigen::VectorXd>& y, const Eigen::Ref<const Eigen::VectorXd>& yhat) {
  check_lengths(y, yhat);
  if (y.size() < 2) throw Error(ErrorCode::ZeroVariance, "R^2 needs at least two samples");
  const double ss_tot = (y.array() - y.mean()).square().sum();
  if (!(ss_tot > 0.0)) throw Error(ErrorCode::ZeroVariance, "observed values are constant");
  return 1.0 - (y - yhat).squaredNorm() / ss_tot;
}

MetricRow metric_row(std::string scope, const Eigen::Ref<const Eigen::VectorXd>& y,
                     const Eigen::Ref<const Eigen::VectorXd>& yhat, double capacity) {
  MetricRow row;
  row.scope = std::move(scope);
  row.n = static_cast<std::size_t>(y.size());
  row.mae_pct = mae_pct(y, yhat, capacity);
  row.rmse = rmse(y, yhat);
  try {
    row.r2 = r2(y, yhat);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::ZeroVariance) throw;
  }
  return row;
}

MetricRow weighted_aggregate(const std::vector<MetricRow>& rows) {
  if (rows.empty()) throw Error(ErrorCode::EmptyInput, "no rows to aggregate");
  MetricRow out;
  out.scope = "all";
  double mae = 0.0, sq = 0.0, r2_sum = 0.0, r2_weight = 0.0;
  for (const auto& row : rows) {
    const auto w = static_cast<double>(row.n);
    out.n += row.n;
    mae += w * row.mae_pct;
    sq += w * row.rmse * row.rmse;
    if (std::isfinite(row.r2)) {
      r2_sum += w * row.r2;
      r2_weight += w;
    }
  }
  if (out.n == 0) throw Error(ErrorCode::EmptyInput, "rows carry no samples");
  const auto total = static_cast<double>(out.n);
  out.mae_pct = mae / total;
  out.rmse = std::sqrt(sq / total);
  if (r2_weight > 0.0) out.r2 = r2_sum / r2_weight;
  return out;
}

}  // namespace wr
