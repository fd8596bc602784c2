#pragma once

#include <Eigen/Dense>

#include <functional>

namespace wr {

struct LbfgsOptions {
  int max_iterations = 200;
  double gradient_tolerance = 1e-5;
  int history = 10;
  int max_line_search = 30;
  double armijo = 1e-4;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  Eigen::VectorXd gradient;
  int iterations = 0;
  bool converged = false;
};

/// Objective returning f(x) and writing df/dx into `grad`. Returning a
/// non-finite value marks `x` as infeasible; the line search backs off.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

/// Limited-memory BFGS minimisation with a backtracking Armijo line search.
/// Coordinates with `free_mask(i) == false` are never moved. The returned
/// value is never above f(x0).
LbfgsResult minimize_lbfgs(const Objective& objective, Eigen::VectorXd x0, const LbfgsOptions& options,
                           const Eigen::Array<bool, Eigen::Dynamic, 1>& free_mask);

}  // namespace wr
