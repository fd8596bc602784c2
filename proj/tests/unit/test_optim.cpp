#include "windregime/optim.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace wr;

TEST_SUITE("optim") {

TEST_CASE("Rosenbrock minimum") {
  const Objective rosen = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g.resize(2);
    g(0) = -2.0 * (1.0 - x(0)) - 400.0 * x(0) * (x(1) - x(0) * x(0));
    g(1) = 200.0 * (x(1) - x(0) * x(0));
    return std::pow(1.0 - x(0), 2) + 100.0 * std::pow(x(1) - x(0) * x(0), 2);
  };
  LbfgsOptions opts;
  opts.max_iterations = 500;
  opts.gradient_tolerance = 1e-8;
  const auto r = minimize_lbfgs(rosen, Eigen::Vector2d(-1.2, 1.0), opts, Eigen::Array<bool, 2, 1>(true, true));
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.x(1) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(r.converged);
}

TEST_CASE("frozen coordinates stay bitwise fixed") {
  const Objective bowl = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g = 2.0 * (x.array() - 3.0).matrix();
    return (x.array() - 3.0).square().sum();
  };
  Eigen::VectorXd x0(3);
  x0 << 0.1234567, -2.0, 7.0;
  Eigen::Array<bool, Eigen::Dynamic, 1> mask(3);
  mask << true, false, true;
  const auto r = minimize_lbfgs(bowl, x0, {}, mask);
  CHECK(r.x(1) == x0(1));
  CHECK(r.x(0) == doctest::Approx(3.0));
  CHECK(r.x(2) == doctest::Approx(3.0));
  Eigen::VectorXd g;
  CHECK(r.value <= bowl(x0, g));
}

TEST_CASE("infeasible points are backed away from") {
  const Objective log_barrier = [](const Eigen::VectorXd& x, Eigen::VectorXd& g) {
    g.resize(1);
    if (x(0) <= 0.0) return std::numeric_limits<double>::infinity();
    g(0) = 1.0 - 1.0 / x(0);
    return x(0) - std::log(x(0));
  };
  Eigen::VectorXd x0(1);
  x0 << 5.0;
  const auto r = minimize_lbfgs(log_barrier, x0, {}, Eigen::Array<bool, 1, 1>(true));
  CHECK(r.x(0) == doctest::Approx(1.0).epsilon(1e-4));
}

}
