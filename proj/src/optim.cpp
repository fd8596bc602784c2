#include "windregime/optim.hpp"

#include <cmath>
#include <deque>

namespace wr {

LbfgsResult minimize_lbfgs(const Objective& objective, Eigen::VectorXd x0, const LbfgsOptions& options,
                           const Eigen::Array<bool, Eigen::Dynamic, 1>& free_mask) {
  const Eigen::Index n = x0.size();
  const Eigen::VectorXd mask = free_mask.cast<double>().matrix();

  LbfgsResult r;
  r.x = std::move(x0);
  r.gradient.resize(n);
  r.value = objective(r.x, r.gradient);
  r.gradient = r.gradient.cwiseProduct(mask);
  if (!std::isfinite(r.value)) return r;

  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;
  Eigen::VectorXd grad_new(n);

  for (r.iterations = 0; r.iterations < options.max_iterations; ++r.iterations) {
    if (r.gradient.norm() < options.gradient_tolerance) {
      r.converged = true;
      break;
    }
    // Two-loop recursion.
    Eigen::VectorXd q = r.gradient;
    std::vector<double> alpha(s_hist.size());
    for (std::size_t i = s_hist.size(); i-- > 0;) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    double gamma = 1.0;
    if (!s_hist.empty()) gamma = s_hist.back().dot(y_hist.back()) / y_hist.back().squaredNorm();
    Eigen::VectorXd d = gamma * q;
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(d);
      d += s_hist[i] * (alpha[i] - beta);
    }
    d = -d.cwiseProduct(mask);
    double slope = r.gradient.dot(d);
    if (!(slope < 0.0)) {
      s_hist.clear();
      y_hist.clear();
      rho_hist.clear();
      d = -r.gradient;
      slope = -r.gradient.squaredNorm();
    }

    double step = s_hist.empty() ? std::min(1.0, 1.0 / r.gradient.norm()) : 1.0;
    bool accepted = false;
    Eigen::VectorXd x_new;
    double f_new = 0.0;
    for (int ls = 0; ls < options.max_line_search; ++ls) {
      x_new = r.x + step * d;
      f_new = objective(x_new, grad_new);
      if (std::isfinite(f_new) && grad_new.allFinite() && f_new <= r.value + options.armijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;

    grad_new = grad_new.cwiseProduct(mask);
    Eigen::VectorXd s = x_new - r.x;
    Eigen::VectorXd y = grad_new - r.gradient;
    const double sy = s.dot(y);
    const double f_old = r.value;
    r.x = std::move(x_new);
    r.value = f_new;
    r.gradient = grad_new;
    if (sy > 1e-12 * std::max(1.0, s.norm() * y.norm())) {
      s_hist.push_back(std::move(s));
      y_hist.push_back(std::move(y));
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > options.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    if (std::abs(f_old - f_new) <= 1e-15 * std::max(1.0, std::abs(f_new))) {
      r.converged = r.gradient.norm() < options.gradient_tolerance;
      ++r.iterations;
      break;
    }
  }
  if (!r.converged && r.gradient.norm() < options.gradient_tolerance) r.converged = true;
  return r;
}

}  // namespace wr
