#include "windregime/gp.hpp"

#include "windregime/error.hpp"
#include "windregime/kernel.hpp"
#include "windregime/optim.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace wr {

InputVector build_input_vector(const Eigen::Ref<const LatentVector>& latent, const FarmSeries& series, std::size_t t) {
  const auto& recs = series.records;
  if (t >= recs.size()) throw Error(ErrorCode::InvalidArgument, "hour index out of range");
  if (t < 2 || recs[t].timestamp - recs[t - 1].timestamp != kSecondsPerHour ||
      recs[t - 1].timestamp - recs[t - 2].timestamp != kSecondsPerHour) {
    throw Error(ErrorCode::InsufficientHistory, series.farm_id + " at " + format_timestamp(recs[t].timestamp));
  }
  const auto& now = recs[t];
  const double two_pi = 2.0 * std::numbers::pi;
  const double hour = two_pi * hour_of_day(now.timestamp) / 24.0;
  const double month = two_pi * (month_of_year(now.timestamp) - 1) / 12.0;
  const double theta = now.wind_direction * std::numbers::pi / 180.0;
  InputVector v;
  v.head<kLatentDim>() = latent;
  v.tail<12>() << now.wind_speed, now.roughness, recs[t - 1].power / series.capacity,
      recs[t - 2].power / series.capacity, recs[t - 1].wind_speed, recs[t - 2].wind_speed, std::sin(hour),
      std::cos(hour), std::sin(month), std::cos(month), std::sin(theta), std::cos(theta);
  return v;
}

GPHyperparams GPHyperparams::defaults(Eigen::Index dim, double mean) {
  GPHyperparams hp;
  hp.log_sigma_f2 = 0.0;
  hp.log_sigma_n2 = std::log(0.1);
  hp.log_ell_rbf = Eigen::VectorXd::Zero(dim);
  hp.log_ell_mat = Eigen::VectorXd::Zero(dim);
  hp.mean = mean;
  return hp;
}

Eigen::VectorXd GPHyperparams::pack() const {
  const Eigen::Index d = dim();
  Eigen::VectorXd theta(packed_size(d));
  theta(0) = log_sigma_f2;
  theta(1) = log_sigma_n2;
  theta.segment(2, d) = log_ell_rbf;
  theta.segment(2 + d, d) = log_ell_mat;
  theta(2 + 2 * d) = mean;
  return theta;
}

GPHyperparams GPHyperparams::unpack(const Eigen::Ref<const Eigen::VectorXd>& theta, Eigen::Index dim) {
  if (theta.size() != packed_size(dim)) throw Error(ErrorCode::ShapeMismatch, "packed hyperparameter size");
  GPHyperparams hp;
  hp.log_sigma_f2 = theta(0);
  hp.log_sigma_n2 = theta(1);
  hp.log_ell_rbf = theta.segment(2, dim);
  hp.log_ell_mat = theta.segment(2 + dim, dim);
  hp.mean = theta(2 + 2 * dim);
  return hp;
}

double gp_kernel(const Eigen::Ref<const Eigen::VectorXd>& a, const Eigen::Ref<const Eigen::VectorXd>& b,
                 const GPHyperparams& hp) {
  return kernel::composite(a, b, hp.sigma_f2(), hp.ell_rbf(), hp.ell_mat());
}

Eigen::MatrixXd kernel_matrix(const Eigen::Ref<const Eigen::MatrixXd>& a, const Eigen::Ref<const Eigen::MatrixXd>& b,
                              const GPHyperparams& hp) {
  if (a.cols() != hp.dim() || b.cols() != hp.dim()) throw Error(ErrorCode::ShapeMismatch, "kernel input dimension");
  const Eigen::MatrixXd r2 = kernel::scaled_sq_dists(a, b, hp.ell_rbf());
  const Eigen::MatrixXd m2 = kernel::scaled_sq_dists(a, b, hp.ell_mat());
  return hp.sigma_f2() * (r2.unaryExpr(&kernel::rbf<double>) + m2.unaryExpr(&kernel::matern32<double>));
}

namespace {

constexpr std::array<double, 6> kJitterLadder = {0.0, 1e-10, 1e-9, 1e-8, 1e-7, 1e-6};

struct Factorised {
  Eigen::LLT<Eigen::MatrixXd> llt;
  double jitter = 0.0;
};

Factorised factorise(const Eigen::MatrixXd& ky) {
  Factorised f;
  for (const double jitter : kJitterLadder) {
    f.jitter = jitter;
    if (jitter == 0.0) {
      f.llt.compute(ky);
    } else {
      Eigen::MatrixXd jittered = ky;
      jittered.diagonal().array() += jitter;
      f.llt.compute(jittered);
    }
    if (f.llt.info() == Eigen::Success && f.llt.matrixLLT().diagonal().minCoeff() > 0.0) return f;
  }
  throw Error(ErrorCode::CholeskyFailure, "K_y not positive definite after jitter 1e-6");
}

void check_inputs(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                  const GPHyperparams& hp) {
  if (x.rows() != y.size()) throw Error(ErrorCode::LengthMismatch, "inputs and targets differ in length");
  if (x.rows() < 1) throw Error(ErrorCode::EmptyInput, "GP needs at least one observation");
  if (x.cols() != hp.dim() || hp.log_ell_mat.size() != hp.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "input dimension vs length-scales");
  }
}

/// sum_ij a_ij (x_i - x_j)^2 for symmetric a.
double weighted_sq_diff_sum(const Eigen::MatrixXd& a, const Eigen::VectorXd& x) {
  const Eigen::VectorXd xc = x.array() - x.mean();
  const Eigen::VectorXd ax = a * xc;
  return 2.0 * (xc.array().square() * a.rowwise().sum().array()).sum() - 2.0 * xc.dot(ax);
}

}  // namespace

MllResult mll_and_grad(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                       const GPHyperparams& hp) {
  check_inputs(x, y, hp);
  const Eigen::Index n = x.rows();
  const Eigen::Index d = hp.dim();
  const double sf2 = hp.sigma_f2();
  const double sn2 = hp.sigma_n2();

  const Eigen::MatrixXd r2 = kernel::scaled_sq_dists(x, x, hp.ell_rbf());
  const Eigen::MatrixXd m2 = kernel::scaled_sq_dists(x, x, hp.ell_mat());
  const Eigen::MatrixXd rbf = r2.unaryExpr(&kernel::rbf<double>);
  const Eigen::MatrixXd mat = m2.unaryExpr(&kernel::matern32<double>);
  const Eigen::MatrixXd mat_w = m2.unaryExpr(&kernel::matern32_log_ell_weight<double>);
  const Eigen::MatrixXd kf = sf2 * (rbf + mat);
  Eigen::MatrixXd ky = kf;
  ky.diagonal().array() += sn2;

  const Factorised f = factorise(ky);
  const Eigen::VectorXd resid = y.array() - hp.mean;
  const Eigen::VectorXd alpha = f.llt.solve(resid);
  const double log_det = 2.0 * f.llt.matrixLLT().diagonal().array().log().sum();

  MllResult out;
  out.jitter = f.jitter;
  out.value = -0.5 * resid.dot(alpha) - 0.5 * log_det - 0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);

  const Eigen::MatrixXd kinv = f.llt.solve(Eigen::MatrixXd::Identity(n, n));
  const Eigen::MatrixXd w = alpha * alpha.transpose() - kinv;

  out.gradient.resize(GPHyperparams::packed_size(d));
  out.gradient(0) = 0.5 * w.cwiseProduct(kf).sum();
  out.gradient(1) = 0.5 * sn2 * w.trace();
  const Eigen::MatrixXd a_rbf = sf2 * w.cwiseProduct(rbf);
  const Eigen::MatrixXd a_mat = sf2 * w.cwiseProduct(mat_w);
  const Eigen::VectorXd ell_rbf = hp.ell_rbf();
  const Eigen::VectorXd ell_mat = hp.ell_mat();
  for (Eigen::Index k = 0; k < d; ++k) {
    const Eigen::VectorXd col = x.col(k);
    out.gradient(2 + k) = 0.5 * weighted_sq_diff_sum(a_rbf, col) / (ell_rbf(k) * ell_rbf(k));
    out.gradient(2 + d + k) = 0.5 * weighted_sq_diff_sum(a_mat, col) / (ell_mat(k) * ell_mat(k));
  }
  out.gradient(2 + 2 * d) = alpha.sum();
  return out;
}

GPModel condition_gp(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                     const GPHyperparams& hp, int cluster_id) {
  check_inputs(x, y, hp);
  GPModel model;
  model.cluster_id = cluster_id;
  model.hp = hp;
  model.x = x;
  model.y = y;
  Eigen::MatrixXd ky = kernel_matrix(x, x, hp);
  ky.diagonal().array() += hp.sigma_n2();
  const Factorised f = factorise(ky);
  model.jitter = f.jitter;
  model.chol = f.llt.matrixL();
  model.alpha = f.llt.solve((y.array() - hp.mean).matrix());
  return model;
}

GPModel prior_gp(const GPHyperparams& hp, int cluster_id) {
  GPModel model;
  model.cluster_id = cluster_id;
  model.hp = hp;
  model.x.resize(0, hp.dim());
  return model;
}

Prediction predict(const GPModel& model, const Eigen::Ref<const Eigen::VectorXd>& x_star) {
  if (x_star.size() != model.hp.dim()) throw Error(ErrorCode::ShapeMismatch, "prediction input dimension");
  if (model.x.rows() == 0) return {model.hp.mean, 2.0 * model.hp.sigma_f2()};
  const Eigen::MatrixXd star = x_star.transpose();
  const Eigen::VectorXd k_star = kernel_matrix(model.x, star, model.hp).col(0);
  Prediction p;
  p.mean = model.hp.mean + k_star.dot(model.alpha);
  const Eigen::VectorXd v = model.chol.triangularView<Eigen::Lower>().solve(k_star);
  p.variance = std::max(0.0, 2.0 * model.hp.sigma_f2() - v.squaredNorm());
  return p;
}

GPFitResult fit_gp(const Eigen::Ref<const Eigen::MatrixXd>& x, const Eigen::Ref<const Eigen::VectorXd>& y,
                   const GPHyperparams& hp0, const GPFitOptions& options, int cluster_id) {
  check_inputs(x, y, hp0);
  const Eigen::Index n = std::min<Eigen::Index>(x.rows(), std::max<Eigen::Index>(options.max_points, 1));
  const Eigen::MatrixXd xs = x.bottomRows(n);
  const Eigen::VectorXd ys = y.tail(n);
  const Eigen::Index d = hp0.dim();

  const Objective objective = [&](const Eigen::VectorXd& theta, Eigen::VectorXd& grad) {
    try {
      const MllResult r = mll_and_grad(xs, ys, GPHyperparams::unpack(theta, d));
      grad = -r.gradient;
      return -r.value;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::CholeskyFailure) throw;
      grad = Eigen::VectorXd::Zero(theta.size());
      return std::numeric_limits<double>::infinity();
    }
  };

  const MllResult start = mll_and_grad(xs, ys, hp0);
  if (!std::isfinite(start.value) || !start.gradient.allFinite()) {
    throw Error(ErrorCode::NonFiniteMLL, "initial marginal likelihood is not finite");
  }
  Eigen::Array<bool, Eigen::Dynamic, 1> free = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(
      GPHyperparams::packed_size(d), true);
  if (options.fix_noise) free(GPHyperparams::noise_index()) = false;

  LbfgsOptions lbfgs;
  lbfgs.max_iterations = options.max_iterations;
  lbfgs.gradient_tolerance = options.gradient_tolerance;
  const LbfgsResult r = minimize_lbfgs(objective, hp0.pack(), lbfgs, free);
  if (!std::isfinite(r.value)) throw Error(ErrorCode::NonFiniteMLL, "optimiser ended at a non-finite point");

  GPHyperparams best = GPHyperparams::unpack(r.x, d);
  if (options.fix_noise) best.log_sigma_n2 = hp0.log_sigma_n2;

  GPFitResult out;
  out.model = condition_gp(xs, ys, best, cluster_id);
  out.initial_mll = start.value;
  out.final_mll = -r.value;
  out.iterations = r.iterations;
  out.converged = r.converged;
  return out;
}

}  // namespace wr
