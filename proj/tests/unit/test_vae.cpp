#include "support/checks.hpp"
#include "support/helpers.hpp"

#include "windregime/clustering.hpp"
#include "windregime/error.hpp"
#include "windregime/log.hpp"
#include "windregime/vae.hpp"

#include <doctest.h>

#include <cmath>

using namespace wr;

namespace {

std::vector<Period> standardized_periods(std::uint64_t seed, const std::vector<RegimeSpec>& regimes, std::size_t hours,
                                         int p, FeatureStats* stats = nullptr, std::vector<int>* regime = nullptr) {
  const auto farm = generate_synthetic_farm(seed, regimes, hours, 100.0);
  const auto periods = segment_periods(farm.series, p);
  const auto s = fit_standardizer(periods);
  if (stats) *stats = s;
  if (regime) *regime = test::majority_regime(periods, farm.regime, static_cast<int>(regimes.size()));
  return apply_standardizer(periods, s);
}

}  // namespace

TEST_SUITE("vae") {

TEST_CASE("encoder and decoder shapes for every period length") {
  for (const int p : {6, 12, 24, 36, 48}) {
    const auto periods = standardized_periods(1, test::three_regimes(), static_cast<std::size_t>(4 * p), p);
    const auto model = init_vae(test::tiny_vae_config(p), {});
    const Encoding e = encode(model, periods[0].features);
    CHECK(e.mu.size() == kLatentDim);
    CHECK(e.logvar.size() == kLatentDim);
    const Eigen::MatrixXd xhat = decode(model, e.mu);
    CHECK(xhat.rows() == p);
    CHECK(xhat.cols() == kNumFeatures);
    CHECK(encode_means(model, periods).rows() == static_cast<Eigen::Index>(periods.size()));
  }
}

TEST_CASE("encoding is deterministic and locally continuous") {
  const auto periods = standardized_periods(2, test::three_regimes(), 60, 6);
  const auto model = init_vae(VAEConfig{}, {});
  const Encoding a = encode(model, periods[3].features);
  const Encoding b = encode(model, periods[3].features);
  CHECK(a.mu == b.mu);
  CHECK(a.logvar == b.logvar);
  Eigen::MatrixXd nudged = periods[3].features;
  nudged(2, 0) += 1e-6;
  CHECK((encode(model, nudged).mu - a.mu).cwiseAbs().maxCoeff() < 1e-2);
  CHECK(decode(model, a.mu) == decode(model, a.mu));
  CHECK_THROWS_AS(encode(model, Eigen::MatrixXd::Zero(5, kNumFeatures)), Error);
}

TEST_CASE("reparameterisation") {
  LatentVector mu = LatentVector::LinSpaced(-1.0, 1.0);
  LatentVector zero = LatentVector::Zero();
  CHECK(reparameterize(mu, zero, zero) == mu);
  CHECK((reparameterize(mu, zero, LatentVector::Ones()) - (mu.array() + 1.0).matrix()).norm() < 1e-15);
  LatentVector lv = LatentVector::Constant(2.0 * std::log(2.0));
  LatentVector eps = LatentVector::Unit(0);
  const LatentVector z = reparameterize(mu, lv, eps);
  CHECK(z(0) == doctest::Approx(mu(0) + 2.0).epsilon(1e-14));
  CHECK(z(1) == mu(1));
}

TEST_CASE("loss examples") {
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(6, kNumFeatures);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(kLatentDim);
  CHECK(vae_loss(x, x, zero, zero, 1.0) == 0.0);
  const Eigen::VectorXd e1 = Eigen::VectorXd::Unit(kLatentDim, 0);
  CHECK(vae_loss(x, x, e1, zero, 1.0) == doctest::Approx(0.5));
  const Eigen::MatrixXd xhat = x.array() + 0.5;
  CHECK(vae_loss(x, xhat, e1, zero, 0.0) == doctest::Approx(0.25));
  CHECK(kl_divergence(e1, zero) == doctest::Approx(0.5));
}

TEST_CASE("beta schedule") {
  VAEConfig c;
  c.max_epochs = 200;
  CHECK(beta_at_epoch(c, 0) == doctest::Approx(0.01));
  CHECK(beta_at_epoch(c, 99) == doctest::Approx(1.0));
  CHECK(beta_at_epoch(c, 150) == doctest::Approx(1.0));
  CHECK(beta_at_epoch(c, 49) == doctest::Approx(0.01 + 0.99 * 49.0 / 99.0));
  for (int e = 1; e < 200; ++e) CHECK(beta_at_epoch(c, e) >= beta_at_epoch(c, e - 1));
}

TEST_CASE("backprop matches finite differences on the tiny network") {
  std::mt19937_64 rng(3);
  const auto periods = standardized_periods(4, test::three_regimes(), 120, 6);
  const auto model = init_vae(test::tiny_vae_config(), {});
  std::vector<Eigen::MatrixXd> inputs = {periods[0].features, periods[5].features, periods[9].features};
  const Eigen::MatrixXd eps = test::random_matrix(kLatentDim, 3, rng);
  CHECK(test::vae_gradient_check(model, inputs, eps, 0.7, 100, rng) < 1e-4);
}

TEST_CASE("L2 normalisation") {
  Eigen::MatrixXd m(3, kLatentDim);
  m.setZero();
  m(0, 0) = 2.0;
  m.row(1).setConstant(-0.3);
  std::size_t zeros = 0;
  const Eigen::MatrixXd n = l2_normalize_rows(m, &zeros);
  CHECK(n.row(0) == Eigen::RowVectorXd::Unit(kLatentDim, 0));
  CHECK(std::abs(n.row(1).norm() - 1.0) < 1e-12);
  CHECK(n.row(2).isZero());
  CHECK(zeros == 1);
}

TEST_CASE("training is deterministic, reduces reconstruction and separates two regimes") {
  log::set_level(log::Level::Quiet);
  FeatureStats stats;
  std::vector<int> truth;
  const auto periods = standardized_periods(21, test::two_regimes(), 3000, 6, &stats, &truth);
  VAEConfig config = test::fast_vae_config();
  config.seed = 42;
  const TrainResult a = train_vae(periods, config, stats);
  const TrainResult b = train_vae(periods, config, stats);
  CHECK(a.model.params == b.model.params);

  std::vector<const Eigen::MatrixXd*> all;
  for (const auto& p : periods) all.push_back(&p.features);
  const Eigen::MatrixXd zero_eps = Eigen::MatrixXd::Zero(kLatentDim, static_cast<Eigen::Index>(all.size()));
  const double final_mse = batch_loss(a.model, all, zero_eps, 0.0, nullptr).reconstruction;
  CHECK(final_mse <= 0.5 * a.log.front().reconstruction);
  for (const auto& e : a.log) CHECK(e.beta >= 0.01);

  const Embedding emb = embed_periods(a.model, periods);
  for (Eigen::Index i = 0; i < emb.normalized.rows(); ++i) {
    if (emb.normalized.row(i).norm() > 0.0) CHECK(std::abs(emb.normalized.row(i).norm() - 1.0) < 1e-12);
  }
  const auto labels = ward_cluster(emb.normalized, 2);
  CHECK(test::purity(labels, truth) >= 0.9);
}

TEST_CASE("invalid configurations are rejected") {
  VAEConfig c;
  c.p = 1;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.beta_start = 2.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

}
