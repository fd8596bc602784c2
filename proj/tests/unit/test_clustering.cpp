#include "support/helpers.hpp"
#include "support/oracles.hpp"

#include "windregime/clustering.hpp"
#include "windregime/error.hpp"

#include <doctest.h>

#include <limits>

using namespace wr;


using test::reference_ward;
using test::same_partition;

TEST_SUITE("clustering") {

TEST_CASE("line example") {
  Eigen::MatrixXd pts(4, 1);
  pts << 0, 1, 10, 11;
  CHECK(ward_cluster(pts, 2) == std::vector<int>{0, 0, 1, 1});
  CHECK(ward_cluster(pts, 4) == std::vector<int>{0, 1, 2, 3});
  CHECK(ward_cluster(pts, 1) == std::vector<int>{0, 0, 0, 0});
  const Dendrogram d = ward_linkage(pts);
  REQUIRE(d.merges.size() == 3);
  CHECK(d.merges[0].cost == doctest::Approx(0.5));
  CHECK(d.merges[2].cost == doctest::Approx(100.0));
}

TEST_CASE("duplicates are co-clustered first") {
  std::mt19937_64 rng(4);
  const Eigen::MatrixXd base = test::random_matrix(5, 3, rng);
  Eigen::MatrixXd pts(10, 3);
  pts << base, base;
  const auto labels = ward_cluster(pts, 5);
  for (int i = 0; i < 5; ++i) CHECK(labels[static_cast<std::size_t>(i)] == labels[static_cast<std::size_t>(i + 5)]);
  CHECK(same_partition(std::vector<int>(labels.begin(), labels.begin() + 5), ward_cluster(base, 5)));
}

TEST_CASE("matches the exhaustive reference on small random instances") {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> size(2, 8), dims(1, 4);
  int mismatches = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = size(rng);
    const Eigen::MatrixXd pts = test::random_matrix(n, dims(rng), rng);
    for (int k = 1; k <= n; ++k) {
      if (!same_partition(ward_cluster(pts, k), reference_ward(pts, k))) ++mismatches;
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("centroids") {
  Eigen::MatrixXd pts(3, 2);
  pts << 0, 0, 2, 0, 5, 5;
  const Eigen::MatrixXd c = compute_centroids(pts, {0, 0, 1});
  CHECK(c.row(0) == Eigen::RowVector2d(1, 0));
  CHECK(c.row(1) == Eigen::RowVector2d(5, 5));

  std::mt19937_64 rng(9);
  const Eigen::MatrixXd big = test::random_matrix(50, 4, rng);
  std::vector<int> labels;
  for (int i = 0; i < 50; ++i) labels.push_back((i * 7) % 5);
  const Eigen::MatrixXd got = compute_centroids(big, labels);
  for (int j = 0; j < 5; ++j) {
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(4);
    double n = 0;
    for (int i = 0; i < 50; ++i) {
      if (labels[static_cast<std::size_t>(i)] == j) {
        sum += big.row(i);
        n += 1;
      }
    }
    CHECK((got.row(j) - sum / n).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("assignment matches a linear scan") {
  std::mt19937_64 rng(77);
  const Eigen::MatrixXd centroids = test::random_matrix(7, 8, rng);
  CHECK(assign_cluster(Eigen::VectorXd(centroids.row(3).transpose()), centroids) == 3);

  Eigen::MatrixXd tie(5, 1);
  tie << 100, -1, 50, 50, 1;
  CHECK(assign_cluster(Eigen::VectorXd::Zero(1), tie) == 1);

  const Eigen::MatrixXd queries = test::random_matrix(1000, 8, rng);
  const auto got = assign_clusters(queries, centroids);
  for (Eigen::Index q = 0; q < queries.rows(); ++q) {
    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < centroids.rows(); ++j) {
      double d = 0.0;
      for (Eigen::Index c = 0; c < 8; ++c) d += (queries(q, c) - centroids(j, c)) * (queries(q, c) - centroids(j, c));
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(j);
      }
    }
    CHECK(got[static_cast<std::size_t>(q)] == best);
  }
}

TEST_CASE("capped Ward labels every point") {
  std::mt19937_64 rng(5);
  Eigen::MatrixXd pts = test::random_matrix(300, 2, rng, 0.1);
  pts.bottomRows(150).array() += 5.0;
  const ClusterModel m = fit_cluster_model(pts, 2, 60);
  CHECK(m.labels.size() == 300);
  CHECK(m.dendrogram.n == 60);
  for (int i = 0; i < 150; ++i) CHECK(m.labels[static_cast<std::size_t>(i)] == m.labels[0]);
  for (int i = 150; i < 300; ++i) CHECK(m.labels[static_cast<std::size_t>(i)] != m.labels[0]);
  const ClusterModel full = fit_cluster_model(pts, 2);
  CHECK(same_partition(full.labels, m.labels));
}

TEST_CASE("K larger than n is rejected") {
  Eigen::MatrixXd pts(3, 2);
  pts.setRandom();
  try {
    ward_cluster(pts, 4);
    FAIL("expected KTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KTooLarge);
  }
  CHECK(cluster_sizes({0, 1, 1, 2}, 3) == std::vector<std::size_t>{1, 2, 1});
}

}
