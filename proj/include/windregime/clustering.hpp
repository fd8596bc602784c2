#pragma once

#include <Eigen/Dense>

#include <vector>

namespace wr {

/// One agglomeration step. Clusters are identified by their smallest member
/// index; merging `a < b` keeps id `a`.
struct Merge {
  Eigen::Index a = 0;
  Eigen::Index b = 0;
  double cost = 0.0;  // increase in within-cluster sum of squares
};

struct Dendrogram {
  Eigen::Index n = 0;
  std::vector<Merge> merges;  // n - 1 entries in merge order
};

struct ClusterModel {
  int k = 0;
  Eigen::MatrixXd centroids;  // k x dim, means of member points
  std::vector<int> labels;    // training labels in {0..k-1}
  Dendrogram dendrogram;
};

/// Ward-linkage agglomeration of the rows of `points`. Ties in merge cost go
/// to the lexicographically smallest (a, b).
Dendrogram ward_linkage(const Eigen::Ref<const Eigen::MatrixXd>& points);

/// Labels obtained by replaying the first n - k merges. Cluster ids are
/// numbered in order of their smallest member index.
std::vector<int> cut_dendrogram(const Dendrogram& dendrogram, int k);

std::vector<int> ward_cluster(const Eigen::Ref<const Eigen::MatrixXd>& points, int k);

Eigen::MatrixXd compute_centroids(const Eigen::Ref<const Eigen::MatrixXd>& points,
                                  const std::vector<int>& labels);

ClusterModel fit_cluster_model(const Eigen::Ref<const Eigen::MatrixXd>& points, int k);

/// Ward on an evenly strided subsample of at most `max_ward_points` rows,
/// then every point is labelled by its nearest centroid. The dendrogram
/// describes the subsample.
ClusterModel fit_cluster_model(const Eigen::Ref<const Eigen::MatrixXd>& points, int k, Eigen::Index max_ward_points);

/// Nearest centroid by Euclidean distance; ties go to the smallest id.
template <typename Derived>
int assign_cluster(const Eigen::MatrixBase<Derived>& point, const Eigen::MatrixXd& centroids) {
  int best = 0;
  double best_d = (centroids.row(0).transpose() - point).squaredNorm();
  for (Eigen::Index j = 1; j < centroids.rows(); ++j) {
    const double d = (centroids.row(j).transpose() - point).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(j);
    }
  }
  return best;
}

std::vector<int> assign_clusters(const Eigen::Ref<const Eigen::MatrixXd>& points, const Eigen::MatrixXd& centroids);

/// Number of members per label.
std::vector<std::size_t> cluster_sizes(const std::vector<int>& labels, int k);

}  // namespace wr
