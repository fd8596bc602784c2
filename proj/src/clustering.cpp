#include "windregime/clustering.hpp"

#include "windregime/error.hpp"

#include <limits>
#include <numeric>

namespace wr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NearestCache {
  std::vector<Eigen::Index> nn;
  std::vector<double> dist;
};

}  // namespace

Dendrogram ward_linkage(const Eigen::Ref<const Eigen::MatrixXd>& points) {
  const Eigen::Index n = points.rows();
  if (n < 1) throw Error(ErrorCode::EmptyInput, "ward_linkage on empty point set");

  // Upper triangle holds the merge cost between clusters i < j.
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      cost(i, j) = 0.5 * (points.row(i) - points.row(j)).squaredNorm();
    }
  }
  std::vector<bool> active(static_cast<std::size_t>(n), true);
  std::vector<double> size(static_cast<std::size_t>(n), 1.0);
  NearestCache cache{std::vector<Eigen::Index>(static_cast<std::size_t>(n), -1),
                     std::vector<double>(static_cast<std::size_t>(n), kInf)};

  auto refresh_row = [&](Eigen::Index i) {
    const auto ui = static_cast<std::size_t>(i);
    cache.nn[ui] = -1;
    cache.dist[ui] = kInf;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if (active[static_cast<std::size_t>(j)] && cost(i, j) < cache.dist[ui]) {
        cache.dist[ui] = cost(i, j);
        cache.nn[ui] = j;
      }
    }
  };
  for (Eigen::Index i = 0; i < n; ++i) refresh_row(i);

  auto at = [&](Eigen::Index i, Eigen::Index j) -> double& { return i < j ? cost(i, j) : cost(j, i); };

  Dendrogram tree;
  tree.n = n;
  tree.merges.reserve(static_cast<std::size_t>(n > 0 ? n - 1 : 0));
  for (Eigen::Index step = 0; step + 1 < n; ++step) {
    Eigen::Index a = -1;
    double best = kInf;
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (active[ui] && cache.nn[ui] >= 0 && cache.dist[ui] < best) {
        best = cache.dist[ui];
        a = i;
      }
    }
    const Eigen::Index b = cache.nn[static_cast<std::size_t>(a)];
    tree.merges.push_back({a, b, best});

    const double na = size[static_cast<std::size_t>(a)];
    const double nb = size[static_cast<std::size_t>(b)];
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!active[static_cast<std::size_t>(k)] || k == a || k == b) continue;
      const double nk = size[static_cast<std::size_t>(k)];
      at(a, k) = ((na + nk) * at(a, k) + (nb + nk) * at(b, k) - nk * best) / (na + nb + nk);
    }
    active[static_cast<std::size_t>(b)] = false;
    size[static_cast<std::size_t>(a)] = na + nb;

    refresh_row(a);
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      if (!active[uk] || k == a) continue;
      if (cache.nn[uk] == a || cache.nn[uk] == b) {
        refresh_row(k);
      } else if (k < a) {
        const double d = cost(k, a);
        if (d < cache.dist[uk] || (d == cache.dist[uk] && a < cache.nn[uk])) {
          cache.dist[uk] = d;
          cache.nn[uk] = a;
        }
      }
    }
  }
  return tree;
}

std::vector<int> cut_dendrogram(const Dendrogram& dendrogram, int k) {
  const Eigen::Index n = dendrogram.n;
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "cluster count must be >= 1");
  if (k > n) throw Error(ErrorCode::KTooLarge, "K=" + std::to_string(k) + " exceeds n=" + std::to_string(n));

  std::vector<Eigen::Index> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), Eigen::Index{0});
  auto find = [&](Eigen::Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  };
  for (Eigen::Index m = 0; m < n - k; ++m) {
    const auto& merge = dendrogram.merges[static_cast<std::size_t>(m)];
    parent[static_cast<std::size_t>(find(merge.b))] = find(merge.a);
  }

  std::vector<int> root_label(static_cast<std::size_t>(n), -1);
  std::vector<int> labels(static_cast<std::size_t>(n));
  int next = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto r = static_cast<std::size_t>(find(i));
    if (root_label[r] < 0) root_label[r] = next++;
    labels[static_cast<std::size_t>(i)] = root_label[r];
  }
  return labels;
}

std::vector<int> ward_cluster(const Eigen::Ref<const Eigen::MatrixXd>& points, int k) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "cluster count must be >= 1");
  if (k > points.rows()) {
    throw Error(ErrorCode::KTooLarge, "K=" + std::to_string(k) + " exceeds n=" + std::to_string(points.rows()));
  }
  return cut_dendrogram(ward_linkage(points), k);
}

Eigen::MatrixXd compute_centroids(const Eigen::Ref<const Eigen::MatrixXd>& points, const std::vector<int>& labels) {
  if (static_cast<Eigen::Index>(labels.size()) != points.rows()) {
    throw Error(ErrorCode::LengthMismatch, "labels and points differ in length");
  }
  int k = 0;
  for (const int l : labels) {
    if (l < 0) throw Error(ErrorCode::InvalidArgument, "negative label");
    k = std::max(k, l + 1);
  }
  Eigen::MatrixXd centroids = Eigen::MatrixXd::Zero(k, points.cols());
  std::vector<double> counts(static_cast<std::size_t>(k), 0.0);
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    const auto l = labels[static_cast<std::size_t>(i)];
    centroids.row(l) += points.row(i);
    counts[static_cast<std::size_t>(l)] += 1.0;
  }
  for (int j = 0; j < k; ++j) {
    if (counts[static_cast<std::size_t>(j)] == 0.0) {
      throw Error(ErrorCode::EmptyClass, "label " + std::to_string(j) + " has no members");
    }
    centroids.row(j) /= counts[static_cast<std::size_t>(j)];
  }
  return centroids;
}

ClusterModel fit_cluster_model(const Eigen::Ref<const Eigen::MatrixXd>& points, int k) {
  ClusterModel model;
  model.k = k;
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "cluster count must be >= 1");
  if (k > points.rows()) {
    throw Error(ErrorCode::KTooLarge, "K=" + std::to_string(k) + " exceeds n=" + std::to_string(points.rows()));
  }
  model.dendrogram = ward_linkage(points);
  model.labels = cut_dendrogram(model.dendrogram, k);
  model.centroids = compute_centroids(points, model.labels);
  return model;
}

ClusterModel fit_cluster_model(const Eigen::Ref<const Eigen::MatrixXd>& points, int k, Eigen::Index max_ward_points) {
  const Eigen::Index n = points.rows();
  if (max_ward_points < 1 || n <= max_ward_points) return fit_cluster_model(points, k);
  const Eigen::Index stride = (n + max_ward_points - 1) / max_ward_points;
  Eigen::MatrixXd sample((n + stride - 1) / stride, points.cols());
  for (Eigen::Index i = 0; i < sample.rows(); ++i) sample.row(i) = points.row(i * stride);
  ClusterModel model = fit_cluster_model(sample, k);
  model.labels = assign_clusters(points, model.centroids);
  return model;
}

std::vector<int> assign_clusters(const Eigen::Ref<const Eigen::MatrixXd>& points, const Eigen::MatrixXd& centroids) {
  std::vector<int> labels(static_cast<std::size_t>(points.rows()));
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    labels[static_cast<std::size_t>(i)] = assign_cluster(points.row(i).transpose(), centroids);
  }
  return labels;
}

std::vector<std::size_t> cluster_sizes(const std::vector<int>& labels, int k) {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  for (const int l : labels) {
    if (l >= 0 && l < k) ++sizes[static_cast<std::size_t>(l)];
  }
  return sizes;
}

}  // namespace wr
