#include "windregime/library.hpp"

#include "windregime/container.hpp"
#include "windregime/error.hpp"

#include <string>

namespace wr {

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

Eigen::MatrixXd labels_tensor(const std::vector<int>& labels) {
  Eigen::MatrixXd t(static_cast<Eigen::Index>(labels.size()), 1);
  for (std::size_t i = 0; i < labels.size(); ++i) t(static_cast<Eigen::Index>(i), 0) = labels[i];
  return t;
}

}  // namespace

json to_json(const VAEConfig& c) {
  return {
      {"p", c.p},
      {"conv1_channels", c.conv1_channels},
      {"conv2_channels", c.conv2_channels},
      {"hidden", c.hidden},
      {"beta_start", c.beta_start},
      {"beta_end", c.beta_end},
      {"anneal_fraction", c.anneal_fraction},
      {"max_epochs", c.max_epochs},
      {"batch_size", c.batch_size},
      {"learning_rate", c.learning_rate},
      {"weight_decay", c.weight_decay},
      {"patience", c.patience},
      {"validation_fraction", c.validation_fraction},
      {"seed", c.seed},
  };
}

VAEConfig vae_config_from_json(const json& j, VAEConfig c) {
  try {
    read_field(j, "p", c.p);
    read_field(j, "conv1_channels", c.conv1_channels);
    read_field(j, "conv2_channels", c.conv2_channels);
    read_field(j, "hidden", c.hidden);
    read_field(j, "beta_start", c.beta_start);
    read_field(j, "beta_end", c.beta_end);
    read_field(j, "anneal_fraction", c.anneal_fraction);
    read_field(j, "max_epochs", c.max_epochs);
    read_field(j, "batch_size", c.batch_size);
    read_field(j, "learning_rate", c.learning_rate);
    read_field(j, "weight_decay", c.weight_decay);
    read_field(j, "patience", c.patience);
    read_field(j, "validation_fraction", c.validation_fraction);
    read_field(j, "seed", c.seed);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("vae config: ") + e.what());
  }
  return c;
}

void save_vae(const VAEModel& model, const std::filesystem::path& stem) {
  Container c;
  c.kind = "vae";
  c.meta["config"] = to_json(model.config);
  c.meta["latent_dim"] = kLatentDim;
  c.put("stats.mean", model.stats.mean);
  c.put("stats.stddev", model.stats.stddev);
  for (const auto& name : model.params.names()) c.put("param." + name, model.params.at(name));
  save_container(stem, c);
}

VAEModel load_vae(const std::filesystem::path& stem) {
  const Container c = load_container(stem, "vae");
  VAEModel model;
  model.config = vae_config_from_json(c.meta.at("config"));
  const auto& mean = c.get("stats.mean");
  const auto& stddev = c.get("stats.stddev");
  if (mean.size() != kNumFeatures || stddev.size() != kNumFeatures) {
    throw Error(ErrorCode::CorruptBlob, "standardisation statistics have the wrong size");
  }
  model.stats.mean = mean.reshaped();
  model.stats.stddev = stddev.reshaped();
  // The reference layout comes from a fresh initialisation of the same config.
  const VAEModel reference = init_vae(model.config, model.stats);
  for (const auto& name : reference.params.names()) {
    const auto& t = c.get("param." + name);
    const auto& ref = reference.params.at(name);
    if (t.rows() != ref.rows() || t.cols() != ref.cols()) {
      throw Error(ErrorCode::CorruptBlob, "parameter " + name + " has the wrong shape");
    }
    model.params.add(name, t);
  }
  return model;
}

void save_cluster_model(const ClusterModel& model, const std::filesystem::path& stem) {
  Container c;
  c.kind = "clusters";
  c.meta["k"] = model.k;
  c.meta["dendrogram_n"] = model.dendrogram.n;
  c.put("centroids", model.centroids);
  c.put("labels", labels_tensor(model.labels));
  Eigen::MatrixXd merges(static_cast<Eigen::Index>(model.dendrogram.merges.size()), 3);
  for (std::size_t i = 0; i < model.dendrogram.merges.size(); ++i) {
    const auto& m = model.dendrogram.merges[i];
    merges.row(static_cast<Eigen::Index>(i)) << static_cast<double>(m.a), static_cast<double>(m.b), m.cost;
  }
  c.put("merges", merges);
  save_container(stem, c);
}

ClusterModel load_cluster_model(const std::filesystem::path& stem) {
  const Container c = load_container(stem, "clusters");
  ClusterModel model;
  model.k = c.meta.at("k").get<int>();
  model.centroids = c.get("centroids");
  if (model.centroids.rows() != model.k) throw Error(ErrorCode::CorruptBlob, "centroid count differs from k");
  const auto& labels = c.get("labels");
  model.labels.resize(static_cast<std::size_t>(labels.size()));
  for (Eigen::Index i = 0; i < labels.size(); ++i) model.labels[static_cast<std::size_t>(i)] = static_cast<int>(labels(i));
  model.dendrogram.n = c.meta.at("dendrogram_n").get<Eigen::Index>();
  const auto& merges = c.get("merges");
  for (Eigen::Index i = 0; i < merges.rows(); ++i) {
    model.dendrogram.merges.push_back(
        {static_cast<Eigen::Index>(merges(i, 0)), static_cast<Eigen::Index>(merges(i, 1)), merges(i, 2)});
  }
  return model;
}

void save_gp(const GPModel& model, const std::filesystem::path& stem) {
  Container c;
  c.kind = "gp";
  c.meta["cluster_id"] = model.cluster_id;
  c.meta["dim"] = model.hp.dim();
  c.meta["sigma_f2"] = model.hp.sigma_f2();
  c.meta["sigma_n2"] = model.hp.sigma_n2();
  c.meta["mean"] = model.hp.mean;
  c.meta["target_units"] = "fraction of capacity";
  c.put("theta", model.hp.pack());
  c.put("x", model.x);
  c.put("y", model.y);
  save_container(stem, c);
}

GPModel load_gp(const std::filesystem::path& stem) {
  const Container c = load_container(stem, "gp");
  const auto dim = c.meta.at("dim").get<Eigen::Index>();
  const auto& theta = c.get("theta");
  if (theta.size() != GPHyperparams::packed_size(dim)) throw Error(ErrorCode::CorruptBlob, "hyperparameter length");
  const GPHyperparams hp = GPHyperparams::unpack(theta.reshaped(), dim);
  const int cluster_id = c.meta.at("cluster_id").get<int>();
  const auto& x = c.get("x");
  const auto& y = c.get("y");
  if (x.rows() == 0) return prior_gp(hp, cluster_id);
  if (x.cols() != dim || y.size() != x.rows()) throw Error(ErrorCode::CorruptBlob, "GP training data shape");
  return condition_gp(x, y.reshaped(), hp, cluster_id);
}

void save_library(const SourceLibrary& library, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_vae(library.vae, dir / "vae");
  save_cluster_model(library.clusters, dir / "clusters");
  json gps = json::array();
  for (std::size_t i = 0; i < library.gps.size(); ++i) {
    const std::string stem = "gp_" + std::to_string(i);
    save_gp(library.gps[i], dir / stem);
    gps.push_back({{"file", stem}, {"fallback", i < library.fallback.size() && library.fallback[i]}});
  }
  Container index;
  index.kind = "library";
  index.meta = {{"p", library.vae.config.p}, {"k", library.clusters.k}, {"vae", "vae"}, {"clusters", "clusters"},
                {"gps", gps}};
  save_container(dir / "library", index);
}

SourceLibrary load_library(const std::filesystem::path& dir) {
  const Container index = load_container(dir / "library", "library");
  SourceLibrary library;
  library.vae = load_vae(dir / index.meta.at("vae").get<std::string>());
  library.clusters = load_cluster_model(dir / index.meta.at("clusters").get<std::string>());
  for (const auto& entry : index.meta.at("gps")) {
    library.gps.push_back(load_gp(dir / entry.at("file").get<std::string>()));
    library.fallback.push_back(entry.at("fallback").get<bool>());
  }
  if (static_cast<int>(library.gps.size()) != library.clusters.k) {
    throw Error(ErrorCode::CorruptBlob, "library holds a different number of GPs than clusters");
  }
  return library;
}

}  // namespace wr
