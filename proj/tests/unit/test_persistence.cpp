#include "support/experiments.hpp"

#include "windregime/container.hpp"
#include "windregime/error.hpp"
#include "windregime/library.hpp"

#include <doctest.h>

#include <fstream>

using namespace wr;

namespace {

ErrorCode load_error(const std::filesystem::path& stem, std::string_view kind) {
  try {
    load_container(stem, kind);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

/// A library assembled without training: random encoder, centroids and GPs.
SourceLibrary assembled_library(std::mt19937_64& rng) {
  SourceLibrary lib;
  FeatureStats stats;
  stats.mean.setRandom();
  stats.stddev.setConstant(1.5);
  lib.vae = init_vae(test::tiny_vae_config(), stats);
  const Eigen::MatrixXd pts = test::random_matrix(40, kLatentDim, rng);
  lib.clusters = fit_cluster_model(pts, 3);
  for (int c = 0; c < 3; ++c) {
    auto inst = test::random_gp_instance(15, kGpInputDim, rng);
    lib.gps.push_back(condition_gp(inst.x, inst.y, inst.hp, c));
  }
  lib.gps[2] = prior_gp(lib.gps[2].hp, 2);
  lib.fallback = {false, false, true};
  return lib;
}

}  // namespace

TEST_SUITE("persistence") {

TEST_CASE("container round trip is exact") {
  const auto dir = test::scratch_dir("container");
  std::mt19937_64 rng(1);
  Container c;
  c.kind = "demo";
  c.meta["answer"] = 42;
  c.put("a", test::random_matrix(3, 4, rng));
  c.put("empty", Eigen::MatrixXd(0, 5));
  save_container(dir / "demo", c);
  const Container back = load_container(dir / "demo", "demo");
  CHECK(back.meta["answer"] == 42);
  CHECK(back.get("a") == c.get("a"));
  CHECK(back.get("empty").cols() == 5);
  CHECK_THROWS_AS(static_cast<void>(back.get("missing")), Error);
  CHECK(load_error(dir / "demo", "other") == ErrorCode::CorruptBlob);
}

TEST_CASE("damaged or foreign containers are rejected") {
  const auto dir = test::scratch_dir("container_bad");
  Container c;
  c.kind = "demo";
  c.put("a", Eigen::MatrixXd::Identity(4, 4));
  save_container(dir / "demo", c);

  std::filesystem::resize_file(dir / "demo.bin", 64);
  CHECK(load_error(dir / "demo", "demo") == ErrorCode::CorruptBlob);

  save_container(dir / "demo", c);
  {
    std::fstream f(dir / "demo.bin", std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(10);
    f.put('\x7f');
  }
  CHECK(load_error(dir / "demo", "demo") == ErrorCode::CorruptBlob);

  save_container(dir / "demo", c);
  std::ifstream in(dir / "demo.json");
  nlohmann::json j = nlohmann::json::parse(in);
  in.close();
  j["version"] = kContainerVersion + 1;
  std::ofstream(dir / "demo.json") << j.dump();
  CHECK(load_error(dir / "demo", "demo") == ErrorCode::VersionMismatch);

  std::ofstream(dir / "demo.json") << "{ not json";
  CHECK(load_error(dir / "demo", "demo") == ErrorCode::CorruptBlob);
}

TEST_CASE("sha256 of a known string") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("GP round trip predicts identically") {
  const auto dir = test::scratch_dir("gp");
  std::mt19937_64 rng(2);
  const auto inst = test::random_gp_instance(30, kGpInputDim, rng);
  const GPModel m = condition_gp(inst.x, inst.y, inst.hp, 4);
  save_gp(m, dir / "gp");
  const GPModel back = load_gp(dir / "gp");
  CHECK(back.cluster_id == 4);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd x = test::random_matrix(kGpInputDim, 1, rng);
    const Prediction a = predict(m, x), b = predict(back, x);
    CHECK(a.mean == b.mean);
    CHECK(a.variance == b.variance);
  }
}

TEST_CASE("VAE and cluster round trips") {
  const auto dir = test::scratch_dir("vae");
  std::mt19937_64 rng(3);
  const SourceLibrary lib = assembled_library(rng);
  save_vae(lib.vae, dir / "vae");
  const VAEModel vae = load_vae(dir / "vae");
  CHECK(vae.params == lib.vae.params);
  CHECK(vae.stats.mean == lib.vae.stats.mean);
  CHECK(vae.config.hidden == lib.vae.config.hidden);
  save_cluster_model(lib.clusters, dir / "clusters");
  const ClusterModel cm = load_cluster_model(dir / "clusters");
  CHECK(cm.centroids == lib.clusters.centroids);
  CHECK(cm.labels == lib.clusters.labels);
  CHECK(cm.dendrogram.merges.size() == lib.clusters.dendrogram.merges.size());
  CHECK(cm.dendrogram.merges.back().cost == lib.clusters.dendrogram.merges.back().cost);
}

TEST_CASE("library round trip reproduces forecasts") {
  const auto dir = test::scratch_dir("library");
  std::mt19937_64 rng(4);
  const SourceLibrary lib = assembled_library(rng);
  save_library(lib, dir);
  const SourceLibrary back = load_library(dir);
  CHECK(back.fallback == lib.fallback);
  const auto farm = test::target_farm(1, 300).series;
  const auto pa = project_and_align(lib.vae, lib.clusters, farm);
  const auto pb = project_and_align(back.vae, back.clusters, farm);
  CHECK(pa.labels == pb.labels);
  for (int i = 0; i < 100; ++i) {
    const Eigen::VectorXd x = test::random_matrix(kGpInputDim, 1, rng);
    const int c = i % 3;
    CHECK(std::abs(predict(lib.gps[static_cast<std::size_t>(c)], x).mean - predict(back.gps[static_cast<std::size_t>(c)], x).mean) <= 1e-12);
  }
  std::filesystem::remove(dir / "gp_1.bin");
  CHECK_THROWS_AS(load_library(dir), Error);
}

}
