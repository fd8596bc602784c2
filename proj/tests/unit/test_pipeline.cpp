#include "support/checks.hpp"
#include "support/helpers.hpp"

#include "windregime/error.hpp"
#include "windregime/grid_search.hpp"
#include "windregime/log.hpp"
#include "windregime/pipeline.hpp"

#include <doctest.h>

#include <fstream>

using namespace wr;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "windregime");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_command(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("default configuration") {
  const PipelineConfig c = default_config();
  CHECK(c.seeds == std::vector<std::uint64_t>{42, 63, 84});
  CHECK(c.p_grid == std::vector<int>{6, 12, 24, 36, 48});
  CHECK(c.k_grid == std::vector<int>{8, 10, 12, 14, 16});
  CHECK(c.synthetic.regimes.size() == 3);
  CHECK(c.gammas.size() == 5);
}

TEST_CASE("configuration survives a JSON round trip") {
  PipelineConfig c = default_config();
  c.seeds = {1, 2};
  c.k = 5;
  c.vae.hidden = 17;
  c.gp.max_points = 321;
  c.gammas = {0.25};
  c.selection_begin = "2018-01-01T00:00:00Z";
  const PipelineConfig back = config_from_json(to_json(c));
  CHECK(to_json(back) == to_json(c));
  CHECK(back.vae.hidden == 17);

  nlohmann::json future = to_json(c);
  future["version"] = kConfigVersion + 1;
  try {
    config_from_json(future);
    FAIL("expected VersionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::VersionMismatch);
  }
}

TEST_CASE("synthetic farms are reproducible per seed") {
  PipelineConfig c = default_config();
  c.synthetic.hours = 200;
  const auto a = load_farms(c, false, 7);
  const auto b = load_farms(c, false, 7);
  const auto t = load_farms(c, true, 7);
  REQUIRE(a.size() == c.synthetic.source.size());
  CHECK(t.size() == c.synthetic.target.size());
  CHECK(a[0].records.back().power == b[0].records.back().power);
  CHECK(a[0].records[50].wind_speed != a[1].records[50].wind_speed);
  CHECK(a[0].farm_id == c.synthetic.source[0].id);
}

TEST_CASE("exit codes") {
  log::set_level(log::Level::Quiet);
  const auto dir = test::scratch_dir("pipeline_exit");
  CHECK(run({"bogus"}) == 2);
  CHECK(run({"transfer", "--gamma", "0", "--out", (dir / "r").string()}) == 2);
  CHECK(run({"transfer", "--library", (dir / "none").string(), "--out", (dir / "r").string()}) == 3);
  CHECK(run({"report", "--out", (dir / "empty").string()}) == 3);
}

TEST_CASE("synth writes identical files for the same seed") {
  log::set_level(log::Level::Quiet);
  const auto dir = test::scratch_dir("pipeline_synth");
  nlohmann::json j = to_json(default_config());
  j["synthetic"]["hours"] = 300;
  std::ofstream(dir / "c.json") << j.dump();
  REQUIRE(run({"synth", "--config", (dir / "c.json").string(), "--seed", "7", "--out", (dir / "a").string()}) == 0);
  REQUIRE(run({"synth", "--config", (dir / "c.json").string(), "--seed", "7", "--out", (dir / "b").string()}) == 0);
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(dir / "a" / "data")) {
    CHECK(slurp(e.path()) == slurp(dir / "b" / "data" / e.path().filename()));
    ++files;
  }
  CHECK(files > 0);
  CHECK(std::filesystem::exists(dir / "a" / "config.resolved.json"));
  const auto record = nlohmann::json::parse(slurp(dir / "a" / "run_synth.json"));
  const auto record_b = nlohmann::json::parse(slurp(dir / "b" / "run_synth.json"));
  CHECK(record["input_hash"] == record_b["input_hash"]);
  CHECK(record["seeds"] == nlohmann::json::array({7}));
}

TEST_CASE("a one-cell grid yields that cell") {
  log::set_level(log::Level::Quiet);
  const auto farm = generate_synthetic_farm(5, test::three_regimes(), 900, 100.0).series;
  GridSearchOptions o;
  o.p_grid = {6};
  o.k_grid = {3};
  o.seeds = {42};
  o.vae = test::fast_vae_config();
  o.vae.max_epochs = 5;
  const auto r = grid_search({farm}, o);
  CHECK(r.cells.size() == 1);
  CHECK(r.best_p == 6);
  CHECK(r.best_k == 3);
  CHECK(r.best_q == r.cells[0].report.q);
  const auto dir = test::scratch_dir("pipeline_grid");
  write_grid_reports(r, o, dir);
  std::ifstream in(dir / "reports.csv");
  std::string line;
  int rows = -1;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 1);
}

}
