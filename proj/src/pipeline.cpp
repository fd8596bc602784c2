#include "windregime/pipeline.hpp"

#include "windregime/container.hpp"
#include "windregime/error.hpp"
#include "windregime/farmselect.hpp"
#include "windregime/grid_search.hpp"
#include "windregime/library.hpp"
#include "windregime/log.hpp"
#include "windregime/transfer.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

namespace wr {

namespace {

using nlohmann::json;

template <typename T>
void read_field(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

std::vector<FarmSource> farms_from_json(const json& arr, const std::filesystem::path& base) {
  std::vector<FarmSource> out;
  for (const auto& f : arr) {
    FarmSource s;
    read_field(f, "id", s.id);
    std::string path;
    read_field(f, "path", path);
    s.path = resolve(path, base);
    s.capacity = f.at("capacity").get<double>();
    read_field(f, "curve_shift", s.curve_shift);
    if (s.id.empty()) s.id = s.path.stem().string();
    out.push_back(std::move(s));
  }
  return out;
}

json farms_to_json(const std::vector<FarmSource>& farms) {
  json arr = json::array();
  for (const auto& f : farms) {
    json j = {{"id", f.id}, {"capacity", f.capacity}};
    if (!f.path.empty()) j["path"] = f.path.string();
    if (f.curve_shift != 0.0) j["curve_shift"] = f.curve_shift;
    arr.push_back(j);
  }
  return arr;
}

std::uint64_t farm_seed(std::uint64_t seed, bool target, std::size_t index) {
  return seed * 1000003ULL + (target ? 500ULL : 0ULL) + index;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

PipelineConfig default_config() {
  PipelineConfig c;
  c.synthetic.regimes = {
      {4.0, 0.8, 0.5, 120.0, 45.0},
      {10.0, 0.8, 1.0, 120.0, 180.0},
      {17.0, 0.8, 1.0, 120.0, 270.0},
  };
  c.synthetic.hours = 8760;
  c.synthetic.source = {{"source_a", {}, 400.0, 0.0}, {"source_b", {}, 600.0, 0.5}, {"source_c", {}, 300.0, -0.5}};
  c.synthetic.target = {{"target_a", {}, 350.0, 0.25}};
  return c;
}

PipelineConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  PipelineConfig c = default_config();
  try {
    read_field(j, "version", c.version);
    if (c.version != kConfigVersion) {
      throw Error(ErrorCode::VersionMismatch, "config version " + std::to_string(c.version) + " is not supported");
    }
    std::string out_dir;
    read_field(j, "output_dir", out_dir);
    if (!out_dir.empty()) c.output_dir = resolve(out_dir, base_dir);
    read_field(j, "seeds", c.seeds);
    if (j.contains("source")) c.source = farms_from_json(j.at("source"), base_dir);
    if (j.contains("target")) c.target = farms_from_json(j.at("target"), base_dir);
    if (j.contains("synthetic")) {
      const auto& s = j.at("synthetic");
      if (s.contains("regimes")) {
        c.synthetic.regimes.clear();
        for (const auto& r : s.at("regimes")) {
          RegimeSpec spec;
          read_field(r, "mean_wind", spec.mean_wind);
          read_field(r, "ar_coefficient", spec.ar_coefficient);
          read_field(r, "noise_std", spec.noise_std);
          read_field(r, "mean_dwell_hours", spec.mean_dwell_hours);
          if (r.contains("prevailing_direction_deg")) {
            spec.prevailing_direction_deg = r.at("prevailing_direction_deg").get<double>();
          }
          c.synthetic.regimes.push_back(spec);
        }
      }
      read_field(s, "hours", c.synthetic.hours);
      if (s.contains("source")) c.synthetic.source = farms_from_json(s.at("source"), base_dir);
      if (s.contains("target")) c.synthetic.target = farms_from_json(s.at("target"), base_dir);
    }
    if (j.contains("grid")) {
      read_field(j.at("grid"), "p", c.p_grid);
      read_field(j.at("grid"), "k", c.k_grid);
    }
    read_field(j, "p", c.p);
    read_field(j, "k", c.k);
    if (j.contains("vae")) c.vae = vae_config_from_json(j.at("vae"), c.vae);
    if (j.contains("gp")) {
      const auto& g = j.at("gp");
      read_field(g, "max_iterations", c.gp.max_iterations);
      read_field(g, "gradient_tolerance", c.gp.gradient_tolerance);
      read_field(g, "max_points", c.gp.max_points);
      read_field(g, "min_points", c.min_points);
    }
    read_field(j, "train_fraction", c.train_fraction);
    read_field(j, "max_ward_points", c.max_ward_points);
    read_field(j, "gammas", c.gammas);
    if (j.contains("selection")) {
      const auto& s = j.at("selection");
      if (s.contains("begin")) c.selection_begin = s.at("begin").get<std::string>();
      if (s.contains("end")) c.selection_end = s.at("end").get<std::string>();
      read_field(s, "k", c.selection_k);
      read_field(s, "dims", c.selection_dims);
    }
    std::string library;
    read_field(j, "library", library);
    if (!library.empty()) c.library = resolve(library, base_dir);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("config: ") + e.what());
  }
  if (c.seeds.empty()) throw Error(ErrorCode::InvalidArgument, "config: seeds must not be empty");
  return c;
}

json to_json(const PipelineConfig& c) {
  json regimes = json::array();
  for (const auto& r : c.synthetic.regimes) {
    json spec = {{"mean_wind", r.mean_wind},
                 {"ar_coefficient", r.ar_coefficient},
                 {"noise_std", r.noise_std},
                 {"mean_dwell_hours", r.mean_dwell_hours}};
    if (r.prevailing_direction_deg) spec["prevailing_direction_deg"] = *r.prevailing_direction_deg;
    regimes.push_back(spec);
  }
  json j = {
      {"version", c.version},
      {"output_dir", c.output_dir.string()},
      {"seeds", c.seeds},
      {"source", farms_to_json(c.source)},
      {"target", farms_to_json(c.target)},
      {"synthetic",
       {{"regimes", regimes},
        {"hours", c.synthetic.hours},
        {"source", farms_to_json(c.synthetic.source)},
        {"target", farms_to_json(c.synthetic.target)}}},
      {"grid", {{"p", c.p_grid}, {"k", c.k_grid}}},
      {"p", c.p},
      {"k", c.k},
      {"vae", to_json(c.vae)},
      {"gp",
       {{"max_iterations", c.gp.max_iterations},
        {"gradient_tolerance", c.gp.gradient_tolerance},
        {"max_points", c.gp.max_points},
        {"min_points", c.min_points}}},
      {"train_fraction", c.train_fraction},
      {"max_ward_points", c.max_ward_points},
      {"gammas", c.gammas},
      {"selection", {{"k", c.selection_k}, {"dims", c.selection_dims}}},
  };
  if (c.selection_begin) j["selection"]["begin"] = *c.selection_begin;
  if (c.selection_end) j["selection"]["end"] = *c.selection_end;
  if (!c.library.empty()) j["library"] = c.library.string();
  return j;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, "config " + path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

std::vector<FarmSeries> load_farms(const PipelineConfig& config, bool target, std::uint64_t seed) {
  const auto& csv = target ? config.target : config.source;
  std::vector<FarmSeries> out;
  if (!csv.empty()) {
    for (const auto& f : csv) out.push_back(load_farm_csv(f.path, f.capacity, f.id));
    return out;
  }
  const auto& specs = target ? config.synthetic.target : config.synthetic.source;
  if (specs.empty()) throw Error(ErrorCode::EmptyInput, target ? "no target farms configured" : "no source farms configured");
  for (std::size_t i = 0; i < specs.size(); ++i) {
    SyntheticOptions options;
    options.farm_id = specs[i].id;
    options.curve_shift = specs[i].curve_shift;
    out.push_back(generate_synthetic_farm(farm_seed(seed, target, i), config.synthetic.regimes, config.synthetic.hours,
                                          specs[i].capacity, options)
                      .series);
  }
  return out;
}

namespace {

struct RunContext {
  PipelineConfig config;
  std::string command;
  std::uint64_t seed = 0;  // first seed, used where a single seed is needed
  std::filesystem::path out;
};

std::string input_hash(const RunContext& ctx, const std::vector<std::filesystem::path>& extra) {
  std::string material = to_json(ctx.config).dump() + "\n" + ctx.command + "\n";
  auto add_farms = [&](const std::vector<FarmSource>& farms) {
    for (const auto& f : farms) material += f.id + ":" + sha256_file(f.path) + "\n";
  };
  add_farms(ctx.config.source);
  add_farms(ctx.config.target);
  for (const auto& p : extra) {
    if (std::filesystem::exists(p)) material += p.filename().string() + ":" + sha256_file(p) + "\n";
  }
  return sha256_hex(material);
}

void write_run_record(const RunContext& ctx, const std::vector<std::filesystem::path>& extra_inputs = {}) {
  std::filesystem::create_directories(ctx.out);
  json resolved = to_json(ctx.config);
  resolved["output_dir"] = ctx.out.string();
  write_text(ctx.out / "config.resolved.json", resolved.dump(2) + "\n");
  const json record = {{"command", ctx.command},
                       {"seeds", ctx.config.seeds},
                       {"config_version", ctx.config.version},
                       {"input_hash", input_hash(ctx, extra_inputs)}};
  write_text(ctx.out / ("run_" + ctx.command + ".json"), record.dump(2) + "\n");
}

std::filesystem::path library_dir(const RunContext& ctx, std::uint64_t seed) {
  const auto base = ctx.config.library.empty() ? ctx.out / "library" : ctx.config.library;
  return base / ("seed_" + std::to_string(seed));
}

void cmd_synth(const RunContext& ctx) {
  const auto data_dir = ctx.out / "data";
  std::filesystem::create_directories(data_dir);
  json manifest = {{"source", json::array()}, {"target", json::array()}};
  for (const bool target : {false, true}) {
    const auto& specs = target ? ctx.config.synthetic.target : ctx.config.synthetic.source;
    for (std::size_t i = 0; i < specs.size(); ++i) {
      SyntheticOptions options;
      options.farm_id = specs[i].id;
      options.curve_shift = specs[i].curve_shift;
      const SyntheticFarm farm = generate_synthetic_farm(farm_seed(ctx.seed, target, i), ctx.config.synthetic.regimes,
                                                         ctx.config.synthetic.hours, specs[i].capacity, options);
      const auto csv = data_dir / (specs[i].id + ".csv");
      write_farm_csv(farm.series, csv);
      std::ostringstream regimes;
      regimes << "timestamp,regime\n";
      for (std::size_t t = 0; t < farm.regime.size(); ++t) {
        regimes << format_timestamp(farm.series.records[t].timestamp) << ',' << farm.regime[t] << '\n';
      }
      write_text(data_dir / (specs[i].id + ".regimes.csv"), regimes.str());
      manifest[target ? "target" : "source"].push_back(
          {{"id", specs[i].id}, {"path", csv.filename().string()}, {"capacity", specs[i].capacity}});
    }
  }
  write_text(data_dir / "farms.json", manifest.dump(2) + "\n");
  write_run_record(ctx);
  std::cout << "wrote synthetic farms to " << data_dir.string() << '\n';
}

void cmd_select_farms(const RunContext& ctx) {
  auto farms = load_farms(ctx.config, false, ctx.seed);
  auto targets = load_farms(ctx.config, true, ctx.seed);
  farms.insert(farms.end(), std::make_move_iterator(targets.begin()), std::make_move_iterator(targets.end()));
  std::optional<TimeWindow> window;
  if (ctx.config.selection_begin || ctx.config.selection_end) {
    TimeWindow w;
    w.begin = ctx.config.selection_begin ? parse_timestamp(*ctx.config.selection_begin) : farms.front().records.front().timestamp;
    w.end = ctx.config.selection_end ? parse_timestamp(*ctx.config.selection_end)
                                     : farms.front().records.back().timestamp + kSecondsPerHour;
    window = w;
  }
  std::vector<FarmFeatureVector> vectors;
  std::vector<std::string> ids;
  for (const auto& f : farms) {
    vectors.push_back(extract_farm_features(f, window));
    ids.push_back(f.farm_id);
  }
  const Reduction red = reduce_dimensions(vectors, ctx.config.selection_dims);
  int k = ctx.config.selection_k;
  if (k > static_cast<int>(farms.size())) {
    log::warn("selection k=" + std::to_string(k) + " exceeds farm count; using " + std::to_string(farms.size()));
    k = static_cast<int>(farms.size());
  }
  const auto labels = cluster_farms(red.embedding, k);
  const auto reps = select_representatives(red.embedding, labels, ids);

  std::ostringstream features;
  features << "farm";
  for (const auto name : farm_feature_names()) features << ',' << name;
  features << '\n';
  for (const auto& v : vectors) {
    features << v.farm_id;
    for (Eigen::Index i = 0; i < v.values.size(); ++i) features << ',' << fmt(v.values(i));
    features << '\n';
  }
  write_text(ctx.out / "selection" / "farm_features.csv", features.str());

  std::ostringstream sel;
  sel << "farm,cluster,representative";
  for (Eigen::Index d = 0; d < red.embedding.cols(); ++d) sel << ",pc" << d + 1;
  sel << '\n';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const int l = labels[i];
    sel << ids[i] << ',' << l << ',' << (reps[static_cast<std::size_t>(l)] == ids[i] ? 1 : 0);
    for (Eigen::Index d = 0; d < red.embedding.cols(); ++d) sel << ',' << fmt(red.embedding(static_cast<Eigen::Index>(i), d));
    sel << '\n';
  }
  write_text(ctx.out / "selection" / "selection.csv", sel.str());
  json summary = {{"representatives", reps},
                  {"explained_variance_ratio", std::vector<double>(red.explained_variance_ratio.data(),
                                                                   red.explained_variance_ratio.data() +
                                                                       red.explained_variance_ratio.size())}};
  write_text(ctx.out / "selection" / "selection.json", summary.dump(2) + "\n");
  write_run_record(ctx);
  std::cout << "representatives:";
  for (const auto& r : reps) std::cout << ' ' << r;
  std::cout << '\n';
}

void cmd_grid_search(const RunContext& ctx) {
  const auto farms = load_farms(ctx.config, false, ctx.seed);
  GridSearchOptions options;
  options.p_grid = ctx.config.p_grid;
  options.k_grid = ctx.config.k_grid;
  options.seeds = ctx.config.seeds;
  options.vae = ctx.config.vae;
  options.train_fraction = ctx.config.train_fraction;
  options.max_ward_points = ctx.config.max_ward_points;
  const GridSearchResult result = grid_search(farms, options);
  write_grid_reports(result, options, ctx.out / "grid");
  const json best = {{"p", result.best_p}, {"k", result.best_k}, {"q", result.best_q}};
  write_text(ctx.out / "grid" / "best.json", best.dump(2) + "\n");
  write_run_record(ctx);
  std::cout << "best p=" << result.best_p << " K=" << result.best_k << " Q=" << fmt(result.best_q) << '\n';
}

void cmd_train_source(const RunContext& ctx) {
  SourceOptions options;
  options.k = ctx.config.k;
  options.vae = ctx.config.vae;
  options.vae.p = ctx.config.p;
  options.gp = ctx.config.gp;
  options.train_fraction = ctx.config.train_fraction;
  options.max_ward_points = ctx.config.max_ward_points;
  options.min_points = ctx.config.min_points;
  for (const auto seed : ctx.config.seeds) {
    const auto farms = load_farms(ctx.config, false, seed);
    options.vae.seed = seed;
    const SourceTraining trained = train_source_library(farms, options);
    const auto dir = library_dir(ctx, seed);
    save_library(trained.library, dir);
    std::ostringstream log;
    log << "epoch,reconstruction,kl,beta,validation_reconstruction\n";
    for (const auto& e : trained.vae_log) {
      log << e.epoch << ',' << fmt(e.reconstruction) << ',' << fmt(e.kl) << ',' << fmt(e.beta) << ','
          << fmt(e.validation_reconstruction) << '\n';
    }
    write_text(dir / "vae_log.csv", log.str());
    std::cout << "library for seed " << seed << " saved to " << dir.string() << '\n';
  }
  write_run_record(ctx);
}

void write_metrics_csv(const std::filesystem::path& path, const std::vector<std::pair<std::string, ForecastMetrics>>& rows,
                       std::uint64_t seed) {
  std::ostringstream out;
  out << "farm,seed,cluster,n_test,mae_pct,rmse,r2\n";
  for (const auto& [farm, m] : rows) {
    auto line = [&](const MetricRow& r) {
      out << farm << ',' << seed << ',' << r.scope << ',' << r.n << ',' << fmt(r.mae_pct) << ',' << fmt(r.rmse) << ','
          << (std::isfinite(r.r2) ? fmt(r.r2) : "nan") << '\n';
    };
    for (const auto& r : m.clusters) line(r);
    line(m.aggregate);
  }
  write_text(path, out.str());
}

void cmd_evaluate(const RunContext& ctx) {
  for (const auto seed : ctx.config.seeds) {
    const auto dir = library_dir(ctx, seed);
    const SourceLibrary library = load_library(dir);
    std::vector<std::pair<std::string, ForecastMetrics>> rows;
    for (const auto& farm : load_farms(ctx.config, false, seed)) {
      rows.emplace_back(farm.farm_id, evaluate_source(library, farm, ctx.config.train_fraction));
      const auto& a = rows.back().second.aggregate;
      std::cout << farm.farm_id << " seed " << seed << ": MAE " << fmt(a.mae_pct) << "% RMSE " << fmt(a.rmse)
                << " MW\n";
    }
    write_metrics_csv(ctx.out / ("source_metrics_seed_" + std::to_string(seed) + ".csv"), rows, seed);
  }
  write_run_record(ctx, {library_dir(ctx, ctx.seed) / "library.json"});
}

void cmd_transfer(const RunContext& ctx) {
  TransferOptions options;
  options.gp = ctx.config.gp;
  options.min_points = ctx.config.min_points;
  std::vector<TransferResult> results;
  json summary = json::array();
  for (const auto seed : ctx.config.seeds) {
    const SourceLibrary library = load_library(library_dir(ctx, seed));
    const auto targets = load_farms(ctx.config, true, seed);
    for (const auto& target : targets) {
      for (const double gamma : ctx.config.gammas) {
        results.push_back(run_transfer_experiment(library, target, gamma, seed, options));
        const auto& r = results.back();
        json untuned = json::array();
        for (const auto& c : r.clusters) {
          if (!c.tuned) untuned.push_back(c.cluster);
        }
        summary.push_back({{"farm", r.farm_id},
                           {"seed", seed},
                           {"gamma", gamma},
                           {"train_periods", r.split.train.size()},
                           {"test_periods", r.split.test.size()},
                           {"untuned_clusters", untuned},
                           {"transfer_mae_pct", r.transfer.aggregate.mae_pct},
                           {"baseline_mae_pct", r.baseline.aggregate.mae_pct}});
        std::cout << r.farm_id << " seed " << seed << " gamma " << fmt(gamma) << ": transfer MAE "
                  << fmt(r.transfer.aggregate.mae_pct) << "%, baseline " << fmt(r.baseline.aggregate.mae_pct) << "%\n";
      }
    }
  }
  write_transfer_csv(results, Method::kTransfer, ctx.out / "transfer.csv");
  write_transfer_csv(results, Method::kBaseline, ctx.out / "baseline.csv");
  write_text(ctx.out / "transfer.json", summary.dump(2) + "\n");
  write_run_record(ctx, {library_dir(ctx, ctx.seed) / "library.json"});
}

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    rows.push_back(std::move(cells));
  }
  return rows;
}

void cmd_report(const RunContext& ctx) {
  std::ostringstream out;
  bool any = false;
  if (std::filesystem::exists(ctx.out / "grid" / "composite.csv")) {
    any = true;
    out << "Composite quality Q (seed-averaged)\n";
    for (const auto& row : read_csv(ctx.out / "grid" / "composite.csv")) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "  ") << row[i];
      out << '\n';
    }
  }
  for (const auto* name : {"transfer.csv", "baseline.csv"}) {
    const auto path = ctx.out / name;
    if (!std::filesystem::exists(path)) continue;
    any = true;
    // gamma -> (sum of aggregate MAE, count)
    std::map<std::string, std::pair<double, int>> by_gamma;
    const auto rows = read_csv(path);
    for (std::size_t i = 1; i < rows.size(); ++i) {
      if (rows[i].size() < 8 || rows[i][3] != "all") continue;
      auto& acc = by_gamma[rows[i][2]];
      acc.first += std::stod(rows[i][5]);
      acc.second += 1;
    }
    out << (std::string(name) == "transfer.csv" ? "Transfer" : "Baseline") << " aggregate MAE% by gamma\n";
    for (const auto& [gamma, acc] : by_gamma) out << "  gamma " << gamma << ": " << fmt(acc.first / acc.second) << '\n';
  }
  for (const auto& entry : std::filesystem::directory_iterator(ctx.out)) {
    const auto fname = entry.path().filename().string();
    if (fname.rfind("source_metrics_seed_", 0) != 0) continue;
    any = true;
    out << "Source hold-out (" << fname << ")\n";
    for (const auto& row : read_csv(entry.path())) {
      if (row.size() >= 7 && row[2] == "all") out << "  " << row[0] << ": MAE " << row[4] << "% RMSE " << row[5] << " MW\n";
    }
  }
  if (!any) throw Error(ErrorCode::EmptyInput, "no reports found in " + ctx.out.string());
  write_text(ctx.out / "summary.txt", out.str());
  std::cout << out.str();
}

int exit_code(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Usage: return 2;
    case ErrorCategory::Data: return 3;
    case ErrorCategory::Numerical: return 4;
  }
  return 1;
}

}  // namespace

int run_command(int argc, const char* const* argv) {
  CLI::App app{"Weather-regime-aware offshore wind power forecasting"};
  app.require_subcommand(1);
  std::string config_path, out_dir, library;
  std::optional<std::uint64_t> seed;
  std::vector<double> gammas;
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log progress to stderr");

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"synth", "Generate synthetic farm CSVs"},
      {"select-farms", "Cluster farms on summary statistics and pick representatives"},
      {"grid-search", "Score (p, K) combinations with the composite quality score"},
      {"train-source", "Train the encoder, regimes and per-regime GPs"},
      {"transfer", "Fine-tune the source library on target farms"},
      {"evaluate", "Score the source library on held-out source data"},
      {"report", "Summarise the reports of a run directory"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "Single seed overriding the configured seeds");
    sub->add_option("--out", out_dir, "Run directory");
    if (name == "transfer") sub->add_option("--gamma", gammas, "Target training fraction(s)");
    if (name == "transfer" || name == "evaluate") sub->add_option("--library", library, "Source library directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (verbose) log::set_level(log::Level::Info);

  try {
    RunContext ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    ctx.config = config_path.empty() ? default_config() : load_config(config_path);
    if (seed) ctx.config.seeds = {*seed};
    if (!gammas.empty()) ctx.config.gammas = gammas;
    for (const double g : ctx.config.gammas) {
      if (!(g > 0.0 && g < 1.0)) throw Error(ErrorCode::InvalidArgument, "gamma must lie in (0, 1), got " + fmt(g));
    }
    if (!library.empty()) ctx.config.library = library;
    ctx.seed = ctx.config.seeds.front();
    ctx.out = out_dir.empty() ? ctx.config.output_dir : std::filesystem::path(out_dir);

    if (ctx.command == "synth") cmd_synth(ctx);
    else if (ctx.command == "select-farms") cmd_select_farms(ctx);
    else if (ctx.command == "grid-search") cmd_grid_search(ctx);
    else if (ctx.command == "train-source") cmd_train_source(ctx);
    else if (ctx.command == "transfer") cmd_transfer(ctx);
    else if (ctx.command == "evaluate") cmd_evaluate(ctx);
    else cmd_report(ctx);
    return 0;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error [IoError]: " << e.what() << '\n';
    return 3;
  } catch (const json::exception& e) {
    std::cerr << "error [CorruptBlob]: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace wr
