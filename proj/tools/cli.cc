// Copyright 2026 The EASL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "easl/http_api.h"
#include "easl/metrics.h"
#include "easl/persistence.h"
#include "easl/report_io.h"
#include "easl/service.h"

namespace easl::cli {
namespace {

using nlohmann::json;

constexpr std::uint64_t kOracleStream = 0x0AC1E;
constexpr std::uint64_t kTaskStream = 0x7A5C;

std::filesystem::path data_dir() {
  if (const char* d = std::getenv("EASL_DATA_DIR"); d != nullptr && *d) {
    return d;
  }
  return ".";
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    throw std::runtime_error(path.string() + ": expected a JSON object");
  }
  return j;
}

std::string_view noise_kind_name(NoiseKind k) {
  return k == NoiseKind::kGaussianClamped ? "gaussian_clamped"
                                          : "beta_concentration";
}

NoiseKind parse_noise_kind(std::string_view name) {
  if (name == "gaussian_clamped") return NoiseKind::kGaussianClamped;
  if (name == "beta_concentration") return NoiseKind::kBetaConcentration;
  throw std::invalid_argument("unknown noise kind '" + std::string(name) +
                              "'");
}

// Flags shared by the subcommands that build a ModelConfig.
struct ModelFlags {
  std::string preset;
  std::string config_file;
  std::string method;
  double gamma = 0.0;
  double epsilon = 0.0;
  int n = 0;
  int iterations = 0;
  int hits = 0;
  std::uint64_t seed = 0;

  CLI::Option* o_gamma = nullptr;
  CLI::Option* o_epsilon = nullptr;
  CLI::Option* o_n = nullptr;
  CLI::Option* o_iterations = nullptr;
  CLI::Option* o_hits = nullptr;
  CLI::Option* o_seed = nullptr;

  void add_to(CLI::App* app) {
    app->add_option("--preset", preset, "Experiment preset")
        ->check(CLI::IsMember(preset_names()));
    app->add_option("--config", config_file, "JSON config file")
        ->check(CLI::ExistingFile);
    app->add_option("--method", method, "da|ra-gaussian|ra-beta|easl")
        ->check(CLI::IsMember({"da", "ra-gaussian", "ra-beta", "easl"}));
    o_gamma = app->add_option("--gamma", gamma, "Skill-chain parameter");
    o_epsilon = app->add_option("--epsilon", epsilon, "Tie-rate parameter");
    o_n = app->add_option("--n", n, "Items per HIT");
    o_iterations = app->add_option("--iterations", iterations);
    o_hits = app->add_option("--hits-per-iter", hits);
    o_seed = app->add_option("--seed", seed);
  }

  bool touches_model() const {
    return !config_file.empty() || !method.empty() || o_gamma->count() ||
           o_epsilon->count() || o_n->count();
  }

  SimulationSettings resolve() const {
    json file;
    if (!config_file.empty()) file = read_json_file(config_file);
    std::string name = "lexical-150";
    if (file.contains("preset")) name = file["preset"].get<std::string>();
    if (!preset.empty()) name = preset;

    SimulationSettings s;
    s.preset = easl::preset(name);
    s.model.n = s.preset.n;
    if (!file.is_null()) apply_config_file(file, s);

    if (!method.empty()) {
      s.model.method = parse_method(method);
      s.preset.methods = {s.model.method};
    }
    if (o_gamma->count()) s.model.gamma = gamma;
    if (o_epsilon->count()) s.model.epsilon = epsilon;
    if (o_n->count()) {
      s.model.n = n;
      s.preset.n = n;
    }
    if (o_iterations->count()) s.preset.iterations = iterations;
    if (o_hits->count()) s.preset.hits_per_iteration = hits;
    if (o_seed->count()) s.seed = seed;
    s.model.validate();
    return s;
  }
};

void write_histogram_csv(std::ostream& out, const std::vector<double>& scores,
                         const std::vector<double>* oracle) {
  constexpr int kBins = 5;
  std::vector<double> clamped;
  for (double v : scores) clamped.push_back(std::clamp(v, 0.0, 1.0));
  const auto counts = bin_histogram(clamped, kBins);
  std::vector<std::int64_t> oracle_counts;
  if (oracle) oracle_counts = bin_histogram(*oracle, kBins);
  out << "bin,lower,upper,count" << (oracle ? ",oracle_count" : "") << '\n';
  for (int b = 0; b < kBins; ++b) {
    out << b << ',' << static_cast<double>(b) / kBins << ','
        << static_cast<double>(b + 1) / kBins << ',' << counts[b];
    if (oracle) out << ',' << oracle_counts[b];
    out << '\n';
  }
}

std::string fmt_opt(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", *v);
  return buf;
}

int cmd_simulate(const ModelFlags& flags, const std::string& out_dir,
                 std::optional<int> bootstrap, std::ostream& out) {
  SimulationSettings s = flags.resolve();
  if (bootstrap) s.bootstrap_resamples = *bootstrap;
  const json effective = settings_to_json(s);
  out << effective.dump(2) << '\n';

  const ExperimentReport report = run_simulation(s);
  const std::filesystem::path dir =
      out_dir.empty() ? data_dir() : std::filesystem::path(out_dir);
  std::filesystem::create_directories(dir);
  const std::string stem = s.preset.name + "-seed" + std::to_string(s.seed);
  const auto report_path = dir / (stem + "-report.jsonl");
  const auto curves_path = dir / (stem + "-curves.csv");
  {
    std::ofstream f(report_path);
    if (!f) throw std::runtime_error("cannot write " + report_path.string());
    write_report(f, report, effective);
  }
  {
    std::ofstream f(curves_path);
    if (!f) throw std::runtime_error("cannot write " + curves_path.string());
    write_curves_csv(f, std::span<const ExperimentReport>(&report, 1));
  }
  for (const auto& m : report.methods) {
    const auto& last = m.curve.back();
    out << method_name(m.config.method) << ": judgments=" << last.judgments
        << " spearman="
        << (last.spearman ? fmt_opt(last.spearman->point) : "undefined")
        << '\n';
  }
  out << "wrote " << report_path.string() << '\n'
      << "wrote " << curves_path.string() << '\n';
  return 0;
}

int cmd_serve(const ModelFlags& flags, const std::string& items_file,
              const std::string& host, int port, const std::string& ui_dir,
              const std::string& log_file, std::ostream& out) {
  SimulationSettings s = flags.resolve();
  if (flags.method.empty() && s.preset.methods.size() != 1) {
    s.model.method = Method::kEasl;
  } else if (flags.method.empty()) {
    s.model.method = s.preset.methods.front();
  }
  SessionOptions opts;
  if (!flags.config_file.empty()) {
    const json file = read_json_file(flags.config_file);
    if (file.contains("session")) {
      opts = session_options_from_json(file["session"], opts);
    }
  }
  opts.iterations = s.preset.iterations;
  if (flags.o_hits->count()) opts.hits_per_iteration = flags.hits;
  opts.seed = s.seed;
  opts.log_path =
      log_file.empty() ? data_dir() / "observations.jsonl"
                       : std::filesystem::path(log_file);

  AnnotationService service;
  const std::string id =
      service.create_session(load_items(items_file), s.model, opts);
  httplib::Server server;
  mount_api(server, service);
  if (!ui_dir.empty() && !mount_static(server, ui_dir)) {
    throw std::runtime_error("ui directory not found: " + ui_dir);
  }
  out << json{{"session_id", id},
              {"config", config_to_json(s.model)},
              {"iterations", opts.iterations},
              {"seed", opts.seed},
              {"log", opts.log_path->string()},
              {"listen", host + ":" + std::to_string(port)}}
             .dump()
      << std::endl;
  if (!server.listen(host, port)) {
    throw std::runtime_error("cannot listen on " + host + ":" +
                             std::to_string(port));
  }
  return 0;
}

ModelConfig override_log_config(const ModelFlags& flags,
                                const ModelConfig& logged) {
  ModelConfig cfg = logged;
  if (!flags.config_file.empty()) {
    cfg = config_from_json(read_json_file(flags.config_file), cfg);
  }
  if (!flags.method.empty()) cfg.method = parse_method(flags.method);
  if (flags.o_gamma->count()) cfg.gamma = flags.gamma;
  if (flags.o_epsilon->count()) cfg.epsilon = flags.epsilon;
  if (flags.o_n->count()) cfg.n = flags.n;
  return cfg;
}

int cmd_score(const ModelFlags& flags, const std::string& log_file,
              std::ostream& out) {
  const ObservationLog log = ObservationLog::open(log_file);
  const Model model =
      flags.touches_model()
          ? replay(log, override_log_config(flags, log.config()))
          : replay(log);
  write_scores_csv(out, ranked_scores(model));
  return 0;
}

int cmd_export(const std::string& log_file, const std::string& out_dir,
               std::ostream& out) {
  const ObservationLog log = ObservationLog::open(log_file);
  const Model model = replay(log);
  const std::filesystem::path dir =
      out_dir.empty() ? data_dir() : std::filesystem::path(out_dir);
  std::filesystem::create_directories(dir);

  std::vector<double> oracle;
  bool has_oracle = !log.items().empty();
  for (const auto& it : log.items()) {
    if (!it.oracle_value) {
      has_oracle = false;
      break;
    }
    oracle.push_back(*it.oracle_value);
  }

  out << json{{"config", config_to_json(log.config())},
              {"records", log.records().size()}}
             .dump()
      << '\n';
  const auto scores_path = dir / "scores.csv";
  export_scores(model, scores_path);
  out << "wrote " << scores_path.string() << '\n';

  const auto hist_path = dir / "histogram.csv";
  {
    std::ofstream f(hist_path);
    if (!f) throw std::runtime_error("cannot write " + hist_path.string());
    write_histogram_csv(f, model.scores(), has_oracle ? &oracle : nullptr);
  }
  out << "wrote " << hist_path.string() << '\n';

  if (has_oracle) {
    const auto corr_path = dir / "correlations.csv";
    std::ofstream f(corr_path);
    if (!f) throw std::runtime_error("cannot write " + corr_path.string());
    f << "iteration,judgments,spearman,pearson\n";
    for (const auto& p : replay_curve(log)) {
      f << p.iteration << ',' << p.judgments << ',' << fmt_opt(p.spearman)
        << ',' << fmt_opt(p.pearson) << '\n';
    }
    out << "wrote " << corr_path.string() << '\n';
  }
  return 0;
}

}  // namespace

void apply_config_file(const json& j, SimulationSettings& s) {
  static const std::set<std::string> kKnown = {
      "preset", "method", "methods", "gamma", "epsilon", "n", "alpha_init",
      "beta_init", "mu_init", "sigma2_init", "thurstone_sigma", "iterations",
      "hits_per_iteration", "seed", "bootstrap_resamples", "oracle",
      "num_items", "items", "noise_kind", "noise_scale", "tie_threshold",
      "num_segments", "segment_noise", "system_low", "system_high", "budget",
      "session"};
  for (const auto& [key, value] : j.items()) {
    if (kKnown.count(key) == 0) {
      throw std::invalid_argument("unknown config key '" + key + "'");
    }
  }
  s.model = config_from_json(j, s.model);
  if (j.contains("method")) s.preset.methods = {s.model.method};
  if (j.contains("methods")) {
    s.preset.methods.clear();
    for (const auto& m : j["methods"]) {
      s.preset.methods.push_back(parse_method(m.get<std::string>()));
    }
  }
  if (j.contains("n")) s.preset.n = s.model.n;
  if (j.contains("iterations")) {
    s.preset.iterations = j["iterations"].get<int>();
  }
  if (j.contains("hits_per_iteration")) {
    s.preset.hits_per_iteration = j["hits_per_iteration"].get<int>();
  }
  if (j.contains("seed")) s.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("bootstrap_resamples")) {
    s.bootstrap_resamples = j["bootstrap_resamples"].get<int>();
  }
  if (j.contains("oracle")) {
    s.preset.oracle = parse_oracle_kind(j["oracle"].get<std::string>());
  }
  if (j.contains("num_items")) s.preset.num_items = j["num_items"].get<int>();
  if (j.contains("items")) {
    s.items_file = j["items"].get<std::string>();
    s.preset.oracle = OracleKind::kCustomFile;
  }
  auto& a = s.preset.annotator;
  if (j.contains("noise_kind")) {
    a.noise_kind = parse_noise_kind(j["noise_kind"].get<std::string>());
  }
  if (j.contains("noise_scale")) a.noise_scale = j["noise_scale"].get<double>();
  if (j.contains("tie_threshold")) {
    a.tie_threshold = j["tie_threshold"].get<double>();
  }
  if (j.contains("num_segments")) {
    s.preset.num_segments = j["num_segments"].get<int>();
  }
  if (j.contains("segment_noise")) {
    s.preset.segment_noise = j["segment_noise"].get<double>();
  }
  if (j.contains("system_low")) s.preset.system_low = j["system_low"];
  if (j.contains("system_high")) s.preset.system_high = j["system_high"];
  if (j.contains("budget")) s.preset.budget = j["budget"].get<std::int64_t>();
}

json settings_to_json(const SimulationSettings& s) {
  const auto& p = s.preset;
  json methods = json::array();
  for (Method m : p.methods) methods.push_back(method_name(m));
  json model = config_to_json(s.model);
  model.erase("method");
  json j{{"preset", p.name},
         {"methods", methods},
         {"model", model},
         {"seed", s.seed},
         {"bootstrap_resamples", s.bootstrap_resamples},
         {"annotator",
          {{"noise_kind", noise_kind_name(p.annotator.noise_kind)},
           {"noise_scale", p.annotator.noise_scale},
           {"tie_threshold", p.annotator.tie_threshold}}}};
  if (p.system_ranking) {
    j["system_ranking"] = {{"systems", p.num_items},
                           {"segments", p.num_segments},
                           {"segment_noise", p.segment_noise},
                           {"system_low", p.system_low},
                           {"system_high", p.system_high},
                           {"budget", p.budget},
                           {"hits_per_iteration", p.hits_per_iteration}};
  } else {
    j["campaign"] = {{"oracle", oracle_kind_name(p.oracle)},
                     {"num_items", p.num_items},
                     {"iterations", p.iterations},
                     {"hits_per_iteration", p.hits_per_iteration}};
    if (s.items_file) j["campaign"]["items"] = s.items_file->string();
  }
  return j;
}

ExperimentReport run_simulation(const SimulationSettings& s) {
  const auto& p = s.preset;
  if (p.methods.empty()) throw std::invalid_argument("no methods selected");
  CampaignOptions opts;
  opts.iterations = p.iterations;
  opts.hits_per_iteration = p.hits_per_iteration;
  opts.bootstrap_resamples = s.bootstrap_resamples;
  opts.seed = s.seed;

  ExperimentReport merged;
  std::optional<SystemRankingTask> task;
  std::optional<Oracle> oracle;
  if (p.system_ranking) {
    task = make_system_ranking_task(p.num_items, p.num_segments, p.system_low,
                                    p.system_high, p.segment_noise,
                                    derive_seed(s.seed, kTaskStream));
  } else if (p.oracle == OracleKind::kCustomFile) {
    if (!s.items_file) {
      throw std::invalid_argument("custom_file oracle needs an items file");
    }
    oracle = oracle_from_items(load_items(*s.items_file));
  } else {
    oracle = make_oracle(p.oracle, p.num_items,
                         derive_seed(s.seed, kOracleStream));
  }
  for (std::size_t k = 0; k < p.methods.size(); ++k) {
    ModelConfig cfg = s.model;
    cfg.method = p.methods[k];
    ExperimentReport r =
        task ? run_system_ranking(*task, p.annotator, cfg, p.budget, opts)
             : run_campaign(*oracle, p.annotator, cfg, opts);
    if (k == 0) {
      merged = std::move(r);
    } else {
      for (auto& m : r.methods) merged.methods.push_back(std::move(m));
    }
  }
  merged.name = p.name;
  return merged;
}

std::vector<ReplayCurvePoint> replay_curve(const ObservationLog& log) {
  std::vector<std::string> ids;
  std::vector<double> oracle;
  for (const auto& it : log.items()) {
    if (!it.oracle_value) {
      throw std::invalid_argument("item '" + it.item_id +
                                  "' has no oracle_value");
    }
    ids.push_back(it.item_id);
    oracle.push_back(*it.oracle_value);
  }
  Model model(log.config(), ids);
  std::vector<ReplayCurvePoint> curve;
  std::int64_t judgments = 0;
  std::optional<int> current;
  auto emit = [&] {
    const auto scores = model.scores();
    curve.push_back(ReplayCurvePoint{*current, judgments,
                                     spearman(scores, oracle),
                                     pearson(scores, oracle)});
  };
  for (const auto& r : log.records()) {
    if (current && r.iteration > *current) emit();
    if (!current || r.iteration > *current) current = r.iteration;
    apply_record(model, r);
    if (r.kind == ObservationKind::kScalar) ++judgments;
  }
  if (current) emit();
  return curve;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Scalar annotation campaigns: simulate, serve, score, export"};
  app.name("easl");
  app.require_subcommand(1);

  ModelFlags sim_flags;
  std::string sim_out;
  std::optional<int> bootstrap;
  int bootstrap_value = 0;
  auto* sim = app.add_subcommand("simulate", "Run simulated campaigns");
  sim_flags.add_to(sim);
  sim->add_option("--out", sim_out, "Output directory");
  auto* o_boot = sim->add_option("--bootstrap", bootstrap_value,
                                 "Bootstrap resamples per correlation");

  ModelFlags serve_flags;
  std::string items_file, host = "127.0.0.1", ui_dir, log_file;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve a live campaign");
  serve_flags.add_to(serve);
  serve->add_option("items", items_file, "Items file")
      ->required()
      ->check(CLI::ExistingFile);
  serve->add_option("--host", host);
  serve->add_option("--port", port);
  serve->add_option("--ui", ui_dir, "Static UI directory");
  serve->add_option("--log", log_file, "Observation log path");

  ModelFlags score_flags;
  std::string score_log;
  auto* score = app.add_subcommand("score", "Replay a log and print scores");
  score_flags.add_to(score);
  score->add_option("log", score_log, "Observation log")
      ->required()
      ->check(CLI::ExistingFile);

  std::string export_log, export_out;
  auto* exp = app.add_subcommand("export", "Write score tables from a log");
  exp->add_option("log", export_log, "Observation log")
      ->required()
      ->check(CLI::ExistingFile);
  exp->add_option("--out", export_out, "Output directory");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (o_boot->count()) bootstrap = bootstrap_value;
    if (sim->parsed()) return cmd_simulate(sim_flags, sim_out, bootstrap, out);
    if (serve->parsed()) {
      return cmd_serve(serve_flags, items_file, host, port, ui_dir, log_file,
                       out);
    }
    if (score->parsed()) return cmd_score(score_flags, score_log, out);
    if (exp->parsed()) return cmd_export(export_log, export_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace easl::cli
