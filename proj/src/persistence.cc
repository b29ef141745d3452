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

#include "easl/persistence.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

namespace easl {
namespace {

using nlohmann::json;

json parse_line(std::string_view line, std::size_t line_no) {
  try {
    json j = json::parse(line);
    if (!j.is_object()) throw ParseError(line_no, "expected a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw ParseError(line_no, e.what());
  }
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

// Optional header check; returns true if the line was a header.
bool check_header(const json& j, std::size_t line_no, std::string_view type) {
  if (!j.contains("format_version")) return false;
  if (j.at("format_version") != kFormatVersion) {
    throw ParseError(line_no, "unsupported format_version " +
                                  j.at("format_version").dump());
  }
  if (j.contains("type") && j.at("type") != type) {
    throw ParseError(line_no, "expected a '" + std::string(type) +
                                  "' file, found '" +
                                  j.at("type").get<std::string>() + "'");
  }
  return true;
}

json item_to_json(const ItemRecord& item) {
  json j = {{"item_id", item.item_id}, {"payload", item.payload}};
  if (item.oracle_value) j["oracle_value"] = *item.oracle_value;
  return j;
}

ItemRecord item_from_json(const json& j) {
  ItemRecord item;
  item.item_id = j.at("item_id").get<std::string>();
  item.payload = j.at("payload").get<std::string>();
  if (item.item_id.empty()) throw std::invalid_argument("empty item_id");
  if (item.payload.empty()) throw std::invalid_argument("empty payload");
  if (j.contains("oracle_value") && !j.at("oracle_value").is_null()) {
    const double v = j.at("oracle_value").get<double>();
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument("oracle_value outside [0, 1]");
    }
    item.oracle_value = v;
  }
  return item;
}

json state_to_json(const InstanceState& s) {
  json j = {{"item_id", s.item_id}, {"count", s.observation_count}};
  if (const auto* g = std::get_if<GaussianParams>(&s.params)) {
    j["mu"] = g->mu;
    j["sigma2"] = g->sigma2;
  } else if (const auto* b = std::get_if<BetaParams>(&s.params)) {
    j["alpha"] = b->alpha;
    j["beta"] = b->beta;
  } else {
    const auto& m = std::get<MeanParams>(s.params);
    j["sum"] = m.sum;
    j["sum_sq"] = m.sum_sq;
  }
  return j;
}

InstanceState state_from_json(const json& j, const ModelConfig& cfg) {
  InstanceState s = initial_state(j.at("item_id").get<std::string>(), cfg);
  s.observation_count = j.at("count").get<std::int64_t>();
  if (auto* g = std::get_if<GaussianParams>(&s.params)) {
    g->mu = j.at("mu").get<double>();
    g->sigma2 = j.at("sigma2").get<double>();
  } else if (auto* b = std::get_if<BetaParams>(&s.params)) {
    b->alpha = j.at("alpha").get<double>();
    b->beta = j.at("beta").get<double>();
  } else {
    auto& m = std::get<MeanParams>(s.params);
    m.sum = j.at("sum").get<double>();
    m.sum_sq = j.at("sum_sq").get<double>();
  }
  return s;
}

std::vector<std::string> ids_of(const std::vector<ItemRecord>& items) {
  std::vector<std::string> ids;
  ids.reserve(items.size());
  for (const auto& it : items) ids.push_back(it.item_id);
  return ids;
}

}  // namespace

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what
                                  : what),
      line_(line) {}

std::vector<ItemRecord> parse_items(std::istream& in) {
  std::vector<ItemRecord> items;
  std::vector<std::string> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json j = parse_line(line, line_no);
    if (check_header(j, line_no, "items")) continue;
    try {
      items.push_back(item_from_json(j));
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (std::find(seen.begin(), seen.end(), items.back().item_id) !=
        seen.end()) {
      throw ParseError(line_no,
                       "duplicate item_id '" + items.back().item_id + "'");
    }
    seen.push_back(items.back().item_id);
  }
  return items;
}

std::vector<ItemRecord> load_items(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_items(in);
}

void write_items(const std::filesystem::path& path,
                 const std::vector<ItemRecord>& items) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << json{{"format_version", kFormatVersion}, {"type", "items"}}.dump()
      << '\n';
  for (const auto& item : items) out << item_to_json(item).dump() << '\n';
}

json config_to_json(const ModelConfig& cfg) {
  return {{"method", std::string(method_name(cfg.method))},
          {"gamma", cfg.gamma},
          {"epsilon", cfg.epsilon},
          {"n", cfg.n},
          {"alpha_init", cfg.init.alpha},
          {"beta_init", cfg.init.beta},
          {"mu_init", cfg.init.mu},
          {"sigma2_init", cfg.init.sigma2},
          {"thurstone_sigma", cfg.thurstone_sigma}};
}

ModelConfig config_from_json(const json& j, ModelConfig base) {
  if (j.contains("method")) {
    base.method = parse_method(j.at("method").get<std::string>());
  }
  if (j.contains("gamma")) base.gamma = j.at("gamma").get<double>();
  if (j.contains("epsilon")) base.epsilon = j.at("epsilon").get<double>();
  if (j.contains("n")) base.n = j.at("n").get<int>();
  if (j.contains("alpha_init")) base.init.alpha = j.at("alpha_init").get<double>();
  if (j.contains("beta_init")) base.init.beta = j.at("beta_init").get<double>();
  if (j.contains("mu_init")) base.init.mu = j.at("mu_init").get<double>();
  if (j.contains("sigma2_init")) {
    base.init.sigma2 = j.at("sigma2_init").get<double>();
  }
  if (j.contains("thurstone_sigma")) {
    base.thurstone_sigma = j.at("thurstone_sigma").get<double>();
  }
  base.validate();
  return base;
}

json record_to_json(const ObservationRecord& r) {
  json j = {{"seq", r.seq},
            {"timestamp", r.timestamp},
            {"hit_id", r.hit_id},
            {"annotator_id", r.annotator_id},
            {"iteration", r.iteration}};
  if (r.kind == ObservationKind::kScalar) {
    j["kind"] = "scalar";
    j["item_id"] = r.item_id;
    j["score"] = r.score;
  } else {
    j["kind"] = "pairwise";
    j["winner"] = r.winner;
    j["loser"] = r.loser;
    j["tie"] = r.tie;
  }
  return j;
}

ObservationRecord record_from_json(const json& j) {
  ObservationRecord r;
  r.seq = j.at("seq").get<std::int64_t>();
  r.timestamp = j.value("timestamp", "");
  r.hit_id = j.value("hit_id", "");
  r.annotator_id = j.value("annotator_id", "");
  r.iteration = j.value("iteration", 0);
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "scalar") {
    r.kind = ObservationKind::kScalar;
    r.item_id = j.at("item_id").get<std::string>();
    r.score = j.at("score").get<double>();
    if (!(r.score >= 0.0 && r.score <= 100.0)) {
      throw std::invalid_argument("score outside [0, 100]");
    }
  } else if (kind == "pairwise") {
    r.kind = ObservationKind::kPairwise;
    r.winner = j.at("winner").get<std::string>();
    r.loser = j.at("loser").get<std::string>();
    r.tie = j.value("tie", false);
    if (r.winner == r.loser) {
      throw std::invalid_argument("pairwise record compares an item to itself");
    }
  } else {
    throw std::invalid_argument("unknown record kind '" + kind + "'");
  }
  return r;
}

ObservationRecord scalar_record(std::string hit_id, std::string annotator_id,
                                int iteration, std::string item_id,
                                double wire_score) {
  ObservationRecord r;
  r.timestamp = utc_timestamp();
  r.hit_id = std::move(hit_id);
  r.annotator_id = std::move(annotator_id);
  r.iteration = iteration;
  r.kind = ObservationKind::kScalar;
  r.item_id = std::move(item_id);
  r.score = wire_score;
  return r;
}

ObservationRecord pairwise_record(std::string hit_id, std::string annotator_id,
                                  int iteration,
                                  const PairwiseOutcome& outcome) {
  ObservationRecord r;
  r.timestamp = utc_timestamp();
  r.hit_id = std::move(hit_id);
  r.annotator_id = std::move(annotator_id);
  r.iteration = iteration;
  r.kind = ObservationKind::kPairwise;
  r.winner = outcome.winner_id;
  r.loser = outcome.loser_id;
  r.tie = outcome.kind == OutcomeKind::kTie;
  return r;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ObservationLog::ObservationLog(ModelConfig cfg, std::vector<ItemRecord> items)
    : cfg_(cfg), items_(std::move(items)) {
  cfg_.validate();
}

ObservationLog ObservationLog::create(const std::filesystem::path& path,
                                      ModelConfig cfg,
                                      std::vector<ItemRecord> items) {
  ObservationLog log(cfg, std::move(items));
  log.sink_ = std::make_unique<std::ofstream>(path, std::ios::trunc);
  if (!*log.sink_) throw std::runtime_error("cannot write " + path.string());
  *log.sink_ << log.header_line() << '\n' << std::flush;
  return log;
}

ObservationLog ObservationLog::open(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  ObservationLog log = parse(in);
  log.sink_ = std::make_unique<std::ofstream>(path, std::ios::app);
  if (!*log.sink_) throw std::runtime_error("cannot append to " + path.string());
  return log;
}

ObservationLog ObservationLog::parse(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::optional<ObservationLog> log;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json j = parse_line(line, line_no);
    if (!log) {
      if (!check_header(j, line_no, "observation_log")) {
        throw ParseError(line_no, "missing observation_log header");
      }
      try {
        std::vector<ItemRecord> items;
        for (const auto& it : j.at("items")) items.push_back(item_from_json(it));
        log.emplace(config_from_json(j.at("config")), std::move(items));
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception& e) {
        throw ParseError(line_no, e.what());
      }
      continue;
    }
    ObservationRecord r;
    try {
      r = record_from_json(j);
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
    if (r.seq <= log->last_seq()) {
      throw CorruptionError("line " + std::to_string(line_no) +
                            ": seq regression (" + std::to_string(r.seq) +
                            " after " + std::to_string(log->last_seq()) + ")");
    }
    log->records_.push_back(std::move(r));
  }
  if (!log) throw ParseError(0, "empty observation log");
  return std::move(*log);
}

std::int64_t ObservationLog::append(ObservationRecord record) {
  if (record.seq == 0) {
    record.seq = last_seq() + 1;
  } else if (record.seq <= last_seq()) {
    throw CorruptionError("seq regression (" + std::to_string(record.seq) +
                          " after " + std::to_string(last_seq()) + ")");
  }
  if (sink_) *sink_ << record_to_json(record).dump() << '\n' << std::flush;
  records_.push_back(std::move(record));
  return records_.back().seq;
}

std::int64_t ObservationLog::last_seq() const {
  return records_.empty() ? 0 : records_.back().seq;
}

std::string ObservationLog::header_line() const {
  json items = json::array();
  for (const auto& it : items_) items.push_back(item_to_json(it));
  return json{{"format_version", kFormatVersion},
              {"type", "observation_log"},
              {"config", config_to_json(cfg_)},
              {"items", items}}
      .dump();
}

void ObservationLog::write(std::ostream& out) const {
  out << header_line() << '\n';
  for (const auto& r : records_) out << record_to_json(r).dump() << '\n';
}

std::int64_t append_observation(ObservationLog& log, ObservationRecord record) {
  return log.append(std::move(record));
}

void apply_record(Model& model, const ObservationRecord& record) {
  const Method m = model.config().method;
  if (record.kind == ObservationKind::kScalar) {
    if (m != Method::kDa && m != Method::kEasl) return;
    model.apply(ScalarJudgment{record.item_id, record.score / 100.0});
    return;
  }
  if (m != Method::kRaGaussian && m != Method::kRaBeta) return;
  model.apply(record.tie ? PairwiseOutcome::tie(record.winner, record.loser)
                         : PairwiseOutcome::win(record.winner, record.loser));
}

Model replay(const ObservationLog& log) {
  const auto ids = ids_of(log.items());
  Model model(log.config(), ids);
  for (const auto& r : log.records()) {
    try {
      apply_record(model, r);
    } catch (const std::exception& e) {
      throw CorruptionError("seq " + std::to_string(r.seq) + ": " + e.what());
    }
  }
  return model;
}

Model replay(const ObservationLog& log, const ModelConfig& cfg) {
  if (!(cfg == log.config())) {
    throw ConfigMismatchError(
        "log was produced with config " + config_to_json(log.config()).dump() +
        ", replay requested " + config_to_json(cfg).dump());
  }
  return replay(log);
}

std::string snapshot_string(const Model& model) {
  std::string out = json{{"format_version", kFormatVersion},
                         {"type", "snapshot"},
                         {"config", config_to_json(model.config())}}
                        .dump();
  out += '\n';
  for (const auto& s : model.states()) {
    out += state_to_json(s).dump();
    out += '\n';
  }
  return out;
}

void snapshot(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << snapshot_string(model);
}

Model restore_string(std::string_view text,
                     const std::optional<ModelConfig>& expected) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::optional<Model> model;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    json j = parse_line(line, line_no);
    if (!model) {
      if (!check_header(j, line_no, "snapshot")) {
        throw ParseError(line_no, "missing snapshot header");
      }
      ModelConfig cfg;
      try {
        cfg = config_from_json(j.at("config"));
      } catch (const std::exception& e) {
        throw ParseError(line_no, e.what());
      }
      if (expected && !(*expected == cfg)) {
        throw ConfigMismatchError("snapshot config " +
                                  config_to_json(cfg).dump() +
                                  " differs from " +
                                  config_to_json(*expected).dump());
      }
      model.emplace(cfg);
      continue;
    }
    try {
      InstanceState s = state_from_json(j, model->config());
      model->add_item(s.item_id);
      model->set_state(std::move(s));
    } catch (const std::exception& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!model) throw ParseError(0, "empty snapshot");
  return std::move(*model);
}

Model restore(const std::filesystem::path& path,
              const std::optional<ModelConfig>& expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return restore_string(buf.str(), expected);
}

std::vector<ScoreRow> ranked_scores(const Model& model) {
  std::vector<ScoreRow> rows;
  rows.reserve(model.size());
  for (const auto& s : model.states()) {
    rows.push_back({s.item_id, current_score(s), current_variance(s),
                    s.observation_count});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ScoreRow& a, const ScoreRow& b) {
                     if (a.score != b.score) return a.score > b.score;
                     return a.item_id < b.item_id;
                   });
  return rows;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(value);
  }
  std::string quoted = "\"";
  for (char ch : value) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  quoted += '"';
  return quoted;
}

void write_scores_csv(std::ostream& out, const std::vector<ScoreRow>& rows) {
  out << "item_id,score,variance,count\n";
  char buf[64];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), ",%.17g,%.17g,", r.score, r.variance);
    out << csv_field(r.item_id) << buf << r.count << '\n';
  }
}

void export_scores(const Model& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_scores_csv(out, ranked_scores(model));
}

}  // namespace easl
