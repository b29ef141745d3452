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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace easl {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("easl-persist-" + std::to_string(std::random_device{}()));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::vector<ItemRecord> items(int n) {
  std::vector<ItemRecord> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({"w" + std::to_string(i), "word " + std::to_string(i),
                   static_cast<double>(i) / n});
  }
  return out;
}

ModelConfig config(Method m) {
  ModelConfig cfg;
  cfg.method = m;
  return cfg;
}

TEST(Items, ParseWithAndWithoutHeader) {
  std::istringstream with(
      "{\"format_version\":1,\"type\":\"items\"}\n"
      "{\"item_id\":\"a\",\"payload\":\"alpha\",\"oracle_value\":0.25}\n"
      "\n"
      "{\"item_id\":\"b\",\"payload\":\"beta\"}\n");
  const auto parsed = parse_items(with);
  ASSERT_EQ(parsed.size(), 2u);
  EXPECT_EQ(parsed[0].oracle_value, 0.25);
  EXPECT_FALSE(parsed[1].oracle_value.has_value());
  std::istringstream without("{\"item_id\":\"a\",\"payload\":\"alpha\"}\n");
  EXPECT_EQ(parse_items(without).size(), 1u);
}

TEST(Items, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    std::istringstream in(text);
    try {
      parse_items(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("{\"item_id\":\"a\",\"payload\":\"x\"}\n{oops\n"), 2u);
  EXPECT_EQ(line_of("{\"item_id\":\"a\"}\n"), 1u);
  EXPECT_EQ(line_of("{\"item_id\":\"a\",\"payload\":\"\"}\n"), 1u);
  EXPECT_EQ(line_of("{\"item_id\":\"a\",\"payload\":\"x\"}\n"
                    "{\"item_id\":\"a\",\"payload\":\"y\"}\n"),
            2u);
  EXPECT_EQ(line_of("{\"item_id\":\"a\",\"payload\":\"x\","
                    "\"oracle_value\":1.5}\n"),
            1u);
  EXPECT_EQ(line_of("{\"format_version\":9,\"type\":\"items\"}\n"), 1u);
}

TEST(Items, FileRoundTrip) {
  TempDir dir;
  const auto original = items(7);
  write_items(dir.path() / "items.jsonl", original);
  EXPECT_EQ(load_items(dir.path() / "items.jsonl"), original);
  EXPECT_THROW(load_items(dir.path() / "missing.jsonl"), std::runtime_error);
}

TEST(Config, JsonRoundTripIsExact) {
  ModelConfig cfg;
  cfg.method = Method::kRaGaussian;
  cfg.gamma = 0.123456789012345;
  cfg.init.sigma2 = 1.0 / 3.0;
  EXPECT_EQ(config_from_json(config_to_json(cfg)), cfg);
  const auto partial = config_from_json(nlohmann::json{{"epsilon", 0.5}});
  EXPECT_EQ(partial.epsilon, 0.5);
  EXPECT_EQ(partial.gamma, 0.1);
}

TEST(Records, JsonRoundTrip) {
  auto s = scalar_record("it0-h0", "ann", 0, "w1", 80);
  s.seq = 3;
  EXPECT_EQ(record_from_json(record_to_json(s)), s);
  auto p = pairwise_record("it0-h0", "ann", 2, PairwiseOutcome::tie("b", "a"));
  p.seq = 4;
  const auto back = record_from_json(record_to_json(p));
  EXPECT_EQ(back, p);
  EXPECT_EQ(back.winner, "a");
  EXPECT_TRUE(back.tie);
  auto bad = record_to_json(s);
  bad["score"] = 101;
  EXPECT_THROW(record_from_json(bad), std::invalid_argument);
}

TEST(ObservationLog, EmptyReplayIsInitialState) {
  ObservationLog log(config(Method::kEasl), items(3));
  const Model m = replay(log);
  for (const auto& s : m.states()) {
    EXPECT_EQ(std::get<BetaParams>(s.params), (BetaParams{1, 1}));
  }
}

TEST(ObservationLog, SingleScalarReplay) {
  ObservationLog log(config(Method::kEasl), items(3));
  EXPECT_EQ(log.append(scalar_record("h", "a", 0, "w0", 80)), 1);
  const auto p = std::get<BetaParams>(replay(log).state("w0").params);
  EXPECT_NEAR(p.alpha, 1.8, 1e-15);
  EXPECT_NEAR(p.beta, 1.2, 1e-15);
}

TEST(ObservationLog, SeqRules) {
  ObservationLog log(config(Method::kEasl), items(3));
  log.append(scalar_record("h", "a", 0, "w0", 10));
  auto r = scalar_record("h", "a", 0, "w1", 10);
  r.seq = 1;
  EXPECT_THROW(log.append(r), CorruptionError);
  r.seq = 5;
  EXPECT_EQ(log.append(r), 5);
  EXPECT_EQ(log.append(scalar_record("h", "a", 0, "w2", 10)), 6);

  std::ostringstream text;
  log.write(text);
  std::string body = text.str();
  const auto pos = body.find("\"seq\":5");
  ASSERT_NE(pos, std::string::npos);
  body.replace(pos, 7, "\"seq\":1");
  std::istringstream in(body);
  EXPECT_THROW(ObservationLog::parse(in), CorruptionError);
}

TEST(ObservationLog, ParseErrors) {
  std::istringstream no_header("{\"seq\":1}\n");
  EXPECT_THROW(ObservationLog::parse(no_header), ParseError);
  std::istringstream empty("");
  EXPECT_THROW(ObservationLog::parse(empty), ParseError);

  ObservationLog log(config(Method::kEasl), items(2));
  std::ostringstream text;
  log.write(text);
  std::istringstream broken(text.str() + "{\"seq\": 1, \"kind\": \n");
  try {
    ObservationLog::parse(broken);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(ObservationLog, ConfigMismatchRefused) {
  ObservationLog log(config(Method::kEasl), items(2));
  ModelConfig other = config(Method::kEasl);
  other.gamma = 0.2;
  EXPECT_THROW(replay(log, other), ConfigMismatchError);
  EXPECT_NO_THROW(replay(log, config(Method::kEasl)));
}

TEST(ObservationLog, FileBackedAppendAndReopen) {
  TempDir dir;
  const auto path = dir.path() / "obs.jsonl";
  {
    auto log = ObservationLog::create(path, config(Method::kRaBeta), items(4));
    append_observation(
        log, pairwise_record("h", "a", 0, PairwiseOutcome::win("w0", "w1")));
  }
  {
    auto log = ObservationLog::open(path);
    EXPECT_EQ(log.records().size(), 1u);
    log.append(pairwise_record("h", "a", 0, PairwiseOutcome::tie("w2", "w3")));
  }
  const auto log = ObservationLog::open(path);
  ASSERT_EQ(log.records().size(), 2u);
  EXPECT_EQ(log.records()[1].seq, 2);
  EXPECT_EQ(log.config(), config(Method::kRaBeta));
  EXPECT_EQ(log.items(), items(4));
}

// Drives a live model and its log side by side with random HIT judgments.
void random_session(Method m, int observations, std::uint64_t seed,
                    Model& live, ObservationLog& log) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(live.size()) - 1);
  std::uniform_int_distribution<int> wire(0, 100);
  int hit = 0;
  while (static_cast<int>(log.records().size()) < observations) {
    std::vector<std::string> ids;
    while (ids.size() < 5) {
      const std::string id = live.states()[pick(rng)].item_id;
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    const std::string hit_id = "h" + std::to_string(hit++);
    std::vector<ScalarJudgment> scores;
    for (const auto& id : ids) {
      const double w = wire(rng);
      scores.push_back({id, w / 100.0});
      log.append(scalar_record(hit_id, "ann", hit / 4, id, w));
      if (m == Method::kEasl || m == Method::kDa) live.apply(scores.back());
    }
    if (m == Method::kRaBeta || m == Method::kRaGaussian) {
      for (const auto& o : derive_pairwise_outcomes(scores)) {
        log.append(pairwise_record(hit_id, "ann", hit / 4, o));
        live.apply(o);
      }
    }
  }
}

TEST(Replay, MatchesLiveStateFieldForField) {
  for (Method m : {Method::kDa, Method::kRaGaussian, Method::kRaBeta,
                   Method::kEasl}) {
    const auto its = items(30);
    std::vector<std::string> ids;
    for (const auto& it : its) ids.push_back(it.item_id);
    Model live(config(m), ids);
    ObservationLog log(config(m), its);
    random_session(m, 1000, 17, live, log);

    std::ostringstream text;
    log.write(text);
    std::istringstream in(text.str());
    const auto reread = ObservationLog::parse(in);
    EXPECT_EQ(replay(reread), live) << method_name(m);
    EXPECT_EQ(replay(reread, config(m)), live);
  }
}

TEST(Snapshot, RoundTripIsByteIdentical) {
  for (Method m : {Method::kDa, Method::kRaGaussian, Method::kRaBeta,
                   Method::kEasl}) {
    const auto its = items(12);
    std::vector<std::string> ids;
    for (const auto& it : its) ids.push_back(it.item_id);
    Model live(config(m), ids);
    ObservationLog log(config(m), its);
    random_session(m, 200, 18, live, log);
    const std::string snap = snapshot_string(live);
    const Model back = restore_string(snap, config(m));
    EXPECT_EQ(back, live);
    EXPECT_EQ(snapshot_string(back), snap);
  }
}

TEST(Snapshot, RefusesOtherConfig) {
  Model m(config(Method::kEasl), std::vector<std::string>{"a", "b"});
  const std::string snap = snapshot_string(m);
  EXPECT_THROW(restore_string(snap, config(Method::kRaBeta)),
               ConfigMismatchError);
  EXPECT_THROW(restore_string(""), ParseError);
  TempDir dir;
  snapshot(m, dir.path() / "snap.jsonl");
  EXPECT_EQ(restore(dir.path() / "snap.jsonl"), m);
}

TEST(Scores, RankedAndExported) {
  Model m(config(Method::kEasl), std::vector<std::string>{"b", "a", "c,d"});
  m.apply(ScalarJudgment{"c,d", 1.0});
  m.apply(ScalarJudgment{"b", 0.0});
  const auto rows = ranked_scores(m);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].item_id, "c,d");
  EXPECT_EQ(rows[1].item_id, "a");
  EXPECT_EQ(rows[2].item_id, "b");
  EXPECT_EQ(rows[0].count, 1);
  std::ostringstream csv;
  write_scores_csv(csv, rows);
  EXPECT_EQ(csv.str(),
            "item_id,score,variance,count\n"
            "\"c,d\",1,0.055555555555555552,1\n"
            "a,0.5,0.083333333333333329,0\n"
            "b,0,0.055555555555555552,1\n");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
}

}  // namespace
}  // namespace easl
