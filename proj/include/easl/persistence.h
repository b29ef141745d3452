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

#ifndef EASL_PERSISTENCE_H_
#define EASL_PERSISTENCE_H_

// Line-delimited JSON formats. Every file starts with a header object that
// carries "format_version"; each following line is one self-describing
// record. Wire scores use the annotator-facing 0-100 scale and are divided by
// 100 when applied to a model.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "easl/models.h"
#include "json.hpp"

namespace easl {

inline constexpr int kFormatVersion = 1;

// Malformed input; line() is 1-based, 0 when not tied to a line.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Sequence regression or other structural damage in a log.
class CorruptionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A log or snapshot produced under a different ModelConfig.
class ConfigMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ItemRecord {
  std::string item_id;
  std::string payload;
  std::optional<double> oracle_value;

  friend bool operator==(const ItemRecord&, const ItemRecord&) = default;
};

std::vector<ItemRecord> parse_items(std::istream& in);
std::vector<ItemRecord> load_items(const std::filesystem::path& path);
void write_items(const std::filesystem::path& path,
                 const std::vector<ItemRecord>& items);

nlohmann::json config_to_json(const ModelConfig& cfg);
// Missing keys keep their defaults.
ModelConfig config_from_json(const nlohmann::json& j,
                             ModelConfig base = ModelConfig{});

enum class ObservationKind { kScalar, kPairwise };

struct ObservationRecord {
  std::int64_t seq = 0;
  std::string timestamp;
  std::string hit_id;
  std::string annotator_id;
  int iteration = 0;
  ObservationKind kind = ObservationKind::kScalar;
  // kScalar
  std::string item_id;
  double score = 0.0;  // 0-100
  // kPairwise
  std::string winner;
  std::string loser;
  bool tie = false;

  friend bool operator==(const ObservationRecord&,
                         const ObservationRecord&) = default;
};

nlohmann::json record_to_json(const ObservationRecord& r);
ObservationRecord record_from_json(const nlohmann::json& j);

ObservationRecord scalar_record(std::string hit_id, std::string annotator_id,
                                int iteration, std::string item_id,
                                double wire_score);
ObservationRecord pairwise_record(std::string hit_id, std::string annotator_id,
                                  int iteration,
                                  const PairwiseOutcome& outcome);

// Current UTC time as an ISO-8601 string.
std::string utc_timestamp();

// Append-only observation log. The header names the ModelConfig and the item
// set so a log can be replayed on its own. When opened on a path every
// append is written through and flushed.
class ObservationLog {
 public:
  ObservationLog(ModelConfig cfg, std::vector<ItemRecord> items);

  // Creates (truncating) a file-backed log and writes its header.
  static ObservationLog create(const std::filesystem::path& path,
                               ModelConfig cfg, std::vector<ItemRecord> items);
  // Reads an existing log. Further appends go to the same file.
  static ObservationLog open(const std::filesystem::path& path);
  static ObservationLog parse(std::istream& in);

  // Assigns seq = last_seq() + 1 when record.seq is 0; an explicit seq at or
  // below last_seq() throws CorruptionError.
  std::int64_t append(ObservationRecord record);

  const ModelConfig& config() const { return cfg_; }
  const std::vector<ItemRecord>& items() const { return items_; }
  const std::vector<ObservationRecord>& records() const { return records_; }
  std::int64_t last_seq() const;

  std::string header_line() const;
  void write(std::ostream& out) const;

 private:
  ModelConfig cfg_;
  std::vector<ItemRecord> items_;
  std::vector<ObservationRecord> records_;
  std::unique_ptr<std::ofstream> sink_;
};

std::int64_t append_observation(ObservationLog& log, ObservationRecord record);

// Applies one record the way the live service does: scalar records feed DA
// and EASL, pairwise records feed the RA methods; others are skipped.
void apply_record(Model& model, const ObservationRecord& record);

// Rebuilds the model from the initial state. The two-argument form refuses a
// config that differs from the log header.
Model replay(const ObservationLog& log);
Model replay(const ObservationLog& log, const ModelConfig& cfg);

std::string snapshot_string(const Model& model);
void snapshot(const Model& model, const std::filesystem::path& path);
Model restore_string(std::string_view text,
                     const std::optional<ModelConfig>& expected = {});
Model restore(const std::filesystem::path& path,
              const std::optional<ModelConfig>& expected = {});

struct ScoreRow {
  std::string item_id;
  double score = 0.0;
  double variance = 0.0;
  std::int64_t count = 0;
};

// Descending score, ties by item id.
std::vector<ScoreRow> ranked_scores(const Model& model);

// RFC 4180 quoting: fields containing separators or quotes are wrapped.
std::string csv_field(std::string_view value);

// item_id,score,variance,count
void write_scores_csv(std::ostream& out, const std::vector<ScoreRow>& rows);
void export_scores(const Model& model, const std::filesystem::path& path);

}  // namespace easl

#endif  // EASL_PERSISTENCE_H_
