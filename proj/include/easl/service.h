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


#ifndef EASL_SERVICE_H_
#define EASL_SERVICE_H_

// Live annotation campaigns: HIT queues with leases, judgment ingestion and
// online model updates. Every public call is serialized on one mutex, so the
// log order is the order in which judgments were applied.

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "easl/models.h"
#include "easl/persistence.h"
#include "easl/scheduler.h"

namespace easl {

// Unknown session or HIT.
class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// HIT held by another annotator, already completed, or never leased.
class ConflictError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed request payload.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using ServiceClock = std::function<std::chrono::steady_clock::time_point()>;

struct SessionOptions {
  int iterations = 10;
  // Defaults to floor(N / n). Ignored for DA, which serves every item once
  // per iteration.
  std::optional<int> hits_per_iteration;
  bool anchors_as_comparators = false;
  std::chrono::seconds lease_timeout{600};
  // Per-annotator HIT limit within one iteration; unlimited when empty.
  std::optional<int> max_hits_per_annotator;
  // Wire-scale (0-100) difference at or below which two scores are a tie.
  double tie_threshold = 0.0;
  std::uint64_t seed = 0;
  // When set, the observation log is written through to this file.
  std::optional<std::filesystem::path> log_path;

  void validate() const;
};

struct HitItem {
  std::string item_id;
  std::string payload;
};

struct LeasedHit {
  std::string hit_id;
  int iteration = 0;
  std::string anchor_id;
  std::vector<HitItem> items;
  std::chrono::seconds lease_timeout{0};
};

enum class NextHitStatus { kHit, kWait, kComplete };

struct NextHit {
  NextHitStatus status = NextHitStatus::kWait;
  std::optional<LeasedHit> hit;
};

struct SubmitAck {
  std::string hit_id;
  std::string annotator_id;
  // Seq of the last record appended for this judgment.
  std::int64_t seq = 0;
  bool duplicate = false;
};

struct Progress {
  int iteration = 0;
  int iterations = 0;
  int completed_hits = 0;     // in the current iteration
  int total_hits = 0;         // in the current iteration
  int completed_overall = 0;
  bool complete = false;
  std::map<std::string, int> annotator_hits;  // completed, all iterations
};

class AnnotationService {
 public:
  explicit AnnotationService(ServiceClock clock = {});
  ~AnnotationService();
  AnnotationService(const AnnotationService&) = delete;
  AnnotationService& operator=(const AnnotationService&) = delete;

  std::string create_session(std::vector<ItemRecord> items, ModelConfig cfg,
                             SessionOptions options = {});

  NextHit next_hit(const std::string& session_id,
                   const std::string& annotator_id);

  // wire_scores follow the HIT's item order, each in [0, 100].
  SubmitAck submit_judgment(const std::string& session_id,
                            const std::string& hit_id,
                            const std::string& annotator_id,
                            const std::vector<double>& wire_scores);

  std::vector<ScoreRow> get_scores(const std::string& session_id) const;
  Progress get_progress(const std::string& session_id) const;

  // Copies taken under the lock.
  Model model(const std::string& session_id) const;
  ObservationLog log_copy(const std::string& session_id) const;
  std::vector<std::string> session_ids() const;

 private:
  struct Session;

  Session& find(const std::string& session_id) const;

  ServiceClock clock_;
  mutable std::mutex mu_;
  std::map<std::string, std::unique_ptr<Session>> sessions_;
  int next_session_ = 1;
};

const char* next_hit_status_name(NextHitStatus s);

}  // namespace easl

#endif  // EASL_SERVICE_H_
