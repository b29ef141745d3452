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


#include "easl/service.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <utility>

#include "easl/simulator.h"

namespace easl {

using TimePoint = std::chrono::steady_clock::time_point;

void SessionOptions::validate() const {
  if (iterations < 1) throw ValidationError("iterations must be >= 1");
  if (hits_per_iteration && *hits_per_iteration < 1) {
    throw ValidationError("hits_per_iteration must be >= 1");
  }
  if (lease_timeout.count() < 1) {
    throw ValidationError("lease timeout must be positive");
  }
  if (max_hits_per_annotator && *max_hits_per_annotator < 1) {
    throw ValidationError("max_hits_per_annotator must be >= 1");
  }
  if (!std::isfinite(tie_threshold) || tie_threshold < 0.0) {
    throw ValidationError("tie_threshold must be finite and >= 0");
  }
}

const char* next_hit_status_name(NextHitStatus s) {
  switch (s) {
    case NextHitStatus::kHit:
      return "hit";
    case NextHitStatus::kWait:
      return "wait";
    case NextHitStatus::kComplete:
      return "complete";
  }
  return "unknown";
}

struct AnnotationService::Session {
  struct Slot {
    Hit hit;
    std::string holder;
    TimePoint expiry{};
    std::set<std::string> served;

    bool completed() const { return hit.status == HitStatus::kCompleted; }
    bool leased(TimePoint now) const {
      return !holder.empty() && now < expiry;
    }
  };

  Session(std::string id, std::vector<ItemRecord> item_list, ModelConfig c,
          SessionOptions o, ObservationLog l)
      : session_id(std::move(id)),
        cfg(c),
        options(std::move(o)),
        items(std::move(item_list)),
        model(c, item_ids_of(items)),
        log(std::move(l)) {
    for (std::size_t i = 0; i < items.size(); ++i) {
      payloads.emplace(items[i].item_id, items[i].payload);
    }
  }

  static std::vector<std::string> item_ids_of(
      const std::vector<ItemRecord>& items) {
    std::vector<std::string> ids;
    ids.reserve(items.size());
    for (const auto& it : items) ids.push_back(it.item_id);
    return ids;
  }

  void build_iteration(int it) {
    std::vector<Hit> hits;
    const std::uint64_t seed = derive_seed(options.seed,
                                           static_cast<std::uint64_t>(it));
    if (cfg.method == Method::kDa) {
      std::vector<std::string> order = item_ids_of(items);
      std::mt19937_64 rng(seed);
      std::shuffle(order.begin(), order.end(), rng);
      for (std::size_t h = 0; h < order.size(); ++h) {
        Hit hit;
        hit.hit_id = "it" + std::to_string(it) + "-h" + std::to_string(h);
        hit.iteration = it;
        hit.anchor_id = order[h];
        hit.item_ids = {order[h]};
        hits.push_back(std::move(hit));
      }
    } else {
      SchedulerOptions so;
      so.hits_per_iteration = options.hits_per_iteration;
      so.anchors_as_comparators = options.anchors_as_comparators;
      so.iteration = it;
      hits = sample_hits(model.states(), cfg, seed, so);
    }
    iteration = it;
    current.clear();
    iteration_leases.clear();
    for (auto& hit : hits) {
      slot_index.emplace(hit.hit_id, slots.size());
      current.push_back(slots.size());
      slots.push_back(Slot{std::move(hit), {}, {}, {}});
    }
  }

  bool current_exhausted(TimePoint now) const {
    for (std::size_t i : current) {
      const Slot& s = slots[i];
      if (!s.completed() && !s.leased(now)) return false;
    }
    return true;
  }

  bool all_completed() const {
    for (const auto& s : slots) {
      if (!s.completed()) return false;
    }
    return true;
  }

  std::optional<std::size_t> available_for(const std::string& annotator,
                                           TimePoint now) const {
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const Slot& s = slots[i];
      if (s.completed() || s.leased(now)) continue;
      if (s.served.count(annotator) != 0) continue;
      return i;
    }
    return std::nullopt;
  }

  LeasedHit lease(std::size_t i, const std::string& annotator, TimePoint now) {
    Slot& s = slots[i];
    s.holder = annotator;
    s.expiry = now + options.lease_timeout;
    s.served.insert(annotator);
    ++iteration_leases[annotator];
    LeasedHit out;
    out.hit_id = s.hit.hit_id;
    out.iteration = s.hit.iteration;
    out.anchor_id = s.hit.anchor_id;
    out.lease_timeout = options.lease_timeout;
    for (const auto& id : s.hit.item_ids) {
      out.items.push_back(HitItem{id, payloads.at(id)});
    }
    return out;
  }

  std::int64_t record(ObservationRecord r) {
    const std::int64_t seq = log.append(r);
    r.seq = seq;
    apply_record(model, r);
    return seq;
  }

  std::string session_id;
  ModelConfig cfg;
  SessionOptions options;
  std::vector<ItemRecord> items;
  std::map<std::string, std::string> payloads;
  Model model;
  ObservationLog log;

  int iteration = 0;
  std::vector<Slot> slots;
  std::map<std::string, std::size_t> slot_index;
  std::vector<std::size_t> current;
  std::map<std::string, int> iteration_leases;
  std::map<std::pair<std::string, std::string>, SubmitAck> acks;
  std::map<std::string, int> annotator_hits;
  int completed_overall = 0;
};

AnnotationService::AnnotationService(ServiceClock clock)
    : clock_(std::move(clock)) {
  if (!clock_) clock_ = [] { return std::chrono::steady_clock::now(); };
}

AnnotationService::~AnnotationService() = default;

AnnotationService::Session& AnnotationService::find(
    const std::string& session_id) const {
  auto it = sessions_.find(session_id);
  if (it == sessions_.end()) {
    throw NotFoundError("unknown session '" + session_id + "'");
  }
  return *it->second;
}

std::string AnnotationService::create_session(std::vector<ItemRecord> items,
                                              ModelConfig cfg,
                                              SessionOptions options) {
  options.validate();
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  if (items.size() < 2) throw ValidationError("need at least 2 items");
  std::set<std::string> seen;
  for (const auto& it : items) {
    if (it.item_id.empty()) throw ValidationError("empty item_id");
    if (it.payload.empty()) {
      throw ValidationError("empty payload for item '" + it.item_id + "'");
    }
    if (!seen.insert(it.item_id).second) {
      throw ValidationError("duplicate item_id '" + it.item_id + "'");
    }
  }

  std::lock_guard<std::mutex> lock(mu_);
  std::string id = "session-" + std::to_string(next_session_);
  ObservationLog log =
      options.log_path ? ObservationLog::create(*options.log_path, cfg, items)
                       : ObservationLog(cfg, items);
  auto session = std::make_unique<Session>(id, std::move(items), cfg,
                                           std::move(options), std::move(log));
  try {
    session->build_iteration(0);
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  ++next_session_;
  sessions_.emplace(id, std::move(session));
  return id;
}

NextHit AnnotationService::next_hit(const std::string& session_id,
                                    const std::string& annotator_id) {
  if (annotator_id.empty()) throw ValidationError("annotator id is required");
  std::lock_guard<std::mutex> lock(mu_);
  Session& s = find(session_id);
  const TimePoint now = clock_();

  if (s.options.max_hits_per_annotator) {
    auto it = s.iteration_leases.find(annotator_id);
    if (it != s.iteration_leases.end() &&
        it->second >= *s.options.max_hits_per_annotator) {
      return NextHit{NextHitStatus::kWait, std::nullopt};
    }
  }
  if (auto i = s.available_for(annotator_id, now)) {
    return NextHit{NextHitStatus::kHit, s.lease(*i, annotator_id, now)};
  }
  if (!s.current_exhausted(now)) return NextHit{NextHitStatus::kWait, {}};
  if (s.iteration + 1 < s.options.iterations) {
    s.build_iteration(s.iteration + 1);
    if (auto i = s.available_for(annotator_id, now)) {
      return NextHit{NextHitStatus::kHit, s.lease(*i, annotator_id, now)};
    }
    return NextHit{NextHitStatus::kWait, {}};
  }
  if (s.all_completed()) return NextHit{NextHitStatus::kComplete, {}};
  return NextHit{NextHitStatus::kWait, {}};
}

SubmitAck AnnotationService::submit_judgment(
    const std::string& session_id, const std::string& hit_id,
    const std::string& annotator_id, const std::vector<double>& wire_scores) {
  std::lock_guard<std::mutex> lock(mu_);
  Session& s = find(session_id);
  if (auto it = s.acks.find({hit_id, annotator_id}); it != s.acks.end()) {
    SubmitAck ack = it->second;
    ack.duplicate = true;
    return ack;
  }
  auto si = s.slot_index.find(hit_id);
  if (si == s.slot_index.end()) {
    throw NotFoundError("unknown hit '" + hit_id + "'");
  }
  Session::Slot& slot = s.slots[si->second];
  if (slot.completed()) throw ConflictError("hit already completed");
  if (slot.holder != annotator_id) {
    throw ConflictError("hit is not leased to annotator '" + annotator_id +
                        "'");
  }
  const auto& ids = slot.hit.item_ids;
  if (wire_scores.size() != ids.size()) {
    throw ValidationError("expected " + std::to_string(ids.size()) +
                          " scores, got " +
                          std::to_string(wire_scores.size()));
  }
  for (double v : wire_scores) {
    if (!std::isfinite(v) || v < 0.0 || v > 100.0) {
      throw ValidationError("scores must lie in [0, 100]");
    }
  }

  const int iteration = slot.hit.iteration;
  std::int64_t seq = 0;
  std::vector<ScalarJudgment> judgments;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    seq = s.record(
        scalar_record(hit_id, annotator_id, iteration, ids[k], wire_scores[k]));
    judgments.push_back(ScalarJudgment{ids[k], wire_scores[k] / 100.0});
  }
  if (s.cfg.method == Method::kRaGaussian || s.cfg.method == Method::kRaBeta) {
    for (const auto& o : derive_pairwise_outcomes(
             judgments, s.options.tie_threshold / 100.0)) {
      seq = s.record(pairwise_record(hit_id, annotator_id, iteration, o));
    }
  }

  slot.hit.status = HitStatus::kCompleted;
  ++s.completed_overall;
  ++s.annotator_hits[annotator_id];
  SubmitAck ack{hit_id, annotator_id, seq, false};
  s.acks.emplace(std::make_pair(hit_id, annotator_id), ack);
  return ack;
}

std::vector<ScoreRow> AnnotationService::get_scores(
    const std::string& session_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  return ranked_scores(find(session_id).model);
}

Progress AnnotationService::get_progress(const std::string& session_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  const Session& s = find(session_id);
  Progress p;
  p.iteration = s.iteration;
  p.iterations = s.options.iterations;
  p.total_hits = static_cast<int>(s.current.size());
  for (std::size_t i : s.current) {
    if (s.slots[i].completed()) ++p.completed_hits;
  }
  p.completed_overall = s.completed_overall;
  p.complete = s.iteration + 1 >= s.options.iterations && s.all_completed();
  p.annotator_hits = s.annotator_hits;
  return p;
}

Model AnnotationService::model(const std::string& session_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  return find(session_id).model;
}

ObservationLog AnnotationService::log_copy(
    const std::string& session_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  const Session& s = find(session_id);
  ObservationLog copy(s.log.config(), s.log.items());
  for (const auto& r : s.log.records()) copy.append(r);
  return copy;
}

std::vector<std::string> AnnotationService::session_ids() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::string> ids;
  for (const auto& [id, s] : sessions_) ids.push_back(id);
  return ids;
}

}  // namespace easl
