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


#include "easl/http_api.h"

#include <string>
#include <vector>

namespace easl {
namespace {

using nlohmann::json;

void reply(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& what) {
  reply(res, status, json{{"error", what}});
}

// Maps service exceptions onto status codes.
template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const NotFoundError& e) {
    reply_error(res, 404, e.what());
  } catch (const ConflictError& e) {
    reply_error(res, 409, e.what());
  } catch (const ValidationError& e) {
    reply_error(res, 422, e.what());
  } catch (const json::exception& e) {
    reply_error(res, 422, e.what());
  } catch (const std::invalid_argument& e) {
    reply_error(res, 422, e.what());
  }
}

json parse_body(const httplib::Request& req) {
  json body = json::parse(req.body, nullptr, false);
  if (body.is_discarded() || !body.is_object()) {
    throw ValidationError("request body must be a JSON object");
  }
  return body;
}

std::vector<ItemRecord> items_from_json(const json& j) {
  if (!j.is_array()) throw ValidationError("items must be an array");
  std::vector<ItemRecord> items;
  for (const auto& e : j) {
    ItemRecord r;
    r.item_id = e.at("item_id").get<std::string>();
    r.payload = e.at("payload").get<std::string>();
    if (e.contains("oracle_value") && !e["oracle_value"].is_null()) {
      r.oracle_value = e["oracle_value"].get<double>();
    }
    items.push_back(std::move(r));
  }
  return items;
}

}  // namespace

SessionOptions session_options_from_json(const json& j, SessionOptions base) {
  if (!j.is_object()) throw ValidationError("options must be an object");
  if (j.contains("iterations")) base.iterations = j["iterations"].get<int>();
  if (j.contains("hits_per_iteration")) {
    base.hits_per_iteration = j["hits_per_iteration"].get<int>();
  }
  if (j.contains("anchors_as_comparators")) {
    base.anchors_as_comparators = j["anchors_as_comparators"].get<bool>();
  }
  if (j.contains("lease_seconds")) {
    base.lease_timeout = std::chrono::seconds(j["lease_seconds"].get<int>());
  }
  if (j.contains("max_hits_per_annotator")) {
    base.max_hits_per_annotator = j["max_hits_per_annotator"].get<int>();
  }
  if (j.contains("tie_threshold")) {
    base.tie_threshold = j["tie_threshold"].get<double>();
  }
  if (j.contains("seed")) base.seed = j["seed"].get<std::uint64_t>();
  return base;
}

json next_hit_to_json(const NextHit& next) {
  json out{{"status", next_hit_status_name(next.status)}};
  if (next.hit) {
    json items = json::array();
    for (const auto& it : next.hit->items) {
      items.push_back({{"item_id", it.item_id}, {"payload", it.payload}});
    }
    out["hit"] = {{"hit_id", next.hit->hit_id},
                  {"iteration", next.hit->iteration},
                  {"anchor_id", next.hit->anchor_id},
                  {"items", items},
                  {"lease_seconds", next.hit->lease_timeout.count()}};
  }
  return out;
}

json ack_to_json(const SubmitAck& ack) {
  return {{"hit_id", ack.hit_id},
          {"annotator_id", ack.annotator_id},
          {"seq", ack.seq},
          {"duplicate", ack.duplicate}};
}

json scores_to_json(const std::vector<ScoreRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    arr.push_back({{"item_id", r.item_id},
                   {"score", r.score},
                   {"variance", r.variance},
                   {"count", r.count}});
  }
  return {{"scores", arr}};
}

json progress_to_json(const Progress& p) {
  return {{"iteration", p.iteration},
          {"iterations", p.iterations},
          {"completed_hits", p.completed_hits},
          {"total_hits", p.total_hits},
          {"completed_overall", p.completed_overall},
          {"complete", p.complete},
          {"annotator_hits", p.annotator_hits}};
}

void mount_api(httplib::Server& server, AnnotationService& service) {
  server.Post("/api/sessions", [&service](const httplib::Request& req,
                                          httplib::Response& res) {
    guarded(res, [&] {
      const json body = parse_body(req);
      auto items = items_from_json(body.at("items"));
      ModelConfig cfg = config_from_json(body.value("config", json::object()));
      SessionOptions opts =
          session_options_from_json(body.value("options", json::object()));
      const std::string id =
          service.create_session(std::move(items), cfg, std::move(opts));
      reply(res, 200, json{{"session_id", id}, {"config", config_to_json(cfg)}});
    });
  });

  server.Get(R"(/api/sessions/([^/]+)/next-hit)",
             [&service](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 const std::string annotator =
                     req.get_param_value("annotator");
                 reply(res, 200,
                       next_hit_to_json(
                           service.next_hit(req.matches[1], annotator)));
               });
             });

  server.Post(R"(/api/sessions/([^/]+)/judgments)",
              [&service](const httplib::Request& req, httplib::Response& res) {
                guarded(res, [&] {
                  const json body = parse_body(req);
                  const auto ack = service.submit_judgment(
                      req.matches[1], body.at("hit_id").get<std::string>(),
                      body.at("annotator_id").get<std::string>(),
                      body.at("scores").get<std::vector<double>>());
                  reply(res, 200, ack_to_json(ack));
                });
              });

  server.Get(R"(/api/sessions/([^/]+)/scores)",
             [&service](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 reply(res, 200, scores_to_json(service.get_scores(
                                     req.matches[1])));
               });
             });

  server.Get(R"(/api/sessions/([^/]+)/progress)",
             [&service](const httplib::Request& req, httplib::Response& res) {
               guarded(res, [&] {
                 reply(res, 200, progress_to_json(service.get_progress(
                                     req.matches[1])));
               });
             });
}

bool mount_static(httplib::Server& server, const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) return false;
  return server.set_mount_point("/", dir.string());
}

}  // namespace easl
