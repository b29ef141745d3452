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


#ifndef EASL_HTTP_API_H_
#define EASL_HTTP_API_H_

// JSON-over-HTTP front end for AnnotationService.
//
//   POST /api/sessions                      {items, config, options}
//   GET  /api/sessions/{id}/next-hit?annotator=...
//   POST /api/sessions/{id}/judgments       {hit_id, annotator_id, scores}
//   GET  /api/sessions/{id}/scores
//   GET  /api/sessions/{id}/progress
//
// 404 unknown ids, 409 lease conflicts, 422 validation failures.

#include <filesystem>

#include "easl/service.h"
#include "httplib.h"
#include "json.hpp"

namespace easl {

SessionOptions session_options_from_json(const nlohmann::json& j,
                                         SessionOptions base = {});
nlohmann::json next_hit_to_json(const NextHit& next);
nlohmann::json ack_to_json(const SubmitAck& ack);
nlohmann::json scores_to_json(const std::vector<ScoreRow>& rows);
nlohmann::json progress_to_json(const Progress& p);

void mount_api(httplib::Server& server, AnnotationService& service);

// Serves a built UI bundle at "/". Returns false when dir is missing.
bool mount_static(httplib::Server& server, const std::filesystem::path& dir);

}  // namespace easl

#endif  // EASL_HTTP_API_H_
