// Copyright 2026 The colm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
// https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "colm/core/types.hpp"

// Canonical JSON encoding of the core types. nlohmann::json stores objects in
// a std::map, so keys are emitted in lexicographic order; `dump()` without
// indentation is the canonical byte form. Optional fields are omitted when
// absent. Image bytes are carried as base64.

namespace colm {

using Json = nlohmann::json;

std::string_view to_string(QueryMode m);
std::string_view to_string(BackendKind k);
std::string_view to_string(SelectionMethod m);
std::string_view to_string(Stage s);
QueryMode query_mode_from_string(std::string_view s);
BackendKind backend_kind_from_string(std::string_view s);
SelectionMethod selection_method_from_string(std::string_view s);
Stage stage_from_string(std::string_view s);

void to_json(Json& j, const Usage& v);
void from_json(const Json& j, Usage& v);
void to_json(Json& j, const ImageRef& v);
void from_json(const Json& j, ImageRef& v);
void to_json(Json& j, const Turn& v);
void from_json(const Json& j, Turn& v);
void to_json(Json& j, const Query& v);
void from_json(const Json& j, Query& v);
void to_json(Json& j, const BackendBinding& v);
void from_json(const Json& j, BackendBinding& v);
void to_json(Json& j, const ClientProfile& v);
void from_json(const Json& j, ClientProfile& v);
void to_json(Json& j, const Selection& v);
void from_json(const Json& j, Selection& v);
void to_json(Json& j, const ErrorRecord& v);
void from_json(const Json& j, ErrorRecord& v);
void to_json(Json& j, const ClientResponse& v);
void from_json(const Json& j, ClientResponse& v);
void to_json(Json& j, const ResponseRef& v);
void from_json(const Json& j, ResponseRef& v);
void to_json(Json& j, const GuidancePacket& v);
void from_json(const Json& j, GuidancePacket& v);
void to_json(Json& j, const RoundRecord& v);
void from_json(const Json& j, RoundRecord& v);
void to_json(Json& j, const RunConfig& v);
void from_json(const Json& j, RunConfig& v);
void to_json(Json& j, const PromptSet& v);
void from_json(const Json& j, PromptSet& v);
void to_json(Json& j, const ConfigSnapshot& v);
void from_json(const Json& j, ConfigSnapshot& v);
void to_json(Json& j, const CollaborationTranscript& v);
void from_json(const Json& j, CollaborationTranscript& v);

// Reads a RunConfig, taking defaults for absent fields.
RunConfig run_config_from_json(const Json& j, const RunConfig& base = {});

template <typename T>
std::string encode(const T& value) {
  return Json(value).dump();
}

// Throws Error(Corrupt) with line 0 when the bytes are not a valid transcript.
CollaborationTranscript decode_transcript(std::string_view bytes);

}  // namespace colm
