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

#include "colm/core/codec.hpp"

#include "colm/core/base64.hpp"
#include "colm/core/error.hpp"

namespace colm {

namespace {

[[noreturn]] void bad_enum(std::string_view what, std::string_view value) {
  throw Error(ErrorCode::InvalidArgument,
              "unknown " + std::string(what) + " '" + std::string(value) + "'");
}

template <typename T>
void get_optional(const Json& j, const char* key, std::optional<T>& out) {
  if (auto it = j.find(key); it != j.end() && !it->is_null()) {
    out = it->get<T>();
  } else {
    out.reset();
  }
}

}  // namespace

std::string_view to_string(QueryMode m) {
  return m == QueryMode::Language ? "language" : "vision_language";
}
std::string_view to_string(BackendKind k) { return k == BackendKind::Http ? "http" : "mock"; }
std::string_view to_string(SelectionMethod m) {
  switch (m) {
    case SelectionMethod::Judge: return "judge";
    case SelectionMethod::Fallback: return "fallback";
    case SelectionMethod::Broadcast: return "broadcast";
  }
  return "fallback";
}
std::string_view to_string(Stage s) { return s == Stage::Initial ? "initial" : "refined"; }

QueryMode query_mode_from_string(std::string_view s) {
  if (s == "language" || s == "lang") return QueryMode::Language;
  if (s == "vision_language" || s == "vlm") return QueryMode::VisionLanguage;
  bad_enum("mode", s);
}
BackendKind backend_kind_from_string(std::string_view s) {
  if (s == "http") return BackendKind::Http;
  if (s == "mock") return BackendKind::Mock;
  bad_enum("backend kind", s);
}
SelectionMethod selection_method_from_string(std::string_view s) {
  if (s == "judge") return SelectionMethod::Judge;
  if (s == "fallback") return SelectionMethod::Fallback;
  if (s == "broadcast") return SelectionMethod::Broadcast;
  bad_enum("selection method", s);
}
Stage stage_from_string(std::string_view s) {
  if (s == "initial") return Stage::Initial;
  if (s == "refined") return Stage::Refined;
  bad_enum("stage", s);
}

void to_json(Json& j, const Usage& v) {
  j = Json{{"prompt_tokens", v.prompt_tokens},
           {"completion_tokens", v.completion_tokens},
           {"call_count", v.call_count}};
}
void from_json(const Json& j, Usage& v) {
  v.prompt_tokens = j.at("prompt_tokens").get<std::int64_t>();
  v.completion_tokens = j.at("completion_tokens").get<std::int64_t>();
  v.call_count = j.at("call_count").get<std::int64_t>();
  if (v.prompt_tokens < 0 || v.completion_tokens < 0 || v.call_count < 0) {
    throw Error(ErrorCode::InvalidArgument, "usage fields must be non-negative");
  }
}

void to_json(Json& j, const ImageRef& v) {
  j = Json{{"media_type", v.media_type}, {"data", base64::encode(v.data)}};
  if (!v.source.empty()) j["source"] = v.source;
}
void from_json(const Json& j, ImageRef& v) {
  v.media_type = j.at("media_type").get<std::string>();
  v.data = base64::decode(j.at("data").get<std::string>());
  v.source = j.value("source", std::string{});
}

void to_json(Json& j, const Turn& v) { j = Json{{"user", v.user}, {"assistant", v.assistant}}; }
void from_json(const Json& j, Turn& v) {
  v.user = j.at("user").get<std::string>();
  v.assistant = j.at("assistant").get<std::string>();
}

void to_json(Json& j, const Query& v) {
  j = Json{{"id", v.id},
           {"text", v.text},
           {"attachments", v.attachments},
           {"mode", to_string(v.mode)},
           {"history", v.history}};
}
void from_json(const Json& j, Query& v) {
  v.id = j.at("id").get<std::string>();
  v.text = j.at("text").get<std::string>();
  v.attachments = j.value("attachments", std::vector<ImageRef>{});
  v.mode = query_mode_from_string(j.at("mode").get<std::string>());
  v.history = j.value("history", std::vector<Turn>{});
}

void to_json(Json& j, const BackendBinding& v) {
  j = Json{{"kind", to_string(v.kind)}, {"model_id", v.model_id}, {"vision", v.vision}};
  if (v.kind == BackendKind::Http) {
    j["endpoint"] = v.endpoint;
    j["auth_env_var"] = v.auth_env_var;
  }
}
void from_json(const Json& j, BackendBinding& v) {
  v.kind = backend_kind_from_string(j.at("kind").get<std::string>());
  v.model_id = j.at("model_id").get<std::string>();
  v.vision = j.value("vision", false);
  v.endpoint = j.value("endpoint", std::string{});
  v.auth_env_var = j.value("auth_env_var", std::string{});
  if (v.kind == BackendKind::Http && (v.endpoint.empty() || v.model_id.empty())) {
    throw Error(ErrorCode::InvalidArgument, "http bindings need endpoint and model_id");
  }
}

void to_json(Json& j, const ClientProfile& v) {
  j = Json{{"name", v.name},
           {"role_prompt", v.role_prompt},
           {"backend", v.backend},
           {"domain_tags", v.domain_tags}};
}
void from_json(const Json& j, ClientProfile& v) {
  v.name = j.at("name").get<std::string>();
  v.role_prompt = j.at("role_prompt").get<std::string>();
  v.backend = j.at("backend").get<BackendBinding>();
  v.domain_tags = j.value("domain_tags", std::vector<std::string>{});
}

void to_json(Json& j, const Selection& v) {
  j = Json{{"k", v.k},
           {"selected", v.selected},
           {"method", to_string(v.method)},
           {"usage", v.usage}};
  if (v.judge_raw) j["judge_raw"] = *v.judge_raw;
}
void from_json(const Json& j, Selection& v) {
  v.k = j.at("k").get<int>();
  v.selected = j.at("selected").get<std::vector<ClientProfile>>();
  v.method = selection_method_from_string(j.at("method").get<std::string>());
  get_optional(j, "judge_raw", v.judge_raw);
  v.usage = j.at("usage").get<Usage>();
}

void to_json(Json& j, const ErrorRecord& v) {
  j = Json{{"kind", v.kind}, {"message", v.message}, {"status", v.status}};
}
void from_json(const Json& j, ErrorRecord& v) {
  v.kind = j.at("kind").get<std::string>();
  v.message = j.at("message").get<std::string>();
  v.status = j.value("status", 0);
}

void to_json(Json& j, const ClientResponse& v) {
  j = Json{{"client_name", v.client_name},
           {"stage", to_string(v.stage)},
           {"round", v.round},
           {"text", v.text},
           {"usage", v.usage}};
  if (v.error) j["error"] = *v.error;
}
void from_json(const Json& j, ClientResponse& v) {
  v.client_name = j.at("client_name").get<std::string>();
  v.stage = stage_from_string(j.at("stage").get<std::string>());
  v.round = j.at("round").get<int>();
  v.text = j.at("text").get<std::string>();
  v.usage = j.at("usage").get<Usage>();
  get_optional(j, "error", v.error);
}

void to_json(Json& j, const ResponseRef& v) {
  j = Json{{"client_name", v.client_name}, {"stage", to_string(v.stage)}, {"round", v.round}};
}
void from_json(const Json& j, ResponseRef& v) {
  v.client_name = j.at("client_name").get<std::string>();
  v.stage = stage_from_string(j.at("stage").get<std::string>());
  v.round = j.at("round").get<int>();
}

void to_json(Json& j, const GuidancePacket& v) {
  j = Json{{"round", v.round},
           {"text", v.text},
           {"source_responses", v.source_responses},
           {"usage", v.usage}};
}
void from_json(const Json& j, GuidancePacket& v) {
  v.round = j.at("round").get<int>();
  v.text = j.at("text").get<std::string>();
  v.source_responses = j.at("source_responses").get<std::vector<ResponseRef>>();
  v.usage = j.at("usage").get<Usage>();
}

void to_json(Json& j, const RoundRecord& v) {
  j = Json{{"responses", v.responses}};
  if (v.guidance) j["guidance"] = *v.guidance;
}
void from_json(const Json& j, RoundRecord& v) {
  v.responses = j.at("responses").get<std::vector<ClientResponse>>();
  get_optional(j, "guidance", v.guidance);
}

void to_json(Json& j, const RunConfig& v) {
  j = Json{{"k", v.k},
           {"max_rounds", v.max_rounds},
           {"early_stop", v.early_stop},
           {"per_call_timeout_ms", v.per_call_timeout.count()},
           {"max_retries", v.max_retries},
           {"temperature", v.temperature},
           {"max_tokens", v.max_tokens}};
  if (v.seed) j["seed"] = *v.seed;
}
void from_json(const Json& j, RunConfig& v) { v = run_config_from_json(j); }

RunConfig run_config_from_json(const Json& j, const RunConfig& base) {
  RunConfig v = base;
  v.k = j.value("k", v.k);
  v.max_rounds = j.value("max_rounds", v.max_rounds);
  v.early_stop = j.value("early_stop", v.early_stop);
  v.per_call_timeout =
      std::chrono::milliseconds(j.value("per_call_timeout_ms", v.per_call_timeout.count()));
  v.max_retries = j.value("max_retries", v.max_retries);
  v.temperature = j.value("temperature", v.temperature);
  v.max_tokens = j.value("max_tokens", v.max_tokens);
  if (j.contains("seed")) get_optional(j, "seed", v.seed);
  check_run_config(v);
  return v;
}

void to_json(Json& j, const PromptSet& v) {
  j = Json{{"summary_template", v.summary_template},
           {"final_template", v.final_template},
           {"server_system_prompt", v.server_system_prompt},
           {"vlm_instruction", v.vlm_instruction}};
}
void from_json(const Json& j, PromptSet& v) {
  const PromptSet d = PromptSet::defaults();
  v.summary_template = j.value("summary_template", d.summary_template);
  v.final_template = j.value("final_template", d.final_template);
  v.server_system_prompt = j.value("server_system_prompt", d.server_system_prompt);
  v.vlm_instruction = j.value("vlm_instruction", d.vlm_instruction);
  check_prompt_set(v);
}

void to_json(Json& j, const ConfigSnapshot& v) {
  j = Json{{"run", v.run}, {"prompts", v.prompts}};
  if (v.server) j["server"] = *v.server;
}
void from_json(const Json& j, ConfigSnapshot& v) {
  v.run = j.at("run").get<RunConfig>();
  v.prompts = j.at("prompts").get<PromptSet>();
  get_optional(j, "server", v.server);
}

void to_json(Json& j, const CollaborationTranscript& v) {
  j = Json{{"schema", v.schema},
           {"query", v.query},
           {"selection", v.selection},
           {"rounds", v.rounds},
           {"finals", v.finals},
           {"totals", v.totals},
           {"config_snapshot", v.config_snapshot}};
}
void from_json(const Json& j, CollaborationTranscript& v) {
  v.schema = j.at("schema").get<std::string>();
  v.query = j.at("query").get<Query>();
  v.selection = j.at("selection").get<Selection>();
  v.rounds = j.at("rounds").get<std::vector<RoundRecord>>();
  v.finals = j.at("finals").get<std::map<std::string, std::string>>();
  v.totals = j.at("totals").get<Usage>();
  v.config_snapshot = j.at("config_snapshot").get<ConfigSnapshot>();
}

CollaborationTranscript decode_transcript(std::string_view bytes) {
  try {
    return Json::parse(bytes).get<CollaborationTranscript>();
  } catch (const Json::exception& e) {
    throw Error::corrupt(0, {std::string("decode: ") + e.what()});
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Corrupt) throw;
    throw Error::corrupt(0, {std::string("decode: ") + e.what()});
  }
}

}  // namespace colm
