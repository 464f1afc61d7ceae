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

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace colm {

inline constexpr const char* kSchemaVersion = "colm/1";
inline constexpr int kMaxRoundsCap = 16;

struct Usage {
  std::int64_t prompt_tokens = 0;
  std::int64_t completion_tokens = 0;
  std::int64_t call_count = 0;

  Usage& operator+=(const Usage& o) {
    prompt_tokens += o.prompt_tokens;
    completion_tokens += o.completion_tokens;
    call_count += o.call_count;
    return *this;
  }
  friend Usage operator+(Usage a, const Usage& b) { return a += b; }
  friend bool operator==(const Usage&, const Usage&) = default;
};

/// Image attachment. `data` holds the raw file bytes; `source` is the path it
/// was read from, if any, and is informational only.
struct ImageRef {
  std::string media_type;
  std::string data;
  std::string source;

  friend bool operator==(const ImageRef&, const ImageRef&) = default;
};

enum class QueryMode { Language, VisionLanguage };

/// One earlier exchange of a multi-turn conversation.
struct Turn {
  std::string user;
  std::string assistant;

  friend bool operator==(const Turn&, const Turn&) = default;
};

struct Query {
  std::string id;
  std::string text;
  std::vector<ImageRef> attachments;
  QueryMode mode = QueryMode::Language;
  // Prior turns threaded before `text` as User/Assistant messages.
  std::vector<Turn> history;

  friend bool operator==(const Query&, const Query&) = default;
};

enum class BackendKind { Http, Mock };

struct BackendBinding {
  BackendKind kind = BackendKind::Mock;
  std::string endpoint;
  std::string model_id;
  bool vision = false;
  std::string auth_env_var;

  // Stable identity used for usage accounting and concurrency limits.
  [[nodiscard]] std::string key() const;

  friend bool operator==(const BackendBinding&, const BackendBinding&) = default;
};

struct ClientProfile {
  std::string name;
  std::string role_prompt;
  BackendBinding backend;
  std::vector<std::string> domain_tags;

  friend bool operator==(const ClientProfile&, const ClientProfile&) = default;
};

/// Registration-ordered set of client profiles with unique names.
class ClientPool {
 public:
  ClientPool() = default;
  explicit ClientPool(std::vector<ClientProfile> profiles);

  // Throws Error(InvalidArgument) on a duplicate name or empty role prompt.
  void add(ClientProfile profile);

  [[nodiscard]] const std::vector<ClientProfile>& profiles() const { return profiles_; }
  [[nodiscard]] std::size_t size() const { return profiles_.size(); }
  [[nodiscard]] bool empty() const { return profiles_.empty(); }
  [[nodiscard]] const ClientProfile* find(const std::string& name) const;

  // Copy without the named client; unknown names are ignored.
  [[nodiscard]] ClientPool without(const std::string& name) const;

  friend bool operator==(const ClientPool&, const ClientPool&) = default;

 private:
  std::vector<ClientProfile> profiles_;
};

enum class SelectionMethod { Judge, Fallback, Broadcast };

struct Selection {
  int k = 1;
  std::vector<ClientProfile> selected;
  SelectionMethod method = SelectionMethod::Fallback;
  std::optional<std::string> judge_raw;
  // Judge calls spent on this selection, zero on the fallback path.
  Usage usage;

  [[nodiscard]] std::vector<std::string> names() const;

  friend bool operator==(const Selection&, const Selection&) = default;
};

enum class Stage { Initial, Refined };

struct ErrorRecord {
  std::string kind;
  std::string message;
  int status = 0;

  friend bool operator==(const ErrorRecord&, const ErrorRecord&) = default;
};

struct ClientResponse {
  std::string client_name;
  Stage stage = Stage::Initial;
  int round = 0;
  std::string text;
  Usage usage;
  std::optional<ErrorRecord> error;

  [[nodiscard]] bool ok() const { return !error.has_value(); }

  friend bool operator==(const ClientResponse&, const ClientResponse&) = default;
};

struct ResponseRef {
  std::string client_name;
  Stage stage = Stage::Initial;
  int round = 0;

  friend bool operator==(const ResponseRef&, const ResponseRef&) = default;
};

struct GuidancePacket {
  int round = 1;
  std::string text;
  std::vector<ResponseRef> source_responses;
  Usage usage;

  friend bool operator==(const GuidancePacket&, const GuidancePacket&) = default;
};

struct RoundRecord {
  std::vector<ClientResponse> responses;
  std::optional<GuidancePacket> guidance;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

struct RunConfig {
  int k = 3;
  int max_rounds = 1;
  bool early_stop = false;
  std::chrono::milliseconds per_call_timeout{60000};
  int max_retries = 2;
  double temperature = 0.0;
  std::optional<std::int64_t> seed;
  int max_tokens = 1024;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

// Throws Error(InvalidArgument) when a RunConfig field is out of range.
void check_run_config(const RunConfig& cfg);

/// Prompt templates driving aggregation, refinement and VLM feedback.
struct PromptSet {
  std::string summary_template;
  std::string final_template;
  std::string server_system_prompt;
  std::string vlm_instruction;

  static PromptSet defaults();

  friend bool operator==(const PromptSet&, const PromptSet&) = default;
};

// Throws Error(InvalidArgument) unless each placeholder appears exactly once.
void check_prompt_set(const PromptSet& prompts);

/// Everything needed to re-execute a run: the loop parameters, the prompts
/// that were in effect, and the server binding (absent for VLM runs).
struct ConfigSnapshot {
  RunConfig run;
  PromptSet prompts = PromptSet::defaults();
  std::optional<BackendBinding> server;

  friend bool operator==(const ConfigSnapshot&, const ConfigSnapshot&) = default;
};

struct CollaborationTranscript {
  std::string schema = kSchemaVersion;
  Query query;
  Selection selection;
  std::vector<RoundRecord> rounds;
  std::map<std::string, std::string> finals;
  Usage totals;
  ConfigSnapshot config_snapshot;

  [[nodiscard]] const std::string& id() const { return query.id; }
  // Final-round guidance, the "server output" of a language run.
  [[nodiscard]] std::optional<std::string> server_output() const;

  friend bool operator==(const CollaborationTranscript&,
                         const CollaborationTranscript&) = default;
};

// Component-wise sum of every Usage value held by the transcript.
Usage sum_usage(const CollaborationTranscript& t);

}  // namespace colm
