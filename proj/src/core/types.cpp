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

#include "colm/core/types.hpp"

#include <algorithm>

#include "colm/core/error.hpp"
#include "colm/core/text.hpp"

namespace colm {

std::string BackendBinding::key() const {
  if (kind == BackendKind::Mock) return "mock:" + model_id;
  return "http:" + endpoint + "#" + model_id;
}

ClientPool::ClientPool(std::vector<ClientProfile> profiles) {
  for (auto& p : profiles) add(std::move(p));
}

void ClientPool::add(ClientProfile profile) {
  if (profile.name.empty()) {
    throw Error(ErrorCode::InvalidArgument, "client name must be non-empty");
  }
  if (text::trim(profile.role_prompt).empty()) {
    throw Error(ErrorCode::InvalidArgument,
                "client '" + profile.name + "' has an empty role_prompt");
  }
  if (find(profile.name) != nullptr) {
    throw Error(ErrorCode::InvalidArgument, "duplicate client name '" + profile.name + "'");
  }
  profiles_.push_back(std::move(profile));
}

const ClientProfile* ClientPool::find(const std::string& name) const {
  auto it = std::find_if(profiles_.begin(), profiles_.end(),
                         [&](const ClientProfile& p) { return p.name == name; });
  return it == profiles_.end() ? nullptr : &*it;
}

ClientPool ClientPool::without(const std::string& name) const {
  ClientPool out;
  for (const auto& p : profiles_) {
    if (p.name != name) out.profiles_.push_back(p);
  }
  return out;
}

std::vector<std::string> Selection::names() const {
  std::vector<std::string> out;
  out.reserve(selected.size());
  for (const auto& p : selected) out.push_back(p.name);
  return out;
}

void check_run_config(const RunConfig& cfg) {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::InvalidArgument, m); };
  if (cfg.k < 1) fail("run.k must be >= 1");
  if (cfg.max_rounds < 0) fail("run.max_rounds must be >= 0");
  if (cfg.max_rounds > kMaxRoundsCap) {
    fail("run.max_rounds must be <= " + std::to_string(kMaxRoundsCap));
  }
  if (cfg.max_retries < 0) fail("run.max_retries must be >= 0");
  if (cfg.temperature < 0) fail("run.temperature must be >= 0");
  if (cfg.per_call_timeout.count() <= 0) fail("run.per_call_timeout_ms must be > 0");
  if (cfg.max_tokens < 1) fail("run.max_tokens must be >= 1");
}

PromptSet PromptSet::defaults() {
  PromptSet p;
  p.summary_template =
      "Here are multiple responses from different perspectives: {combined_responses}.\n"
      "\n"
      "Please synthesize and refine these answers by:\n"
      "- Removing redundant or repetitive content.\n"
      "- Keeping only the most relevant, accurate, and useful information.\n"
      "- Improving clarity and conciseness while maintaining completeness.\n"
      "- Presenting the final response in a well-structured and easy-to-read format.\n"
      "\n"
      "Ensure that the final answer is cohesive, logically structured, and provides the "
      "best possible explanation.";
  p.final_template =
      "Here is the best answer synthesized from multiple perspectives:\n"
      "\n"
      "{summary_response}\n"
      "\n"
      "Now, refine your original response while incorporating the key takeaways.";
  p.server_system_prompt =
      "You are a helpful assistant that synthesizes multiple expert answers into one "
      "accurate, concise answer.";
  p.vlm_instruction = "Considering these candidate answers and the image, give your final answer.";
  return p;
}

void check_prompt_set(const PromptSet& prompts) {
  auto once = [](const std::string& tmpl, const char* placeholder, const char* field) {
    if (text::count_occurrences(tmpl, placeholder) != 1) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("prompts.") + field + " must contain " + placeholder +
                      " exactly once");
    }
  };
  once(prompts.summary_template, "{combined_responses}", "summary_template");
  once(prompts.final_template, "{summary_response}", "final_template");
  if (text::trim(prompts.server_system_prompt).empty()) {
    throw Error(ErrorCode::InvalidArgument, "prompts.server_system_prompt must be non-empty");
  }
}

std::optional<std::string> CollaborationTranscript::server_output() const {
  for (auto it = rounds.rbegin(); it != rounds.rend(); ++it) {
    if (it->guidance) return it->guidance->text;
  }
  return std::nullopt;
}

Usage sum_usage(const CollaborationTranscript& t) {
  Usage total = t.selection.usage;
  for (const auto& round : t.rounds) {
    for (const auto& r : round.responses) total += r.usage;
    if (round.guidance) total += round.guidance->usage;
  }
  return total;
}

}  // namespace colm
