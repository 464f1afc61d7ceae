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

#include "colm/vlm/vlm_pipeline.hpp"

#include "colm/core/error.hpp"
#include "colm/pipeline/prompts.hpp"

namespace colm::vlm {

namespace {

void check_vision(const Query& q, const std::vector<ClientProfile>& clients) {
  if (q.mode != QueryMode::VisionLanguage) {
    throw Error(ErrorCode::InvalidArgument, "query mode must be vision_language");
  }
  if (clients.empty()) throw Error(ErrorCode::InvalidArgument, "no vision clients");
  for (const auto& c : clients) {
    if (!c.backend.vision) {
      throw Error(ErrorCode::CapabilityMismatch, "client '" + c.name + "' lacks vision");
    }
  }
}

}  // namespace

std::vector<ClientResponse> vlm_distribute(Gateway& gateway, const Query& q,
                                           const std::vector<ClientProfile>& clients,
                                           const RunConfig& cfg) {
  check_vision(q, clients);
  const auto params = CallParams::from(cfg);
  return pipeline::fan_out(clients.size(), [&](std::size_t i) {
    const auto& client = clients[i];
    std::vector<Message> messages;
    if (!client.role_prompt.empty()) messages.push_back(Message::system(client.role_prompt));
    messages.push_back(Message::user(q.text, q.attachments));
    return pipeline::call_client(gateway, client, messages, params, Stage::Initial, 0);
  });
}

std::string build_vlm_feedback_prompt(const Query& q, const std::vector<ClientResponse>& responses,
                                      const std::string& instruction) {
  return q.text + "\n\n" + pipeline::build_combined_responses(responses) + "\n" + instruction;
}

std::string build_vlm_feedback_prompt(const Query& q,
                                      const std::vector<ClientResponse>& responses) {
  return build_vlm_feedback_prompt(q, responses, PromptSet::defaults().vlm_instruction);
}

std::vector<ClientResponse> vlm_refine(Gateway& gateway, const Query& q,
                                       const std::vector<ClientProfile>& clients,
                                       const std::vector<ClientResponse>& responses,
                                       const RunConfig& cfg, const std::string& instruction) {
  check_vision(q, clients);
  std::vector<const ClientProfile*> participants;
  for (const auto& c : clients) {
    for (const auto& r : responses) {
      if (r.client_name == c.name && r.ok()) {
        participants.push_back(&c);
        break;
      }
    }
  }
  if (participants.empty()) {
    throw Error(ErrorCode::InvalidArgument, "feedback needs at least one successful response");
  }
  const auto prompt = build_vlm_feedback_prompt(q, responses, instruction);
  const auto params = CallParams::from(cfg);
  return pipeline::fan_out(participants.size(), [&](std::size_t i) {
    return pipeline::call_client(gateway, *participants[i], {Message::user(prompt, q.attachments)},
                                 params, Stage::Refined, 1);
  });
}

std::map<std::string, std::string> vlm_reintegrate(Gateway& gateway, const Query& q,
                                                   const std::vector<ClientProfile>& clients,
                                                   const std::vector<ClientResponse>& responses,
                                                   const RunConfig& cfg,
                                                   const std::string& instruction) {
  std::map<std::string, std::string> out;
  for (const auto& r : vlm_refine(gateway, q, clients, responses, cfg, instruction)) {
    if (r.ok()) out[r.client_name] = r.text;
  }
  if (out.empty()) throw Error(ErrorCode::AllClientsFailed, "every client failed in VLM step 2");
  return out;
}

CollaborationTranscript run_vlm_collaboration(Gateway& gateway, Query q,
                                              const std::vector<ClientProfile>& clients,
                                              const RunConfig& cfg, const PromptSet& prompts,
                                              const pipeline::ProgressFn& progress) {
  pipeline::check_query(q);
  check_run_config(cfg);
  if (q.id.empty()) q.id = pipeline::make_query_id();
  check_vision(q, clients);

  CollaborationTranscript t;
  t.query = std::move(q);
  RunConfig snapshot = cfg;
  snapshot.max_rounds = std::max(snapshot.max_rounds, 1);
  t.config_snapshot = ConfigSnapshot{snapshot, prompts, std::nullopt};
  t.selection.k = static_cast<int>(clients.size());
  t.selection.selected = clients;
  t.selection.method = SelectionMethod::Broadcast;

  auto step1 = vlm_distribute(gateway, t.query, clients, cfg);
  const bool any_ok = std::any_of(step1.begin(), step1.end(), [](const auto& r) { return r.ok(); });
  if (!any_ok) throw Error(ErrorCode::AllClientsFailed, "every client failed in VLM step 1");
  t.rounds.push_back({step1, std::nullopt});
  if (progress) progress(0);

  t.rounds.push_back(
      {vlm_refine(gateway, t.query, clients, step1, cfg, prompts.vlm_instruction), std::nullopt});
  if (progress) progress(1);

  pipeline::finalize(t);
  return t;
}

std::vector<ClientProfile> vision_clients(const ClientPool& pool) {
  std::vector<ClientProfile> out;
  for (const auto& p : pool.profiles()) {
    if (p.backend.vision) out.push_back(p);
  }
  return out;
}

}  // namespace colm::vlm
