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

#include <map>
#include <string>
#include <vector>

#include "colm/backend/gateway.hpp"
#include "colm/core/types.hpp"
#include "colm/pipeline/pipeline.hpp"

// Two-step vision-language collaboration. No server model takes part: every
// client answers the multimodal query, then every client that answered sees
// all answers and the image again and gives its own final answer.

namespace colm::vlm {

/// Step 1: [System = role prompt (omitted when empty), User = text + images]
/// per client. Throws Error(CapabilityMismatch) before any call when a
/// binding lacks vision, Error(InvalidArgument) for a non-VLM query.
std::vector<ClientResponse> vlm_distribute(Gateway& gateway, const Query& q,
                                           const std::vector<ClientProfile>& clients,
                                           const RunConfig& cfg);

/// Question text, the combined response blocks, then the closing instruction.
std::string build_vlm_feedback_prompt(const Query& q, const std::vector<ClientResponse>& responses,
                                      const std::string& instruction);
std::string build_vlm_feedback_prompt(const Query& q, const std::vector<ClientResponse>& responses);

/// Step 2 as ClientResponses (stage Refined, round 1), one per client that
/// succeeded in step 1, each sent [User = feedback prompt + images].
std::vector<ClientResponse> vlm_refine(Gateway& gateway, const Query& q,
                                       const std::vector<ClientProfile>& clients,
                                       const std::vector<ClientResponse>& responses,
                                       const RunConfig& cfg, const std::string& instruction);

/// Step 2 keyed by client name. Throws Error(AllClientsFailed) if no client
/// produced a refined answer.
std::map<std::string, std::string> vlm_reintegrate(Gateway& gateway, const Query& q,
                                                   const std::vector<ClientProfile>& clients,
                                                   const std::vector<ClientResponse>& responses,
                                                   const RunConfig& cfg,
                                                   const std::string& instruction);

/// Both steps recorded as a transcript: rounds[0] holds step 1, rounds[1]
/// step 2, selection method Broadcast.
CollaborationTranscript run_vlm_collaboration(Gateway& gateway, Query q,
                                              const std::vector<ClientProfile>& clients,
                                              const RunConfig& cfg, const PromptSet& prompts,
                                              const pipeline::ProgressFn& progress = {});

// Pool members whose binding declares vision, in pool order.
std::vector<ClientProfile> vision_clients(const ClientPool& pool);

}  // namespace colm::vlm
