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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "colm/backend/gateway.hpp"
#include "colm/core/types.hpp"
#include "colm/router/router.hpp"

namespace colm::pipeline {

// Random "q-" prefixed hex identifier.
std::string make_query_id();

// Throws Error(InvalidArgument) for an empty or whitespace-only query text.
void check_query(const Query& q);

// Calls fn(i) for i in [0, n) concurrently and returns the results in index
// order. The Gateway's per-binding limit bounds actual upstream concurrency.
std::vector<ClientResponse> fan_out(std::size_t n,
                                    const std::function<ClientResponse(std::size_t)>& fn);

// Runs one client call and folds success, empty output, or failure into a
// ClientResponse.
ClientResponse call_client(Gateway& gateway, const ClientProfile& client,
                           const std::vector<Message>& messages, const CallParams& params,
                           Stage stage, int round);

/// One completion per selected client with [System = role prompt, prior
/// turns, User = query]. Failures are recorded per client; throws
/// Error(AllClientsFailed) only when no client succeeds.
std::vector<ClientResponse> stage1_generate(Gateway& gateway, const Query& q,
                                            const Selection& sel, const RunConfig& cfg);

/// Server synthesis over the successful responses. Throws Error(ServerFailed)
/// when the server call fails after retries.
GuidancePacket stage2_aggregate(Gateway& gateway, const Query& q,
                                const std::vector<ClientResponse>& responses,
                                const BackendBinding& server, const PromptSet& prompts, int round,
                                const RunConfig& cfg);

/// Each client with a successful response in `prior` revises its own answer
/// given the guidance: [System = role prompt, prior turns, User = query,
/// Assistant = own prior text, User = filled final template].
std::vector<ClientResponse> stage3_refine(Gateway& gateway, const Query& q, const Selection& sel,
                                          const GuidancePacket& guidance,
                                          const std::vector<ClientResponse>& prior,
                                          const PromptSet& prompts, const RunConfig& cfg);

// Invoked after each completed round record (0 for the initial round).
using ProgressFn = std::function<void(int completed_rounds)>;

/// Select, generate, then up to max_rounds aggregate-and-refine iterations.
/// With early_stop, iteration ends once every refined text equals the same
/// client's previous text (trailing whitespace ignored).
CollaborationTranscript run_collaboration(Gateway& gateway, Query q, const ClientPool& pool,
                                          const RunConfig& cfg,
                                          const std::optional<router::JudgeConfig>& judge,
                                          const BackendBinding& server, const PromptSet& prompts,
                                          const ProgressFn& progress = {});

// finals + totals from the round records already in `t`.
void finalize(CollaborationTranscript& t);

}  // namespace colm::pipeline
