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

#include "colm/pipeline/pipeline.hpp"

#include <algorithm>
#include <future>
#include <random>

#include "colm/core/error.hpp"
#include "colm/core/text.hpp"
#include "colm/pipeline/prompts.hpp"

namespace colm::pipeline {

std::string make_query_id() {
  static thread_local std::mt19937_64 rng{std::random_device{}()};
  static constexpr char kHex[] = "0123456789abcdef";
  std::string id = "q-";
  auto v = rng();
  for (int i = 0; i < 16; ++i, v >>= 4) id.push_back(kHex[v & 0xF]);
  return id;
}

void check_query(const Query& q) {
  if (text::trim(q.text).empty()) {
    throw Error(ErrorCode::InvalidArgument, "query text must be non-empty");
  }
}

std::vector<ClientResponse> fan_out(std::size_t n,
                                    const std::function<ClientResponse(std::size_t)>& fn) {
  std::vector<std::future<ClientResponse>> futures;
  futures.reserve(n);
  for (std::size_t i = 0; i < n; ++i) futures.push_back(std::async(std::launch::async, fn, i));
  std::vector<ClientResponse> out;
  out.reserve(n);
  for (auto& f : futures) out.push_back(f.get());
  return out;
}

ClientResponse call_client(Gateway& gateway, const ClientProfile& client,
                           const std::vector<Message>& messages, const CallParams& params,
                           Stage stage, int round) {
  ClientResponse r;
  r.client_name = client.name;
  r.stage = stage;
  r.round = round;
  try {
    auto c = gateway.complete(client.backend, messages, params);
    r.usage = c.usage;
    if (c.text.empty()) {
      r.error = ErrorRecord{"empty_completion", "backend returned no text", 0};
    } else {
      r.text = std::move(c.text);
    }
  } catch (const Error& e) {
    r.usage = Usage{0, 0, e.attempts()};
    r.error = ErrorRecord{std::string(to_string(e.code())), e.what(), e.status()};
  }
  return r;
}

namespace {

std::vector<Message> client_prefix(const ClientProfile& client, const Query& q) {
  std::vector<Message> m;
  if (!client.role_prompt.empty()) m.push_back(Message::system(client.role_prompt));
  for (const auto& turn : q.history) {
    m.push_back(Message::user(turn.user));
    m.push_back(Message::assistant(turn.assistant));
  }
  m.push_back(Message::user(q.text));
  return m;
}

std::vector<ClientResponse> successful(const std::vector<ClientResponse>& responses) {
  std::vector<ClientResponse> out;
  for (const auto& r : responses) {
    if (r.ok()) out.push_back(r);
  }
  return out;
}

}  // namespace

std::vector<ClientResponse> stage1_generate(Gateway& gateway, const Query& q,
                                            const Selection& sel, const RunConfig& cfg) {
  if (sel.selected.empty()) throw Error(ErrorCode::InvalidArgument, "selection is empty");
  const auto params = CallParams::from(cfg);
  auto out = fan_out(sel.selected.size(), [&](std::size_t i) {
    const auto& client = sel.selected[i];
    return call_client(gateway, client, client_prefix(client, q), params, Stage::Initial, 0);
  });
  if (successful(out).empty()) {
    throw Error(ErrorCode::AllClientsFailed, "every selected client failed in stage 1");
  }
  return out;
}

GuidancePacket stage2_aggregate(Gateway& gateway, const Query& q,
                                const std::vector<ClientResponse>& responses,
                                const BackendBinding& server, const PromptSet& prompts, int round,
                                const RunConfig& cfg) {
  const auto inputs = successful(responses);
  if (inputs.empty()) {
    throw Error(ErrorCode::InvalidArgument, "aggregation needs at least one successful response");
  }
  const std::vector<Message> messages{Message::system(prompts.server_system_prompt),
                                      Message::user(build_aggregation_prompt(q, inputs, prompts))};
  GuidancePacket g;
  g.round = round;
  try {
    auto c = gateway.complete(server, messages, CallParams::from(cfg));
    if (c.text.empty()) throw Error(ErrorCode::Remote, "server returned no text");
    g.text = std::move(c.text);
    g.usage = c.usage;
  } catch (const Error& e) {
    throw Error(ErrorCode::ServerFailed, std::string("server aggregation failed: ") + e.what())
        .with_attempts(e.attempts());
  }
  for (const auto& r : inputs) g.source_responses.push_back({r.client_name, r.stage, r.round});
  return g;
}

std::vector<ClientResponse> stage3_refine(Gateway& gateway, const Query& q, const Selection& sel,
                                          const GuidancePacket& guidance,
                                          const std::vector<ClientResponse>& prior,
                                          const PromptSet& prompts, const RunConfig& cfg) {
  if (guidance.text.empty()) throw Error(ErrorCode::InvalidArgument, "guidance is empty");
  struct Job {
    const ClientProfile* client;
    const ClientResponse* prior;
  };
  std::vector<Job> jobs;
  for (const auto& client : sel.selected) {
    for (const auto& p : prior) {
      if (p.client_name == client.name && p.ok()) {
        jobs.push_back({&client, &p});
        break;
      }
    }
  }
  const auto params = CallParams::from(cfg);
  const auto refine_prompt = build_refinement_prompt(guidance.text, prompts);
  return fan_out(jobs.size(), [&](std::size_t i) {
    auto messages = client_prefix(*jobs[i].client, q);
    messages.push_back(Message::assistant(jobs[i].prior->text));
    messages.push_back(Message::user(refine_prompt));
    return call_client(gateway, *jobs[i].client, messages, params, Stage::Refined, guidance.round);
  });
}

void finalize(CollaborationTranscript& t) {
  t.finals.clear();
  for (const auto& round : t.rounds) {
    for (const auto& r : round.responses) {
      if (r.ok()) t.finals[r.client_name] = r.text;
    }
  }
  t.totals = sum_usage(t);
}

CollaborationTranscript run_collaboration(Gateway& gateway, Query q, const ClientPool& pool,
                                          const RunConfig& cfg,
                                          const std::optional<router::JudgeConfig>& judge,
                                          const BackendBinding& server, const PromptSet& prompts,
                                          const ProgressFn& progress) {
  check_query(q);
  check_run_config(cfg);
  check_prompt_set(prompts);
  if (pool.empty()) throw Error(ErrorCode::InvalidArgument, "client pool is empty");
  if (q.id.empty()) q.id = make_query_id();
  q.mode = QueryMode::Language;

  CollaborationTranscript t;
  t.query = std::move(q);
  t.config_snapshot = ConfigSnapshot{cfg, prompts, server};
  t.selection =
      router::select_experts(t.query, pool, cfg.k, judge, gateway, CallParams::from(cfg));

  t.rounds.push_back({stage1_generate(gateway, t.query, t.selection, cfg), std::nullopt});
  if (progress) progress(0);

  for (int round = 1; round <= cfg.max_rounds; ++round) {
    const auto& prev = t.rounds.back().responses;
    if (successful(prev).empty()) break;
    auto guidance = stage2_aggregate(gateway, t.query, prev, server, prompts, round, cfg);
    auto refined = stage3_refine(gateway, t.query, t.selection, guidance, prev, prompts, cfg);

    bool stable = !refined.empty();
    for (const auto& r : refined) {
      const auto it = std::find_if(prev.begin(), prev.end(), [&](const ClientResponse& p) {
        return p.client_name == r.client_name;
      });
      if (!r.ok() || it == prev.end() || text::trim_right(r.text) != text::trim_right(it->text)) {
        stable = false;
        break;
      }
    }
    t.rounds.push_back({std::move(refined), std::move(guidance)});
    if (progress) progress(round);
    if (cfg.early_stop && stable) break;
  }

  finalize(t);
  return t;
}

}  // namespace colm::pipeline
