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

#include "colm/store/replay.hpp"

#include <atomic>
#include <memory>
#include <set>

#include "colm/backend/gateway.hpp"
#include "colm/core/error.hpp"
#include "colm/pipeline/pipeline.hpp"
#include "colm/pipeline/prompts.hpp"
#include "colm/vlm/vlm_pipeline.hpp"

namespace colm::store {

namespace {

MockReply recorded_reply(const ClientResponse& r) {
  if (!r.error) return MockReply::literal(r.text);
  if (r.error->kind == "empty_completion") return MockReply::literal("");
  if (r.error->kind == "timeout") return MockReply::fail("timeout");
  return MockReply::fail("remote", r.error->status);
}

MockRule exact_rule(std::optional<std::string> last_user, std::optional<std::string> last_assistant,
                    MockReply reply) {
  MockRule rule;
  rule.mode = MockRule::Mode::Equals;
  rule.last_user = std::move(last_user);
  rule.last_assistant = std::move(last_assistant);
  rule.reply = std::move(reply);
  return rule;
}

std::vector<ClientResponse> successful(const std::vector<ClientResponse>& responses) {
  std::vector<ClientResponse> out;
  for (const auto& r : responses) {
    if (r.ok()) out.push_back(r);
  }
  return out;
}

const ClientResponse* find_response(const RoundRecord& round, const std::string& client) {
  for (const auto& r : round.responses) {
    if (r.client_name == client) return &r;
  }
  return nullptr;
}

std::string replay_model(const std::string& name) { return "replay:" + name; }

// Exact rules first; a request that matches none gets the reply recorded at
// the same call position for this binding, so a divergence upstream does not
// stall callers whose own inputs are unchanged.
MockScript positional(MockScript exact, std::vector<MockReply> by_position) {
  auto calls = std::make_shared<std::atomic<std::size_t>>(0);
  auto inner = std::make_shared<const MockScript>(std::move(exact));
  auto recorded = std::make_shared<const std::vector<MockReply>>(std::move(by_position));
  MockScript s;
  s.fallback = MockReply::function([calls, inner, recorded](const std::vector<Message>& m) {
    const auto i = (*calls)++;
    if (&inner->match(m) != &inner->fallback) return run_mock(*inner, m).text;
    if (i >= recorded->size()) throw Error::remote(404, "no recorded reply").with_attempts(1);
    MockScript one;
    one.fallback = (*recorded)[i];
    return run_mock(one, m).text;
  });
  return s;
}

std::vector<MockReply> client_positions(const CollaborationTranscript& t, const std::string& client) {
  std::vector<MockReply> out;
  for (const auto& round : t.rounds) {
    if (const auto* r = find_response(round, client)) out.push_back(recorded_reply(*r));
  }
  return out;
}

std::vector<MockReply> server_positions(const CollaborationTranscript& t) {
  std::vector<MockReply> out;
  for (const auto& round : t.rounds) {
    if (round.guidance) out.push_back(MockReply::literal(round.guidance->text));
  }
  return out;
}

}  // namespace

std::map<std::string, MockScript> scripts_from_transcript(const CollaborationTranscript& t) {
  const auto& prompts = t.config_snapshot.prompts;
  const bool language = t.query.mode == QueryMode::Language;
  std::map<std::string, MockScript> scripts;

  for (const auto& client : t.selection.selected) {
    MockScript script;
    script.fallback = MockReply::fail("remote", 404);
    // Later rounds first; each refinement is keyed by its exact prompt and by
    // the client's own previous answer.
    for (std::size_t r = t.rounds.size(); r-- > 1;) {
      const auto* resp = find_response(t.rounds[r], client.name);
      if (resp == nullptr) continue;
      if (language) {
        const auto* prior = find_response(t.rounds[r - 1], client.name);
        if (prior == nullptr || !t.rounds[r].guidance) continue;
        script.rules.push_back(
            exact_rule(pipeline::build_refinement_prompt(t.rounds[r].guidance->text, prompts),
                       prior->text, recorded_reply(*resp)));
      } else {
        script.rules.push_back(exact_rule(
            vlm::build_vlm_feedback_prompt(t.query, t.rounds[0].responses, prompts.vlm_instruction),
            std::nullopt, recorded_reply(*resp)));
      }
    }
    if (!t.rounds.empty()) {
      if (const auto* initial = find_response(t.rounds[0], client.name)) {
        script.rules.push_back(exact_rule(t.query.text, std::nullopt, recorded_reply(*initial)));
      }
    }
    scripts.emplace(client.name, std::move(script));
  }

  MockScript server;
  server.fallback = MockReply::fail("remote", 404);
  for (std::size_t r = t.rounds.size(); r-- > 1;) {
    if (!t.rounds[r].guidance) continue;
    server.rules.push_back(exact_rule(
        pipeline::build_aggregation_prompt(t.query, successful(t.rounds[r - 1].responses), prompts),
        std::nullopt, MockReply::literal(t.rounds[r].guidance->text)));
  }
  scripts.emplace(kServerScript, std::move(server));
  return scripts;
}

CollaborationTranscript replay(const CollaborationTranscript& stored,
                               const std::map<std::string, MockScript>& overrides) {
  auto scripts = scripts_from_transcript(stored);
  for (auto& [name, script] : scripts) {
    script = positional(std::move(script), name == kServerScript ? server_positions(stored)
                                                                   : client_positions(stored, name));
  }
  for (const auto& [name, script] : overrides) {
    if (!scripts.contains(name)) {
      throw Error(ErrorCode::InvalidArgument, "override names unknown client '" + name + "'");
    }
    scripts[name] = script;
  }

  Gateway gateway;
  std::vector<ClientProfile> clients;
  for (auto profile : stored.selection.selected) {
    const bool vision = profile.backend.vision;
    profile.backend = BackendBinding{BackendKind::Mock, "", replay_model(profile.name), vision, ""};
    gateway.register_mock(profile.backend.model_id, scripts.at(profile.name));
    clients.push_back(std::move(profile));
  }
  const BackendBinding server{BackendKind::Mock, "", replay_model(kServerScript), false, ""};
  gateway.register_mock(server.model_id, scripts.at(kServerScript));

  const auto& snap = stored.config_snapshot;
  if (stored.query.mode == QueryMode::VisionLanguage) {
    return vlm::run_vlm_collaboration(gateway, stored.query, clients, snap.run, snap.prompts);
  }
  RunConfig cfg = snap.run;
  // The recorded selection is replayed as the whole pool, so no judge runs.
  cfg.k = std::max<int>(cfg.k, static_cast<int>(clients.size()));
  return pipeline::run_collaboration(gateway, stored.query, ClientPool(clients), cfg, std::nullopt,
                                     server, snap.prompts);
}

CollaborationTranscript replay(const Store& store, const std::string& id,
                               const std::map<std::string, MockScript>& overrides) {
  return replay(store.load_transcript(id), overrides);
}

std::vector<std::string> text_differences(const CollaborationTranscript& a,
                                          const CollaborationTranscript& b) {
  std::vector<std::string> out;
  std::set<std::string> names;
  for (const auto& [k, _] : a.finals) names.insert(k);
  for (const auto& [k, _] : b.finals) names.insert(k);
  for (const auto& n : names) {
    auto ia = a.finals.find(n);
    auto ib = b.finals.find(n);
    if (ia == a.finals.end() || ib == b.finals.end() || ia->second != ib->second) {
      out.push_back("finals." + n);
    }
  }
  const auto rounds = std::max(a.rounds.size(), b.rounds.size());
  for (std::size_t r = 0; r < rounds; ++r) {
    const auto prefix = "rounds[" + std::to_string(r) + "]";
    if (r >= a.rounds.size() || r >= b.rounds.size()) {
      out.push_back(prefix);
      continue;
    }
    const auto& ra = a.rounds[r];
    const auto& rb = b.rounds[r];
    std::set<std::string> clients;
    for (const auto& x : ra.responses) clients.insert(x.client_name);
    for (const auto& x : rb.responses) clients.insert(x.client_name);
    for (const auto& c : clients) {
      const auto* xa = find_response(ra, c);
      const auto* xb = find_response(rb, c);
      if (xa == nullptr || xb == nullptr || xa->text != xb->text || xa->ok() != xb->ok()) {
        out.push_back(prefix + "." + c);
      }
    }
    const auto ga = ra.guidance ? ra.guidance->text : std::string{};
    const auto gb = rb.guidance ? rb.guidance->text : std::string{};
    if (ga != gb || ra.guidance.has_value() != rb.guidance.has_value()) {
      out.push_back(prefix + ".guidance");
    }
  }
  return out;
}

}  // namespace colm::store
