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

#include "colm/core/validate.hpp"

#include <set>

#include "colm/core/codec.hpp"
#include "colm/core/text.hpp"

namespace colm {

namespace {

std::string round_path(std::size_t r) { return "rounds[" + std::to_string(r) + "]"; }

std::string response_path(std::size_t r, std::size_t i) {
  return round_path(r) + ".responses[" + std::to_string(i) + "]";
}

}  // namespace

std::vector<std::string> validate_transcript(const CollaborationTranscript& t) {
  std::vector<std::string> out;
  auto violation = [&](const char* invariant, const std::string& path, const std::string& detail) {
    out.push_back(std::string(invariant) + ": " + path + ": " + detail);
  };

  if (t.schema != kSchemaVersion) {
    violation("schema version", "schema", "expected " + std::string(kSchemaVersion));
  }
  if (text::trim(t.query.text).empty()) violation("query text", "query.text", "empty");

  std::set<std::string> selected;
  for (std::size_t i = 0; i < t.selection.selected.size(); ++i) {
    if (!selected.insert(t.selection.selected[i].name).second) {
      violation("selection", "selection.selected[" + std::to_string(i) + "]", "duplicate name");
    }
  }
  if (selected.empty()) violation("selection", "selection.selected", "empty");
  if (t.selection.k < 1 || static_cast<int>(t.selection.selected.size()) > t.selection.k) {
    violation("selection", "selection.k", "size exceeds k or k < 1");
  }

  if (t.rounds.empty()) {
    violation("round monotonicity", "rounds", "no initial round");
  }
  const int rounds_done = static_cast<int>(t.rounds.size()) - 1;
  if (rounds_done > t.config_snapshot.run.max_rounds || t.config_snapshot.run.max_rounds > kMaxRoundsCap) {
    violation("round cap", "rounds", "more rounds than max_rounds or cap exceeded");
  }

  const bool language = t.query.mode == QueryMode::Language;
  // Clients expected in the next round: all selected for round 0, then every
  // client that succeeded in the previous round.
  std::set<std::string> expected = selected;
  std::vector<ResponseRef> previous_ok;
  std::map<std::string, std::string> latest_ok;

  for (std::size_t r = 0; r < t.rounds.size(); ++r) {
    const auto& record = t.rounds[r];
    std::set<std::string> seen;
    std::set<std::string> next;
    std::vector<ResponseRef> ok_refs;
    for (std::size_t i = 0; i < record.responses.size(); ++i) {
      const auto& resp = record.responses[i];
      const auto path = response_path(r, i);
      if (resp.round != static_cast<int>(r)) {
        violation("round monotonicity", path + ".round", "does not match record index");
      }
      const Stage want = r == 0 ? Stage::Initial : Stage::Refined;
      if (resp.stage != want) violation("round monotonicity", path + ".stage", "wrong stage");
      if (resp.text.empty() == !resp.error.has_value()) {
        violation("response exclusivity", path, "exactly one of text or error must be present");
      }
      if (!selected.contains(resp.client_name)) {
        violation("round membership", path + ".client_name", "not in selection");
      }
      if (!seen.insert(resp.client_name).second) {
        violation("round membership", path + ".client_name", "duplicate in round");
      }
      if (resp.ok() && !resp.text.empty()) {
        next.insert(resp.client_name);
        ok_refs.push_back({resp.client_name, resp.stage, resp.round});
        latest_ok[resp.client_name] = resp.text;
      }
    }
    if (seen != expected) {
      violation("per-round completeness", round_path(r) + ".responses",
                "client set differs from the clients active after the previous round");
    }

    if (r == 0 || !language) {
      if (record.guidance) violation("guidance placement", round_path(r) + ".guidance", "unexpected");
    } else if (!record.guidance) {
      violation("guidance placement", round_path(r) + ".guidance", "missing");
    } else {
      const auto& g = *record.guidance;
      if (g.round != static_cast<int>(r)) {
        violation("guidance placement", round_path(r) + ".guidance.round", "does not match record index");
      }
      if (g.text.empty()) violation("guidance placement", round_path(r) + ".guidance.text", "empty");
      if (g.source_responses != previous_ok) {
        violation("guidance lineage", round_path(r) + ".guidance.source_responses",
                  "does not list the previous round's successful responses");
      }
    }
    expected = std::move(next);
    previous_ok = std::move(ok_refs);
  }

  if (t.finals != latest_ok) {
    violation("finals completeness", "finals",
              "must hold the latest successful text of every client that succeeded");
  }
  if (t.totals != sum_usage(t)) {
    violation("usage additivity", "totals", "differs from the sum of all usage records");
  }
  return out;
}

}  // namespace colm
