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

#include <optional>
#include <string>
#include <vector>

#include "colm/backend/gateway.hpp"
#include "colm/core/types.hpp"

namespace colm::router {

/// Selection instruction with the {question}, {top_k} and {profile_list}
/// placeholders.
std::string default_selection_template();

struct JudgeConfig {
  BackendBinding binding;
  std::string prompt_template = default_selection_template();
};

// Throws Error(InvalidArgument) unless each placeholder appears exactly once.
void check_judge_config(const JudgeConfig& judge);

// "1. name: role_prompt" per profile, pool order, newline separated.
std::string format_profile_list(const ClientPool& pool);

std::string build_selection_prompt(const Query& q, const ClientPool& pool, int k,
                                   const std::string& tmpl = default_selection_template());

/// Splits on commas and newlines, trims whitespace and surrounding
/// punctuation, matches names case-insensitively, drops unknown names and
/// repeats, and keeps at most k. Throws Error(EmptySelection) when nothing
/// matches.
Selection parse_selection_reply(const std::string& raw, const ClientPool& pool, int k);

struct Scored {
  const ClientProfile* profile;
  double score;
};

// Every profile with its cosine score against the query, best first; equal
// scores keep pool order.
std::vector<Scored> rank_profiles(const Query& q, const ClientPool& pool);

Selection fallback_select(const Query& q, const ClientPool& pool, int k);

/// Judge-based top-k selection with a lexical fallback. Never fails for a
/// non-empty pool: judge errors and empty replies fall back, and short judge
/// replies are backfilled from the fallback ranking.
Selection select_experts(const Query& q, const ClientPool& pool, int k,
                         const std::optional<JudgeConfig>& judge, Gateway& gateway,
                         const CallParams& params);

}  // namespace colm::router
