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
#include <optional>
#include <string>
#include <vector>

#include "colm/backend/gateway.hpp"
#include "colm/eval/benchmark.hpp"
#include "colm/eval/scoring.hpp"
#include "colm/router/router.hpp"
#include "colm/store/store.hpp"

namespace colm::eval {

inline constexpr const char* kServerSystem = "server";

struct Variant {
  enum class Kind { Baseline, Colm };

  Kind kind = Kind::Colm;
  std::string client;  // Baseline only

  static Variant baseline(std::string client);
  static Variant colm();
  // "baseline:<client>" or "colm"; throws Error(InvalidArgument) otherwise.
  static Variant parse(const std::string& s);
  [[nodiscard]] std::string label() const;

  friend bool operator==(const Variant&, const Variant&) = default;
};

/// Shared collaborators for every run of one harness invocation.
struct Harness {
  Gateway& gateway;
  BackendBinding server;
  PromptSet prompts = PromptSet::defaults();
  std::optional<router::JudgeConfig> router_judge;
  std::optional<Grader> grader;
  ScaleMap scale = ScaleMap::defaults();
  store::Store* store = nullptr;  // receives run manifests when set
};

struct ItemResult {
  std::string item_id;
  std::string benchmark;
  // Keyed by system: client names and, for language Colm runs with at least
  // one round, "server".
  std::map<std::string, std::string> predictions;
  std::map<std::string, double> scores;
  // Mean over this item's client finals; the item's collaborative score.
  double colm_score = 0.0;
  Usage usage;
  std::optional<std::string> error;
};

struct BenchmarkRun {
  std::string run_id;
  Variant variant;
  QueryMode mode = QueryMode::Language;
  RunConfig config;
  std::vector<ItemResult> items;
  // system -> benchmark -> raw score. Choice/Exact raw scores are
  // percentages; Judged raw scores are mean ratings.
  std::map<std::string, std::map<std::string, double>> raw;
  // system -> aggregate score on 0-100.
  std::map<std::string, double> aggregate;
  // Baseline: the client's aggregate. Colm: aggregate of per-item colm_score.
  double score = 0.0;
  Usage usage;
  std::map<std::string, Usage> usage_by_binding;

  [[nodiscard]] bool complete() const;
  [[nodiscard]] Json manifest() const;
};

/// Baseline asks one client once per item ([System = role prompt, User =
/// question]). Colm runs the language pipeline, or the VLM pipeline over the
/// pool's vision clients, and scores every client's final answer plus the
/// last guidance. Items run sequentially.
BenchmarkRun run_benchmark(Harness& h, const std::vector<BenchmarkItem>& items, QueryMode mode,
                           const ClientPool& pool, const RunConfig& cfg, const Variant& variant,
                           const std::string& run_id);

struct Ablation {
  std::string kind;  // "loo", "scale", "rounds"
  std::string x_label;
  std::vector<std::pair<std::string, double>> series;
  std::vector<BenchmarkRun> runs;
};

// One Colm run per pool member with that member removed; x = removed client.
Ablation ablate_leave_one_out(Harness& h, const std::vector<BenchmarkItem>& items, QueryMode mode,
                              const ClientPool& pool, const RunConfig& cfg,
                              const std::string& run_prefix);

// One Colm run per k.
Ablation ablate_user_scale(Harness& h, const std::vector<BenchmarkItem>& items, QueryMode mode,
                           const ClientPool& pool, const RunConfig& cfg,
                           const std::vector<int>& ks, const std::string& run_prefix);

// One Colm run per round count, early stop disabled.
Ablation ablate_rounds(Harness& h, const std::vector<BenchmarkItem>& items, QueryMode mode,
                       const ClientPool& pool, const RunConfig& cfg,
                       const std::vector<int>& rounds, const std::string& run_prefix);

}  // namespace colm::eval
