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

#include "colm/eval/runner.hpp"

#include "colm/core/error.hpp"
#include "colm/pipeline/pipeline.hpp"
#include "colm/vlm/vlm_pipeline.hpp"

namespace colm::eval {

Variant Variant::baseline(std::string client) { return {Kind::Baseline, std::move(client)}; }
Variant Variant::colm() { return {Kind::Colm, {}}; }

Variant Variant::parse(const std::string& s) {
  if (s == "colm") return colm();
  static constexpr std::string_view kPrefix = "baseline:";
  if (s.rfind(kPrefix, 0) == 0 && s.size() > kPrefix.size()) return baseline(s.substr(kPrefix.size()));
  throw Error(ErrorCode::InvalidArgument, "variant must be 'colm' or 'baseline:<client>'");
}

std::string Variant::label() const { return kind == Kind::Colm ? "colm" : "baseline:" + client; }

bool BenchmarkRun::complete() const {
  return std::none_of(items.begin(), items.end(), [](const ItemResult& r) { return r.error.has_value(); });
}

Json BenchmarkRun::manifest() const {
  Json usage_json = Json::object();
  for (const auto& [k, u] : usage_by_binding) usage_json[k] = u;
  std::size_t failed = 0;
  for (const auto& r : items) failed += r.error ? 1 : 0;
  return Json{{"run_id", run_id},
              {"variant", variant.label()},
              {"mode", to_string(mode)},
              {"config", config},
              {"items", items.size()},
              {"failed_items", failed},
              {"raw", raw},
              {"aggregate", aggregate},
              {"score", score},
              {"usage", usage},
              {"usage_by_binding", usage_json}};
}

namespace {

std::map<std::string, Usage> usage_delta(const std::map<std::string, Usage>& before,
                                         const std::map<std::string, Usage>& after) {
  std::map<std::string, Usage> out;
  for (const auto& [k, u] : after) {
    Usage d = u;
    if (auto it = before.find(k); it != before.end()) {
      d.prompt_tokens -= it->second.prompt_tokens;
      d.completion_tokens -= it->second.completion_tokens;
      d.call_count -= it->second.call_count;
    }
    if (d.call_count != 0 || d.prompt_tokens != 0 || d.completion_tokens != 0) out[k] = d;
  }
  return out;
}

// Raw points of one item score: percentages for 0/1 scores, ratings as is.
double points(const BenchmarkItem& item, double score) {
  return item.answer_type == AnswerType::Judged ? score : score * 100.0;
}

ItemResult run_item(Harness& h, const BenchmarkItem& item, QueryMode mode, const ClientPool& pool,
                    const RunConfig& cfg, const Variant& variant) {
  ItemResult res;
  res.item_id = item.id;
  res.benchmark = item.benchmark;
  const auto params = CallParams::from(cfg);
  auto q = item_query(item, mode);
  try {
    if (variant.kind == Variant::Kind::Baseline) {
      const auto* client = pool.find(variant.client);
      if (client == nullptr) {
        throw Error(ErrorCode::InvalidArgument, "unknown baseline client '" + variant.client + "'");
      }
      std::vector<Message> messages;
      if (!client->role_prompt.empty()) messages.push_back(Message::system(client->role_prompt));
      messages.push_back(Message::user(q.text, q.attachments));
      auto c = h.gateway.complete(client->backend, messages, params);
      res.usage = c.usage;
      res.predictions[client->name] = c.text;
    } else {
      const auto t = mode == QueryMode::VisionLanguage
                         ? vlm::run_vlm_collaboration(h.gateway, q, vlm::vision_clients(pool), cfg,
                                                      h.prompts)
                         : pipeline::run_collaboration(h.gateway, q, pool, cfg, h.router_judge,
                                                       h.server, h.prompts);
      res.usage = t.totals;
      res.predictions = t.finals;
      if (auto server = t.server_output()) res.predictions[kServerSystem] = *server;
    }
    double sum = 0.0;
    int clients = 0;
    for (const auto& [system, prediction] : res.predictions) {
      const double s = score_item(item, prediction, h.grader, &h.gateway, params);
      res.scores[system] = s;
      if (system != kServerSystem) {
        sum += s;
        ++clients;
      }
    }
    res.colm_score = clients > 0 ? sum / clients : 0.0;
  } catch (const Error& e) {
    res.error = std::string(to_string(e.code())) + ": " + e.what();
    res.scores.clear();
    res.colm_score = 0.0;
  }
  return res;
}

}  // namespace

BenchmarkRun run_benchmark(Harness& h, const std::vector<BenchmarkItem>& items, QueryMode mode,
                           const ClientPool& pool, const RunConfig& cfg, const Variant& variant,
                           const std::string& run_id) {
  check_run_config(cfg);
  BenchmarkRun run;
  run.run_id = run_id;
  run.variant = variant;
  run.mode = mode;
  run.config = cfg;

  const auto before = h.gateway.usage();
  // system -> benchmark -> (sum of points, item count)
  std::map<std::string, std::map<std::string, std::pair<double, int>>> sums;
  std::map<std::string, std::pair<double, int>> colm_sums;
  std::map<std::string, int> per_benchmark_items;
  for (const auto& item : items) {
    auto res = run_item(h, item, mode, pool, cfg, variant);
    ++per_benchmark_items[item.benchmark];
    for (const auto& [system, s] : res.scores) {
      auto& acc = sums[system][item.benchmark];
      acc.first += points(item, s);
      acc.second += 1;
    }
    auto& colm_acc = colm_sums[item.benchmark];
    colm_acc.first += points(item, res.colm_score);
    colm_acc.second += 1;
    run.usage += res.usage;
    run.items.push_back(std::move(res));
  }
  run.usage_by_binding = usage_delta(before, h.gateway.usage());

  // Systems without output on an item score zero there for Baseline runs; a
  // Colm client column averages the items where that client took part.
  if (variant.kind == Variant::Kind::Baseline) {
    for (const auto& [bench, n] : per_benchmark_items) {
      const auto& acc = sums[variant.client][bench];
      run.raw[variant.client][bench] = n > 0 ? acc.first / n : 0.0;
    }
  } else {
    for (const auto& [system, benches] : sums) {
      for (const auto& [bench, acc] : benches) run.raw[system][bench] = acc.first / acc.second;
    }
  }
  for (const auto& [system, benches] : run.raw) {
    run.aggregate[system] = aggregate_score(benches, h.scale);
  }
  if (variant.kind == Variant::Kind::Baseline) {
    run.score = run.aggregate.count(variant.client) ? run.aggregate[variant.client] : 0.0;
  } else if (!colm_sums.empty()) {
    std::map<std::string, double> colm_raw;
    for (const auto& [bench, acc] : colm_sums) colm_raw[bench] = acc.first / acc.second;
    run.score = aggregate_score(colm_raw, h.scale);
  }
  if (h.store != nullptr) h.store->write_manifest(run_id, run.manifest());
  return run;
}

Ablation ablate_leave_one_out(Harness& h, const std::vector<BenchmarkItem>& items, QueryMode mode,
                              const ClientPool& pool, const RunConfig& cfg,
                              const std::string& run_prefix) {
  Ablation out{"loo", "removed_client", {}, {}};
  for (const auto& p : pool.profiles()) {
    const auto reduced = pool.without(p.name);
    if (reduced.empty()) continue;
    auto run = run_benchmark(h, items, mode, reduced, cfg, Variant::colm(),
                             run_prefix + "-loo-" + p.name);
    out.series.emplace_back(p.name, run.score);
    out.runs.push_back(std::move(run));
  }
  return out;
}

Ablation ablate_user_scale(Harness& h, const std::vector<BenchmarkItem>& items, QueryMode mode,
                           const ClientPool& pool, const RunConfig& cfg,
                           const std::vector<int>& ks, const std::string& run_prefix) {
  Ablation out{"scale", "k", {}, {}};
  for (int k : ks) {
    RunConfig c = cfg;
    c.k = k;
    auto run = run_benchmark(h, items, mode, pool, c, Variant::colm(),
                             run_prefix + "-scale-" + std::to_string(k));
    out.series.emplace_back(std::to_string(k), run.score);
    out.runs.push_back(std::move(run));
  }
  return out;
}

Ablation ablate_rounds(Harness& h, const std::vector<BenchmarkItem>& items, QueryMode mode,
                       const ClientPool& pool, const RunConfig& cfg,
                       const std::vector<int>& rounds, const std::string& run_prefix) {
  Ablation out{"rounds", "rounds", {}, {}};
  for (int r : rounds) {
    RunConfig c = cfg;
    c.max_rounds = r;
    c.early_stop = false;
    auto run = run_benchmark(h, items, mode, pool, c, Variant::colm(),
                             run_prefix + "-rounds-" + std::to_string(r));
    out.series.emplace_back(std::to_string(r), run.score);
    out.runs.push_back(std::move(run));
  }
  return out;
}

}  // namespace colm::eval
