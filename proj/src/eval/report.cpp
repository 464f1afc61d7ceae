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

#include "colm/eval/report.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "colm/store/store.hpp"

namespace colm::eval {

namespace fs = std::filesystem;

std::string format_score(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", round2(v) + 0.0);
  return buf;
}

namespace {

std::string cell(const std::map<std::string, double>& row, const std::string& key,
                 const std::map<std::string, double>* base) {
  auto it = row.find(key);
  if (it == row.end()) return "-";
  std::string out = format_score(it->second);
  if (base != nullptr) {
    if (auto b = base->find(key); b != base->end()) {
      const double now = round2(it->second);
      const double then = round2(b->second);
      if (now > then) out += " ↑";
      if (now < then) out += " ↓";
    }
  }
  return out;
}

std::string table_row(const std::string& name, const std::vector<std::string>& benches,
                      const std::map<std::string, double>& raw, double avg,
                      const std::map<std::string, double>* base_raw, const double* base_avg) {
  std::string line = "| " + name + " |";
  for (const auto& b : benches) line += " " + cell(raw, b, base_raw) + " |";
  std::map<std::string, double> avg_row{{"avg", avg}};
  std::map<std::string, double> base_avg_row;
  if (base_avg != nullptr) base_avg_row["avg"] = *base_avg;
  line += " " + cell(avg_row, "avg", base_avg != nullptr ? &base_avg_row : nullptr) + " |\n";
  return line;
}

}  // namespace

std::string render_report_table(const ReportInput& in) {
  std::set<std::string> bench_set;
  for (const auto& r : in.baselines) {
    for (const auto& [_, benches] : r.raw) {
      for (const auto& [b, __] : benches) bench_set.insert(b);
    }
  }
  if (in.colm) {
    for (const auto& [_, benches] : in.colm->raw) {
      for (const auto& [b, __] : benches) bench_set.insert(b);
    }
  }
  const std::vector<std::string> benches(bench_set.begin(), bench_set.end());

  std::string out = "| Model |";
  for (const auto& b : benches) out += " " + b + " |";
  out += " Avg. Score |\n|---|";
  for (std::size_t i = 0; i <= benches.size(); ++i) out += "---|";
  out += "\n";

  std::map<std::string, const BenchmarkRun*> baseline_of;
  for (const auto& r : in.baselines) {
    baseline_of[r.variant.client] = &r;
    const auto& raw = r.raw.count(r.variant.client) ? r.raw.at(r.variant.client)
                                                   : std::map<std::string, double>{};
    out += table_row(r.variant.client, benches, raw, r.score, nullptr, nullptr);
  }
  if (in.colm) {
    std::vector<std::string> systems;
    for (const auto& r : in.baselines) {
      if (in.colm->raw.contains(r.variant.client)) systems.push_back(r.variant.client);
    }
    for (const auto& [system, _] : in.colm->raw) {
      if (system != kServerSystem && std::find(systems.begin(), systems.end(), system) == systems.end()) {
        systems.push_back(system);
      }
    }
    for (const auto& system : systems) {
      const auto& raw = in.colm->raw.at(system);
      const BenchmarkRun* base = baseline_of.count(system) ? baseline_of[system] : nullptr;
      const std::map<std::string, double>* base_raw =
          base != nullptr && base->raw.count(system) ? &base->raw.at(system) : nullptr;
      const double* base_avg = base != nullptr ? &base->score : nullptr;
      out += table_row(system + "*", benches, raw, in.colm->aggregate.at(system), base_raw, base_avg);
    }
    if (auto it = in.colm->raw.find(kServerSystem); it != in.colm->raw.end()) {
      out += table_row("Server output", benches, it->second, in.colm->aggregate.at(kServerSystem),
                       nullptr, nullptr);
    }
  }
  return out;
}

std::string render_ablation_csv(const Ablation& a) {
  std::string out = a.x_label + ",score\n";
  for (const auto& [x, score] : a.series) out += x + "," + format_score(score) + "\n";
  return out;
}

fs::path emit_report(const fs::path& root, const ReportInput& in) {
  const auto dir = root / in.run_id;
  fs::create_directories(dir);

  std::string md = "# Benchmark report: " + in.run_id + "\n\n";
  if (!in.baselines.empty() || in.colm) {
    md += render_report_table(in);
    if (in.colm) md += "\nColm score (mean over client finals): " + format_score(in.colm->score) + "\n";
  }
  for (const auto& a : in.ablations) {
    md += "\n## Ablation: " + a.kind + "\n\n| " + a.x_label + " | score |\n|---|---|\n";
    for (const auto& [x, score] : a.series) md += "| " + x + " | " + format_score(score) + " |\n";
    store::write_file_atomic(dir / ("ablation_" + a.kind + ".csv"), render_ablation_csv(a));
  }
  store::write_file_atomic(dir / "report.md", md);

  std::string items;
  auto add_run = [&](const BenchmarkRun& run) {
    for (const auto& r : run.items) {
      Json j{{"run_id", run.run_id},
             {"item_id", r.item_id},
             {"benchmark", r.benchmark},
             {"predictions", r.predictions},
             {"scores", r.scores},
             {"colm_score", r.colm_score},
             {"usage", r.usage}};
      if (r.error) j["error"] = *r.error;
      items += j.dump() + "\n";
    }
  };
  for (const auto& r : in.baselines) add_run(r);
  if (in.colm) add_run(*in.colm);
  for (const auto& a : in.ablations) {
    for (const auto& r : a.runs) add_run(r);
  }
  store::write_file_atomic(dir / "items.jsonl", items);
  return dir;
}

}  // namespace colm::eval
