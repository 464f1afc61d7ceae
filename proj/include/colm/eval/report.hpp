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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "colm/eval/runner.hpp"

namespace colm::eval {

struct ReportInput {
  std::string run_id;
  std::vector<BenchmarkRun> baselines;
  std::optional<BenchmarkRun> colm;
  std::vector<Ablation> ablations;
};

// Markdown table: one row per baseline client, then a starred row per client
// of the Colm run with ↑/↓ against that client's baseline, then the server
// output row. Columns are benchmarks plus "Avg. Score".
std::string render_report_table(const ReportInput& in);

// "<x_label>,score" header then one line per point.
std::string render_ablation_csv(const Ablation& a);

/// Writes <root>/<run_id>/report.md, ablation_<kind>.csv per ablation and
/// items.jsonl covering every run. Output is a pure function of the input.
/// Returns the report directory.
std::filesystem::path emit_report(const std::filesystem::path& root, const ReportInput& in);

// Two-decimal fixed formatting used throughout reports.
std::string format_score(double v);

}  // namespace colm::eval
