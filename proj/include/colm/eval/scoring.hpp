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
#include <string_view>

#include "colm/backend/gateway.hpp"
#include "colm/eval/benchmark.hpp"

namespace colm::eval {

/// First choice letter A-E found scanning left to right. A letter counts when
/// it is written "(X)" or follows "answer is" (either case), or when it is an
/// uppercase letter standing alone, e.g. "X", "X." or "X)". Lowercase bare
/// letters are ignored so the article "a" never reads as choice A.
std::optional<char> extract_choice(std::string_view text);

// Casefolded, with punctuation and whitespace removed.
std::string normalize_exact(std::string_view s);

std::string default_grading_template();

/// Integer rating 1-10 from a grader reply: "[[n]]" first, then the first
/// standalone integer in range. Throws Error(JudgeUnparseable).
int parse_rating(std::string_view reply);

struct Grader {
  BackendBinding binding;
  std::string prompt_template = default_grading_template();
};

/// Choice and Exact items score 0 or 1. Judged items return the grader's
/// 1-10 rating and need `grader`; without one they throw Error(Config).
double score_item(const BenchmarkItem& item, const std::string& prediction,
                  const std::optional<Grader>& grader = std::nullopt, Gateway* gateway = nullptr,
                  const CallParams& params = {});

struct Scale {
  double offset = 0.0;
  double divisor = 100.0;

  friend bool operator==(const Scale&, const Scale&) = default;
};

/// Per-benchmark mapping of raw scores onto 0-100: (raw - offset) / divisor * 100.
struct ScaleMap {
  std::map<std::string, Scale> scales;

  static ScaleMap defaults();
  // Throws Error(InvalidArgument) for a non-positive divisor.
  void set(const std::string& benchmark, Scale scale);
  [[nodiscard]] double scaled(const std::string& benchmark, double raw) const;
};

ScaleMap scale_map_from_json(const Json& j, ScaleMap base = ScaleMap::defaults());

// Half-up rounding to two decimals, tolerant of binary representation error.
double round2(double x);

/// Mean over benchmarks of the scaled raw scores, rounded half-up to two
/// decimals. Throws Error(InvalidArgument) if a benchmark has no scale or the
/// map is empty.
double aggregate_score(const std::map<std::string, double>& per_benchmark, const ScaleMap& scale);

}  // namespace colm::eval
