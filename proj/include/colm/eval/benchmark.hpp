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

#include "colm/core/codec.hpp"
#include "colm/core/types.hpp"

namespace colm::eval {

enum class AnswerType { Choice, Exact, Judged };

struct ChoiceOption {
  std::string letter;
  std::string text;

  friend bool operator==(const ChoiceOption&, const ChoiceOption&) = default;
};

/// One benchmark question. `benchmark` names the suite the item is scored
/// under; it defaults to the JSONL file stem.
struct BenchmarkItem {
  std::string id;
  std::string benchmark;
  std::string question;
  std::optional<ImageRef> image;
  AnswerType answer_type = AnswerType::Exact;
  std::optional<std::string> gold;
  std::vector<ChoiceOption> choices;

  friend bool operator==(const BenchmarkItem&, const BenchmarkItem&) = default;
};

// Throws Error(InvalidArgument) describing the first broken invariant.
void check_item(const BenchmarkItem& item);

/// JSONL, one item per line, file order preserved:
///   {"id", "question", "answer_type": "choice"|"exact"|"judged",
///    "gold"?, "choices"?: [{"letter","text"}], "benchmark"?, "image"?}
/// `image` is a path relative to the file, or {"media_type","data"} with
/// base64 data. Throws Error(Corrupt) with the 1-based line number.
std::vector<BenchmarkItem> load_benchmark(const std::filesystem::path& path);

BenchmarkItem item_from_json(const Json& j, const std::filesystem::path& base_dir,
                             const std::string& default_benchmark);

// Question text as sent to models; choice items list "(X) text" lines.
std::string item_prompt(const BenchmarkItem& item);

Query item_query(const BenchmarkItem& item, QueryMode mode);

}  // namespace colm::eval
