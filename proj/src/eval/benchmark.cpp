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

#include "colm/eval/benchmark.hpp"

#include <fstream>
#include <set>

#include "colm/backend/image.hpp"
#include "colm/core/error.hpp"
#include "colm/core/text.hpp"

namespace colm::eval {

namespace fs = std::filesystem;

void check_item(const BenchmarkItem& item) {
  auto fail = [&](const std::string& m) {
    throw Error(ErrorCode::InvalidArgument, "item '" + item.id + "': " + m);
  };
  if (item.id.empty()) fail("id is empty");
  if (text::trim(item.question).empty()) fail("question is empty");
  switch (item.answer_type) {
    case AnswerType::Choice: {
      if (item.choices.empty()) fail("choice item without choices");
      if (!item.gold) fail("choice item without gold");
      bool found = false;
      for (const auto& c : item.choices) found = found || c.letter == *item.gold;
      if (!found) fail("gold '" + *item.gold + "' is not a choice letter");
      break;
    }
    case AnswerType::Exact:
      if (!item.gold) fail("exact item without gold");
      break;
    case AnswerType::Judged:
      break;
  }
}

BenchmarkItem item_from_json(const Json& j, const fs::path& base_dir,
                             const std::string& default_benchmark) {
  BenchmarkItem item;
  item.id = j.at("id").get<std::string>();
  item.benchmark = j.value("benchmark", default_benchmark);
  item.question = j.at("question").get<std::string>();
  const auto type = j.at("answer_type").get<std::string>();
  if (type == "choice") {
    item.answer_type = AnswerType::Choice;
  } else if (type == "exact") {
    item.answer_type = AnswerType::Exact;
  } else if (type == "judged") {
    item.answer_type = AnswerType::Judged;
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown answer_type '" + type + "'");
  }
  if (j.contains("gold") && !j.at("gold").is_null()) item.gold = j.at("gold").get<std::string>();
  for (const auto& c : j.value("choices", Json::array())) {
    item.choices.push_back({c.at("letter").get<std::string>(), c.at("text").get<std::string>()});
  }
  if (auto it = j.find("image"); it != j.end() && !it->is_null()) {
    if (it->is_string()) {
      fs::path p = it->get<std::string>();
      item.image = load_image(p.is_absolute() ? p : base_dir / p);
    } else {
      item.image = it->get<ImageRef>();
    }
  }
  check_item(item);
  return item;
}

std::vector<BenchmarkItem> load_benchmark(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open benchmark " + path.string());
  std::vector<BenchmarkItem> items;
  std::set<std::string> ids;
  std::string line;
  int line_no = 0;
  const auto stem = path.stem().string();
  while (std::getline(in, line)) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    try {
      auto item = item_from_json(Json::parse(line), path.parent_path(), stem);
      if (!ids.insert(item.id).second) {
        throw Error(ErrorCode::InvalidArgument, "duplicate item id '" + item.id + "'");
      }
      items.push_back(std::move(item));
    } catch (const Json::exception& e) {
      throw Error::corrupt(line_no, {e.what()});
    } catch (const Error& e) {
      throw Error::corrupt(line_no, {e.what()});
    }
  }
  return items;
}

std::string item_prompt(const BenchmarkItem& item) {
  std::string out = item.question;
  for (const auto& c : item.choices) out += "\n(" + c.letter + ") " + c.text;
  return out;
}

Query item_query(const BenchmarkItem& item, QueryMode mode) {
  Query q;
  q.id = item.id;
  q.text = item_prompt(item);
  q.mode = mode;
  if (item.image) q.attachments.push_back(*item.image);
  return q;
}

}  // namespace colm::eval
