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

#include "colm/eval/scoring.hpp"

#include <cctype>
#include <cmath>

#include "colm/core/error.hpp"
#include "colm/core/text.hpp"

namespace colm::eval {

namespace {

bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

bool in_range(char c) {
  const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return u >= 'A' && u <= 'E';
}

// Letter position right after "answer is" (plus spaces, ':' or '('), if any.
bool follows_answer_is(const std::string& lower, std::size_t i) {
  static constexpr std::string_view kPhrase = "answer is";
  std::size_t j = i;
  while (j > 0 && (lower[j - 1] == ' ' || lower[j - 1] == ':' || lower[j - 1] == '(')) --j;
  return j >= kPhrase.size() && std::string_view(lower).substr(j - kPhrase.size(), kPhrase.size()) == kPhrase;
}

}  // namespace

std::optional<char> extract_choice(std::string_view text) {
  const std::string s(text);
  const std::string lower = text::to_lower(s);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (!in_range(c)) continue;
    const bool left_free = i == 0 || !is_alnum(s[i - 1]);
    const bool right_free = i + 1 == s.size() || !is_alnum(s[i + 1]);
    if (!left_free || !right_free) continue;
    const char letter = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const bool parenthesized = i > 0 && s[i - 1] == '(' && i + 1 < s.size() && s[i + 1] == ')';
    if (parenthesized || follows_answer_is(lower, i)) return letter;
    if (std::isupper(static_cast<unsigned char>(c)) != 0) return letter;
  }
  return std::nullopt;
}

std::string normalize_exact(std::string_view s) {
  std::string out;
  for (char c : s) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc) != 0 || std::ispunct(uc) != 0) continue;
    out.push_back(static_cast<char>(std::tolower(uc)));
  }
  return out;
}

std::string default_grading_template() {
  return "Please act as an impartial judge and evaluate the quality of the response provided "
         "by an AI assistant to the user question displayed below. Be as objective as "
         "possible. After your explanation, rate the response on a scale of 1 to 10 by "
         "strictly following this format: \"[[rating]]\", for example: \"Rating: [[5]]\".\n"
         "\n"
         "[Question]\n{question}\n\n"
         "[The Start of Assistant's Answer]\n{answer}\n[The End of Assistant's Answer]";
}

int parse_rating(std::string_view reply) {
  if (auto open = reply.find("[["); open != std::string_view::npos) {
    auto close = reply.find("]]", open);
    if (close != std::string_view::npos) {
      const auto inner = text::trim(reply.substr(open + 2, close - open - 2));
      if (!inner.empty() && inner.size() <= 2 &&
          std::all_of(inner.begin(), inner.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        const int v = std::stoi(inner);
        if (v >= 1 && v <= 10) return v;
      }
    }
  }
  std::size_t i = 0;
  while (i < reply.size()) {
    if (!std::isdigit(static_cast<unsigned char>(reply[i]))) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < reply.size() && std::isdigit(static_cast<unsigned char>(reply[j]))) ++j;
    const bool standalone = (i == 0 || reply[i - 1] != '.') && (j == reply.size() || reply[j] != '.' ||
                                                                 j + 1 == reply.size() ||
                                                                 !std::isdigit(static_cast<unsigned char>(reply[j + 1])));
    if (standalone && j - i <= 2) {
      const int v = std::stoi(std::string(reply.substr(i, j - i)));
      if (v >= 1 && v <= 10) return v;
    }
    i = j;
  }
  throw Error(ErrorCode::JudgeUnparseable, "no rating 1-10 in grader reply");
}

double score_item(const BenchmarkItem& item, const std::string& prediction,
                  const std::optional<Grader>& grader, Gateway* gateway, const CallParams& params) {
  switch (item.answer_type) {
    case AnswerType::Choice: {
      const auto got = extract_choice(prediction);
      return got && item.gold && std::string(1, *got) == *item.gold ? 1.0 : 0.0;
    }
    case AnswerType::Exact:
      return item.gold && normalize_exact(prediction) == normalize_exact(*item.gold) ? 1.0 : 0.0;
    case AnswerType::Judged: {
      if (!grader || gateway == nullptr) {
        throw Error(ErrorCode::Config, "judged item '" + item.id + "' needs a grader");
      }
      const auto prompt = text::fill_template(
          grader->prompt_template, {{"question", item_prompt(item)}, {"answer", prediction}});
      const auto reply = gateway->complete(grader->binding, {Message::user(prompt)}, params);
      return parse_rating(reply.text);
    }
  }
  return 0.0;
}

ScaleMap ScaleMap::defaults() {
  ScaleMap m;
  for (const char* judge : {"mt-bench"}) m.scales[judge] = {0.0, 10.0};
  for (const char* pct : {"alpacaeval", "arena-hard", "seedbench", "mmbench", "ai2d", "mmmu-val",
                          "mmmu-dev"}) {
    m.scales[pct] = {0.0, 100.0};
  }
  m.scales["ocrbench"] = {0.0, 1000.0};
  m.scales["mme-perception"] = {0.0, 2000.0};
  m.scales["mme-reasoning"] = {0.0, 800.0};
  return m;
}

void ScaleMap::set(const std::string& benchmark, Scale scale) {
  if (!(scale.divisor > 0)) {
    throw Error(ErrorCode::InvalidArgument, "scale divisor for '" + benchmark + "' must be > 0");
  }
  scales[benchmark] = scale;
}

double ScaleMap::scaled(const std::string& benchmark, double raw) const {
  auto it = scales.find(benchmark);
  if (it == scales.end()) {
    throw Error(ErrorCode::InvalidArgument, "no scale for benchmark '" + benchmark + "'");
  }
  return (raw - it->second.offset) / it->second.divisor * 100.0;
}

ScaleMap scale_map_from_json(const Json& j, ScaleMap base) {
  for (const auto& [name, v] : j.items()) {
    base.set(name, Scale{v.value("offset", 0.0), v.at("divisor").get<double>()});
  }
  return base;
}

double round2(double x) {
  const double scaled = x * 100.0;
  const double eps = 1e-9 * std::max(1.0, std::fabs(scaled));
  return std::floor(scaled + 0.5 + eps) / 100.0;
}

double aggregate_score(const std::map<std::string, double>& per_benchmark, const ScaleMap& scale) {
  if (per_benchmark.empty()) throw Error(ErrorCode::InvalidArgument, "no benchmark scores");
  double sum = 0.0;
  for (const auto& [name, raw] : per_benchmark) sum += scale.scaled(name, raw);
  return round2(sum / static_cast<double>(per_benchmark.size()));
}

}  // namespace colm::eval
