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

#include "colm/core/text.hpp"

#include <cctype>

namespace colm::text {

namespace {
bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
}  // namespace

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::string trim_right(std::string_view s) {
  std::size_t e = s.size();
  while (e > 0 && is_space(s[e - 1])) --e;
  return std::string(s.substr(0, e));
}

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::int64_t whitespace_token_count(std::string_view s) {
  std::int64_t n = 0;
  bool in_token = false;
  for (char c : s) {
    if (is_space(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++n;
    }
  }
  return n;
}

namespace {

enum class Cls { Space, Letter, Digit, Other };

Cls classify(char c) {
  const auto u = static_cast<unsigned char>(c);
  if (std::isspace(u) != 0) return Cls::Space;
  if (u >= 0x80 || std::isalpha(u) != 0) return Cls::Letter;
  if (std::isdigit(u) != 0) return Cls::Digit;
  return Cls::Other;
}

std::size_t contraction_length(std::string_view s, std::size_t i) {
  if (s[i] != '\'') return 0;
  for (std::string_view c : {"'s", "'t", "'re", "'ve", "'m", "'ll", "'d"}) {
    if (s.substr(i, c.size()) == c) return c.size();
  }
  return 0;
}

}  // namespace

std::int64_t approx_token_count(std::string_view s) {
  std::int64_t n = 0;
  std::size_t i = 0;
  while (i < s.size()) {
    if (const auto len = contraction_length(s, i)) {
      i += len;
      ++n;
      continue;
    }
    std::size_t j = i;
    if (s[j] == ' ' && j + 1 < s.size() && classify(s[j + 1]) != Cls::Space) ++j;
    const Cls cls = classify(s[j]);
    if (cls != Cls::Space) {
      ++j;
      while (j < s.size() && classify(s[j]) == cls) ++j;
      i = j;
      ++n;
      continue;
    }
    while (j < s.size() && classify(s[j]) == Cls::Space) ++j;
    // A run followed by text leaves its last byte for the next piece; a lone
    // space then leads that piece, anything else stands alone.
    if (j < s.size() && j - i >= 2) {
      i = j - 1;
    } else {
      i = j;
    }
    ++n;
  }
  return n;
}

std::vector<std::string> alnum_tokens(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    auto uc = static_cast<unsigned char>(c);
    if (uc < 0x80 && std::isalnum(uc)) {
      cur.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!cur.empty()) {
      out.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::size_t count_occurrences(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return 0;
  std::size_t n = 0;
  for (auto pos = haystack.find(needle); pos != std::string_view::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

std::string fill_template(std::string_view tmpl,
                          const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t i = 0;
  while (i < tmpl.size()) {
    if (tmpl[i] == '{') {
      auto close = tmpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        auto it = values.find(std::string(tmpl.substr(i + 1, close - i - 1)));
        if (it != values.end()) {
          out += it->second;
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tmpl[i++]);
  }
  return out;
}

}  // namespace colm::text
