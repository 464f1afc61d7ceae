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

#include "colm/router/router.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "colm/core/error.hpp"
#include "colm/core/text.hpp"

namespace colm::router {

std::string default_selection_template() {
  return "{profile_list}\n"
         "\n"
         "Given the question: {question}, select the {top_k} most relevant specializations "
         "from the list above. Return only their names, separated by commas.";
}

void check_judge_config(const JudgeConfig& judge) {
  for (const char* ph : {"{question}", "{top_k}", "{profile_list}"}) {
    if (text::count_occurrences(judge.prompt_template, ph) != 1) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string("judge.prompt_template must contain ") + ph + " exactly once");
    }
  }
}

std::string format_profile_list(const ClientPool& pool) {
  std::string out;
  int n = 1;
  for (const auto& p : pool.profiles()) {
    if (!out.empty()) out += "\n";
    out += std::to_string(n++) + ". " + p.name + ": " + p.role_prompt;
  }
  return out;
}

std::string build_selection_prompt(const Query& q, const ClientPool& pool, int k,
                                   const std::string& tmpl) {
  return text::fill_template(tmpl, {{"question", q.text},
                                    {"top_k", std::to_string(k)},
                                    {"profile_list", format_profile_list(pool)}});
}

namespace {

bool is_trim_char(char c) {
  const auto uc = static_cast<unsigned char>(c);
  return std::isspace(uc) != 0 || std::ispunct(uc) != 0;
}

std::string normalize_name(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && is_trim_char(s[b])) ++b;
  while (e > b && is_trim_char(s[e - 1])) --e;
  return text::to_lower(s.substr(b, e - b));
}

using TermCounts = std::map<std::string, std::uint64_t>;

TermCounts term_counts(std::string_view s) {
  TermCounts tf;
  for (auto& t : text::alnum_tokens(s)) ++tf[t];
  return tf;
}

std::string profile_text(const ClientProfile& p) {
  std::string out = p.name + " " + p.role_prompt;
  for (const auto& tag : p.domain_tags) out += " " + tag;
  return out;
}

__extension__ typedef unsigned __int128 u128;

struct Cosine {
  // cosine^2 = dot^2 / (|q|^2 |p|^2); kept as integers for exact comparison.
  std::uint64_t dot = 0;
  std::uint64_t norm2 = 1;
  double value = 0.0;
};

Cosine cosine(const TermCounts& query, std::uint64_t query_norm2, const TermCounts& doc) {
  Cosine c;
  std::uint64_t norm2 = 0;
  for (const auto& [term, n] : doc) {
    norm2 += n * n;
    if (auto it = query.find(term); it != query.end()) c.dot += n * it->second;
  }
  if (norm2 == 0 || query_norm2 == 0) {
    c.dot = 0;
    return c;
  }
  c.norm2 = norm2;
  c.value = static_cast<double>(c.dot) /
            std::sqrt(static_cast<double>(query_norm2) * static_cast<double>(norm2));
  return c;
}

bool better(const Cosine& a, const Cosine& b) {
  return static_cast<u128>(a.dot) * a.dot * b.norm2 > static_cast<u128>(b.dot) * b.dot * a.norm2;
}

}  // namespace

Selection parse_selection_reply(const std::string& raw, const ClientPool& pool, int k) {
  std::map<std::string, const ClientProfile*> by_name;
  for (const auto& p : pool.profiles()) by_name.emplace(normalize_name(p.name), &p);

  Selection sel;
  sel.k = k;
  sel.method = SelectionMethod::Judge;
  sel.judge_raw = raw;
  std::set<std::string> taken;
  std::size_t start = 0;
  while (start <= raw.size() && static_cast<int>(sel.selected.size()) < k) {
    auto stop = raw.find_first_of(",\n", start);
    if (stop == std::string::npos) stop = raw.size();
    const auto token = normalize_name(std::string_view(raw).substr(start, stop - start));
    if (auto it = by_name.find(token); it != by_name.end() && taken.insert(token).second) {
      sel.selected.push_back(*it->second);
    }
    start = stop + 1;
  }
  if (sel.selected.empty()) {
    throw Error(ErrorCode::EmptySelection, "judge reply names no known client");
  }
  return sel;
}

std::vector<Scored> rank_profiles(const Query& q, const ClientPool& pool) {
  const auto query_tf = term_counts(q.text);
  std::uint64_t query_norm2 = 0;
  for (const auto& [_, n] : query_tf) query_norm2 += n * n;

  const auto& profiles = pool.profiles();
  std::vector<Cosine> scores;
  scores.reserve(profiles.size());
  for (const auto& p : profiles) scores.push_back(cosine(query_tf, query_norm2, term_counts(profile_text(p))));

  std::vector<std::size_t> order(profiles.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return better(scores[a], scores[b]); });

  std::vector<Scored> out;
  out.reserve(order.size());
  for (auto i : order) out.push_back({&profiles[i], scores[i].value});
  return out;
}

Selection fallback_select(const Query& q, const ClientPool& pool, int k) {
  if (pool.empty()) throw Error(ErrorCode::InvalidArgument, "client pool is empty");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  Selection sel;
  sel.k = k;
  sel.method = SelectionMethod::Fallback;
  for (const auto& s : rank_profiles(q, pool)) {
    if (static_cast<int>(sel.selected.size()) == k) break;
    sel.selected.push_back(*s.profile);
  }
  return sel;
}

Selection select_experts(const Query& q, const ClientPool& pool, int k,
                         const std::optional<JudgeConfig>& judge, Gateway& gateway,
                         const CallParams& params) {
  if (pool.empty()) throw Error(ErrorCode::InvalidArgument, "client pool is empty");
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
  if (!judge || k >= static_cast<int>(pool.size())) return fallback_select(q, pool, k);

  Usage spent;
  Selection sel;
  try {
    const auto prompt = build_selection_prompt(q, pool, k, judge->prompt_template);
    const auto completion = gateway.complete(judge->binding, {Message::user(prompt)}, params);
    spent = completion.usage;
    sel = parse_selection_reply(completion.text, pool, k);
  } catch (const Error& e) {
    if (spent.call_count == 0) spent.call_count = e.attempts();
    auto fb = fallback_select(q, pool, k);
    fb.usage = spent;
    return fb;
  }

  const auto want = std::min<std::size_t>(static_cast<std::size_t>(k), pool.size());
  if (sel.selected.size() < want) {
    std::set<std::string> have;
    for (const auto& p : sel.selected) have.insert(p.name);
    for (const auto& s : rank_profiles(q, pool)) {
      if (sel.selected.size() == want) break;
      if (!have.contains(s.profile->name)) sel.selected.push_back(*s.profile);
    }
  }
  sel.usage = spent;
  return sel;
}

}  // namespace colm::router
