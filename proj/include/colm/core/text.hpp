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

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace colm::text {

std::string trim(std::string_view s);
std::string trim_right(std::string_view s);
std::string to_lower(std::string_view s);

// Number of maximal runs of non-whitespace bytes.
std::int64_t whitespace_token_count(std::string_view s);

// Piece count under GPT-2 style pre-tokenization: English contractions
// ('s 't 're 've 'm 'll 'd), letter runs, digit runs and symbol runs, each
// optionally led by one space, plus leftover whitespace runs. Bytes >= 0x80
// count as letters. Used as a stand-in token count where no tokenizer exists.
std::int64_t approx_token_count(std::string_view s);

// Lowercased ASCII alphanumeric runs; every other byte is a separator.
std::vector<std::string> alnum_tokens(std::string_view s);

std::size_t count_occurrences(std::string_view haystack, std::string_view needle);

/// Substitutes `{name}` placeholders in one left-to-right pass. Text coming
/// from a substituted value is never rescanned, so braces inside values are
/// emitted literally. Unknown `{...}` sequences are left as they are.
std::string fill_template(std::string_view tmpl,
                          const std::map<std::string, std::string>& values);

}  // namespace colm::text
