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

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "colm/backend/message.hpp"
#include "colm/core/codec.hpp"

namespace colm {

/// What a mock sends back once a rule fires.
struct MockReply {
  enum class Kind { Text, EchoUser, Between, Fail, Function };

  Kind kind = Kind::Text;
  std::string text;
  // Between: the slice of the last user message after the first `begin` and
  // before the next `end` that follows it.
  std::string begin;
  std::string end;
  // Fail: "timeout" or "remote".
  std::string fail_kind;
  int fail_status = 0;
  // Function: in-process only, never serialized.
  std::function<std::string(const std::vector<Message>&)> fn;

  static MockReply literal(std::string text);
  static MockReply echo_user();
  static MockReply between(std::string begin, std::string end);
  // The value substituted for `{placeholder}` in a message built from `tmpl`.
  static MockReply placeholder_value(const std::string& tmpl, const std::string& placeholder);
  static MockReply fail(std::string kind, int status = 0);
  static MockReply function(std::function<std::string(const std::vector<Message>&)> fn);
};

/// First-match rule. Every present field must match; an absent field matches
/// anything. `system` is tested against the leading system message (or ""),
/// `last_user` and `last_assistant` against the last message of that role.
struct MockRule {
  enum class Mode { Contains, Equals };

  std::optional<std::string> system;
  std::optional<std::string> last_user;
  std::optional<std::string> last_assistant;
  Mode mode = Mode::Contains;
  MockReply reply;
};

struct MockScript {
  std::vector<MockRule> rules;
  MockReply fallback = MockReply::literal("I don't know");

  MockScript& when_system(std::string substring, MockReply reply);
  MockScript& when_user(std::string substring, MockReply reply);
  MockScript& otherwise(MockReply reply);

  // The reply of the first matching rule, or the fallback.
  [[nodiscard]] const MockReply& match(const std::vector<Message>& messages) const;
};

/// Evaluates the script: pure in (script, messages) for serializable replies.
/// Usage is approx_token_count over every prompt text part and over the
/// reply, with call_count 1. Fail replies throw Error(Timeout) or
/// Error::remote.
Completion run_mock(const MockScript& script, const std::vector<Message>& messages);

std::int64_t prompt_token_count(const std::vector<Message>& messages);

void to_json(Json& j, const MockReply& v);
void from_json(const Json& j, MockReply& v);
void to_json(Json& j, const MockRule& v);
void from_json(const Json& j, MockRule& v);
void to_json(Json& j, const MockScript& v);
void from_json(const Json& j, MockScript& v);

}  // namespace colm
