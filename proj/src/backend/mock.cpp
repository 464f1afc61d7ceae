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

#include "colm/backend/mock.hpp"

#include "colm/core/error.hpp"
#include "colm/core/text.hpp"

namespace colm {

MockReply MockReply::literal(std::string text) {
  MockReply r;
  r.text = std::move(text);
  return r;
}

MockReply MockReply::echo_user() {
  MockReply r;
  r.kind = Kind::EchoUser;
  return r;
}

MockReply MockReply::between(std::string begin, std::string end) {
  MockReply r;
  r.kind = Kind::Between;
  r.begin = std::move(begin);
  r.end = std::move(end);
  return r;
}

MockReply MockReply::placeholder_value(const std::string& tmpl, const std::string& placeholder) {
  const auto slot = "{" + placeholder + "}";
  const auto pos = tmpl.find(slot);
  if (pos == std::string::npos) {
    throw Error(ErrorCode::InvalidArgument, "template lacks " + slot);
  }
  return between(tmpl.substr(0, pos), tmpl.substr(pos + slot.size()));
}

MockReply MockReply::fail(std::string kind, int status) {
  MockReply r;
  r.kind = Kind::Fail;
  r.fail_kind = std::move(kind);
  r.fail_status = status;
  return r;
}

MockReply MockReply::function(std::function<std::string(const std::vector<Message>&)> fn) {
  MockReply r;
  r.kind = Kind::Function;
  r.fn = std::move(fn);
  return r;
}

MockScript& MockScript::when_system(std::string substring, MockReply reply) {
  MockRule rule;
  rule.system = std::move(substring);
  rule.reply = std::move(reply);
  rules.push_back(std::move(rule));
  return *this;
}

MockScript& MockScript::when_user(std::string substring, MockReply reply) {
  MockRule rule;
  rule.last_user = std::move(substring);
  rule.reply = std::move(reply);
  rules.push_back(std::move(rule));
  return *this;
}

MockScript& MockScript::otherwise(MockReply reply) {
  fallback = std::move(reply);
  return *this;
}

namespace {

std::string system_text(const std::vector<Message>& messages) {
  if (!messages.empty() && messages.front().role == Role::System) return messages.front().text();
  return {};
}

std::optional<std::string> last_text(const std::vector<Message>& messages, Role role) {
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if (it->role == role) return it->text();
  }
  return std::nullopt;
}

bool field_matches(const std::optional<std::string>& want, const std::optional<std::string>& have,
                   MockRule::Mode mode) {
  if (!want) return true;
  const std::string value = have.value_or("");
  if (mode == MockRule::Mode::Equals) return value == *want;
  return value.find(*want) != std::string::npos;
}

std::string reply_text(const MockReply& reply, const std::vector<Message>& messages) {
  switch (reply.kind) {
    case MockReply::Kind::Text:
      return reply.text;
    case MockReply::Kind::EchoUser:
      return last_text(messages, Role::User).value_or("");
    case MockReply::Kind::Between: {
      const auto user = last_text(messages, Role::User).value_or("");
      auto b = user.find(reply.begin);
      if (b == std::string::npos) return {};
      b += reply.begin.size();
      const auto e = reply.end.empty() ? user.size() : user.find(reply.end, b);
      return user.substr(b, e == std::string::npos ? std::string::npos : e - b);
    }
    case MockReply::Kind::Fail:
      if (reply.fail_kind == "timeout") {
        throw Error(ErrorCode::Timeout, "mock timeout").with_attempts(1);
      }
      throw Error::remote(reply.fail_status, "mock failure").with_attempts(1);
    case MockReply::Kind::Function:
      return reply.fn ? reply.fn(messages) : std::string{};
  }
  return {};
}

}  // namespace

const MockReply& MockScript::match(const std::vector<Message>& messages) const {
  const auto system = system_text(messages);
  const auto user = last_text(messages, Role::User);
  const auto assistant = last_text(messages, Role::Assistant);
  for (const auto& rule : rules) {
    if (field_matches(rule.system, system, rule.mode) &&
        field_matches(rule.last_user, user, rule.mode) &&
        field_matches(rule.last_assistant, assistant, rule.mode)) {
      return rule.reply;
    }
  }
  return fallback;
}

std::int64_t prompt_token_count(const std::vector<Message>& messages) {
  std::int64_t n = 0;
  for (const auto& m : messages) n += text::approx_token_count(m.text());
  return n;
}

Completion run_mock(const MockScript& script, const std::vector<Message>& messages) {
  Completion c;
  c.text = reply_text(script.match(messages), messages);
  c.usage.prompt_tokens = prompt_token_count(messages);
  c.usage.completion_tokens = text::approx_token_count(c.text);
  c.usage.call_count = 1;
  return c;
}

void to_json(Json& j, const MockReply& v) {
  switch (v.kind) {
    case MockReply::Kind::Text: j = v.text; return;
    case MockReply::Kind::EchoUser: j = Json{{"echo_user", true}}; return;
    case MockReply::Kind::Between: j = Json{{"between", {v.begin, v.end}}}; return;
    case MockReply::Kind::Fail: j = Json{{"fail", v.fail_kind}, {"status", v.fail_status}}; return;
    case MockReply::Kind::Function:
      throw Error(ErrorCode::InvalidArgument, "function mock replies cannot be serialized");
  }
}

void from_json(const Json& j, MockReply& v) {
  if (j.is_string()) {
    v = MockReply::literal(j.get<std::string>());
  } else if (j.contains("echo_user")) {
    v = MockReply::echo_user();
  } else if (j.contains("between")) {
    const auto& b = j.at("between");
    v = MockReply::between(b.at(0).get<std::string>(), b.at(1).get<std::string>());
  } else if (j.contains("fail")) {
    v = MockReply::fail(j.at("fail").get<std::string>(), j.value("status", 0));
  } else {
    throw Error(ErrorCode::Config, "unrecognised mock reply: " + j.dump());
  }
}

void to_json(Json& j, const MockRule& v) {
  j = Json{{"reply", v.reply}, {"match", v.mode == MockRule::Mode::Equals ? "equals" : "contains"}};
  if (v.system) j["system"] = *v.system;
  if (v.last_user) j["last_user"] = *v.last_user;
  if (v.last_assistant) j["last_assistant"] = *v.last_assistant;
}

void from_json(const Json& j, MockRule& v) {
  v.reply = j.at("reply").get<MockReply>();
  const auto mode = j.value("match", std::string("contains"));
  if (mode != "contains" && mode != "equals") {
    throw Error(ErrorCode::Config, "mock rule match must be 'contains' or 'equals'");
  }
  v.mode = mode == "equals" ? MockRule::Mode::Equals : MockRule::Mode::Contains;
  auto opt = [&](const char* key, std::optional<std::string>& out) {
    if (auto it = j.find(key); it != j.end() && !it->is_null()) out = it->get<std::string>();
  };
  opt("system", v.system);
  opt("last_user", v.last_user);
  opt("last_assistant", v.last_assistant);
}

void to_json(Json& j, const MockScript& v) {
  j = Json{{"rules", v.rules}, {"default", v.fallback}};
}

void from_json(const Json& j, MockScript& v) {
  v.rules = j.value("rules", std::vector<MockRule>{});
  v.fallback = j.contains("default") ? j.at("default").get<MockReply>()
                                     : MockReply::literal("I don't know");
}

}  // namespace colm
