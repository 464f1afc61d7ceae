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

#include "colm/backend/message.hpp"

#include "colm/core/error.hpp"

namespace colm {

std::string_view to_string(Role r) {
  switch (r) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "user";
}

Message Message::system(std::string text) { return {Role::System, {std::move(text)}}; }

Message Message::user(std::string text, const std::vector<ImageRef>& images) {
  Message m{Role::User, {std::move(text)}};
  for (const auto& img : images) m.content.emplace_back(img);
  return m;
}

Message Message::assistant(std::string text) { return {Role::Assistant, {std::move(text)}}; }

std::string Message::text() const {
  std::string out;
  for (const auto& part : content) {
    if (const auto* s = std::get_if<std::string>(&part)) out += *s;
  }
  return out;
}

bool Message::has_image() const {
  for (const auto& part : content) {
    if (std::holds_alternative<ImageRef>(part)) return true;
  }
  return false;
}

CallParams CallParams::from(const RunConfig& cfg) {
  CallParams p;
  p.temperature = cfg.temperature;
  p.max_tokens = cfg.max_tokens;
  p.timeout = cfg.per_call_timeout;
  p.max_retries = cfg.max_retries;
  p.seed = cfg.seed;
  return p;
}

void check_messages(const std::vector<Message>& messages) {
  if (messages.empty()) throw Error(ErrorCode::InvalidArgument, "messages must be non-empty");
  if (messages.front().role == Role::Assistant) {
    throw Error(ErrorCode::InvalidArgument, "first message must be system or user");
  }
  for (const auto& m : messages) {
    if (m.content.empty()) throw Error(ErrorCode::InvalidArgument, "message content is empty");
  }
}

}  // namespace colm
