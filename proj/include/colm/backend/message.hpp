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

#include <chrono>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "colm/core/types.hpp"

namespace colm {

enum class Role { System, User, Assistant };

std::string_view to_string(Role r);

using ContentPart = std::variant<std::string, ImageRef>;

struct Message {
  Role role = Role::User;
  std::vector<ContentPart> content;

  static Message system(std::string text);
  static Message user(std::string text, const std::vector<ImageRef>& images = {});
  static Message assistant(std::string text);

  // Concatenation of the text parts.
  [[nodiscard]] std::string text() const;
  [[nodiscard]] bool has_image() const;

  friend bool operator==(const Message&, const Message&) = default;
};

/// The subset of RunConfig a single backend call needs.
struct CallParams {
  double temperature = 0.0;
  int max_tokens = 1024;
  std::chrono::milliseconds timeout{60000};
  int max_retries = 2;
  std::optional<std::int64_t> seed;

  static CallParams from(const RunConfig& cfg);
};

struct Completion {
  std::string text;
  Usage usage;
  std::chrono::milliseconds latency{0};
};

// Throws Error(InvalidArgument) unless messages are non-empty, every message
// has content, and the first message is System or User.
void check_messages(const std::vector<Message>& messages);

}  // namespace colm
