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

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace colm {

enum class ErrorCode {
  InvalidArgument,
  Timeout,
  Remote,
  CapabilityMismatch,
  EmptySelection,
  AllClientsFailed,
  ServerFailed,
  NotFound,
  Corrupt,
  Io,
  JudgeUnparseable,
  Config,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library. The code selects the failure class;
/// the optional fields carry the payload some codes need (HTTP status and
/// body for Remote, line number and violations for Corrupt).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  static Error remote(int status, std::string body);
  static Error corrupt(int line_no, std::vector<std::string> violations);

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] int status() const noexcept { return status_; }
  [[nodiscard]] const std::string& body() const noexcept { return body_; }
  [[nodiscard]] int line_no() const noexcept { return line_no_; }
  [[nodiscard]] const std::vector<std::string>& violations() const noexcept {
    return violations_;
  }

  // Number of upstream attempts consumed before the error surfaced.
  [[nodiscard]] int attempts() const noexcept { return attempts_; }
  Error& with_attempts(int n) {
    attempts_ = n;
    return *this;
  }

 private:
  ErrorCode code_;
  int status_ = 0;
  std::string body_;
  int line_no_ = 0;
  std::vector<std::string> violations_;
  int attempts_ = 0;
};

}  // namespace colm
