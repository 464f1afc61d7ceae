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

#include "colm/core/error.hpp"

namespace colm {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid_argument";
    case ErrorCode::Timeout: return "timeout";
    case ErrorCode::Remote: return "remote";
    case ErrorCode::CapabilityMismatch: return "capability_mismatch";
    case ErrorCode::EmptySelection: return "empty_selection";
    case ErrorCode::AllClientsFailed: return "all_clients_failed";
    case ErrorCode::ServerFailed: return "server_failed";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::Corrupt: return "corrupt";
    case ErrorCode::Io: return "io";
    case ErrorCode::JudgeUnparseable: return "judge_unparseable";
    case ErrorCode::Config: return "config";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

Error Error::remote(int status, std::string body) {
  Error e(ErrorCode::Remote,
          "remote error: HTTP " + std::to_string(status) + ": " + body);
  e.status_ = status;
  e.body_ = std::move(body);
  return e;
}

Error Error::corrupt(int line_no, std::vector<std::string> violations) {
  std::string msg = "corrupt record at line " + std::to_string(line_no);
  for (const auto& v : violations) msg += "; " + v;
  Error e(ErrorCode::Corrupt, msg);
  e.line_no_ = line_no;
  e.violations_ = std::move(violations);
  return e;
}

}  // namespace colm
