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
#include <map>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <unordered_map>
#include <vector>

#include "colm/backend/message.hpp"
#include "colm/backend/mock.hpp"

namespace colm {

/// Exponential backoff with full jitter: before retry n (1-based) the caller
/// sleeps a uniform draw from [0, base * factor^(n-1)].
struct RetryPolicy {
  std::chrono::milliseconds base{500};
  double factor = 2.0;

  [[nodiscard]] std::chrono::milliseconds ceiling(int retry) const;
};

struct CapturedCall {
  std::string binding_key;
  std::vector<Message> messages;
  std::string request_body;
};

/// Entry point for every model call. Routes Http bindings to a chat-completion
/// endpoint and Mock bindings to registered scripts, enforces a per-binding
/// in-flight limit, and keeps per-binding usage totals for the lifetime of the
/// object. Safe for concurrent use.
class Gateway {
 public:
  struct Options {
    int max_in_flight_per_binding = 4;
    RetryPolicy retry;
    bool capture = false;
  };

  Gateway();
  explicit Gateway(Options options);

  Gateway(const Gateway&) = delete;
  Gateway& operator=(const Gateway&) = delete;

  void register_mock(const std::string& model_id, MockScript script);
  [[nodiscard]] bool has_mock(const std::string& model_id) const;

  /// Throws Error with code Timeout, Remote, CapabilityMismatch, Config or
  /// InvalidArgument. Failed calls still count their attempts in usage().
  Completion complete(const BackendBinding& binding, const std::vector<Message>& messages,
                      const CallParams& params);

  [[nodiscard]] std::map<std::string, Usage> usage() const;
  [[nodiscard]] Usage usage_for(const BackendBinding& binding) const;

  void set_capture(bool on);
  [[nodiscard]] std::vector<CapturedCall> captured() const;
  void clear_captured();

 private:
  Completion complete_mock(const BackendBinding& binding, const std::vector<Message>& messages);
  Completion complete_http(const BackendBinding& binding, const std::string& body,
                           const CallParams& params);
  std::counting_semaphore<>& limiter(const std::string& key);
  void record(const std::string& key, const Usage& usage);

  Options options_;
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<const MockScript>> mocks_;
  std::unordered_map<std::string, std::unique_ptr<std::counting_semaphore<>>> limiters_;
  std::map<std::string, Usage> usage_;
  std::vector<CapturedCall> captured_;
};

}  // namespace colm
