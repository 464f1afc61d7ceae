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

#include "colm/backend/gateway.hpp"

#include <cmath>
#include <cstdlib>
#include <random>
#include <thread>

#include <httplib.h>

#include "colm/backend/render.hpp"
#include "colm/core/codec.hpp"
#include "colm/core/error.hpp"
#include "colm/core/text.hpp"

namespace colm {

std::chrono::milliseconds RetryPolicy::ceiling(int retry) const {
  const double ms = static_cast<double>(base.count()) * std::pow(factor, retry - 1);
  return std::chrono::milliseconds(static_cast<std::int64_t>(ms));
}

Gateway::Gateway() : Gateway(Options{}) {}

Gateway::Gateway(Options options) : options_(options) {
  if (options_.max_in_flight_per_binding < 1) options_.max_in_flight_per_binding = 1;
}

void Gateway::register_mock(const std::string& model_id, MockScript script) {
  std::lock_guard lock(mu_);
  mocks_[model_id] = std::make_shared<const MockScript>(std::move(script));
}

bool Gateway::has_mock(const std::string& model_id) const {
  std::lock_guard lock(mu_);
  return mocks_.contains(model_id);
}

std::counting_semaphore<>& Gateway::limiter(const std::string& key) {
  std::lock_guard lock(mu_);
  auto& slot = limiters_[key];
  if (!slot) slot = std::make_unique<std::counting_semaphore<>>(options_.max_in_flight_per_binding);
  return *slot;
}

void Gateway::record(const std::string& key, const Usage& usage) {
  std::lock_guard lock(mu_);
  usage_[key] += usage;
}

Completion Gateway::complete(const BackendBinding& binding, const std::vector<Message>& messages,
                             const CallParams& params) {
  const auto key = binding.key();
  // Rendering validates the messages and the vision capability up front.
  auto body = render_chat_request(binding, messages, params);
  {
    std::lock_guard lock(mu_);
    if (options_.capture) captured_.push_back({key, messages, body});
  }

  auto& sem = limiter(key);
  sem.acquire();
  struct Release {
    std::counting_semaphore<>& s;
    ~Release() { s.release(); }
  } release{sem};

  const auto start = std::chrono::steady_clock::now();
  try {
    Completion c = binding.kind == BackendKind::Mock ? complete_mock(binding, messages)
                                                     : complete_http(binding, body, params);
    c.latency = std::chrono::duration_cast<std::chrono::milliseconds>(
        std::chrono::steady_clock::now() - start);
    record(key, c.usage);
    return c;
  } catch (const Error& e) {
    if (e.attempts() > 0) record(key, Usage{0, 0, e.attempts()});
    throw;
  }
}

Completion Gateway::complete_mock(const BackendBinding& binding,
                                  const std::vector<Message>& messages) {
  std::shared_ptr<const MockScript> script;
  {
    std::lock_guard lock(mu_);
    auto it = mocks_.find(binding.model_id);
    if (it == mocks_.end()) {
      throw Error(ErrorCode::Config, "no mock script registered for '" + binding.model_id + "'");
    }
    script = it->second;
  }
  return run_mock(*script, messages);
}

namespace {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos) {
    throw Error(ErrorCode::Config, "endpoint must be an absolute URL: " + url);
  }
  const auto slash = url.find('/', scheme + 3);
  if (slash == std::string::npos) return {url, "/"};
  return {url.substr(0, slash), url.substr(slash)};
}

bool retryable(const Error& e) {
  if (e.code() == ErrorCode::Timeout) return true;
  if (e.code() != ErrorCode::Remote) return false;
  const int s = e.status();
  return s == 0 || s == 408 || s == 429 || s >= 500;
}

Completion parse_completion(int status, const std::string& body, const std::string& prompt_body) {
  Json j;
  try {
    j = Json::parse(body);
    Completion c;
    c.text = j.at("choices").at(0).at("message").at("content").get<std::string>();
    if (auto u = j.find("usage"); u != j.end() && u->is_object()) {
      c.usage.prompt_tokens = u->value("prompt_tokens", std::int64_t{0});
      c.usage.completion_tokens = u->value("completion_tokens", std::int64_t{0});
    } else {
      c.usage.prompt_tokens = text::approx_token_count(prompt_body);
      c.usage.completion_tokens = text::approx_token_count(c.text);
    }
    return c;
  } catch (const Json::exception&) {
    throw Error::remote(status, body);
  }
}

}  // namespace

Completion Gateway::complete_http(const BackendBinding& binding, const std::string& body,
                                  const CallParams& params) {
  const auto endpoint = split_endpoint(binding.endpoint);
  httplib::Headers headers;
  if (!binding.auth_env_var.empty()) {
    const char* token = std::getenv(binding.auth_env_var.c_str());
    if (token == nullptr) {
      throw Error(ErrorCode::Config, "environment variable " + binding.auth_env_var + " is not set");
    }
    headers.emplace("Authorization", std::string("Bearer ") + token);
  }

  std::mt19937_64 rng{std::random_device{}()};
  const auto timeout = params.timeout;
  for (int attempt = 1;; ++attempt) {
    try {
      httplib::Client client(endpoint.base);
      client.set_connection_timeout(timeout);
      client.set_read_timeout(timeout);
      client.set_write_timeout(timeout);
      auto res = client.Post(endpoint.path, headers, body, "application/json");
      if (!res) {
        const auto err = res.error();
        if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout) {
          throw Error(ErrorCode::Timeout, "request to " + binding.endpoint + " timed out");
        }
        throw Error::remote(0, httplib::to_string(err));
      }
      if (res->status < 200 || res->status >= 300) throw Error::remote(res->status, res->body);
      Completion c = parse_completion(res->status, res->body, body);
      c.usage.call_count = attempt;
      return c;
    } catch (Error& e) {
      e.with_attempts(attempt);
      if (!retryable(e) || attempt > params.max_retries) throw;
      const auto cap = options_.retry.ceiling(attempt).count();
      std::uniform_int_distribution<std::int64_t> jitter(0, std::max<std::int64_t>(cap, 0));
      std::this_thread::sleep_for(std::chrono::milliseconds(jitter(rng)));
    }
  }
}

std::map<std::string, Usage> Gateway::usage() const {
  std::lock_guard lock(mu_);
  return usage_;
}

Usage Gateway::usage_for(const BackendBinding& binding) const {
  std::lock_guard lock(mu_);
  auto it = usage_.find(binding.key());
  return it == usage_.end() ? Usage{} : it->second;
}

void Gateway::set_capture(bool on) {
  std::lock_guard lock(mu_);
  options_.capture = on;
}

std::vector<CapturedCall> Gateway::captured() const {
  std::lock_guard lock(mu_);
  return captured_;
}

void Gateway::clear_captured() {
  std::lock_guard lock(mu_);
  captured_.clear();
}

}  // namespace colm
