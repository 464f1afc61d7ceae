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

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "colm/backend/gateway.hpp"
#include "colm/backend/message.hpp"
#include "colm/backend/mock.hpp"
#include "colm/core/types.hpp"

namespace colm::testing {

inline std::filesystem::path source_dir() { return COLM_SOURCE_DIR; }
inline std::filesystem::path toy_config_path() { return source_dir() / "data/toy/config.json"; }
inline std::filesystem::path toy_bench_path() { return source_dir() / "data/toy/toy_bench.jsonl"; }
inline std::filesystem::path pixel_png_path() { return source_dir() / "tests/data/pixel.png"; }

inline std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline BackendBinding mock_binding(std::string model_id, bool vision = false) {
  BackendBinding b;
  b.kind = BackendKind::Mock;
  b.model_id = std::move(model_id);
  b.vision = vision;
  return b;
}

inline ClientProfile mock_client(std::string name, std::string role_prompt, std::string model_id,
                                 bool vision = false) {
  ClientProfile p;
  p.name = std::move(name);
  p.role_prompt = std::move(role_prompt);
  p.backend = mock_binding(std::move(model_id), vision);
  return p;
}

inline std::string last_user_text(const std::vector<Message>& messages) {
  for (auto it = messages.rbegin(); it != messages.rend(); ++it) {
    if (it->role == Role::User) return it->text();
  }
  return {};
}

// Answers refinement requests with the guidance it was given, and everything
// else with `initial`.
inline MockScript copy_refiner(std::string initial) {
  MockScript s;
  s.when_user("refine your original response",
              MockReply::placeholder_value(PromptSet::defaults().final_template, "summary_response"));
  s.otherwise(MockReply::literal(std::move(initial)));
  return s;
}

// n copy-refining clients "client-0".."client-(n-1)", each on its own mock
// binding answering "answer <i>" initially.
inline ClientPool copy_pool(Gateway& gateway, int n, bool vision = false) {
  ClientPool pool;
  for (int i = 0; i < n; ++i) {
    const auto id = "client-" + std::to_string(i);
    gateway.register_mock(id, copy_refiner("answer " + std::to_string(i)));
    pool.add(mock_client(id, "You are specialist number " + std::to_string(i), id, vision));
  }
  return pool;
}

inline BackendBinding literal_server(Gateway& gateway, const std::string& model_id, std::string text) {
  MockScript s;
  s.otherwise(MockReply::literal(std::move(text)));
  gateway.register_mock(model_id, s);
  return mock_binding(model_id);
}

inline BackendBinding echo_server(Gateway& gateway, const std::string& model_id) {
  MockScript s;
  s.otherwise(MockReply::echo_user());
  gateway.register_mock(model_id, s);
  return mock_binding(model_id);
}

// Scratch directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("colm-test-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  [[nodiscard]] const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace colm::testing
