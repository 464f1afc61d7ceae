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

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "colm/backend/gateway.hpp"
#include "colm/backend/mock.hpp"
#include "colm/eval/scoring.hpp"
#include "colm/router/router.hpp"

namespace colm {

/// One JSON document drives serve, ask and bench:
///
///   {"clients": [ClientProfile], "server": BackendBinding,
///    "judge": {"binding", "prompt_template"?}, "grader": {"binding", "prompt_template"?},
///    "prompts": PromptSet, "scale_map": {name: {"offset"?, "divisor"}},
///    "run": RunConfig, "mocks": {model_id: MockScript}}
///
/// Everything except "clients" and "server" is optional.
struct AppConfig {
  ClientPool clients;
  BackendBinding server;
  std::optional<router::JudgeConfig> judge;
  std::optional<eval::Grader> grader;
  PromptSet prompts = PromptSet::defaults();
  eval::ScaleMap scale = eval::ScaleMap::defaults();
  RunConfig run;
  std::map<std::string, MockScript> mocks;

  // Registers every script under its model id.
  void install_mocks(Gateway& gateway) const;
};

// Throws Error(Config) with the offending field path.
AppConfig config_from_json(const Json& j);
AppConfig load_config(const std::filesystem::path& path);

}  // namespace colm
