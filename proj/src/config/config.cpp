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

#include "colm/config/config.hpp"

#include <fstream>

#include "colm/core/error.hpp"

namespace colm {

void AppConfig::install_mocks(Gateway& gateway) const {
  for (const auto& [model_id, script] : mocks) gateway.register_mock(model_id, script);
}

namespace {

template <typename Fn>
auto at_path(const std::string& path, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Config, path + ": " + e.what());
  } catch (const Error& e) {
    if (e.code() == ErrorCode::Config) throw;
    throw Error(ErrorCode::Config, path + ": " + e.what());
  }
}

void require_mock(const AppConfig& cfg, const BackendBinding& b, const std::string& path) {
  if (b.kind == BackendKind::Mock && !cfg.mocks.contains(b.model_id)) {
    throw Error(ErrorCode::Config, path + ": no mock script for model_id '" + b.model_id + "'");
  }
}

}  // namespace

AppConfig config_from_json(const Json& j) {
  AppConfig cfg;
  if (auto it = j.find("mocks"); it != j.end()) {
    for (const auto& [model_id, script] : it->items()) {
      cfg.mocks[model_id] = at_path("mocks." + model_id, [&] { return script.get<MockScript>(); });
    }
  }
  const auto& clients = at_path("clients", [&]() -> const Json& { return j.at("clients"); });
  for (std::size_t i = 0; i < clients.size(); ++i) {
    const auto path = "clients[" + std::to_string(i) + "]";
    at_path(path, [&] {
      cfg.clients.add(clients.at(i).get<ClientProfile>());
      return 0;
    });
    require_mock(cfg, cfg.clients.profiles().back().backend, path + ".backend");
  }
  cfg.server = at_path("server", [&] { return j.at("server").get<BackendBinding>(); });
  require_mock(cfg, cfg.server, "server");

  if (auto it = j.find("judge"); it != j.end() && !it->is_null()) {
    router::JudgeConfig judge;
    judge.binding = at_path("judge.binding", [&] { return it->at("binding").get<BackendBinding>(); });
    judge.prompt_template = it->value("prompt_template", router::default_selection_template());
    at_path("judge.prompt_template", [&] {
      router::check_judge_config(judge);
      return 0;
    });
    require_mock(cfg, judge.binding, "judge.binding");
    cfg.judge = std::move(judge);
  }
  if (auto it = j.find("grader"); it != j.end() && !it->is_null()) {
    eval::Grader grader;
    grader.binding = at_path("grader.binding", [&] { return it->at("binding").get<BackendBinding>(); });
    grader.prompt_template = it->value("prompt_template", eval::default_grading_template());
    require_mock(cfg, grader.binding, "grader.binding");
    cfg.grader = std::move(grader);
  }
  if (auto it = j.find("prompts"); it != j.end()) {
    cfg.prompts = at_path("prompts", [&] { return it->get<PromptSet>(); });
  }
  if (auto it = j.find("scale_map"); it != j.end()) {
    cfg.scale = at_path("scale_map", [&] { return eval::scale_map_from_json(*it); });
  }
  if (auto it = j.find("run"); it != j.end()) {
    cfg.run = at_path("run", [&] { return run_config_from_json(*it); });
  }
  return cfg;
}

AppConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::Config, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace colm
