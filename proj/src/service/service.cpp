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

#include "colm/service/service.hpp"

#include <httplib.h>

#include "colm/backend/image.hpp"
#include "colm/core/base64.hpp"
#include "colm/core/codec.hpp"
#include "colm/core/error.hpp"
#include "colm/core/text.hpp"
#include "colm/pipeline/pipeline.hpp"
#include "colm/vlm/vlm_pipeline.hpp"

namespace colm::service {

namespace {

Reply json_reply(int status, const Json& body) { return {status, body.dump()}; }

Reply error_reply(int status, const std::string& message, const std::string& field = {}) {
  Json body{{"error", message}};
  if (!field.empty()) body["field"] = field;
  return json_reply(status, body);
}

// Thrown while validating request bodies; becomes a 422 naming the field.
struct Invalid {
  std::string field;
  std::string message;
};

const Json& require(const Json& j, const char* field) {
  auto it = j.find(field);
  if (it == j.end() || it->is_null()) throw Invalid{field, "missing required field"};
  return *it;
}

std::string require_string(const Json& j, const char* field, bool non_empty = true) {
  const auto& v = require(j, field);
  if (!v.is_string()) throw Invalid{field, "must be a string"};
  auto s = v.get<std::string>();
  if (non_empty && text::trim(s).empty()) throw Invalid{field, "must be non-empty"};
  return s;
}

ClientProfile parse_profile(const Json& j) {
  if (!j.is_object()) throw Invalid{"", "body must be a JSON object"};
  ClientProfile p;
  p.name = require_string(j, "name");
  p.role_prompt = require_string(j, "role_prompt");
  const auto& backend = require(j, "backend");
  if (!backend.is_object()) throw Invalid{"backend", "must be an object"};
  try {
    p.backend = backend.get<BackendBinding>();
  } catch (const std::exception& e) {
    throw Invalid{"backend", e.what()};
  }
  if (auto it = j.find("domain_tags"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw Invalid{"domain_tags", "must be an array of strings"};
    for (const auto& tag : *it) {
      if (!tag.is_string()) throw Invalid{"domain_tags", "must be an array of strings"};
      p.domain_tags.push_back(tag.get<std::string>());
    }
  }
  return p;
}

ImageRef parse_attachment(const Json& a, std::size_t i) {
  const auto field = "attachments[" + std::to_string(i) + "]";
  try {
    if (a.is_string()) return load_image(a.get<std::string>());
    if (a.is_object() && a.contains("path")) return load_image(a.at("path").get<std::string>());
    if (a.is_object() && a.contains("data")) {
      return image_from_bytes(base64::decode(a.at("data").get<std::string>()));
    }
  } catch (const std::exception& e) {
    throw Invalid{field, e.what()};
  }
  throw Invalid{field, "expected a path or {\"data\": base64}"};
}

}  // namespace

Service::Service(Gateway& gateway, AppConfig config, Options options)
    : gateway_(gateway), config_(std::move(config)), options_(options) {
  const int n = std::max(1, options_.max_concurrent_runs);
  for (int i = 0; i < n; ++i) workers_.emplace_back([this] { worker_loop(); });
}

Service::~Service() {
  stop();
  {
    std::lock_guard lock(jobs_mu_);
    stopping_ = true;
  }
  jobs_cv_.notify_all();
  for (auto& w : workers_) w.join();
}

Reply Service::register_client(const std::string& body) {
  ClientProfile profile;
  try {
    profile = parse_profile(Json::parse(body));
  } catch (const Json::exception& e) {
    return error_reply(422, std::string("malformed JSON: ") + e.what());
  } catch (const Invalid& e) {
    return error_reply(422, e.message, e.field);
  }
  if (profile.backend.kind == BackendKind::Mock && !gateway_.has_mock(profile.backend.model_id)) {
    return error_reply(422, "no mock script registered for this model_id", "backend.model_id");
  }
  std::unique_lock lock(pool_mu_);
  if (const auto* existing = config_.clients.find(profile.name)) {
    if (*existing == profile) return json_reply(200, {{"name", profile.name}});
    return error_reply(409, "client '" + profile.name + "' already registered with a different profile");
  }
  config_.clients.add(profile);
  return json_reply(201, {{"name", profile.name}});
}

Reply Service::submit_query(const std::string& body) {
  Pending pending;
  try {
    const auto j = Json::parse(body);
    if (!j.is_object()) throw Invalid{"", "body must be a JSON object"};
    pending.query.text = require_string(j, "text");
    if (auto it = j.find("mode"); it != j.end() && !it->is_null()) {
      try {
        pending.query.mode = query_mode_from_string(it->get<std::string>());
      } catch (const std::exception&) {
        throw Invalid{"mode", "must be 'language' or 'vision_language'"};
      }
    }
    if (auto it = j.find("attachments"); it != j.end() && !it->is_null()) {
      if (!it->is_array()) throw Invalid{"attachments", "must be an array"};
      for (std::size_t i = 0; i < it->size(); ++i) {
        pending.query.attachments.push_back(parse_attachment(it->at(i), i));
      }
    }
    std::shared_lock lock(pool_mu_);
    pending.cfg = config_.run;
    if (auto it = j.find("k"); it != j.end() && !it->is_null()) {
      if (!it->is_number_integer() || it->get<int>() < 1) throw Invalid{"k", "must be an integer >= 1"};
      pending.cfg.k = it->get<int>();
    }
    if (auto it = j.find("max_rounds"); it != j.end() && !it->is_null()) {
      if (!it->is_number_integer() || it->get<int>() < 0 || it->get<int>() > kMaxRoundsCap) {
        throw Invalid{"max_rounds", "must be an integer in [0, 16]"};
      }
      pending.cfg.max_rounds = it->get<int>();
    }
    const bool vision = pending.query.mode == QueryMode::VisionLanguage;
    if (vision ? vlm::vision_clients(config_.clients).empty() : config_.clients.empty()) {
      return error_reply(409, vision ? "no vision-capable clients registered" : "no clients registered");
    }
  } catch (const Json::exception& e) {
    return error_reply(422, std::string("malformed JSON: ") + e.what());
  } catch (const Invalid& e) {
    return error_reply(422, e.message, e.field);
  }

  std::lock_guard lock(jobs_mu_);
  if (queue_.size() >= options_.max_queued) return error_reply(429, "run queue is full");
  do {
    pending.query.id = pipeline::make_query_id();
  } while (jobs_.contains(pending.query.id));
  const auto id = pending.query.id;
  jobs_.emplace(id, Job{});
  queue_.push_back(std::move(pending));
  jobs_cv_.notify_one();
  return json_reply(202, {{"transcript_id", id}});
}

Reply Service::get_transcript(const std::string& id) const {
  std::lock_guard lock(jobs_mu_);
  auto it = jobs_.find(id);
  if (it == jobs_.end()) return error_reply(404, "unknown transcript id");
  const auto& job = it->second;
  switch (job.state) {
    case JobState::Queued:
      return json_reply(202, {{"status", "queued"}, {"completed_rounds", 0}});
    case JobState::Running:
      return json_reply(202, {{"status", "running"}, {"completed_rounds", job.completed_rounds}});
    case JobState::Done:
      return {200, job.body};
    case JobState::Failed:
      return {500, job.body};
  }
  return error_reply(500, "unknown job state");
}

Reply Service::usage() const {
  Json bindings = Json::object();
  Usage totals;
  for (const auto& [key, u] : gateway_.usage()) {
    bindings[key] = u;
    totals += u;
  }
  return json_reply(200, {{"bindings", bindings}, {"totals", totals}});
}

Reply Service::health() const { return json_reply(200, {{"status", "ok"}}); }

void Service::worker_loop() {
  for (;;) {
    Pending pending;
    {
      std::unique_lock lock(jobs_mu_);
      jobs_cv_.wait(lock, [&] { return stopping_ || !queue_.empty(); });
      if (stopping_) return;
      pending = std::move(queue_.front());
      queue_.pop_front();
      jobs_[pending.query.id].state = JobState::Running;
    }
    execute(std::move(pending));
  }
}

void Service::execute(Pending pending) {
  const auto id = pending.query.id;
  auto progress = [&](int completed) {
    std::lock_guard lock(jobs_mu_);
    jobs_[id].completed_rounds = completed;
  };
  Job done;
  try {
    ClientPool pool;
    std::optional<router::JudgeConfig> judge;
    BackendBinding server;
    PromptSet prompts;
    {
      std::shared_lock lock(pool_mu_);
      pool = config_.clients;
      judge = config_.judge;
      server = config_.server;
      prompts = config_.prompts;
    }
    const auto t =
        pending.query.mode == QueryMode::VisionLanguage
            ? vlm::run_vlm_collaboration(gateway_, pending.query, vlm::vision_clients(pool),
                                         pending.cfg, prompts, progress)
            : pipeline::run_collaboration(gateway_, pending.query, pool, pending.cfg, judge, server,
                                          prompts, progress);
    if (options_.store != nullptr) options_.store->append_transcript(t);
    done.state = JobState::Done;
    done.completed_rounds = static_cast<int>(t.rounds.size()) - 1;
    done.body = encode(t);
  } catch (const std::exception& e) {
    done.state = JobState::Failed;
    std::string kind = "internal";
    if (const auto* err = dynamic_cast<const Error*>(&e)) kind = std::string(to_string(err->code()));
    done.body = Json{{"status", "failed"}, {"error", kind}, {"message", e.what()}}.dump();
  }
  std::lock_guard lock(jobs_mu_);
  jobs_[id] = std::move(done);
}

void Service::mount() {
  auto send = [](httplib::Response& res, const Reply& r) {
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  http_->Post("/v1/clients", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, register_client(req.body));
  });
  http_->Post("/v1/queries", [this, send](const httplib::Request& req, httplib::Response& res) {
    send(res, submit_query(req.body));
  });
  http_->Get(R"(/v1/transcripts/([A-Za-z0-9_\-]+))",
             [this, send](const httplib::Request& req, httplib::Response& res) {
               send(res, get_transcript(req.matches[1]));
             });
  http_->Get("/v1/usage", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, usage());
  });
  http_->Get("/healthz", [this, send](const httplib::Request&, httplib::Response& res) {
    send(res, health());
  });
}

int Service::start(const std::string& host, int port) {
  http_ = std::make_unique<httplib::Server>();
  mount();
  const int bound = port == 0 ? http_->bind_to_any_port(host) : (http_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::Io, "cannot bind " + host + ":" + std::to_string(port));
  http_thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return bound;
}

void Service::serve(const std::string& host, int port) {
  http_ = std::make_unique<httplib::Server>();
  mount();
  if (!http_->listen(host, port)) {
    throw Error(ErrorCode::Io, "cannot listen on " + host + ":" + std::to_string(port));
  }
}

void Service::stop() {
  if (http_) http_->stop();
  if (http_thread_.joinable()) http_thread_.join();
}

}  // namespace colm::service
