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
#include <condition_variable>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <thread>
#include <vector>

#include "colm/backend/gateway.hpp"
#include "colm/config/config.hpp"
#include "colm/store/store.hpp"

namespace httplib {
class Server;
}

namespace colm::service {

struct Options {
  int max_concurrent_runs = 8;
  std::size_t max_queued = 128;
  store::Store* store = nullptr;  // completed transcripts are appended when set
};

struct Reply {
  int status = 200;
  std::string body;
};

/// HTTP facade over the pipelines.
///
///   POST /v1/clients            register a ClientProfile
///   POST /v1/queries            enqueue a run, 202 {transcript_id}
///   GET  /v1/transcripts/{id}   200 transcript | 202 {status, completed_rounds}
///   GET  /v1/usage              per-binding usage since start
///   GET  /healthz
///
/// Runs execute on a fixed worker pool; a full queue answers 429. The handler
/// methods are public so the routing layer stays a thin adapter.
class Service {
 public:
  Service(Gateway& gateway, AppConfig config, Options options = {});
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Reply register_client(const std::string& body);
  Reply submit_query(const std::string& body);
  Reply get_transcript(const std::string& id) const;
  Reply usage() const;
  Reply health() const;

  // Binds and serves on a background thread; port 0 picks a free port.
  // Returns the bound port. Throws Error(Io) when binding fails.
  int start(const std::string& host, int port);
  // Blocks until stop() is called from another thread.
  void serve(const std::string& host, int port);
  void stop();

 private:
  enum class JobState { Queued, Running, Done, Failed };

  struct Job {
    JobState state = JobState::Queued;
    int completed_rounds = 0;
    std::string body;  // final response body once Done/Failed
  };

  struct Pending {
    Query query;
    RunConfig cfg;
  };

  void worker_loop();
  void execute(Pending pending);
  void mount();

  Gateway& gateway_;
  AppConfig config_;
  Options options_;

  mutable std::shared_mutex pool_mu_;

  mutable std::mutex jobs_mu_;
  std::condition_variable jobs_cv_;
  std::deque<Pending> queue_;
  std::map<std::string, Job> jobs_;
  bool stopping_ = false;
  std::vector<std::thread> workers_;

  std::unique_ptr<httplib::Server> http_;
  std::thread http_thread_;
};

}  // namespace colm::service
