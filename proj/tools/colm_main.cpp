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

// colm: operator entry point.
//
//   colm serve  --config <path> --listen <host:port>
//   colm ask    --config <path> --text <q> [--image <path>]* [--k N] [--rounds R] [--mode lang|vlm]
//   colm bench  --config <path> --items <jsonl> --variant baseline:<client>|colm [--ablate loo|scale|rounds]*
//   colm replay --id <transcript_id>
//
// Exit codes: 0 success, 1 runtime error, 2 pipeline failure (ask), 3 replay
// mismatch, 64 usage error.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "colm/backend/image.hpp"
#include "colm/config/config.hpp"
#include "colm/core/codec.hpp"
#include "colm/core/error.hpp"
#include "colm/eval/report.hpp"
#include "colm/eval/runner.hpp"
#include "colm/pipeline/pipeline.hpp"
#include "colm/service/service.hpp"
#include "colm/store/replay.hpp"
#include "colm/store/store.hpp"
#include "colm/vlm/vlm_pipeline.hpp"

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitPipeline = 2;
constexpr int kExitReplayMismatch = 3;
constexpr int kExitUsage = 64;

colm::service::Service* g_service = nullptr;

void on_signal(int) {
  if (g_service != nullptr) g_service->stop();
}

std::pair<std::string, int> split_listen(const std::string& listen) {
  const auto colon = listen.rfind(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--listen", "expected host:port");
  return {listen.substr(0, colon), std::stoi(listen.substr(colon + 1))};
}

colm::QueryMode parse_mode(const std::string& mode) {
  return mode == "vlm" ? colm::QueryMode::VisionLanguage : colm::QueryMode::Language;
}

int cmd_serve(const std::string& config_path, const std::string& listen, const std::string& data_dir,
              int workers, std::size_t queue) {
  auto config = colm::load_config(config_path);
  colm::Gateway gateway;
  config.install_mocks(gateway);
  colm::store::Store store(data_dir);
  colm::service::Service service(gateway, std::move(config),
                                 {workers, queue, &store});
  const auto [host, port] = split_listen(listen);
  g_service = &service;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cerr << "colm: listening on " << host << ":" << port << "\n";
  service.serve(host, port);
  g_service = nullptr;
  return 0;
}

int cmd_ask(const std::string& config_path, const std::string& text,
            const std::vector<std::string>& images, std::optional<int> k, std::optional<int> rounds,
            const std::string& mode, const std::string& data_dir) {
  auto config = colm::load_config(config_path);
  colm::Gateway gateway;
  config.install_mocks(gateway);

  colm::RunConfig cfg = config.run;
  if (k) cfg.k = *k;
  if (rounds) cfg.max_rounds = *rounds;
  colm::check_run_config(cfg);

  colm::Query q;
  q.id = colm::pipeline::make_query_id();
  q.text = text;
  q.mode = parse_mode(mode);
  for (const auto& path : images) q.attachments.push_back(colm::load_image(path));

  colm::CollaborationTranscript t;
  try {
    t = q.mode == colm::QueryMode::VisionLanguage
            ? colm::vlm::run_vlm_collaboration(gateway, q, colm::vlm::vision_clients(config.clients),
                                               cfg, config.prompts)
            : colm::pipeline::run_collaboration(gateway, q, config.clients, cfg, config.judge,
                                                config.server, config.prompts);
  } catch (const colm::Error& e) {
    if (e.code() == colm::ErrorCode::AllClientsFailed || e.code() == colm::ErrorCode::ServerFailed) {
      std::cerr << "colm ask: " << e.what() << "\n";
      return kExitPipeline;
    }
    throw;
  }

  colm::store::Store store(data_dir);
  store.append_transcript(t);

  std::cout << "transcript: " << t.id() << "\n";
  std::cout << "rounds: " << t.rounds.size() - 1 << "\n";
  for (const auto& [name, answer] : t.finals) {
    std::cout << "\n== " << name << " ==\n" << answer << "\n";
  }
  if (auto server = t.server_output()) {
    std::cout << "\n== server guidance ==\n" << *server << "\n";
  }
  return 0;
}

int cmd_bench(const std::string& config_path, const std::string& items_path,
              const std::string& variant_str, const std::vector<std::string>& ablations,
              const std::vector<int>& ks, const std::vector<int>& rounds_list,
              const std::string& mode, const std::string& reports_dir, const std::string& data_dir,
              std::string run_id) {
  auto config = colm::load_config(config_path);
  colm::Gateway gateway;
  config.install_mocks(gateway);
  colm::store::Store store(data_dir);

  const auto items = colm::eval::load_benchmark(items_path);
  const auto variant = colm::eval::Variant::parse(variant_str);
  const auto qmode = parse_mode(mode);
  if (run_id.empty()) {
    run_id = std::filesystem::path(items_path).stem().string() + "-" +
             (variant.kind == colm::eval::Variant::Kind::Colm ? "colm" : "baseline-" + variant.client);
  }

  colm::eval::Harness h{gateway, config.server, config.prompts, config.judge, config.grader,
                        config.scale, &store};
  colm::eval::ReportInput report;
  report.run_id = run_id;
  bool complete = true;

  const auto& pool = config.clients;
  if (variant.kind == colm::eval::Variant::Kind::Baseline) {
    auto run = colm::eval::run_benchmark(h, items, qmode, pool, config.run, variant, run_id);
    complete = complete && run.complete();
    report.baselines.push_back(std::move(run));
  } else {
    const auto members = qmode == colm::QueryMode::VisionLanguage ? colm::vlm::vision_clients(pool)
                                                                  : pool.profiles();
    for (const auto& p : members) {
      auto run = colm::eval::run_benchmark(h, items, qmode, pool, config.run,
                                           colm::eval::Variant::baseline(p.name),
                                           run_id + "-baseline-" + p.name);
      complete = complete && run.complete();
      report.baselines.push_back(std::move(run));
    }
    auto run = colm::eval::run_benchmark(h, items, qmode, pool, config.run, variant, run_id);
    complete = complete && run.complete();
    report.colm = std::move(run);
  }

  for (const auto& kind : ablations) {
    colm::eval::Ablation a;
    if (kind == "loo") {
      a = colm::eval::ablate_leave_one_out(h, items, qmode, pool, config.run, run_id);
    } else if (kind == "scale") {
      std::vector<int> sweep = ks;
      if (sweep.empty()) {
        for (int k = 1; k <= static_cast<int>(pool.size()); ++k) sweep.push_back(k);
      }
      a = colm::eval::ablate_user_scale(h, items, qmode, pool, config.run, sweep, run_id);
    } else {
      std::vector<int> sweep = rounds_list.empty() ? std::vector<int>{0, 1, 2, 3} : rounds_list;
      a = colm::eval::ablate_rounds(h, items, qmode, pool, config.run, sweep, run_id);
    }
    for (const auto& r : a.runs) complete = complete && r.complete();
    report.ablations.push_back(std::move(a));
  }

  const auto dir = colm::eval::emit_report(reports_dir, report);
  std::cout << colm::eval::render_report_table(report);
  for (const auto& a : report.ablations) std::cout << "\n" << colm::eval::render_ablation_csv(a);
  std::cout << "\nreport: " << (dir / "report.md").string() << "\n";
  if (!complete) {
    std::cerr << "colm bench: some items failed to score\n";
    return kExitRuntime;
  }
  return 0;
}

int cmd_replay(const std::string& id, const std::string& data_dir) {
  colm::store::Store store(data_dir);
  const auto stored = store.load_transcript(id);
  const auto replayed = colm::store::replay(stored);
  const auto diffs = colm::store::text_differences(stored, replayed);
  if (diffs.empty()) {
    std::cout << "replay of " << id << ": texts identical\n";
    return 0;
  }
  std::cout << "replay of " << id << ": " << diffs.size() << " differences\n";
  for (const auto& d : diffs) std::cout << "  " << d << "\n";
  return kExitReplayMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Client-server collaboration over specialized language models"};
  app.require_subcommand(1);

  std::string config_path;
  std::string data_dir = "colm-data";

  auto* serve = app.add_subcommand("serve", "Run the HTTP service");
  std::string listen = "127.0.0.1:8080";
  int workers = 8;
  std::size_t queue = 128;
  serve->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  serve->add_option("--listen", listen, "host:port");
  serve->add_option("--data-dir", data_dir, "Transcript store directory");
  serve->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
  serve->add_option("--queue", queue, "Queued runs before 429");

  auto* ask = app.add_subcommand("ask", "Run one collaboration locally");
  std::string text;
  std::vector<std::string> images;
  std::optional<int> k;
  std::optional<int> rounds;
  std::string mode = "lang";
  ask->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  ask->add_option("--text", text, "Query text")->required();
  ask->add_option("--image", images, "Image attachment (repeatable)")->check(CLI::ExistingFile);
  ask->add_option("--k", k, "Clients to select");
  ask->add_option("--rounds", rounds, "Collaboration rounds");
  ask->add_option("--mode", mode, "lang or vlm")->check(CLI::IsMember({"lang", "vlm"}));
  ask->add_option("--data-dir", data_dir, "Transcript store directory");

  auto* bench = app.add_subcommand("bench", "Run the benchmark harness");
  std::string items_path;
  std::string variant = "colm";
  std::vector<std::string> ablations;
  std::vector<int> ks;
  std::vector<int> rounds_list;
  std::string reports_dir = "reports";
  std::string run_id;
  bench->add_option("--config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  bench->add_option("--items", items_path, "Benchmark JSONL")->required()->check(CLI::ExistingFile);
  bench->add_option("--variant", variant, "baseline:<client> or colm");
  bench->add_option("--ablate", ablations, "loo, scale or rounds (repeatable)")
      ->check(CLI::IsMember({"loo", "scale", "rounds"}));
  bench->add_option("--ks", ks, "k values for the scale ablation");
  bench->add_option("--rounds-list", rounds_list, "Round counts for the rounds ablation");
  bench->add_option("--mode", mode, "lang or vlm")->check(CLI::IsMember({"lang", "vlm"}));
  bench->add_option("--reports-dir", reports_dir, "Report root directory");
  bench->add_option("--data-dir", data_dir, "Manifest store directory");
  bench->add_option("--run-id", run_id, "Run identifier");

  auto* replay = app.add_subcommand("replay", "Replay a stored transcript against mocks");
  std::string id;
  replay->add_option("--id", id, "Transcript id")->required();
  replay->add_option("--data-dir", data_dir, "Transcript store directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*serve) return cmd_serve(config_path, listen, data_dir, workers, queue);
    if (*ask) return cmd_ask(config_path, text, images, k, rounds, mode, data_dir);
    if (*bench) {
      return cmd_bench(config_path, items_path, variant, ablations, ks, rounds_list, mode,
                       reports_dir, data_dir, run_id);
    }
    if (*replay) return cmd_replay(id, data_dir);
  } catch (const colm::Error& e) {
    std::cerr << "colm: " << colm::to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == colm::ErrorCode::InvalidArgument || e.code() == colm::ErrorCode::Config
               ? kExitUsage
               : kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "colm: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
