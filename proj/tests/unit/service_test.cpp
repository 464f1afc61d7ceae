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

#include <gtest/gtest.h>

#include <httplib.h>

#include <chrono>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "colm/core/base64.hpp"
#include "colm/core/codec.hpp"
#include "colm/core/validate.hpp"
#include "colm/service/service.hpp"
#include "fixtures.hpp"

namespace colm::service {
namespace {

using namespace std::chrono_literals;
using testing::mock_binding;
using testing::TempDir;

AppConfig base_config(Gateway& gw) {
  AppConfig cfg;
  cfg.server = testing::echo_server(gw, "server");
  gw.register_mock("math", testing::copy_refiner("4"));
  gw.register_mock("vision", testing::copy_refiner("a red pixel"));
  return cfg;
}

std::string profile(const std::string& name, const std::string& role, const std::string& model,
                    bool vision = false) {
  return Json{{"name", name},
              {"role_prompt", role},
              {"backend", {{"kind", "mock"}, {"model_id", model}, {"vision", vision}}}}
      .dump();
}

Reply wait_done(Service& s, const std::string& id) {
  const auto deadline = std::chrono::steady_clock::now() + 10s;
  for (;;) {
    auto r = s.get_transcript(id);
    if (r.status != 202 || std::chrono::steady_clock::now() > deadline) return r;
    std::this_thread::sleep_for(2ms);
  }
}

std::string transcript_id(const Reply& r) { return Json::parse(r.body).at("transcript_id"); }

TEST(Service, RegisterClient) {
  Gateway gw;
  Service s(gw, base_config(gw), {1, 8, nullptr});
  EXPECT_EQ(s.register_client(profile("math", "You are an expert in math", "math")).status, 201);
  EXPECT_EQ(s.register_client(profile("math", "You are an expert in math", "math")).status, 200);
  EXPECT_EQ(s.register_client(profile("math", "You are an expert in algebra", "math")).status, 409);

  const auto missing = s.register_client(R"({"name":"x","backend":{"kind":"mock","model_id":"math"}})");
  EXPECT_EQ(missing.status, 422);
  EXPECT_EQ(Json::parse(missing.body).at("field"), "role_prompt");

  EXPECT_EQ(s.register_client("not json").status, 422);
  EXPECT_EQ(s.register_client(profile("ghost", "You haunt", "no-such-mock")).status, 422);
}

TEST(Service, SubmitPollFetch) {
  Gateway gw;
  TempDir dir;
  store::Store store(dir.path());
  Service s(gw, base_config(gw), {2, 8, &store});
  ASSERT_EQ(s.register_client(profile("math", "You are an expert in math", "math")).status, 201);
  const auto submitted = s.submit_query(R"({"text":"What is 2+2?","max_rounds":1})");
  ASSERT_EQ(submitted.status, 202);
  const auto id = transcript_id(submitted);
  const auto first = wait_done(s, id);
  ASSERT_EQ(first.status, 200) << first.body;
  const auto second = s.get_transcript(id);
  EXPECT_EQ(first.body, second.body);
  const auto t = decode_transcript(first.body);
  EXPECT_EQ(t.id(), id);
  EXPECT_EQ(validate_transcript(t), std::vector<std::string>{});
  EXPECT_EQ(store.load_transcript(id), t);

  const auto usage = Json::parse(s.usage().body);
  EXPECT_EQ(usage.at("totals").at("call_count"), 3);
}

TEST(Service, ValidationAndConflicts) {
  Gateway gw;
  Service s(gw, base_config(gw), {1, 8, nullptr});
  EXPECT_EQ(s.submit_query(R"({"text":"no clients yet"})").status, 409);
  ASSERT_EQ(s.register_client(profile("math", "You are an expert in math", "math")).status, 201);
  EXPECT_EQ(s.submit_query(R"({"text":"   "})").status, 422);
  EXPECT_EQ(s.submit_query(R"({"text":"q","k":0})").status, 422);
  EXPECT_EQ(s.submit_query(R"({"text":"q","max_rounds":17})").status, 422);
  EXPECT_EQ(s.submit_query(R"({"text":"q","mode":"audio"})").status, 422);
  EXPECT_EQ(s.submit_query(R"({"text":"q","attachments":[{"data":"bm90IGFuIGltYWdl"}]})").status, 422);
  EXPECT_EQ(s.submit_query(R"({"text":"q","mode":"vision_language"})").status, 409);
  EXPECT_EQ(s.get_transcript("q-unknown").status, 404);
}

TEST(Service, VisionQueryUsesVisionClients) {
  Gateway gw;
  Service s(gw, base_config(gw), {1, 8, nullptr});
  ASSERT_EQ(s.register_client(profile("math", "You are an expert in math", "math")).status, 201);
  ASSERT_EQ(s.register_client(profile("eye", "You see images", "vision", true)).status, 201);
  const auto png = base64::encode(testing::read_bytes(testing::pixel_png_path()));
  const auto r = s.submit_query(
      Json{{"text", "What is shown?"}, {"mode", "vision_language"}, {"attachments", {{{"data", png}}}}}.dump());
  ASSERT_EQ(r.status, 202) << r.body;
  const auto done = wait_done(s, transcript_id(r));
  ASSERT_EQ(done.status, 200) << done.body;
  const auto t = decode_transcript(done.body);
  EXPECT_EQ(t.selection.names(), std::vector<std::string>{"eye"});
  EXPECT_EQ(t.query.attachments.size(), 1u);
}

TEST(Service, FullQueueAnswers429) {
  Gateway gw;
  auto cfg = base_config(gw);
  std::mutex mu;
  std::condition_variable cv;
  bool started = false;
  bool release = false;
  gw.register_mock("blocking", MockScript{}.otherwise(MockReply::function([&](const auto&) {
    std::unique_lock lock(mu);
    started = true;
    cv.notify_all();
    cv.wait(lock, [&] { return release; });
    return std::string("done");
  })));
  Service s(gw, std::move(cfg), {1, 1, nullptr});
  ASSERT_EQ(s.register_client(profile("slow", "You are slow", "blocking")).status, 201);
  const auto first = s.submit_query(R"({"text":"one","max_rounds":0})");
  ASSERT_EQ(first.status, 202);
  {
    std::unique_lock lock(mu);
    ASSERT_TRUE(cv.wait_for(lock, 10s, [&] { return started; }));
  }
  const auto running = Json::parse(s.get_transcript(transcript_id(first)).body);
  EXPECT_EQ(running.at("status"), "running");
  EXPECT_EQ(s.submit_query(R"({"text":"two","max_rounds":0})").status, 202);
  EXPECT_EQ(s.submit_query(R"({"text":"three","max_rounds":0})").status, 429);
  {
    std::lock_guard lock(mu);
    release = true;
  }
  cv.notify_all();
  EXPECT_EQ(wait_done(s, transcript_id(first)).status, 200);
}

TEST(Service, FailedRunIsReported) {
  Gateway gw;
  gw.register_mock("down", MockScript{}.otherwise(MockReply::fail("remote", 500)));
  Service s(gw, base_config(gw), {1, 8, nullptr});
  ASSERT_EQ(s.register_client(profile("down", "You are down", "down")).status, 201);
  const auto r = s.submit_query(R"({"text":"q"})");
  const auto done = wait_done(s, transcript_id(r));
  EXPECT_EQ(done.status, 500);
  EXPECT_EQ(Json::parse(done.body).at("error"), "all_clients_failed");
}

TEST(Service, HttpRoutes) {
  Gateway gw;
  Service s(gw, base_config(gw), {2, 8, nullptr});
  const int port = s.start("127.0.0.1", 0);
  ASSERT_GT(port, 0);
  httplib::Client client("127.0.0.1", port);
  auto health = client.Get("/healthz");
  ASSERT_TRUE(health);
  EXPECT_EQ(health->status, 200);

  auto reg = client.Post("/v1/clients", profile("math", "You are an expert in math", "math"), "application/json");
  ASSERT_TRUE(reg);
  EXPECT_EQ(reg->status, 201);
  auto sub = client.Post("/v1/queries", R"({"text":"What is 2+2?"})", "application/json");
  ASSERT_TRUE(sub);
  ASSERT_EQ(sub->status, 202);
  const auto id = Json::parse(sub->body).at("transcript_id").get<std::string>();
  httplib::Result got;
  const auto deadline = std::chrono::steady_clock::now() + 10s;
  do {
    got = client.Get("/v1/transcripts/" + id);
    ASSERT_TRUE(got);
  } while (got->status == 202 && std::chrono::steady_clock::now() < deadline);
  EXPECT_EQ(got->status, 200);
  auto again = client.Get("/v1/transcripts/" + id);
  ASSERT_TRUE(again);
  EXPECT_EQ(again->body, got->body);
  EXPECT_EQ(client.Get("/v1/transcripts/q-none")->status, 404);
  EXPECT_EQ(client.Get("/v1/usage")->status, 200);
  s.stop();
}

}  // namespace
}  // namespace colm::service
