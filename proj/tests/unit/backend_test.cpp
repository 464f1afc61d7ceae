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

#include <atomic>
#include <cstdlib>
#include <random>
#include <regex>
#include <thread>

#include "colm/backend/gateway.hpp"
#include "colm/backend/image.hpp"
#include "colm/backend/mock.hpp"
#include "colm/backend/render.hpp"
#include "colm/core/base64.hpp"
#include "colm/core/codec.hpp"
#include "colm/core/error.hpp"
#include "colm/core/text.hpp"
#include "fixtures.hpp"

namespace colm {
namespace {

using testing::mock_binding;

// ASCII form of the GPT-2 pre-tokenizer pattern, used as an oracle.
std::int64_t regex_piece_count(const std::string& s) {
  static const std::regex re(
      R"('s|'t|'re|'ve|'m|'ll|'d| ?[A-Za-z]+| ?[0-9]+| ?[^\sA-Za-z0-9]+|\s+(?!\S)|\s+)");
  return std::distance(std::sregex_iterator(s.begin(), s.end(), re), std::sregex_iterator());
}

TEST(TokenCount, MatchesKnownSplits) {
  EXPECT_EQ(text::approx_token_count("I don't know"), 4);
  EXPECT_EQ(text::approx_token_count(""), 0);
  EXPECT_EQ(text::approx_token_count("42"), 1);
  EXPECT_EQ(text::approx_token_count("Hello, world!"), 4);
}

TEST(TokenCount, AgreesWithRegexOracleOnRandomAscii) {
  std::mt19937 rng(11);
  const std::string alphabet = "ab Z09'.,!\n\t  stdrevml";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string s(rng() % 24, ' ');
    for (auto& c : s) c = alphabet[rng() % alphabet.size()];
    ASSERT_EQ(text::approx_token_count(s), regex_piece_count(s)) << "input: [" << s << "]";
  }
}

TEST(Mock, FirstMatchingRuleWins) {
  MockScript script;
  script.when_system("math", MockReply::literal("42"));
  const auto c = run_mock(script, {Message::system("You are a helpful math assistant."),
                                   Message::user("What is six times seven?")});
  EXPECT_EQ(c.text, "42");
  EXPECT_EQ(c.usage.call_count, 1);
}

TEST(Mock, DefaultReplyAndUsage) {
  const MockScript script;
  const auto c = run_mock(script, {Message::user("anything at all")});
  EXPECT_EQ(c.text, "I don't know");
  EXPECT_EQ(c.usage.completion_tokens, 4);
  EXPECT_EQ(c.usage.prompt_tokens, 3);
}

TEST(Mock, EqualsModeAndAssistantMatcher) {
  MockScript script;
  MockRule rule;
  rule.mode = MockRule::Mode::Equals;
  rule.last_user = "refine";
  rule.last_assistant = "draft";
  rule.reply = MockReply::literal("final");
  script.rules.push_back(rule);
  EXPECT_EQ(run_mock(script, {Message::user("q"), Message::assistant("draft"), Message::user("refine")}).text,
            "final");
  EXPECT_EQ(run_mock(script, {Message::user("q"), Message::assistant("other"), Message::user("refine")}).text,
            "I don't know");
  EXPECT_EQ(run_mock(script, {Message::user("q"), Message::assistant("draft"), Message::user("refine it")}).text,
            "I don't know");
}

TEST(Mock, EchoBetweenAndPlaceholderReplies) {
  MockScript echo;
  echo.otherwise(MockReply::echo_user());
  EXPECT_EQ(run_mock(echo, {Message::user("ping")}).text, "ping");

  MockScript between;
  between.otherwise(MockReply::between("<", ">"));
  EXPECT_EQ(run_mock(between, {Message::user("a <inner> b >")}).text, "inner");

  MockScript slot;
  slot.otherwise(MockReply::placeholder_value("Q: {x}\nEnd.", "x"));
  EXPECT_EQ(run_mock(slot, {Message::user("Q: value here\nEnd.")}).text, "value here");
}

TEST(Mock, FailRepliesThrow) {
  MockScript timeout;
  timeout.otherwise(MockReply::fail("timeout"));
  try {
    (void)run_mock(timeout, {Message::user("x")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Timeout);
    EXPECT_EQ(e.attempts(), 1);
  }
  MockScript remote;
  remote.otherwise(MockReply::fail("remote", 503));
  try {
    (void)run_mock(remote, {Message::user("x")});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Remote);
    EXPECT_EQ(e.status(), 503);
  }
}

TEST(Mock, ScriptJsonRoundTrip) {
  MockScript script;
  script.when_user("hi", MockReply::literal("hello"));
  script.when_system("sys", MockReply::between("[", "]"));
  script.when_user("boom", MockReply::fail("remote", 500));
  script.when_user("echo", MockReply::echo_user());
  script.otherwise(MockReply::literal("fallback"));
  const Json j = script;
  const auto back = j.get<MockScript>();
  EXPECT_EQ(Json(back), j);
  EXPECT_EQ(run_mock(back, {Message::user("say hi")}).text, "hello");
}

TEST(Render, SystemAndUserMessages) {
  CallParams params;
  params.temperature = 0.0;
  const auto body = Json::parse(render_chat_request(
      mock_binding("m"), {Message::system("s"), Message::user("u")}, params));
  ASSERT_EQ(body.at("messages").size(), 2u);
  EXPECT_EQ(body["messages"][0]["role"], "system");
  EXPECT_EQ(body["messages"][1]["role"], "user");
  EXPECT_EQ(body["messages"][1]["content"], "u");
  EXPECT_EQ(body.at("temperature"), 0.0);
  EXPECT_EQ(body.at("model"), "m");
  EXPECT_FALSE(body.contains("seed"));
}

TEST(Render, ImageBecomesDataUrlPart) {
  const auto bytes = testing::read_bytes(testing::pixel_png_path());
  ASSERT_FALSE(bytes.empty());
  const auto image = load_image(testing::pixel_png_path());
  EXPECT_EQ(image.media_type, "image/png");
  const auto body = Json::parse(render_chat_request(
      mock_binding("v", true), {Message::user("describe", {image})}, CallParams{}));
  const auto& parts = body["messages"][0]["content"];
  ASSERT_TRUE(parts.is_array());
  ASSERT_EQ(parts.size(), 2u);
  EXPECT_EQ(parts[0]["type"], "text");
  EXPECT_EQ(parts[1]["type"], "image_url");
  const std::string url = parts[1]["image_url"]["url"];
  const std::string prefix = "data:image/png;base64,";
  ASSERT_EQ(url.rfind(prefix, 0), 0u);
  // Oracle: encode the fixture file independently.
  EXPECT_EQ(url.substr(prefix.size()), base64::encode(bytes));
}

TEST(Render, ImageToNonVisionBindingIsRejected) {
  const auto image = load_image(testing::pixel_png_path());
  try {
    (void)render_chat_request(mock_binding("text-only"), {Message::user("x", {image})}, CallParams{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapabilityMismatch);
  }
}

TEST(Image, DetectsMediaTypes) {
  EXPECT_EQ(detect_media_type(std::string("\xFF\xD8\xFF\xE0", 4)), "image/jpeg");
  EXPECT_THROW((void)image_from_bytes("plain text"), Error);
}

TEST(Gateway, RoutesMocksAndTracksUsagePerBinding) {
  Gateway gw;
  MockScript a;
  a.otherwise(MockReply::literal("alpha reply"));
  gw.register_mock("a", a);
  const auto binding = mock_binding("a");
  (void)gw.complete(binding, {Message::user("one two")}, CallParams{});
  (void)gw.complete(binding, {Message::user("three")}, CallParams{});
  const auto u = gw.usage_for(binding);
  EXPECT_EQ(u.call_count, 2);
  EXPECT_EQ(u.prompt_tokens, 3);
  EXPECT_EQ(u.completion_tokens, 4);
  EXPECT_EQ(gw.usage_for(mock_binding("unused")).call_count, 0);
}

TEST(Gateway, UnknownMockIsConfigError) {
  Gateway gw;
  try {
    (void)gw.complete(mock_binding("missing"), {Message::user("x")}, CallParams{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Config);
  }
}

TEST(Gateway, CaptureRecordsRenderedRequests) {
  Gateway gw;
  gw.register_mock("a", MockScript{});
  gw.set_capture(true);
  (void)gw.complete(mock_binding("a"), {Message::user("captured text")}, CallParams{});
  const auto calls = gw.captured();
  ASSERT_EQ(calls.size(), 1u);
  EXPECT_EQ(calls[0].binding_key, mock_binding("a").key());
  EXPECT_NE(calls[0].request_body.find("captured text"), std::string::npos);
}

TEST(Gateway, InFlightLimitIsRespected) {
  Gateway::Options options;
  options.max_in_flight_per_binding = 2;
  Gateway gw(options);
  std::atomic<int> current{0};
  std::atomic<int> peak{0};
  gw.register_mock("slow", MockScript{}.otherwise(MockReply::function([&](const auto&) {
    const int now = ++current;
    int seen = peak.load();
    while (now > seen && !peak.compare_exchange_weak(seen, now)) {
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
    --current;
    return std::string("done");
  })));
  std::vector<std::thread> threads;
  for (int i = 0; i < 6; ++i) {
    threads.emplace_back([&] { (void)gw.complete(mock_binding("slow"), {Message::user("x")}, CallParams{}); });
  }
  for (auto& t : threads) t.join();
  EXPECT_LE(peak.load(), 2);
  EXPECT_EQ(gw.usage_for(mock_binding("slow")).call_count, 6);
}

class FakeChatServer {
 public:
  explicit FakeChatServer(std::vector<int> statuses) : statuses_(std::move(statuses)) {
    server_.Post("/v1/chat/completions", [this](const httplib::Request& req, httplib::Response& res) {
      const int n = hits_++;
      last_auth_ = req.get_header_value("Authorization");
      const int status = n < static_cast<int>(statuses_.size()) ? statuses_[n] : 200;
      res.status = status;
      if (status == 200) {
        res.set_content(R"({"choices":[{"message":{"role":"assistant","content":"ok"}}],)"
                        R"("usage":{"prompt_tokens":7,"completion_tokens":1}})",
                        "application/json");
      } else {
        res.set_content("upstream error", "text/plain");
      }
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~FakeChatServer() {
    server_.stop();
    thread_.join();
  }

  [[nodiscard]] BackendBinding binding() const {
    BackendBinding b;
    b.kind = BackendKind::Http;
    b.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/v1/chat/completions";
    b.model_id = "fake";
    b.auth_env_var = "COLM_TEST_API_KEY";
    return b;
  }
  [[nodiscard]] int hits() const { return hits_; }
  [[nodiscard]] std::string last_auth() const { return last_auth_; }

 private:
  std::vector<int> statuses_;
  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
  std::string last_auth_;
};

Gateway::Options fast_retry() {
  Gateway::Options o;
  o.retry.base = std::chrono::milliseconds(1);
  return o;
}

TEST(GatewayHttp, RetriesServerErrorsThenSucceeds) {
  ::setenv("COLM_TEST_API_KEY", "secret", 1);
  FakeChatServer server({500, 500, 200});
  Gateway gw(fast_retry());
  CallParams params;
  params.max_retries = 2;
  params.timeout = std::chrono::milliseconds(5000);
  const auto c = gw.complete(server.binding(), {Message::user("hi")}, params);
  EXPECT_EQ(c.text, "ok");
  EXPECT_EQ(c.usage.call_count, 3);
  EXPECT_EQ(c.usage.prompt_tokens, 7);
  EXPECT_EQ(server.hits(), 3);
  EXPECT_EQ(server.last_auth(), "Bearer secret");
}

TEST(GatewayHttp, GivesUpAfterMaxRetries) {
  ::setenv("COLM_TEST_API_KEY", "secret", 1);
  FakeChatServer server({503, 503, 503, 503});
  Gateway gw(fast_retry());
  CallParams params;
  params.max_retries = 1;
  try {
    (void)gw.complete(server.binding(), {Message::user("hi")}, params);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Remote);
    EXPECT_EQ(e.status(), 503);
    EXPECT_EQ(e.attempts(), 2);
  }
  EXPECT_EQ(server.hits(), 2);
  EXPECT_EQ(gw.usage_for(server.binding()).call_count, 2);
}

TEST(GatewayHttp, ClientErrorsAreNotRetried) {
  ::setenv("COLM_TEST_API_KEY", "secret", 1);
  FakeChatServer server({400});
  Gateway gw(fast_retry());
  EXPECT_THROW((void)gw.complete(server.binding(), {Message::user("hi")}, CallParams{}), Error);
  EXPECT_EQ(server.hits(), 1);
}

TEST(GatewayHttp, MissingCredentialIsConfigError) {
  FakeChatServer server({});
  auto binding = server.binding();
  binding.auth_env_var = "COLM_TEST_UNSET_VARIABLE";
  ::unsetenv("COLM_TEST_UNSET_VARIABLE");
  Gateway gw;
  try {
    (void)gw.complete(binding, {Message::user("hi")}, CallParams{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Config);
  }
  EXPECT_EQ(server.hits(), 0);
}

TEST(RetryPolicy, CeilingGrowsGeometrically) {
  RetryPolicy p;
  EXPECT_EQ(p.ceiling(1).count(), 500);
  EXPECT_EQ(p.ceiling(2).count(), 1000);
  EXPECT_EQ(p.ceiling(3).count(), 2000);
}

}  // namespace
}  // namespace colm
