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

#include <map>

#include "colm/backend/image.hpp"
#include "colm/core/codec.hpp"
#include "colm/core/error.hpp"
#include "colm/core/validate.hpp"
#include "colm/vlm/vlm_pipeline.hpp"
#include "fixtures.hpp"

namespace colm::vlm {
namespace {

using testing::last_user_text;
using testing::mock_client;

const std::string kInstruction = PromptSet::defaults().vlm_instruction;

Query image_query() {
  Query q;
  q.id = "q-vlm";
  q.text = "Which option matches the picture?";
  q.mode = QueryMode::VisionLanguage;
  q.attachments.push_back(load_image(testing::pixel_png_path()));
  return q;
}

// Counts "The answer is (X)" letters in the feedback prompt and returns the
// most frequent one, earliest on ties.
std::string majority_letter(const std::vector<Message>& messages) {
  const auto prompt = last_user_text(messages);
  std::map<char, int> votes;
  std::string order;
  for (std::size_t at = prompt.find("answer is ("); at != std::string::npos;
       at = prompt.find("answer is (", at + 1)) {
    const char c = prompt[at + 11];
    if (votes[c]++ == 0) order.push_back(c);
  }
  char best = '?';
  int best_n = 0;
  for (char c : order) {
    if (votes[c] > best_n) {
      best = c;
      best_n = votes[c];
    }
  }
  return std::string(1, best);
}

std::vector<ClientProfile> voters(Gateway& gw, const std::string& letters) {
  std::vector<ClientProfile> out;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    const auto id = "vlm-" + std::to_string(i);
    MockScript s;
    s.when_user(kInstruction, MockReply::function(majority_letter));
    s.otherwise(MockReply::literal("The answer is (" + std::string(1, letters[i]) + ")."));
    gw.register_mock(id, s);
    out.push_back(mock_client(id, "You are vision model " + std::to_string(i), id, true));
  }
  return out;
}

TEST(Distribute, FourVisionClientsAnswer) {
  Gateway gw;
  const auto clients = voters(gw, "AABC");
  const auto out = vlm_distribute(gw, image_query(), clients, RunConfig{});
  ASSERT_EQ(out.size(), 4u);
  EXPECT_EQ(out[2].text, "The answer is (B).");
}

TEST(Distribute, NonVisionClientIsRejectedBeforeAnyCall) {
  Gateway gw;
  auto clients = voters(gw, "AB");
  gw.register_mock("text", MockScript{});
  clients.push_back(mock_client("text", "You read text only", "text", false));
  try {
    (void)vlm_distribute(gw, image_query(), clients, RunConfig{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::CapabilityMismatch);
  }
  EXPECT_TRUE(gw.usage().empty());
}

TEST(Distribute, EveryRequestCarriesTheSameImageBytes) {
  Gateway gw;
  gw.set_capture(true);
  const auto clients = voters(gw, "ABCD");
  (void)vlm_distribute(gw, image_query(), clients, RunConfig{});
  const auto calls = gw.captured();
  ASSERT_EQ(calls.size(), 4u);
  std::vector<std::string> urls;
  for (const auto& call : calls) {
    const auto body = Json::parse(call.request_body);
    const auto& parts = body["messages"].back()["content"];
    ASSERT_TRUE(parts.is_array());
    urls.push_back(parts[1]["image_url"]["url"].get<std::string>());
  }
  for (const auto& url : urls) EXPECT_EQ(url, urls[0]);
  EXPECT_EQ(urls[0], to_data_url(image_query().attachments[0]));
}

ClientResponse ok(const std::string& name, const std::string& text) {
  ClientResponse r;
  r.client_name = name;
  r.text = text;
  return r;
}

TEST(FeedbackPrompt, StructureAndOrder) {
  const auto q = image_query();
  const auto p = build_vlm_feedback_prompt(q, {ok("one", "first answer"), ok("two", "second answer")});
  EXPECT_EQ(p.rfind(q.text, 0), 0u);
  EXPECT_NE(p.find("first answer"), std::string::npos);
  EXPECT_LT(p.find("first answer"), p.find("second answer"));
  EXPECT_EQ(p.substr(p.size() - kInstruction.size()), kInstruction);
  EXPECT_EQ(p, build_vlm_feedback_prompt(q, {ok("one", "first answer"), ok("two", "second answer")}));
}

TEST(FeedbackPrompt, SwappingInputsOnlySwapsBlocks) {
  const auto q = image_query();
  const auto a = ok("one", "first answer");
  const auto b = ok("two", "second answer");
  const auto ab = build_vlm_feedback_prompt(q, {a, b});
  const auto ba = build_vlm_feedback_prompt(q, {b, a});
  const std::string block_a = "### Response from one:\nfirst answer\n";
  const std::string block_b = "### Response from two:\nsecond answer\n";
  const auto ia = ab.find(block_a);
  const auto ib = ab.find(block_b);
  ASSERT_NE(ia, std::string::npos);
  ASSERT_NE(ib, std::string::npos);
  auto swapped = ab;
  swapped.replace(ib, block_b.size(), block_a);
  swapped.replace(ia, block_a.size(), block_b);
  EXPECT_EQ(swapped, ba);
}

TEST(Reintegrate, MajorityLetterWins) {
  Gateway gw;
  const auto clients = voters(gw, "AABC");
  const auto q = image_query();
  const auto initial = vlm_distribute(gw, q, clients, RunConfig{});
  const auto finals = vlm_reintegrate(gw, q, clients, initial, RunConfig{}, kInstruction);
  ASSERT_EQ(finals.size(), 4u);
  for (const auto& [name, answer] : finals) {
    EXPECT_EQ(answer, "A") << name;
  }
}

TEST(Run, TwoCallsPerClientAndNoServer) {
  Gateway gw;
  gw.set_capture(true);
  const auto clients = voters(gw, "ABCD");
  const auto t = run_vlm_collaboration(gw, image_query(), clients, RunConfig{}, PromptSet::defaults());
  EXPECT_EQ(t.rounds.size(), 2u);
  EXPECT_FALSE(t.config_snapshot.server.has_value());
  for (const auto& c : clients) EXPECT_EQ(gw.usage_for(c.backend).call_count, 2);
  EXPECT_EQ(gw.usage().size(), 4u);
  EXPECT_EQ(t.selection.method, SelectionMethod::Broadcast);
  EXPECT_EQ(validate_transcript(t), std::vector<std::string>{});
  for (const auto& call : gw.captured()) {
    const auto user = last_user_text(call.messages);
    if (user.find(kInstruction) == std::string::npos) continue;
    for (const auto& r : t.rounds[0].responses) EXPECT_NE(user.find(r.text), std::string::npos);
  }
}

TEST(Run, FailedInitialClientSkipsStepTwo) {
  Gateway gw;
  auto clients = voters(gw, "AB");
  gw.register_mock("broken", MockScript{}.otherwise(MockReply::fail("timeout")));
  clients.push_back(mock_client("broken", "You are broken", "broken", true));
  RunConfig cfg;
  cfg.max_retries = 0;
  const auto t = run_vlm_collaboration(gw, image_query(), clients, cfg, PromptSet::defaults());
  EXPECT_EQ(t.rounds[1].responses.size(), 2u);
  EXPECT_FALSE(t.finals.contains("broken"));
  EXPECT_EQ(gw.usage_for(clients[2].backend).call_count, 1);
  EXPECT_EQ(validate_transcript(t), std::vector<std::string>{});
}

TEST(VisionClients, FiltersByCapability) {
  const ClientPool pool({mock_client("a", "r", "a", true), mock_client("b", "r", "b", false),
                         mock_client("c", "r", "c", true)});
  const auto out = vision_clients(pool);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[1].name, "c");
}

}  // namespace
}  // namespace colm::vlm
