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

#include <fstream>

#include "colm/core/codec.hpp"
#include "colm/core/error.hpp"
#include "colm/pipeline/pipeline.hpp"
#include "colm/store/replay.hpp"
#include "colm/store/store.hpp"
#include "colm/vlm/vlm_pipeline.hpp"
#include "fixtures.hpp"

namespace colm::store {
namespace {

using testing::copy_pool;
using testing::echo_server;
using testing::TempDir;

CollaborationTranscript run(const std::string& id, int n, int rounds) {
  Gateway gw;
  const auto pool = copy_pool(gw, n);
  Query q;
  q.id = id;
  q.text = "question " + id;
  RunConfig cfg;
  cfg.k = n;
  cfg.max_rounds = rounds;
  return pipeline::run_collaboration(gw, q, pool, cfg, std::nullopt, echo_server(gw, "server"),
                                     PromptSet::defaults());
}

std::vector<std::string> read_lines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

TEST(Store, AppendThenLoadRoundTrips) {
  TempDir dir;
  Store store(dir.path());
  const auto a = run("q-a", 3, 1);
  const auto b = run("q-b", 2, 2);
  EXPECT_EQ(store.append_transcript(a), 0u);
  const auto offset = store.append_transcript(b);
  EXPECT_EQ(offset, encode(a).size() + 1);
  EXPECT_EQ(store.load_transcript("q-a"), a);
  EXPECT_EQ(store.load_transcript("q-b"), b);
  EXPECT_EQ(store.list_ids(), (std::vector<std::string>{"q-a", "q-b"}));
  const auto lines = read_lines(store.transcripts_path());
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[1], encode(b));
}

TEST(Store, DuplicateIdIsRejected) {
  TempDir dir;
  Store store(dir.path());
  const auto a = run("q-a", 1, 0);
  store.append_transcript(a);
  EXPECT_THROW(store.append_transcript(a), Error);
  EXPECT_EQ(read_lines(store.transcripts_path()).size(), 1u);
}

TEST(Store, UnknownIdIsNotFound) {
  TempDir dir;
  Store store(dir.path());
  store.append_transcript(run("q-a", 1, 0));
  try {
    (void)store.load_transcript("q-missing");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotFound);
  }
}

TEST(Store, TruncatedFinalLineReportsItsLineNumber) {
  TempDir dir;
  Store store(dir.path());
  store.append_transcript(run("q-a", 2, 1));
  store.append_transcript(run("q-b", 2, 1));
  const auto path = store.transcripts_path();
  const auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size - 40);
  try {
    (void)store.load_transcript("q-b");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Corrupt);
    EXPECT_EQ(e.line_no(), 2);
  }
  EXPECT_EQ(store.load_transcript("q-a").id(), "q-a");
  // A partial tail blocks further appends instead of being built upon.
  EXPECT_THROW(store.append_transcript(run("q-c", 1, 0)), Error);
}

TEST(Store, InvalidStoredTranscriptIsCorruptWithViolations) {
  TempDir dir;
  Store store(dir.path());
  auto t = run("q-a", 2, 1);
  t.totals.call_count += 1;
  {
    std::ofstream out(store.transcripts_path());
    out << encode(t) << "\n";
  }
  try {
    (void)store.load_transcript("q-a");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Corrupt);
    EXPECT_EQ(e.line_no(), 1);
    ASSERT_EQ(e.violations().size(), 1u);
    EXPECT_EQ(e.violations()[0].rfind("usage additivity", 0), 0u);
  }
}

TEST(Store, ManifestsRoundTrip) {
  TempDir dir;
  Store store(dir.path());
  const Json m{{"run_id", "r1"}, {"score", 42.5}};
  store.write_manifest("r1", m);
  EXPECT_EQ(store.read_manifest("r1"), m);
  EXPECT_TRUE(std::filesystem::exists(dir.path() / "manifests" / "r1.json"));
  EXPECT_THROW((void)store.read_manifest("r2"), Error);
}

TEST(Replay, ReproducesStoredTexts) {
  TempDir dir;
  Store store(dir.path());
  for (int rounds = 0; rounds <= 2; ++rounds) {
    const auto id = "q-r" + std::to_string(rounds);
    store.append_transcript(run(id, 3, rounds));
    const auto stored = store.load_transcript(id);
    const auto replayed = replay(store, id);
    EXPECT_EQ(text_differences(stored, replayed), std::vector<std::string>{});
    EXPECT_EQ(replayed.finals, stored.finals);
  }
}

TEST(Replay, OverrideChangesOnlyThatClientsLineage) {
  const auto stored = run("q-o", 3, 2);
  MockScript other;
  other.otherwise(MockReply::literal("a different answer"));
  const auto replayed = replay(stored, {{"client-1", other}});
  // Oracle: client-1's entries in every round plus its final; nothing else.
  EXPECT_EQ(text_differences(stored, replayed),
            (std::vector<std::string>{"finals.client-1", "rounds[0].client-1", "rounds[1].client-1",
                                      "rounds[2].client-1"}));
  EXPECT_EQ(replayed.finals.at("client-1"), "a different answer");
}

TEST(Replay, ServerOverrideChangesOnlyGuidance) {
  const auto stored = run("q-s", 2, 1);
  MockScript server;
  server.otherwise(MockReply::literal("new guidance"));
  const auto replayed = replay(stored, {{kServerScript, server}});
  EXPECT_EQ(replayed.rounds[1].guidance->text, "new guidance");
  // Client refinements miss their exact request and fall back to the reply
  // recorded at the same position.
  EXPECT_EQ(text_differences(stored, replayed), std::vector<std::string>{"rounds[1].guidance"});
  EXPECT_EQ(replayed.finals, stored.finals);
}

TEST(Replay, RecordedFailuresReplayAsFailures) {
  Gateway gw;
  auto pool = copy_pool(gw, 2);
  gw.register_mock("down", MockScript{}.otherwise(MockReply::fail("remote", 503)));
  pool.add(testing::mock_client("down", "You are unreachable", "down"));
  Query q;
  q.id = "q-f";
  q.text = "q";
  RunConfig cfg;
  cfg.max_retries = 0;
  const auto stored = pipeline::run_collaboration(gw, q, pool, cfg, std::nullopt,
                                                  echo_server(gw, "server"), PromptSet::defaults());
  const auto replayed = replay(stored);
  EXPECT_EQ(text_differences(stored, replayed), std::vector<std::string>{});
  ASSERT_FALSE(replayed.rounds[0].responses[2].ok());
  EXPECT_EQ(replayed.rounds[0].responses[2].error->status, 503);
}

TEST(Replay, VisionRunReplays) {
  Gateway gw;
  const auto pool = copy_pool(gw, 3, true);
  Query q;
  q.id = "q-v";
  q.text = "What is shown?";
  q.mode = QueryMode::VisionLanguage;
  const auto stored = vlm::run_vlm_collaboration(gw, q, pool.profiles(), RunConfig{}, PromptSet::defaults());
  EXPECT_EQ(text_differences(stored, replay(stored)), std::vector<std::string>{});
}

TEST(Replay, UnknownOverrideIsRejected) {
  EXPECT_THROW((void)replay(run("q-u", 1, 0), {{"nobody", MockScript{}}}), Error);
}

}  // namespace
}  // namespace colm::store
