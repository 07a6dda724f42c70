// Copyright 2026 The Flowgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commands.hpp"
#include "flowgate/embedding_io.hpp"
#include "flowgate/image_io.hpp"
#include "flowgate/plan_json.hpp"
#include "synthetic.hpp"
#include "temp_dir.hpp"

namespace flowgate::cli {
namespace {

using nlohmann::json;
using testing_support::TempDir;
namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json read_json(const fs::path& p) { return json::parse(slurp(p)); }

int run_cli(const std::vector<std::string>& args) { return run(args); }

synth::SynthVideo three_scenes(std::uint64_t seed) {
  synth::SynthConfig cfg;
  cfg.min_scenes = 3;
  cfg.max_scenes = 3;
  cfg.min_scene_len = 20;
  cfg.max_scene_len = 30;
  return synth::generate_video(cfg, seed);
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    video_ = three_scenes(5);
    synth::write_video(video_, dir_.path());
  }

  std::string frames() const { return (dir_ / "frames").string(); }
  std::string out(const std::string& name) const {
    fs::create_directories(dir_ / name);
    return (dir_ / name).string();
  }

  TempDir dir_;
  synth::SynthVideo video_;
};

TEST_F(CliTest, SegmentRecoversScenes) {
  const auto o = out("seg");
  ASSERT_EQ(run_cli({"segment", "--frames", frames(), "--out", o}), 0);
  const auto doc = read_json(fs::path(o) / "events.json");
  ASSERT_EQ(doc["events"].size(), 3u);
  EXPECT_EQ(doc["events"][1]["start"].get<std::size_t>(), video_.scene_starts[0]);
  EXPECT_EQ(doc["events"][2]["start"].get<std::size_t>(), video_.scene_starts[1]);
  EXPECT_EQ(doc["frames"].get<std::size_t>(), video_.frames.size());
  EXPECT_EQ(doc["video"].get<std::string>(), fs::path(dir_.path()).filename().string());

  const auto csv = slurp(fs::path(o) / "diff.csv");
  EXPECT_EQ(csv.rfind("transition,delta_v,candidate,boundary\n", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), static_cast<long>(video_.frames.size()));
}

TEST_F(CliTest, SingleFrameIsAValidationError) {
  TempDir one;
  save_frame_png(one / "frame_000000.png", video_.frames[0]);
  EXPECT_EQ(run_cli({"segment", "--frames", one.path().string(), "--out", out("one")}), 2);
}

TEST_F(CliTest, MissingFlowFilesAreProviderFailures) {
  TempDir empty;
  EXPECT_EQ(run_cli({"segment", "--frames", frames(), "--flow", empty.path().string(), "--out", out("f")}), 3);
}

TEST_F(CliTest, MissingQueryFileIsAValidationError) {
  EXPECT_EQ(run_cli({"select", "--frames", frames(), "--embeddings", (dir_ / "embeddings.emb").string(), "--query",
                     (dir_ / "nope.emb").string(), "--out", out("q")}),
            2);
}

TEST_F(CliTest, EmbeddingCountMismatchIsAValidationError) {
  const std::vector<ecq::EmbeddingVector> five(5, ecq::EmbeddingVector{{1.0f, 0.0f}});
  save_embeddings(dir_ / "five.emb", five);
  save_embeddings(dir_ / "q2.emb", std::vector<ecq::EmbeddingVector>{{{1.0f, 0.0f}}});
  EXPECT_EQ(run_cli({"select", "--frames", frames(), "--embeddings", (dir_ / "five.emb").string(), "--query",
                     (dir_ / "q2.emb").string(), "--out", out("m")}),
            2);
}

TEST_F(CliTest, BadOptionsAreValidationErrors) {
  EXPECT_EQ(run_cli({"plan", "--frames", frames(), "--keep-percent", "0", "--out", out("b1")}), 2);
  EXPECT_EQ(run_cli({"plan", "--frames", frames(), "--grid", "13x13", "--tokens-per-frame", "100"}), 2);
  EXPECT_EQ(run_cli({"plan", "--frames", frames(), "--theta", "loud"}), 2);
  EXPECT_EQ(run_cli({"plan", "--no-such-flag"}), 2);
}

TEST_F(CliTest, DominantEventIsSelectedAlone) {
  const std::vector<ecq::EmbeddingVector> anchors{{{10.0f, 0.0f}}, {{0.0f, 10.0f}}, {{-10.0f, 0.0f}}};
  save_embeddings(dir_ / "anchors.emb", anchors);
  save_embeddings(dir_ / "q.emb", std::vector<ecq::EmbeddingVector>{{{1.0f, 0.0f}}});
  const auto o = out("dom");
  ASSERT_EQ(run_cli({"select", "--frames", frames(), "--embeddings", (dir_ / "anchors.emb").string(), "--query",
                     (dir_ / "q.emb").string(), "--no-normalize", "--out", o}),
            0);
  const auto doc = read_json(fs::path(o) / "selection.json");
  EXPECT_EQ(doc["selected"], json::array({0}));
  EXPECT_LE(doc["p_value"].get<double>(), 0.05);
}

TEST_F(CliTest, UniformSignificanceSelectsEveryEvent) {
  const auto o = out("uni");
  ASSERT_EQ(run_cli({"select", "--frames", frames(), "--out", o}), 0);
  const auto doc = read_json(fs::path(o) / "selection.json");
  EXPECT_EQ(doc["selected"], json::array({0, 1, 2}));
  EXPECT_FALSE(doc["query"].get<bool>());
}

TEST_F(CliTest, PlanSatisfiesInvariants) {
  const auto o = out("plan");
  ASSERT_EQ(run_cli({"plan", "--frames", frames(), "--saliency", (dir_ / "saliency").string(), "--embeddings",
                     (dir_ / "embeddings.emb").string(), "--query", (dir_ / "query.emb").string(), "--out", o}),
            0);
  const auto plan = planner::parse_plan(slurp(fs::path(o) / "plan.json"));
  EXPECT_TRUE(planner::check_plan(plan).empty());
  EXPECT_EQ(plan.events.size(), 3u);
  EXPECT_LE(plan.totals.tokens, 64u * 169u);
  EXPECT_GT(plan.totals.frames, 64u);
  for (const auto& e : plan.events) EXPECT_FALSE(e.frames.empty());
}

TEST_F(CliTest, FullKeepDisablesMasksAndExpansion) {
  const auto o = out("k100");
  ASSERT_EQ(run_cli({"plan", "--frames", frames(), "--keep-percent", "100", "--out", o}), 0);
  const auto doc = read_json(fs::path(o) / "plan.json");
  EXPECT_EQ(doc["totals"]["frames"].get<std::size_t>(), std::min<std::size_t>(64, video_.frames.size()));
  for (const auto& e : doc["events"]) {
    for (const auto& f : e["frames"]) EXPECT_TRUE(f["mask_b64"].is_null());
  }
}

TEST_F(CliTest, PlanIsByteIdenticalAcrossWorkerCounts) {
  std::vector<std::string> outputs;
  for (const char* workers : {"1", "4"}) {
    const auto o = out(std::string("w") + workers);
    ASSERT_EQ(run_cli({"plan", "--frames", frames(), "--saliency", (dir_ / "saliency").string(), "--workers",
                       workers, "--out", o}),
              0);
    outputs.push_back(slurp(fs::path(o) / "plan.json"));
  }
  EXPECT_EQ(outputs[0], outputs[1]);
}

TEST_F(CliTest, EventsFileIsReused) {
  const auto seg = out("seg2");
  ASSERT_EQ(run_cli({"segment", "--frames", frames(), "--out", seg}), 0);
  const auto o = out("sel2");
  ASSERT_EQ(run_cli({"select", "--events", (fs::path(seg) / "events.json").string(), "--out", o}), 0);
  EXPECT_EQ(read_json(fs::path(o) / "selection.json")["events"].get<std::size_t>(), 3u);
}

TEST_F(CliTest, OverlaysAreWritten) {
  const auto o = out("ov");
  ASSERT_EQ(run_cli({"plan", "--frames", frames(), "--overlays", "--out", o}), 0);
  EXPECT_FALSE(list_frame_files(fs::path(o) / "overlays").empty());
}

TEST_F(CliTest, ValidateProviders) {
  EXPECT_EQ(run_cli({"--validate-providers", "--frames", frames(), "--saliency", (dir_ / "saliency").string(),
                     "--embeddings", (dir_ / "embeddings.emb").string()}),
            0);
  std::ofstream(dir_ / "saliency" / "sal_000003.png") << "garbage";
  EXPECT_EQ(run_cli({"--validate-providers", "--frames", frames(), "--saliency", (dir_ / "saliency").string()}), 3);
}

TEST(ExitCodes, Mapping) {
  EXPECT_EQ(exit_code_for(Errc::kTooFewFrames), 2);
  EXPECT_EQ(exit_code_for(Errc::kProviderFailure), 3);
  EXPECT_EQ(exit_code_for(Errc::kTokenBudgetExceeded), 4);
  EXPECT_EQ(exit_code_for(Errc::kAnchorsExceedBudget), 4);
}

}  // namespace
}  // namespace flowgate::cli
