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

#include <random>

#include "flowgate/error.hpp"
#include "flowgate/plan_json.hpp"

namespace flowgate::planner {
namespace {

std::vector<std::uint8_t> bytes_of(std::string_view s) { return {s.begin(), s.end()}; }

TEST(Base64, StandardVectors) {
  const std::pair<const char*, const char*> cases[] = {
      {"", ""},         {"f", "Zg=="},         {"fo", "Zm8="},         {"foo", "Zm9v"},
      {"foob", "Zm9vYg=="}, {"fooba", "Zm9vYmE="}, {"foobar", "Zm9vYmFy"},
  };
  for (const auto& [plain, encoded] : cases) {
    EXPECT_EQ(base64_encode(bytes_of(plain)), encoded);
    EXPECT_EQ(base64_decode(encoded), bytes_of(plain));
  }
}

TEST(Base64, RandomRoundTrip) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::uint8_t> data(std::uniform_int_distribution<std::size_t>(0, 64)(rng));
    for (auto& b : data) b = static_cast<std::uint8_t>(rng());
    EXPECT_EQ(base64_decode(base64_encode(data)), data);
  }
}

TEST(Base64, RejectsMalformed) {
  for (const char* bad : {"Zg=", "Z===", "Zg==Zg==", "Zm9*", "=Zm9"}) {
    EXPECT_THROW(base64_decode(bad), Error) << bad;
  }
}

TEST(MaskPacking, MostSignificantBitFirst) {
  TokenMask m{3, 3, std::vector<bool>(9, false), 0.5};
  m.kept[0] = true;
  m.kept[7] = true;
  m.kept[8] = true;
  EXPECT_EQ(pack_mask(m), (std::vector<std::uint8_t>{0x81, 0x80}));
  EXPECT_EQ(unpack_mask(pack_mask(m), 3, 3), m);
}

TEST(MaskPacking, FullGrid) {
  const auto packed = pack_mask(TokenMask::all_kept(13, 13));
  ASSERT_EQ(packed.size(), 22u);
  for (std::size_t i = 0; i < 21; ++i) EXPECT_EQ(packed[i], 0xFF);
  EXPECT_EQ(packed[21], 0x80);
  EXPECT_THROW(unpack_mask(std::vector<std::uint8_t>(21), 13, 13), Error);
}

SelectionPlan sample_plan() {
  SelectionPlan plan;
  plan.video = "clip";
  plan.frame_count = 20;
  plan.config.des.theta = 0.125;
  plan.config.budget.base_frames = 4;
  plan.config.budget.tokens_per_frame = 9;
  plan.config.mtp.grid_w = 3;
  plan.config.mtp.grid_h = 3;
  plan.config.mtp.ransac.seed = 77;

  TokenMask mask{3, 3, {true, false, true, false, true, false, false, false, true}, 0.5};
  PlannedEvent a{{0, 9, 4}, 0.7, true, true, {}};
  a.frames.push_back({2, FrameRole::kPruned, mask});
  a.frames.push_back({4, FrameRole::kAnchor, std::nullopt});
  a.frames.push_back({7, FrameRole::kPruned, TokenMask::all_kept(3, 3)});
  PlannedEvent b{{10, 19, 14}, 0.3, false, true, {}};
  b.frames.push_back({14, FrameRole::kAnchor, std::nullopt});
  plan.events = {a, b};
  plan.totals = {4, 9 + 4 + 9 + 9};
  plan.p_value = 0.3;
  plan.provenance = {"builtin:block8r4", "uniform:1", "file:embeddings.emb", 77};
  return plan;
}

TEST(PlanJson, RoundTripIsByteStable) {
  const auto plan = sample_plan();
  const auto text = serialize_plan(plan);
  const auto parsed = parse_plan(text);
  EXPECT_EQ(parsed.frame_count, 20u);
  EXPECT_EQ(parsed.events.size(), 2u);
  EXPECT_EQ(parsed.events[0].frames[0].mask, plan.events[0].frames[0].mask);
  EXPECT_FALSE(parsed.events[0].frames[1].mask.has_value());
  EXPECT_EQ(parsed.config.des.theta, 0.125);
  EXPECT_EQ(serialize_plan(parsed), text);
  EXPECT_TRUE(check_plan(parsed).empty());
}

TEST(PlanJson, KeyOrderAndFields) {
  const auto text = serialize_plan(sample_plan());
  const auto pos = [&](std::string_view key) { return text.find("\"" + std::string(key) + "\""); };
  EXPECT_LT(pos("video"), pos("config"));
  EXPECT_LT(pos("config"), pos("events"));
  EXPECT_LT(pos("events"), pos("totals"));
  EXPECT_LT(pos("totals"), pos("provenance"));
  EXPECT_NE(text.find("\"mask_b64\": null"), std::string::npos);
  EXPECT_NE(text.find("\"role\": \"anchor\""), std::string::npos);
  EXPECT_NE(text.find("\"config_hash\": \"" + config_hash(sample_plan().config) + "\""), std::string::npos);
  EXPECT_EQ(text.back(), '\n');
}

TEST(PlanJson, MalformedDocuments) {
  EXPECT_THROW(parse_plan("{"), Error);
  EXPECT_THROW(parse_plan("{}"), Error);
  auto text = serialize_plan(sample_plan());
  text.replace(text.find("\"pruned\""), 8, "\"dropped\"");
  EXPECT_THROW(parse_plan(text), Error);
}

TEST(ConfigHash, SensitiveToEveryParameter) {
  const PlanConfig base;
  const auto h = config_hash(base);
  EXPECT_EQ(h.size(), 16u);
  EXPECT_EQ(config_hash(base), h);
  auto a = base;
  a.budget.keep_percent = 40;
  auto b = base;
  b.mtp.ransac.seed = 1;
  auto c = base;
  c.des.eta = 2;
  auto d = base;
  d.des.theta = 0.5;
  for (const auto& other : {a, b, c, d}) EXPECT_NE(config_hash(other), h);
}

}  // namespace
}  // namespace flowgate::planner
