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

#include <cmath>
#include <numeric>
#include <random>

#include "flowgate/error.hpp"
#include "flowgate/planner.hpp"
#include "oracles.hpp"

namespace flowgate::planner {
namespace {

using des::EventSegment;

std::vector<EventSegment> events_of(const std::vector<std::size_t>& lengths) {
  std::vector<EventSegment> out;
  std::size_t start = 0;
  for (std::size_t len : lengths) {
    const std::size_t end = start + len - 1;
    out.push_back({start, end, (start + end) / 2});
    start = end + 1;
  }
  return out;
}

template <typename F>
Errc code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::kIo;
}

// Evenly spread bin centres over the non-anchor frames, computed in floating
// point.
std::vector<std::size_t> spread_oracle(const EventSegment& e, std::size_t count) {
  std::vector<std::size_t> others;
  for (std::size_t f = e.start; f <= e.end; ++f) {
    if (f != e.anchor) others.push_back(f);
  }
  std::vector<std::size_t> out{e.anchor};
  const double c = static_cast<double>(count - 1);
  for (std::size_t i = 0; i + 1 < count; ++i) {
    out.push_back(others[static_cast<std::size_t>(std::floor((i + 0.5) * others.size() / c))]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

TokenMask half_mask(std::size_t seed) {
  TokenMask m{13, 13, std::vector<bool>(169, false), 0.5};
  for (std::size_t i = 0; i < 85; ++i) m.kept[(i * 2 + seed) % 169] = true;
  return m;
}

TEST(Priority, NeighboursIncluded) {
  const std::vector<std::size_t> sel{2};
  EXPECT_EQ(priority_events(sel, 5), (std::vector<std::size_t>{1, 2, 3}));
}

TEST(Priority, ReferenceRows) {
  const std::vector<std::size_t> three{3};
  EXPECT_EQ(priority_events(three, 6), (std::vector<std::size_t>{2, 3, 4}));
  const std::vector<std::size_t> zero{0};
  EXPECT_EQ(priority_events(zero, 6), (std::vector<std::size_t>{0, 1}));
  const std::vector<std::size_t> all{0, 1, 2, 3, 4, 5};
  EXPECT_EQ(priority_events(all, 6), all);
}

TEST(Priority, EdgesAndOverlapCollapse) {
  const std::vector<std::size_t> sel{0, 4};
  EXPECT_EQ(priority_events(sel, 5), (std::vector<std::size_t>{0, 1, 3, 4}));
  const std::vector<std::size_t> adj{1, 2};
  EXPECT_EQ(priority_events(adj, 4), (std::vector<std::size_t>{0, 1, 2, 3}));
  const std::vector<std::size_t> none;
  EXPECT_TRUE(priority_events(none, 4).empty());
}

TEST(Allocate, ProportionalAfterAnchors) {
  const auto ev = events_of({10, 20, 30});
  const std::vector<std::size_t> pri{0, 1, 2};
  auto expected = oracle::hamilton({10, 20, 30}, 12 - 3);
  for (auto& x : expected) ++x;
  ASSERT_EQ(expected, (std::vector<std::size_t>{2, 4, 6}));
  EXPECT_EQ(allocate_frames(ev, pri, 12), expected);
}

TEST(Allocate, BudgetEqualToEventCountGivesAnchorsOnly) {
  const auto ev = events_of({10, 20, 30});
  const std::vector<std::size_t> pri{1};
  EXPECT_EQ(allocate_frames(ev, pri, 3), (std::vector<std::size_t>{1, 1, 1}));
}

TEST(Allocate, CapacityCapRedistributes) {
  const auto ev = events_of({2, 100});
  const std::vector<std::size_t> pri{0, 1};
  // Unconstrained, event 0 would receive 1 + 2 of the 80 frames; it holds 2.
  const auto uncapped = oracle::hamilton({2, 100}, 78);
  ASSERT_EQ(uncapped[0] + 1, 3u);
  EXPECT_EQ(allocate_frames(ev, pri, 80), (std::vector<std::size_t>{2, 78}));
}

TEST(Allocate, SingleEventCappedByLength) {
  const auto ev = events_of({3});
  const std::vector<std::size_t> pri{0};
  EXPECT_EQ(allocate_frames(ev, pri, 5), (std::vector<std::size_t>{3}));
}

TEST(Allocate, SurplusGoesToNonPriorityWhenPriorityIsFull) {
  const auto ev = events_of({2, 2, 10, 30});
  const std::vector<std::size_t> pri{0, 1};
  const auto counts = allocate_frames(ev, pri, 12);
  EXPECT_EQ(counts[0], 2u);
  EXPECT_EQ(counts[1], 2u);
  auto rest = oracle::hamilton({10, 30}, 12 - 4 - 2);
  EXPECT_EQ(counts[2], rest[0] + 1);
  EXPECT_EQ(counts[3], rest[1] + 1);
}

TEST(Allocate, SubBudgetRanking) {
  const auto ev = events_of({5, 40, 7, 40, 9});
  const std::vector<std::size_t> pri{2};
  // Rank: priority 2, then 40-frame events 1 and 3, then 9, then 5.
  EXPECT_EQ(allocate_frames(ev, pri, 1), (std::vector<std::size_t>{0, 0, 1, 0, 0}));
  EXPECT_EQ(allocate_frames(ev, pri, 3), (std::vector<std::size_t>{0, 1, 1, 1, 0}));
  EXPECT_EQ(allocate_frames(ev, pri, 4), (std::vector<std::size_t>{0, 1, 1, 1, 1}));
}

TEST(Allocate, MatchesHamiltonWhenUncapped) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 8)(rng);
    std::vector<std::size_t> lengths(n);
    for (auto& l : lengths) l = std::uniform_int_distribution<std::size_t>(20, 200)(rng);
    const auto ev = events_of(lengths);
    std::vector<std::size_t> pri(n);
    std::iota(pri.begin(), pri.end(), std::size_t{0});
    const std::size_t budget = n + std::uniform_int_distribution<std::size_t>(0, 19)(rng);
    auto expected = oracle::hamilton(lengths, budget - n);
    for (auto& x : expected) ++x;
    EXPECT_EQ(allocate_frames(ev, pri, budget), expected) << "trial " << trial;
  }
}

TEST(Allocate, InvariantsUnderCaps) {
  std::mt19937_64 rng(22);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 12)(rng);
    std::vector<std::size_t> lengths(n);
    for (auto& l : lengths) l = std::uniform_int_distribution<std::size_t>(1, 30)(rng);
    const auto ev = events_of(lengths);
    const std::size_t total = std::accumulate(lengths.begin(), lengths.end(), std::size_t{0});
    std::vector<std::size_t> pri;
    for (std::size_t i = 0; i < n; ++i) {
      if (std::bernoulli_distribution(0.4)(rng)) pri.push_back(i);
    }
    const std::size_t budget = std::uniform_int_distribution<std::size_t>(1, total + 5)(rng);
    const auto counts = allocate_frames(ev, pri, budget);
    std::size_t sum = 0;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_LE(counts[i], lengths[i]);
      if (budget >= n) {
        EXPECT_GE(counts[i], 1u);
      }
      sum += counts[i];
    }
    EXPECT_EQ(sum, std::min(budget, total));
  }
}

TEST(Sample, SingleFrameIsAnchor) {
  EXPECT_EQ(sample_within_event({0, 9, 4}, 1), (std::vector<std::size_t>{4}));
}

TEST(Sample, ThreeFramesSpreadAroundAnchor) {
  const EventSegment e{0, 9, 4};
  const auto expected = spread_oracle(e, 3);
  ASSERT_EQ(expected, (std::vector<std::size_t>{2, 4, 7}));
  EXPECT_EQ(sample_within_event(e, 3), expected);
}

TEST(Sample, WholeEventAndOracleAgreement) {
  const EventSegment e{10, 19, 14};
  std::vector<std::size_t> all(10);
  std::iota(all.begin(), all.end(), std::size_t{10});
  EXPECT_EQ(sample_within_event(e, 10), all);
  for (std::size_t c = 1; c <= 10; ++c) {
    const auto got = sample_within_event(e, c);
    EXPECT_EQ(got, spread_oracle(e, c)) << c;
    EXPECT_EQ(std::adjacent_find(got.begin(), got.end()), got.end());
  }
}

TEST(Sample, Errors) {
  EXPECT_EQ(code_of([] { sample_within_event({0, 4, 2}, 6); }), Errc::kCountExceedsLength);
  EXPECT_EQ(code_of([] { sample_within_event({0, 4, 2}, 0); }), Errc::kInvalidArgument);
}

TEST(Expand, WorkedExample) {
  const std::size_t expected = oracle::expanded_frames(64, 169, 50, 8);
  ASSERT_EQ(expected, 119u);
  EXPECT_EQ(expand_frame_budget(64, 169, 50, 8), expected);
}

TEST(Expand, NoPruningOrFullAnchors) {
  EXPECT_EQ(expand_frame_budget(64, 169, 100, 8), 64u);
  EXPECT_EQ(expand_frame_budget(64, 169, 50, 64), 64u);
  EXPECT_EQ(code_of([] { expand_frame_budget(64, 169, 50, 65); }), Errc::kAnchorsExceedBudget);
}

TEST(Expand, AgreesWithLinearSearch) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t base = std::uniform_int_distribution<std::size_t>(1, 128)(rng);
    const std::size_t tokens = std::uniform_int_distribution<std::size_t>(1, 400)(rng);
    const double k = std::uniform_int_distribution<int>(1, 100)(rng);
    const std::size_t anchors = std::uniform_int_distribution<std::size_t>(1, base)(rng);
    const std::size_t n = expand_frame_budget(base, tokens, k, anchors);
    EXPECT_EQ(n, oracle::expanded_frames(base, tokens, k, anchors));
    const std::size_t cost = keep_count(k / 100.0, tokens);
    EXPECT_LE(anchors * tokens + (n - anchors) * cost, base * tokens);
  }
}

TEST(Schedule, AnchorsAlwaysSampled) {
  const auto ev = events_of({10, 20, 30, 5});
  const std::vector<std::size_t> sel{2};
  const auto s = schedule_frames(ev, sel, {});
  EXPECT_EQ(s.frame_budget, oracle::expanded_frames(64, 169, 50, 4));
  std::size_t sampled = 0;
  for (std::size_t e = 0; e < ev.size(); ++e) {
    sampled += s.frames[e].size();
    EXPECT_TRUE(std::binary_search(s.frames[e].begin(), s.frames[e].end(), ev[e].anchor));
  }
  EXPECT_EQ(sampled, 65u);  // every frame of the video
}

TEST(Assemble, AccountingIdentity) {
  const auto ev = events_of({30, 40, 50});
  const std::vector<std::size_t> sel{1};
  const BudgetConfig cfg;
  const auto s = schedule_frames(ev, sel, cfg);
  std::map<std::size_t, TokenMask> masks;
  for (std::size_t f : s.pruned_frames(ev)) masks.emplace(f, half_mask(f));
  PlanTotals totals;
  const std::vector<double> alphas{0.2, 0.5, 0.3};
  const auto planned = assemble_events({ev, alphas, sel}, s, masks, cfg, totals);
  const std::size_t pruned = s.pruned_frames(ev).size();
  EXPECT_EQ(totals.frames, pruned + 3);
  EXPECT_EQ(totals.tokens, 3 * 169 + pruned * 85);
  EXPECT_LE(totals.tokens, cfg.token_budget());
  EXPECT_TRUE(planned[1].selected);
  EXPECT_TRUE(planned[0].priority && planned[2].priority);
}

TEST(Assemble, MissingMask) {
  const auto ev = events_of({30, 40});
  const std::vector<std::size_t> sel{0};
  const BudgetConfig cfg;
  const auto s = schedule_frames(ev, sel, cfg);
  PlanTotals totals;
  EXPECT_EQ(code_of([&] { assemble_events({ev, {}, sel}, s, {}, cfg, totals); }), Errc::kMissingMask);
}

TEST(Assemble, FailOpenMasksCanExceedBudget) {
  const auto ev = events_of({60, 60});
  const std::vector<std::size_t> sel{0};
  const BudgetConfig cfg;
  const auto s = schedule_frames(ev, sel, cfg);
  ASSERT_EQ(s.frame_budget, oracle::expanded_frames(64, 169, 50, 2));
  std::map<std::size_t, TokenMask> masks;
  for (std::size_t f : s.pruned_frames(ev)) masks.emplace(f, TokenMask::all_kept(13, 13));
  PlanTotals totals;
  EXPECT_EQ(code_of([&] { assemble_events({ev, {}, sel}, s, masks, cfg, totals); }), Errc::kTokenBudgetExceeded);
}

TEST(PlanEvents, RetriesUntilFailOpenMasksFit) {
  const auto ev = events_of({60, 60});
  const std::vector<std::size_t> sel{0};
  const BudgetConfig cfg;
  std::size_t calls = 0;
  const auto r = plan_events({ev, {}, sel}, cfg, [&](std::span<const std::size_t> frames) {
    ++calls;
    return std::vector<TokenMask>(frames.size(), TokenMask::all_kept(13, 13));
  });
  EXPECT_EQ(r.totals.frames, 64u);
  EXPECT_EQ(r.totals.tokens, cfg.token_budget());
  EXPECT_GE(calls, 1u);
}

TEST(PlanEvents, HalfMasksUseExpandedBudget) {
  const auto ev = events_of({100, 100});
  const std::vector<std::size_t> sel{0};
  const auto r = plan_events({ev, {}, sel}, {}, [](std::span<const std::size_t> frames) {
    std::vector<TokenMask> out;
    for (std::size_t f : frames) out.push_back(half_mask(f));
    return out;
  });
  EXPECT_EQ(r.totals.frames, oracle::expanded_frames(64, 169, 50, 2));
}

TEST(PlanEvents, NoPruningNeverAsksForMasks) {
  const auto ev = events_of({60, 60});
  const std::vector<std::size_t> sel{1};
  BudgetConfig cfg;
  cfg.keep_percent = 100;
  const auto r = plan_events({ev, {}, sel}, cfg, [](std::span<const std::size_t>) -> std::vector<TokenMask> {
    throw std::logic_error("masks requested");
  });
  EXPECT_EQ(r.totals.frames, 64u);
  for (const auto& e : r.events) {
    for (const auto& f : e.frames) EXPECT_FALSE(f.mask.has_value());
  }
}

SelectionPlan valid_plan() {
  static const auto ev = events_of({30, 40, 50});
  static const std::vector<std::size_t> sel{1};
  SelectionPlan plan;
  plan.frame_count = 120;
  const auto r = plan_events({ev, {}, sel}, plan.config.budget, [](std::span<const std::size_t> frames) {
    std::vector<TokenMask> out;
    for (std::size_t f : frames) out.push_back(half_mask(f));
    return out;
  });
  plan.events = r.events;
  plan.totals = r.totals;
  return plan;
}

TEST(CheckPlan, ValidPlanHasNoIssues) { EXPECT_TRUE(check_plan(valid_plan()).empty()); }

TEST(CheckPlan, DetectsViolations) {
  auto a = valid_plan();
  a.totals.tokens += 1;
  EXPECT_FALSE(check_plan(a).empty());

  auto b = valid_plan();
  b.events[1].frames.front().index = 0;
  EXPECT_FALSE(check_plan(b).empty());

  auto c = valid_plan();
  for (auto& f : c.events[0].frames) {
    if (f.role == FrameRole::kAnchor) f.mask = half_mask(0);
  }
  EXPECT_FALSE(check_plan(c).empty());

  auto d = valid_plan();
  d.events[2].segment.start += 1;
  EXPECT_FALSE(check_plan(d).empty());
}

TEST(BudgetConfig, Validation) {
  EXPECT_EQ(code_of([] { BudgetConfig{0}.validate(); }), Errc::kInvalidArgument);
  EXPECT_EQ(code_of([] { BudgetConfig{64, 169, 0.0}.validate(); }), Errc::kInvalidArgument);
  EXPECT_EQ(code_of([] { BudgetConfig{64, 169, 50, 1.0}.validate(); }), Errc::kInvalidArgument);
  EXPECT_EQ(BudgetConfig{}.pruned_frame_cost(), 85u);
}

}  // namespace
}  // namespace flowgate::planner
