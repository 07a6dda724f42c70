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

#include "flowgate/planner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "flowgate/error.hpp"

namespace flowgate::planner {

namespace {

// Hands `units` to `members` in proportion to their event lengths without
// exceeding any event's length. Members that would overflow are filled to
// capacity and the remainder is re-apportioned among the others. Returns the
// units that could not be placed.
std::size_t apportion(std::span<const des::EventSegment> events, std::vector<std::size_t> members,
                      std::vector<std::size_t>& counts, std::size_t units) {
  const auto capacity = [&](std::size_t i) { return events[i].length() - counts[i]; };
  std::erase_if(members, [&](std::size_t i) { return capacity(i) == 0; });

  while (units > 0 && !members.empty()) {
    std::uint64_t total = 0;
    for (std::size_t i : members) total += events[i].length();

    std::vector<std::size_t> share(members.size());
    std::vector<std::uint64_t> remainder(members.size());
    std::size_t assigned = 0;
    for (std::size_t m = 0; m < members.size(); ++m) {
      const std::uint64_t scaled = static_cast<std::uint64_t>(units) * events[members[m]].length();
      share[m] = static_cast<std::size_t>(scaled / total);
      remainder[m] = scaled % total;
      assigned += share[m];
    }
    std::vector<std::size_t> order(members.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
      const auto la = events[members[a]].length();
      const auto lb = events[members[b]].length();
      if (la != lb) return la > lb;
      return members[a] < members[b];
    });
    for (std::size_t j = 0; j < units - assigned; ++j) ++share[order[j]];

    bool overflow = false;
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (share[m] > capacity(members[m])) overflow = true;
    }
    if (!overflow) {
      for (std::size_t m = 0; m < members.size(); ++m) counts[members[m]] += share[m];
      return 0;
    }
    for (std::size_t m = 0; m < members.size(); ++m) {
      const std::size_t cap = capacity(members[m]);
      if (share[m] > cap) {
        counts[members[m]] += cap;
        units -= cap;
      }
    }
    std::erase_if(members, [&](std::size_t i) { return capacity(i) == 0; });
  }
  return units;
}

}  // namespace

void BudgetConfig::validate() const {
  if (base_frames < 1) throw Error(Errc::kInvalidArgument, "base frames must be >= 1");
  if (tokens_per_frame < 1) throw Error(Errc::kInvalidArgument, "tokens per frame must be >= 1");
  if (!(keep_percent > 0.0 && keep_percent <= 100.0)) {
    throw Error(Errc::kInvalidArgument, "keep percent must lie in (0, 100]");
  }
  if (!(p_target > 0.0 && p_target < 1.0)) throw Error(Errc::kInvalidArgument, "p_target must lie in (0, 1)");
}

std::size_t BudgetConfig::pruned_frame_cost() const { return keep_count(keep_percent / 100.0, tokens_per_frame); }

std::vector<std::size_t> priority_events(std::span<const std::size_t> selected, std::size_t event_count) {
  std::set<std::size_t> out;
  for (std::size_t s : selected) {
    if (s >= event_count) {
      throw Error(Errc::kInvalidArgument,
                  "selected event " + std::to_string(s) + " outside " + std::to_string(event_count) + " events");
    }
    if (s > 0) out.insert(s - 1);
    out.insert(s);
    if (s + 1 < event_count) out.insert(s + 1);
  }
  return {out.begin(), out.end()};
}

std::vector<std::size_t> allocate_frames(std::span<const des::EventSegment> events,
                                         std::span<const std::size_t> priority, std::size_t budget) {
  if (budget < 1) throw Error(Errc::kInvalidArgument, "frame budget must be >= 1");
  const std::size_t n = events.size();
  std::vector<bool> is_priority(n, false);
  for (std::size_t p : priority) {
    if (p >= n) throw Error(Errc::kInvalidArgument, "priority event " + std::to_string(p) + " out of range");
    is_priority[p] = true;
  }
  std::vector<std::size_t> counts(n, 0);

  if (budget < n) {
    std::vector<std::size_t> rank(n);
    std::iota(rank.begin(), rank.end(), std::size_t{0});
    std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
      if (is_priority[a] != is_priority[b]) return static_cast<bool>(is_priority[a]);
      if (events[a].length() != events[b].length()) return events[a].length() > events[b].length();
      return a < b;
    });
    for (std::size_t i = 0; i < budget; ++i) counts[rank[i]] = 1;
    return counts;
  }

  std::fill(counts.begin(), counts.end(), 1);
  std::vector<std::size_t> first, second;
  for (std::size_t i = 0; i < n; ++i) (is_priority[i] ? first : second).push_back(i);
  const std::size_t left = apportion(events, first, counts, budget - n);
  apportion(events, second, counts, left);
  return counts;
}

std::vector<std::size_t> sample_within_event(const des::EventSegment& event, std::size_t count) {
  if (count < 1) throw Error(Errc::kInvalidArgument, "sample count must be >= 1");
  if (count > event.length()) {
    throw Error(Errc::kCountExceedsLength, std::to_string(count) + " frames requested from an event of " +
                                               std::to_string(event.length()));
  }
  std::vector<std::size_t> others;
  for (std::size_t f = event.start; f <= event.end; ++f) {
    if (f != event.anchor) others.push_back(f);
  }
  std::vector<std::size_t> frames{event.anchor};
  const std::size_t c = count - 1;
  for (std::size_t i = 0; i < c; ++i) frames.push_back(others[(2 * i + 1) * others.size() / (2 * c)]);
  std::sort(frames.begin(), frames.end());
  return frames;
}

std::size_t expand_frame_budget(std::size_t base_frames, std::size_t tokens_per_frame, double keep_percent,
                                std::size_t anchor_count) {
  BudgetConfig cfg{base_frames, tokens_per_frame, keep_percent};
  cfg.validate();
  if (anchor_count < 1) throw Error(Errc::kInvalidArgument, "need at least one anchor");
  if (anchor_count > base_frames) {
    throw Error(Errc::kAnchorsExceedBudget, std::to_string(anchor_count) + " anchors exceed a budget of " +
                                                std::to_string(base_frames) + " frames");
  }
  const std::size_t spare = (base_frames - anchor_count) * tokens_per_frame;
  return anchor_count + spare / cfg.pruned_frame_cost();
}

std::string_view to_string(FrameRole role) noexcept { return role == FrameRole::kAnchor ? "anchor" : "pruned"; }

std::vector<std::size_t> FrameSchedule::pruned_frames(std::span<const des::EventSegment> events) const {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < frames.size(); ++e) {
    for (std::size_t f : frames[e]) {
      if (f != events[e].anchor) out.push_back(f);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t default_frame_budget(std::size_t event_count, const BudgetConfig& config) {
  config.validate();
  const std::size_t anchors = std::min(event_count, config.base_frames);
  if (anchors == 0 || !config.prunes()) return config.base_frames;
  return expand_frame_budget(config.base_frames, config.tokens_per_frame, config.keep_percent, anchors);
}

FrameSchedule schedule_frames(std::span<const des::EventSegment> events, std::span<const std::size_t> selected,
                              const BudgetConfig& config, std::optional<std::size_t> frame_budget) {
  if (events.empty()) throw Error(Errc::kEmptyEventList, "no events to schedule");
  FrameSchedule schedule;
  schedule.frame_budget = frame_budget ? *frame_budget : default_frame_budget(events.size(), config);
  schedule.priority = priority_events(selected, events.size());
  const auto counts = allocate_frames(events, schedule.priority, schedule.frame_budget);
  schedule.frames.resize(events.size());
  for (std::size_t e = 0; e < events.size(); ++e) {
    if (counts[e] > 0) schedule.frames[e] = sample_within_event(events[e], counts[e]);
  }
  return schedule;
}

std::vector<PlannedEvent> assemble_events(const SelectionInput& input, const FrameSchedule& schedule,
                                          const std::map<std::size_t, TokenMask>& masks, const BudgetConfig& config,
                                          PlanTotals& totals) {
  config.validate();
  if (schedule.frames.size() != input.events.size()) {
    throw Error(Errc::kCountMismatch, "schedule does not match the event list");
  }
  if (!input.alphas.empty() && input.alphas.size() != input.events.size()) {
    throw Error(Errc::kCountMismatch, "alpha count does not match the event list");
  }
  const std::set<std::size_t> selected(input.selected.begin(), input.selected.end());
  const std::set<std::size_t> priority(schedule.priority.begin(), schedule.priority.end());

  std::vector<PlannedEvent> out;
  PlanTotals sum;
  for (std::size_t e = 0; e < input.events.size(); ++e) {
    const auto& segment = input.events[e];
    PlannedEvent planned{segment, input.alphas.empty() ? 0.0 : input.alphas[e], selected.contains(e),
                         priority.contains(e), {}};
    for (std::size_t f : schedule.frames[e]) {
      PlannedFrame frame{f, f == segment.anchor ? FrameRole::kAnchor : FrameRole::kPruned, std::nullopt};
      std::size_t tokens = config.tokens_per_frame;
      if (frame.role == FrameRole::kPruned && config.prunes()) {
        const auto it = masks.find(f);
        if (it == masks.end()) throw Error(Errc::kMissingMask, "no mask for frame " + std::to_string(f));
        if (it->second.size() != config.tokens_per_frame) {
          throw Error(Errc::kCountMismatch, "mask for frame " + std::to_string(f) + " has " +
                                                std::to_string(it->second.size()) + " patches, expected " +
                                                std::to_string(config.tokens_per_frame));
        }
        frame.mask = it->second;
        tokens = it->second.popcount();
      }
      sum.tokens += tokens;
      ++sum.frames;
      planned.frames.push_back(std::move(frame));
    }
    out.push_back(std::move(planned));
  }
  if (sum.tokens > config.token_budget()) {
    throw Error(Errc::kTokenBudgetExceeded, std::to_string(sum.tokens) + " tokens exceed the budget of " +
                                                std::to_string(config.token_budget()));
  }
  totals = sum;
  return out;
}

PlannedEvents plan_events(const SelectionInput& input, const BudgetConfig& config, const MaskSource& masks) {
  std::map<std::size_t, TokenMask> cache;
  const std::size_t floor = std::min(input.events.size(), config.base_frames);
  for (std::size_t budget = default_frame_budget(input.events.size(), config);; --budget) {
    PlannedEvents result;
    result.schedule = schedule_frames(input.events, input.selected, config, budget);
    if (config.prunes()) {
      std::vector<std::size_t> missing;
      for (std::size_t f : result.schedule.pruned_frames(input.events)) {
        if (!cache.contains(f)) missing.push_back(f);
      }
      if (!missing.empty()) {
        auto fetched = masks(missing);
        if (fetched.size() != missing.size()) throw Error(Errc::kCountMismatch, "mask source returned too few masks");
        for (std::size_t i = 0; i < missing.size(); ++i) cache.emplace(missing[i], std::move(fetched[i]));
      }
    }
    try {
      result.events = assemble_events(input, result.schedule, cache, config, result.totals);
      return result;
    } catch (const Error& e) {
      if (e.code() != Errc::kTokenBudgetExceeded || budget <= floor) throw;
    }
  }
}

std::vector<std::string> check_plan(const SelectionPlan& plan) {
  std::vector<std::string> issues;
  const auto& budget = plan.config.budget;
  const auto fail = [&](std::string msg) { issues.push_back(std::move(msg)); };

  std::size_t expected_start = 0;
  std::size_t frames = 0;
  std::size_t tokens = 0;
  std::size_t events_with_frames = 0;
  for (std::size_t e = 0; e < plan.events.size(); ++e) {
    const auto& ev = plan.events[e];
    const auto& seg = ev.segment;
    const std::string tag = "event " + std::to_string(e) + ": ";
    if (seg.start != expected_start) fail(tag + "does not start where the previous event ended");
    if (seg.end < seg.start) fail(tag + "ends before it starts");
    if (seg.anchor != (seg.start + seg.end) / 2) fail(tag + "anchor is not the middle frame");
    expected_start = seg.end + 1;

    if (!ev.frames.empty()) ++events_with_frames;
    bool has_anchor = false;
    for (std::size_t i = 0; i < ev.frames.size(); ++i) {
      const auto& f = ev.frames[i];
      if (f.index < seg.start || f.index > seg.end) fail(tag + "frame " + std::to_string(f.index) + " outside event");
      if (i > 0 && f.index <= ev.frames[i - 1].index) fail(tag + "frames not strictly ascending");
      if (f.role == FrameRole::kAnchor) {
        if (f.index != seg.anchor) fail(tag + "anchor role on a non-anchor frame");
        if (f.mask) fail(tag + "anchor frame carries a mask");
        has_anchor = true;
        tokens += budget.tokens_per_frame;
      } else {
        if (f.index == seg.anchor) fail(tag + "anchor frame marked pruned");
        if (budget.prunes() && !f.mask) fail(tag + "pruned frame " + std::to_string(f.index) + " lacks a mask");
        if (!budget.prunes() && f.mask) fail(tag + "mask present although nothing is pruned");
        if (f.mask && f.mask->size() != budget.tokens_per_frame) fail(tag + "mask size differs from tokens per frame");
        tokens += f.mask ? f.mask->popcount() : budget.tokens_per_frame;
      }
      ++frames;
    }
    if (!ev.frames.empty() && !has_anchor) fail(tag + "sampled without its anchor");
  }
  if (plan.frame_count > 0 && expected_start != plan.frame_count) fail("events do not cover every frame");
  if (plan.events.size() <= budget.base_frames && events_with_frames != plan.events.size()) {
    fail("an event received no frame although the budget covers every event");
  }
  if (frames != plan.totals.frames) fail("frame total disagrees with the sampled frames");
  if (tokens != plan.totals.tokens) fail("token total disagrees with the masks");
  if (tokens > budget.token_budget()) fail("token total exceeds the budget");
  return issues;
}

}  // namespace flowgate::planner
