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

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flowgate/des.hpp"
#include "flowgate/mtp.hpp"

namespace flowgate::planner {

struct BudgetConfig {
  std::size_t base_frames = 64;
  std::size_t tokens_per_frame = 169;
  double keep_percent = 50.0;
  double p_target = 0.05;

  void validate() const;
  std::size_t token_budget() const noexcept { return base_frames * tokens_per_frame; }
  /// Nominal tokens of a pruned frame, ceil(k/100 * tokens_per_frame).
  std::size_t pruned_frame_cost() const;
  bool prunes() const noexcept { return keep_percent < 100.0; }
};

/// Selected events plus their immediate neighbours, ascending.
std::vector<std::size_t> priority_events(std::span<const std::size_t> selected, std::size_t event_count);

/// Frames per event. With budget >= events every event gets its anchor and
/// the rest goes to priority events in proportion to length (largest
/// remainder, ties to the longer then lower-indexed event), never exceeding
/// an event's length. Budget left over once every priority event is full goes
/// to the other events by the same rule. With budget < events the
/// highest-ranked events (priority, then length, then index) get one frame.
std::vector<std::size_t> allocate_frames(std::span<const des::EventSegment> events,
                                         std::span<const std::size_t> priority, std::size_t budget);

/// Anchor plus count-1 evenly spread frames from the rest of the event,
/// ascending. Throws CountExceedsLength.
std::vector<std::size_t> sample_within_event(const des::EventSegment& event, std::size_t count);

/// Largest N with anchors*T + (N - anchors)*ceil(k/100*T) <= base*T.
/// Throws AnchorsExceedBudget.
std::size_t expand_frame_budget(std::size_t base_frames, std::size_t tokens_per_frame, double keep_percent,
                                std::size_t anchor_count);

enum class FrameRole { kAnchor, kPruned };
std::string_view to_string(FrameRole role) noexcept;

struct PlannedFrame {
  std::size_t index = 0;
  FrameRole role = FrameRole::kAnchor;
  std::optional<TokenMask> mask;  // absent: every token kept
};

struct PlannedEvent {
  des::EventSegment segment;
  double alpha = 0.0;
  bool selected = false;
  bool priority = false;
  std::vector<PlannedFrame> frames;
};

struct PlanTotals {
  std::size_t frames = 0;
  std::size_t tokens = 0;
};

struct FrameSchedule {
  std::size_t frame_budget = 0;
  std::vector<std::size_t> priority;
  std::vector<std::vector<std::size_t>> frames;  // per event, ascending

  /// Sampled frames that are not anchors, ascending.
  std::vector<std::size_t> pruned_frames(std::span<const des::EventSegment> events) const;
};

/// Frame positions for a frame budget; nullopt uses the expanded budget.
FrameSchedule schedule_frames(std::span<const des::EventSegment> events, std::span<const std::size_t> selected,
                              const BudgetConfig& config, std::optional<std::size_t> frame_budget = std::nullopt);

/// The expanded frame budget for `event_count` events.
std::size_t default_frame_budget(std::size_t event_count, const BudgetConfig& config);

struct SelectionInput {
  std::span<const des::EventSegment> events;
  std::span<const double> alphas;  // may be empty
  std::span<const std::size_t> selected;
};

/// Builds the per-event plan from a schedule. Anchors keep all tokens, other
/// frames take their mask from `masks` (not consulted when nothing is
/// pruned). Totals count actual mask popcounts.
/// Throws MissingMask or TokenBudgetExceeded.
std::vector<PlannedEvent> assemble_events(const SelectionInput& input, const FrameSchedule& schedule,
                                          const std::map<std::size_t, TokenMask>& masks, const BudgetConfig& config,
                                          PlanTotals& totals);

/// Supplies masks for the requested frames, in request order.
using MaskSource = std::function<std::vector<TokenMask>(std::span<const std::size_t>)>;

struct PlannedEvents {
  FrameSchedule schedule;
  std::vector<PlannedEvent> events;
  PlanTotals totals;
};

/// Assembles with the expanded budget and, while fail-open masks push the
/// actual token count over the limit, retries with one frame fewer.
/// Throws TokenBudgetExceeded if even the anchors alone do not fit.
PlannedEvents plan_events(const SelectionInput& input, const BudgetConfig& config, const MaskSource& masks);

struct Provenance {
  std::string flow_provider;
  std::string saliency_provider;
  std::string embedding_provider;
  std::uint64_t seed = 0;
};

struct PlanConfig {
  des::DesConfig des;
  MtpConfig mtp;
  BudgetConfig budget;
};

struct SelectionPlan {
  std::string video;
  std::size_t frame_count = 0;
  PlanConfig config;
  std::vector<PlannedEvent> events;
  PlanTotals totals;
  double p_value = 0.0;
  Provenance provenance;
};

/// Every violated plan invariant as a readable message; empty when valid.
std::vector<std::string> check_plan(const SelectionPlan& plan);

}  // namespace flowgate::planner
