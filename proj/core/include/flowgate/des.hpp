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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "flowgate/flowkit.hpp"

namespace flowgate {

class FlowProvider;

namespace des {

/// Planar HSV image: hue in [0, 1) (circular), saturation and value in [0, 1].
struct HsvImage {
  int width = 0;
  int height = 0;
  std::vector<double> h;
  std::vector<double> s;
  std::vector<double> v;
};

/// Hexcone conversion of one 8-bit RGB triple.
std::array<double, 3> rgb_to_hsv(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;
HsvImage rgb_to_hsv(const Frame& frame);

/// Mean over pixels of d_H^2 + d_S^2 + d_V^2, hue distance taken on the circle.
double hsv_difference(const HsvImage& a, const HsvImage& b);

/// values[t] compares frame t with frame t+1.
struct DiffSeries {
  std::vector<double> values;
};

struct DesConfig {
  std::optional<double> theta;  // nullopt: mean + adaptive_sigma * stddev
  double eta = 1.0;             // px, mean flow magnitude
  int window = 3;               // M, odd
  int min_event_len = 2;
  double adaptive_sigma = 2.0;

  void validate() const;
};

/// Throws TooFewFrames or DimensionMismatch.
DiffSeries frame_difference_series(std::span<const Frame> frames, int workers = 1);

/// The threshold actually applied to `series` under `config`.
double resolve_theta(const DiffSeries& series, const DesConfig& config);

/// Transition indices t with values[t] > theta. Candidates closer than
/// min_event_len to the previously accepted one are merged, keeping the larger
/// difference (earlier index on ties).
std::vector<std::size_t> coarse_boundaries(const DiffSeries& series, const DesConfig& config);

/// For each candidate t, inspects the flows t-M/2 .. t+M/2 (clipped to the
/// sequence) and, when the largest mean magnitude exceeds eta, keeps the
/// transition index of that flow. Result is sorted and deduplicated.
/// Throws ProviderFailure.
std::vector<std::size_t> refine_boundaries(std::size_t frame_count, std::span<const std::size_t> candidates,
                                           const FlowProvider& flows, const DesConfig& config, int workers = 1);

struct EventSegment {
  std::size_t start = 0;
  std::size_t end = 0;  // inclusive
  std::size_t anchor = 0;

  std::size_t length() const noexcept { return end - start + 1; }
  friend bool operator==(const EventSegment&, const EventSegment&) = default;
};

/// A cut after frame t starts the next event at frame t + 1.
std::vector<std::size_t> transitions_to_starts(std::span<const std::size_t> transitions);

/// `starts` are the first frames of every event but the first, sorted, each
/// in (0, frame_count). Anchors are the middle frames floor((start+end)/2).
/// Throws BoundaryOutOfRange.
std::vector<EventSegment> split_events(std::size_t frame_count, std::span<const std::size_t> starts);

struct SplitResult {
  DiffSeries series;
  double theta = 0.0;
  std::vector<std::size_t> candidates;
  std::vector<std::size_t> transitions;
  std::vector<EventSegment> events;
};

/// Full two-stage split: HSV differencing, coarse thresholding, flow
/// refinement, partition.
SplitResult dynamic_event_split(std::span<const Frame> frames, const FlowProvider& flows, const DesConfig& config,
                                int workers = 1);

}  // namespace des
}  // namespace flowgate
