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

#include "flowgate/des.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "flowgate/error.hpp"
#include "flowgate/parallel.hpp"
#include "flowgate/providers.hpp"

namespace flowgate::des {

std::array<double, 3> rgb_to_hsv(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) noexcept {
  const double r = r8 / 255.0;
  const double g = g8 / 255.0;
  const double b = b8 / 255.0;
  const double max = std::max({r, g, b});
  const double min = std::min({r, g, b});
  const double delta = max - min;

  double h = 0.0;
  if (delta > 0.0) {
    if (max == r) {
      h = (g - b) / delta;
      if (h < 0.0) h += 6.0;
    } else if (max == g) {
      h = (b - r) / delta + 2.0;
    } else {
      h = (r - g) / delta + 4.0;
    }
    h /= 6.0;
    if (h >= 1.0) h -= 1.0;
  }
  const double s = max > 0.0 ? delta / max : 0.0;
  return {h, s, max};
}

HsvImage rgb_to_hsv(const Frame& frame) {
  const std::size_t n = static_cast<std::size_t>(frame.width()) * frame.height();
  HsvImage out{frame.width(), frame.height(), std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
  const auto px = frame.pixels();
  for (std::size_t i = 0; i < n; ++i) {
    const auto [h, s, v] = rgb_to_hsv(px[3 * i], px[3 * i + 1], px[3 * i + 2]);
    out.h[i] = h;
    out.s[i] = s;
    out.v[i] = v;
  }
  return out;
}

double hsv_difference(const HsvImage& a, const HsvImage& b) {
  if (a.width != b.width || a.height != b.height) {
    throw Error(Errc::kDimensionMismatch, "HSV images differ in size");
  }
  const std::size_t n = a.h.size();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dh_raw = std::abs(a.h[i] - b.h[i]);
    const double dh = std::min(dh_raw, 1.0 - dh_raw);
    const double ds = a.s[i] - b.s[i];
    const double dv = a.v[i] - b.v[i];
    sum += dh * dh + ds * ds + dv * dv;
  }
  return sum / static_cast<double>(n);
}

void DesConfig::validate() const {
  if (theta && !(*theta >= 0.0)) throw Error(Errc::kInvalidArgument, "theta must be nonnegative");
  if (!(eta >= 0.0)) throw Error(Errc::kInvalidArgument, "eta must be nonnegative");
  if (window < 1 || window % 2 == 0) throw Error(Errc::kInvalidArgument, "window must be odd and >= 1");
  if (min_event_len < 1) throw Error(Errc::kInvalidArgument, "min_event_len must be >= 1");
  if (!std::isfinite(adaptive_sigma)) throw Error(Errc::kInvalidArgument, "adaptive_sigma must be finite");
}

DiffSeries frame_difference_series(std::span<const Frame> frames, int workers) {
  if (frames.size() < 2) {
    throw Error(Errc::kTooFewFrames, "need ≥ 2 frames, got " + std::to_string(frames.size()));
  }
  for (const auto& f : frames) {
    if (f.width() != frames.front().width() || f.height() != frames.front().height()) {
      throw Error(Errc::kDimensionMismatch, "frame " + std::to_string(f.index()) + " differs in size");
    }
  }
  std::vector<HsvImage> hsv(frames.size());
  parallel_for(frames.size(), workers, [&](std::size_t i) { hsv[i] = rgb_to_hsv(frames[i]); });

  DiffSeries series{std::vector<double>(frames.size() - 1)};
  parallel_for(series.values.size(), workers,
               [&](std::size_t t) { series.values[t] = hsv_difference(hsv[t], hsv[t + 1]); });
  return series;
}

double resolve_theta(const DiffSeries& series, const DesConfig& config) {
  if (config.theta) return *config.theta;
  if (series.values.empty()) return 0.0;
  const double n = static_cast<double>(series.values.size());
  const double mean = std::accumulate(series.values.begin(), series.values.end(), 0.0) / n;
  double var = 0.0;
  for (double v : series.values) var += (v - mean) * (v - mean);
  return mean + config.adaptive_sigma * std::sqrt(var / n);
}

std::vector<std::size_t> coarse_boundaries(const DiffSeries& series, const DesConfig& config) {
  config.validate();
  const double theta = resolve_theta(series, config);
  const auto min_gap = static_cast<std::size_t>(config.min_event_len);
  std::vector<std::size_t> accepted;
  for (std::size_t t = 0; t < series.values.size(); ++t) {
    if (!(series.values[t] > theta)) continue;
    if (!accepted.empty() && t - accepted.back() < min_gap) {
      if (series.values[t] > series.values[accepted.back()]) accepted.back() = t;
      continue;
    }
    accepted.push_back(t);
  }
  return accepted;
}

std::vector<std::size_t> refine_boundaries(std::size_t frame_count, std::span<const std::size_t> candidates,
                                           const FlowProvider& flows, const DesConfig& config, int workers) {
  config.validate();
  if (frame_count < 2) throw Error(Errc::kTooFewFrames, "need ≥ 2 frames");
  const std::size_t last_flow = frame_count - 2;
  const auto half = static_cast<std::size_t>(config.window / 2);

  // Windows of neighbouring candidates overlap; evaluate each flow once.
  std::vector<std::size_t> needed;
  for (std::size_t c : candidates) {
    if (c > last_flow) {
      throw Error(Errc::kBoundaryOutOfRange, "candidate " + std::to_string(c) + " beyond last transition");
    }
    for (std::size_t j = c - std::min(c, half); j <= std::min(c + half, last_flow); ++j) needed.push_back(j);
  }
  std::sort(needed.begin(), needed.end());
  needed.erase(std::unique(needed.begin(), needed.end()), needed.end());

  std::vector<double> magnitude(needed.size());
  parallel_for(needed.size(), workers, [&](std::size_t i) {
    FlowField f = [&] {
      try {
        return flows.flow(needed[i]);
      } catch (const Error& e) {
        if (e.code() == Errc::kProviderFailure) throw;
        throw Error(Errc::kProviderFailure, e.detail());
      }
    }();
    magnitude[i] = mean_magnitude(f);
  });
  const auto magnitude_of = [&](std::size_t j) {
    return magnitude[static_cast<std::size_t>(std::lower_bound(needed.begin(), needed.end(), j) - needed.begin())];
  };

  std::vector<std::size_t> boundaries;
  for (std::size_t c : candidates) {
    std::size_t best = c - std::min(c, half);
    for (std::size_t j = best + 1; j <= std::min(c + half, last_flow); ++j) {
      if (magnitude_of(j) > magnitude_of(best)) best = j;
    }
    if (magnitude_of(best) > config.eta) boundaries.push_back(best);
  }
  std::sort(boundaries.begin(), boundaries.end());
  boundaries.erase(std::unique(boundaries.begin(), boundaries.end()), boundaries.end());
  return boundaries;
}

std::vector<std::size_t> transitions_to_starts(std::span<const std::size_t> transitions) {
  std::vector<std::size_t> starts(transitions.size());
  std::transform(transitions.begin(), transitions.end(), starts.begin(), [](std::size_t t) { return t + 1; });
  return starts;
}

std::vector<EventSegment> split_events(std::size_t frame_count, std::span<const std::size_t> starts) {
  if (frame_count == 0) throw Error(Errc::kTooFewFrames, "cannot split an empty sequence");
  std::vector<EventSegment> events;
  std::size_t begin = 0;
  for (std::size_t s : starts) {
    if (s <= begin || s >= frame_count) {
      throw Error(Errc::kBoundaryOutOfRange, "boundary " + std::to_string(s) + " is not in (" +
                                                 std::to_string(begin) + ", " + std::to_string(frame_count) + ")");
    }
    events.push_back({begin, s - 1, (begin + s - 1) / 2});
    begin = s;
  }
  events.push_back({begin, frame_count - 1, (begin + frame_count - 1) / 2});
  return events;
}

SplitResult dynamic_event_split(std::span<const Frame> frames, const FlowProvider& flows, const DesConfig& config,
                                int workers) {
  SplitResult result;
  result.series = frame_difference_series(frames, workers);
  result.theta = resolve_theta(result.series, config);
  result.candidates = coarse_boundaries(result.series, config);
  result.transitions = refine_boundaries(frames.size(), result.candidates, flows, config, workers);
  const auto starts = transitions_to_starts(result.transitions);
  result.events = split_events(frames.size(), starts);
  return result;
}

}  // namespace flowgate::des
