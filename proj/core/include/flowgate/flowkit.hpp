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
#include <span>
#include <vector>

namespace flowgate {

/// An indexed RGB image. Pixels are row-major, three 8-bit channels each.
class Frame {
 public:
  Frame(std::size_t index, int width, int height, std::vector<std::uint8_t> rgb);

  std::size_t index() const noexcept { return index_; }
  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::span<const std::uint8_t> pixels() const noexcept { return rgb_; }

  std::array<std::uint8_t, 3> at(int x, int y) const noexcept {
    const auto* p = rgb_.data() + 3 * (static_cast<std::size_t>(y) * width_ + x);
    return {p[0], p[1], p[2]};
  }

 private:
  std::size_t index_;
  int width_;
  int height_;
  std::vector<std::uint8_t> rgb_;
};

struct Vec2f {
  float u = 0.0f;
  float v = 0.0f;
};

/// Dense displacement field in pixels: pixel (x, y) of the first frame moves
/// to (x + u, y + v) in the second.
class FlowField {
 public:
  /// Zero field.
  FlowField(int width, int height);
  /// Interleaved (u, v) pairs, row-major. Components must be finite.
  FlowField(int width, int height, std::vector<float> uv);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return uv_.size() / 2; }
  std::span<const float> vectors() const noexcept { return uv_; }

  Vec2f at(int x, int y) const noexcept {
    const std::size_t i = 2 * (static_cast<std::size_t>(y) * width_ + x);
    return {uv_[i], uv_[i + 1]};
  }
  void set(int x, int y, Vec2f d) noexcept {
    const std::size_t i = 2 * (static_cast<std::size_t>(y) * width_ + x);
    uv_[i] = d.u;
    uv_[i + 1] = d.v;
  }

  friend bool operator==(const FlowField&, const FlowField&) = default;

 private:
  int width_;
  int height_;
  std::vector<float> uv_;
};

/// Row-major nonnegative scalar map (flow magnitudes, motion scores).
struct ScalarField {
  int width = 0;
  int height = 0;
  std::vector<double> values;

  ScalarField() = default;
  ScalarField(int w, int h, double fill = 0.0);
  ScalarField(int w, int h, std::vector<double> v);

  double at(int x, int y) const noexcept {
    return values[static_cast<std::size_t>(y) * width + x];
  }
  double& at(int x, int y) noexcept {
    return values[static_cast<std::size_t>(y) * width + x];
  }
};

struct BlockMatchConfig {
  int block = 8;
  int radius = 4;
};

/// Exhaustive integer block matching from `a` to `b`. Each non-overlapping
/// block of `a` (edge blocks may be smaller) gets the displacement within
/// +/-radius minimizing the sum of squared luma differences; candidate
/// windows must lie fully inside `b`. Ties go to the smaller displacement
/// magnitude, then to row-major scan order of (dy, dx).
FlowField block_matching_flow(const Frame& a, const Frame& b, const BlockMatchConfig& config = {});

/// ITU-R 601 luma scaled by 1000 so that block costs compare exactly.
std::vector<std::int32_t> luma_x1000(const Frame& frame);

ScalarField flow_magnitude(const FlowField& flow);
double mean_magnitude(const FlowField& flow);
double max_magnitude(const FlowField& flow);

}  // namespace flowgate
