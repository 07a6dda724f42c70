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

#include "flowgate/flowkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "flowgate/error.hpp"

namespace flowgate {

namespace {

void require_dimensions(int width, int height) {
  if (width <= 0 || height <= 0) {
    throw Error(Errc::kInvalidDimensions,
                "dimensions must be positive, got " + std::to_string(width) + "x" + std::to_string(height));
  }
}

}  // namespace

Frame::Frame(std::size_t index, int width, int height, std::vector<std::uint8_t> rgb)
    : index_(index), width_(width), height_(height), rgb_(std::move(rgb)) {
  require_dimensions(width, height);
  if (rgb_.size() != static_cast<std::size_t>(width) * height * 3) {
    throw Error(Errc::kDimensionMismatch, "frame buffer length does not match width*height*3");
  }
}

FlowField::FlowField(int width, int height) : width_(width), height_(height) {
  require_dimensions(width, height);
  uv_.assign(static_cast<std::size_t>(width) * height * 2, 0.0f);
}

FlowField::FlowField(int width, int height, std::vector<float> uv)
    : width_(width), height_(height), uv_(std::move(uv)) {
  require_dimensions(width, height);
  if (uv_.size() != static_cast<std::size_t>(width) * height * 2) {
    throw Error(Errc::kDimensionMismatch, "flow buffer length does not match width*height*2");
  }
  for (float c : uv_) {
    if (!std::isfinite(c)) throw Error(Errc::kNonFinite, "flow component is NaN or infinite");
  }
}

ScalarField::ScalarField(int w, int h, double fill) : width(w), height(h) {
  require_dimensions(w, h);
  values.assign(static_cast<std::size_t>(w) * h, fill);
}

ScalarField::ScalarField(int w, int h, std::vector<double> v) : width(w), height(h), values(std::move(v)) {
  require_dimensions(w, h);
  if (values.size() != static_cast<std::size_t>(w) * h) {
    throw Error(Errc::kDimensionMismatch, "scalar buffer length does not match width*height");
  }
}

std::vector<std::int32_t> luma_x1000(const Frame& frame) {
  const auto px = frame.pixels();
  std::vector<std::int32_t> luma(px.size() / 3);
  for (std::size_t i = 0; i < luma.size(); ++i) {
    luma[i] = 299 * px[3 * i] + 587 * px[3 * i + 1] + 114 * px[3 * i + 2];
  }
  return luma;
}

FlowField block_matching_flow(const Frame& a, const Frame& b, const BlockMatchConfig& config) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw Error(Errc::kDimensionMismatch, "block matching needs frames of equal size");
  }
  if (config.block < 4 || config.radius < 1) {
    throw Error(Errc::kInvalidArgument, "block must be >= 4 and radius >= 1");
  }
  const int w = a.width();
  const int h = a.height();
  const int r = config.radius;
  const auto la = luma_x1000(a);
  const auto lb = luma_x1000(b);

  FlowField flow(w, h);
  for (int by = 0; by < h; by += config.block) {
    const int bh = std::min(config.block, h - by);
    for (int bx = 0; bx < w; bx += config.block) {
      const int bw = std::min(config.block, w - bx);

      std::int64_t best_cost = std::numeric_limits<std::int64_t>::max();
      int best_mag = std::numeric_limits<int>::max();
      int best_dx = 0;
      int best_dy = 0;
      for (int dy = -r; dy <= r; ++dy) {
        if (by + dy < 0 || by + dy + bh > h) continue;
        for (int dx = -r; dx <= r; ++dx) {
          if (bx + dx < 0 || bx + dx + bw > w) continue;
          std::int64_t cost = 0;
          for (int y = 0; y < bh && cost <= best_cost; ++y) {
            const std::size_t ra = static_cast<std::size_t>(by + y) * w + bx;
            const std::size_t rb = static_cast<std::size_t>(by + y + dy) * w + bx + dx;
            for (int x = 0; x < bw; ++x) {
              const std::int64_t d = la[ra + x] - lb[rb + x];
              cost += d * d;
            }
          }
          const int mag = dx * dx + dy * dy;
          // Scan order is already row-major, so a strict comparison keeps the
          // earliest candidate among exact ties.
          if (cost < best_cost || (cost == best_cost && mag < best_mag)) {
            best_cost = cost;
            best_mag = mag;
            best_dx = dx;
            best_dy = dy;
          }
        }
      }
      const Vec2f d{static_cast<float>(best_dx), static_cast<float>(best_dy)};
      for (int y = by; y < by + bh; ++y) {
        for (int x = bx; x < bx + bw; ++x) flow.set(x, y, d);
      }
    }
  }
  return flow;
}

ScalarField flow_magnitude(const FlowField& flow) {
  ScalarField mag(flow.width(), flow.height());
  const auto uv = flow.vectors();
  for (std::size_t i = 0; i < mag.values.size(); ++i) {
    mag.values[i] = std::hypot(static_cast<double>(uv[2 * i]), static_cast<double>(uv[2 * i + 1]));
  }
  return mag;
}

double mean_magnitude(const FlowField& flow) {
  const auto uv = flow.vectors();
  double sum = 0.0;
  for (std::size_t i = 0; i < flow.pixel_count(); ++i) {
    sum += std::hypot(static_cast<double>(uv[2 * i]), static_cast<double>(uv[2 * i + 1]));
  }
  return sum / static_cast<double>(flow.pixel_count());
}

double max_magnitude(const FlowField& flow) {
  const auto uv = flow.vectors();
  double best = 0.0;
  for (std::size_t i = 0; i < flow.pixel_count(); ++i) {
    best = std::max(best, std::hypot(static_cast<double>(uv[2 * i]), static_cast<double>(uv[2 * i + 1])));
  }
  return best;
}

}  // namespace flowgate
