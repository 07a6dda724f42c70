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

#include "flowgate/mtp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "flowgate/error.hpp"
#include "flowgate/providers.hpp"

namespace flowgate {

namespace {

// Indices of strictly positive entries, best first; ties keep row-major order.
std::vector<std::size_t> ranked_positive(std::span<const double> scores) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > 0.0) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  return order;
}

}  // namespace

SaliencyMap::SaliencyMap(int width, int height, std::vector<float> values)
    : width_(width), height_(height), values_(std::move(values)) {
  if (width <= 0 || height <= 0) throw Error(Errc::kInvalidDimensions, "saliency map must be non-empty");
  if (values_.size() != static_cast<std::size_t>(width) * height) {
    throw Error(Errc::kDimensionMismatch, "saliency buffer does not match width*height");
  }
  for (float& v : values_) {
    if (!std::isfinite(v)) throw Error(Errc::kNonFinite, "saliency value is not finite");
    v = std::clamp(v, 0.0f, 1.0f);
  }
}

SaliencyMap SaliencyMap::uniform(int width, int height, float value) {
  return SaliencyMap(width, height, std::vector<float>(static_cast<std::size_t>(std::max(width, 0)) *
                                                           static_cast<std::size_t>(std::max(height, 0)),
                                                       value));
}

SaliencyMap SaliencyMap::from_gray8(int width, int height, std::span<const std::uint8_t> gray) {
  std::vector<float> values(gray.size());
  std::transform(gray.begin(), gray.end(), values.begin(), [](std::uint8_t g) { return g / 255.0f; });
  return SaliencyMap(width, height, std::move(values));
}

TokenMask TokenMask::all_kept(int grid_w, int grid_h) {
  return {grid_w, grid_h, std::vector<bool>(static_cast<std::size_t>(grid_w) * grid_h, true), 1.0};
}

std::size_t TokenMask::popcount() const noexcept {
  return static_cast<std::size_t>(std::count(kept.begin(), kept.end(), true));
}

void MtpConfig::validate() const {
  if (!(keep_percent > 0.0 && keep_percent <= 100.0)) {
    throw Error(Errc::kInvalidArgument, "keep percent must lie in (0, 100]");
  }
  if (grid_w < 1 || grid_h < 1) throw Error(Errc::kInvalidArgument, "patch grid must be at least 1x1");
  if (!(quantile > 0.0 && quantile < 1.0)) throw Error(Errc::kInvalidArgument, "quantile must lie in (0, 1)");
  if (sample_stride < 1) throw Error(Errc::kInvalidArgument, "sample stride must be >= 1");
  if (!(motion_floor >= 0.0) || !(score_resolution >= 0.0)) {
    throw Error(Errc::kInvalidArgument, "motion floor and score resolution must be nonnegative");
  }
}

std::size_t keep_count(double fraction, std::size_t support) {
  const double exact = fraction * static_cast<double>(support);
  const auto rounded = static_cast<std::size_t>(std::max(0.0, std::ceil(exact - 1e-9)));
  return std::min(rounded, support);
}

ScalarField motion_saliency_map(const FlowField& compensated_flow, const SaliencyMap& saliency) {
  if (compensated_flow.width() != saliency.width() || compensated_flow.height() != saliency.height()) {
    throw Error(Errc::kDimensionMismatch, "flow is " + std::to_string(compensated_flow.width()) + "x" +
                                              std::to_string(compensated_flow.height()) + ", saliency is " +
                                              std::to_string(saliency.width()) + "x" +
                                              std::to_string(saliency.height()));
  }
  ScalarField score = flow_magnitude(compensated_flow);
  const auto s = saliency.values();
  for (std::size_t i = 0; i < score.values.size(); ++i) score.values[i] *= s[i];
  return score;
}

PixelMask pixel_mask(const ScalarField& score, double quantile) {
  if (!(quantile > 0.0 && quantile < 1.0)) throw Error(Errc::kInvalidArgument, "quantile must lie in (0, 1)");
  const auto order = ranked_positive(score.values);
  if (order.empty()) throw Error(Errc::kAllZeroScore, "no pixel has a positive motion score");
  PixelMask mask{score.width, score.height, std::vector<bool>(score.values.size(), false)};
  const std::size_t keep = keep_count(1.0 - quantile, order.size());
  for (std::size_t i = 0; i < keep; ++i) mask.kept[order[i]] = true;
  return mask;
}

std::vector<double> pool_scores(const ScalarField& score, int grid_w, int grid_h) {
  if (grid_w < 1 || grid_h < 1) throw Error(Errc::kInvalidArgument, "patch grid must be at least 1x1");
  if (score.width < grid_w || score.height < grid_h) {
    throw Error(Errc::kGridTooFine, std::to_string(score.width) + "x" + std::to_string(score.height) +
                                        " score cannot cover a " + std::to_string(grid_w) + "x" +
                                        std::to_string(grid_h) + " grid");
  }
  std::vector<double> pooled(static_cast<std::size_t>(grid_w) * grid_h, 0.0);
  for (int gy = 0; gy < grid_h; ++gy) {
    const int y0 = static_cast<int>(static_cast<long long>(gy) * score.height / grid_h);
    const int y1 = static_cast<int>(static_cast<long long>(gy + 1) * score.height / grid_h);
    for (int gx = 0; gx < grid_w; ++gx) {
      const int x0 = static_cast<int>(static_cast<long long>(gx) * score.width / grid_w);
      const int x1 = static_cast<int>(static_cast<long long>(gx + 1) * score.width / grid_w);
      double sum = 0.0;
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) sum += score.at(x, y);
      }
      pooled[static_cast<std::size_t>(gy) * grid_w + gx] = sum / static_cast<double>((x1 - x0) * (y1 - y0));
    }
  }
  return pooled;
}

TokenMask patch_mask(const ScalarField& score, const MtpConfig& config) {
  std::vector<double> pooled = pool_scores(score, config.grid_w, config.grid_h);
  if (config.score_resolution > 0.0) {
    for (double& p : pooled) p = std::round(p / config.score_resolution) * config.score_resolution;
  }
  const auto order = ranked_positive(pooled);
  if (order.empty()) throw Error(Errc::kAllZeroScore, "no patch has a positive motion score");

  const double fraction = config.keep_percent / 100.0;
  TokenMask mask{config.grid_w, config.grid_h, std::vector<bool>(pooled.size(), false), fraction};
  const std::size_t keep = keep_count(fraction, order.size());
  for (std::size_t i = 0; i < keep; ++i) mask.kept[order[i]] = true;
  return mask;
}

void throw_count_mismatch(std::size_t tokens, std::size_t patches) {
  throw Error(Errc::kCountMismatch,
              std::to_string(tokens) + " tokens for a mask of " + std::to_string(patches) + " patches");
}

std::string_view to_string(MtpStatus status) noexcept {
  switch (status) {
    case MtpStatus::kPruned: return "pruned";
    case MtpStatus::kFailOpenStatic: return "fail_open_static";
    case MtpStatus::kFailOpenUncompensated: return "fail_open_uncompensated";
  }
  return "unknown";
}

MtpFrameResult mtp_from_flow(const FlowField& flow, const SaliencyMap& saliency, const MtpConfig& config) {
  config.validate();
  if (flow.width() != saliency.width() || flow.height() != saliency.height()) {
    throw Error(Errc::kDimensionMismatch, "flow and saliency sizes differ");
  }
  const auto fail_open = [&](MtpStatus status) {
    return MtpFrameResult{TokenMask::all_kept(config.grid_w, config.grid_h), status};
  };

  Compensation comp{flow};
  try {
    comp = compensate_camera_motion(flow, config.sample_stride, config.ransac);
  } catch (const Error& e) {
    if (e.code() != Errc::kDegenerate) throw;
    return fail_open(MtpStatus::kFailOpenUncompensated);
  }
  if (!comp.compensated) return fail_open(MtpStatus::kFailOpenUncompensated);

  ScalarField score = motion_saliency_map(comp.residual, saliency);
  const auto s = saliency.values();
  for (std::size_t i = 0; i < score.values.size(); ++i) {
    // score = |f*| * s, so |f*| < floor  <=>  score < floor * s.
    if (score.values[i] < config.motion_floor * s[i]) score.values[i] = 0.0;
  }

  try {
    return {patch_mask(score, config), MtpStatus::kPruned};
  } catch (const Error& e) {
    if (e.code() != Errc::kAllZeroScore) throw;
    return fail_open(MtpStatus::kFailOpenStatic);
  }
}

MtpFrameResult mtp_frame(std::size_t t, const FlowProvider& flows, const SaliencyProvider& saliency,
                         const MtpConfig& config) {
  if (flows.pair_count() == 0) throw Error(Errc::kProviderFailure, "flow provider has no frame pairs");
  const std::size_t pair = std::min(t, flows.pair_count() - 1);
  return mtp_from_flow(flows.flow(pair), saliency.saliency(t), config);
}

}  // namespace flowgate
