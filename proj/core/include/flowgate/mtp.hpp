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
#include <span>
#include <string_view>
#include <vector>

#include "flowgate/flowkit.hpp"
#include "flowgate/homography.hpp"

namespace flowgate {

class FlowProvider;
class SaliencyProvider;

/// Per-pixel saliency in [0, 1]; out-of-range inputs are clamped.
class SaliencyMap {
 public:
  SaliencyMap(int width, int height, std::vector<float> values);
  static SaliencyMap uniform(int width, int height, float value);
  static SaliencyMap from_gray8(int width, int height, std::span<const std::uint8_t> gray);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::span<const float> values() const noexcept { return values_; }

 private:
  int width_;
  int height_;
  std::vector<float> values_;
};

/// Keep/drop bit per patch of the encoder's token grid, row-major.
struct TokenMask {
  int grid_w = 0;
  int grid_h = 0;
  std::vector<bool> kept;
  double keep_fraction = 1.0;

  static TokenMask all_kept(int grid_w, int grid_h);

  std::size_t size() const noexcept { return kept.size(); }
  std::size_t popcount() const noexcept;

  /// Compares the grid and bits; keep_fraction is nominal and not compared.
  friend bool operator==(const TokenMask& a, const TokenMask& b) {
    return a.grid_w == b.grid_w && a.grid_h == b.grid_h && a.kept == b.kept;
  }
};

struct MtpConfig {
  double keep_percent = 50.0;  // k
  int grid_w = 13;
  int grid_h = 13;
  double quantile = 0.5;  // pixel-level selection only
  int sample_stride = 16;
  RansacConfig ransac;
  // Compensated magnitudes below this many px count as static.
  double motion_floor = 0.25;
  // Scores are snapped to this resolution so that round-off cannot reorder
  // otherwise tied patches.
  double score_resolution = 1e-4;

  void validate() const;
};

/// Number of items kept when selecting `fraction` of `support` candidates,
/// rounded up and robust to binary round-off in the product.
std::size_t keep_count(double fraction, std::size_t support);

/// Per-pixel |flow| * saliency.
ScalarField motion_saliency_map(const FlowField& compensated_flow, const SaliencyMap& saliency);

struct PixelMask {
  int width = 0;
  int height = 0;
  std::vector<bool> kept;
};

/// Keeps ceil((1 - quantile) * P) highest-scoring pixels, P being the number
/// of strictly positive scores; ties resolve in row-major order. Throws
/// AllZeroScore when P == 0.
PixelMask pixel_mask(const ScalarField& score, double quantile);

/// Average-pools `score` onto the patch grid (equal spatial partition) and
/// keeps the top ceil(k/100 * support) patches with positive pooled score.
/// Throws GridTooFine or AllZeroScore.
TokenMask patch_mask(const ScalarField& score, const MtpConfig& config);

/// Pooled per-patch means, row-major; exposed for inspection and tests.
std::vector<double> pool_scores(const ScalarField& score, int grid_w, int grid_h);

/// Tokens whose patch bit is set, in original order. Throws CountMismatch.
template <typename Token>
std::vector<Token> prune_tokens(std::span<const Token> tokens, const TokenMask& mask);

enum class MtpStatus {
  kPruned,
  kFailOpenStatic,          // no positive motion score anywhere
  kFailOpenUncompensated,   // camera motion could not be estimated
};

std::string_view to_string(MtpStatus status) noexcept;

struct MtpFrameResult {
  TokenMask mask;
  MtpStatus status = MtpStatus::kPruned;
};

/// Compensated-flow saliency pipeline for frame t: flow(t -> t+1), camera
/// compensation, saliency weighting, patch selection. Degenerate motion
/// yields the all-kept mask. For the last frame of a sequence the flow of
/// the preceding pair is used.
MtpFrameResult mtp_frame(std::size_t t, const FlowProvider& flows, const SaliencyProvider& saliency,
                         const MtpConfig& config);

/// mtp_frame on an explicit flow and saliency map.
MtpFrameResult mtp_from_flow(const FlowField& flow, const SaliencyMap& saliency, const MtpConfig& config);

// ---------------------------------------------------------------------------

void throw_count_mismatch(std::size_t tokens, std::size_t patches);

template <typename Token>
std::vector<Token> prune_tokens(std::span<const Token> tokens, const TokenMask& mask) {
  if (tokens.size() != mask.size()) throw_count_mismatch(tokens.size(), mask.size());
  std::vector<Token> kept;
  kept.reserve(mask.popcount());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (mask.kept[i]) kept.push_back(tokens[i]);
  }
  return kept;
}

}  // namespace flowgate
