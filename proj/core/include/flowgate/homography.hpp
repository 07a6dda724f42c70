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

#include "flowgate/flowkit.hpp"

namespace flowgate {

struct Point2d {
  double x = 0.0;
  double y = 0.0;
};

struct PointPair {
  Point2d src;
  Point2d dst;
};

/// Projective 3x3 transform, row-major, normalized so that m(2,2) == 1.
class Homography {
 public:
  static constexpr double kDefaultDeterminantEpsilon = 1e-12;

  /// Normalizes by the bottom-right entry. Throws Degenerate if that entry is
  /// ~0 or the normalized matrix is (near) singular.
  static Homography from_matrix(const std::array<double, 9>& m,
                                double det_epsilon = kDefaultDeterminantEpsilon);
  static Homography identity() noexcept;
  static Homography translation(double tx, double ty) noexcept;

  const std::array<double, 9>& matrix() const noexcept { return m_; }
  double operator()(int row, int col) const noexcept { return m_[3 * row + col]; }
  double determinant() const noexcept;

  /// Homogeneous projection. Throws ProjectionAtInfinity when the
  /// denominator magnitude is below `epsilon`.
  Point2d project(Point2d p, double epsilon = 1e-9) const;

  /// Frobenius distance between the normalized matrices.
  double distance(const Homography& other) const noexcept;

 private:
  explicit Homography(const std::array<double, 9>& m) noexcept : m_(m) {}
  std::array<double, 9> m_;
};

struct RansacConfig {
  int iterations = 1000;
  double inlier_threshold = 3.0;  // reprojection error, px
  double min_inlier_ratio = 0.3;
  std::uint64_t seed = 0;
};

/// Least-squares fit over all pairs by the normalized direct linear transform.
/// Throws Degenerate for fewer than 4 pairs or collinear configurations.
Homography fit_homography_dlt(std::span<const PointPair> pairs);

struct HomographyEstimate {
  Homography model;
  std::size_t inliers = 0;
};

/// RANSAC over 4-point samples, each fit by normalized DLT; the best model
/// (most inliers, then lowest inlier error) is refit on all of its inliers.
/// Throws Degenerate or NoConsensus.
HomographyEstimate estimate_homography(std::span<const PointPair> pairs, const RansacConfig& config = {});

/// Per-pixel displacement project(h, x) - x. Throws ProjectionAtInfinity.
FlowField homography_induced_flow(const Homography& h, int width, int height);

struct Compensation {
  FlowField residual;
  Homography camera = Homography::identity();
  bool compensated = false;
  std::size_t inliers = 0;
};

/// Subtracts the camera motion explained by a homography fitted to flow
/// correspondences sampled on a regular grid (cell centres, spacing
/// `sample_stride`). When no usable fit exists (no consensus, collinear
/// samples, projection at infinity) the flow is returned unchanged with
/// `compensated == false`. Throws Degenerate only when the grid holds fewer
/// than 4 points.
Compensation compensate_camera_motion(const FlowField& flow, int sample_stride = 16,
                                      const RansacConfig& ransac = {});

}  // namespace flowgate
