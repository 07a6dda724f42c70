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

#include "flowgate/homography.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "flowgate/error.hpp"

namespace flowgate {

namespace {

// Relative singular-value floor below which the DLT system is considered
// rank deficient (collinear or coincident points).
constexpr double kRankTolerance = 1e-10;

struct Normalizer {
  double cx = 0.0;
  double cy = 0.0;
  double scale = 1.0;

  Eigen::Matrix3d matrix() const {
    Eigen::Matrix3d t;
    t << scale, 0.0, -scale * cx, 0.0, scale, -scale * cy, 0.0, 0.0, 1.0;
    return t;
  }
};

// Hartley normalization: centroid at the origin, mean distance sqrt(2).
template <typename Get>
Normalizer make_normalizer(std::span<const PointPair> pairs, Get get) {
  Normalizer n;
  for (const auto& pp : pairs) {
    n.cx += get(pp).x;
    n.cy += get(pp).y;
  }
  n.cx /= static_cast<double>(pairs.size());
  n.cy /= static_cast<double>(pairs.size());
  double mean_dist = 0.0;
  for (const auto& pp : pairs) mean_dist += std::hypot(get(pp).x - n.cx, get(pp).y - n.cy);
  mean_dist /= static_cast<double>(pairs.size());
  if (!(mean_dist > 0.0)) throw Error(Errc::kDegenerate, "all points coincide");
  n.scale = std::sqrt(2.0) / mean_dist;
  return n;
}

double cross(Point2d a, Point2d b, Point2d c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

// Rejects minimal samples in which any three points (on either side) are
// collinear; such samples cannot define a homography.
bool sample_is_degenerate(const std::array<PointPair, 4>& s) {
  constexpr double kMinArea = 1e-6;
  for (int skip = 0; skip < 4; ++skip) {
    std::array<int, 3> idx{};
    for (int i = 0, k = 0; i < 4; ++i) {
      if (i != skip) idx[k++] = i;
    }
    if (std::abs(cross(s[idx[0]].src, s[idx[1]].src, s[idx[2]].src)) < kMinArea) return true;
    if (std::abs(cross(s[idx[0]].dst, s[idx[1]].dst, s[idx[2]].dst)) < kMinArea) return true;
  }
  return false;
}

double reprojection_error_sq(const Homography& h, const PointPair& pp) {
  const auto& m = h.matrix();
  const double w = m[6] * pp.src.x + m[7] * pp.src.y + m[8];
  if (std::abs(w) < 1e-12) return std::numeric_limits<double>::infinity();
  const double x = (m[0] * pp.src.x + m[1] * pp.src.y + m[2]) / w;
  const double y = (m[3] * pp.src.x + m[4] * pp.src.y + m[5]) / w;
  return (x - pp.dst.x) * (x - pp.dst.x) + (y - pp.dst.y) * (y - pp.dst.y);
}

}  // namespace

Homography Homography::from_matrix(const std::array<double, 9>& m, double det_epsilon) {
  if (!(std::abs(m[8]) > 1e-15) || !std::isfinite(m[8])) {
    throw Error(Errc::kDegenerate, "homography bottom-right entry is zero");
  }
  std::array<double, 9> n{};
  for (int i = 0; i < 9; ++i) n[i] = m[i] / m[8];
  n[8] = 1.0;
  Homography h(n);
  const double det = h.determinant();
  if (!std::isfinite(det) || std::abs(det) <= det_epsilon) {
    throw Error(Errc::kDegenerate, "homography is singular (det=" + std::to_string(det) + ")");
  }
  return h;
}

Homography Homography::identity() noexcept { return Homography({1, 0, 0, 0, 1, 0, 0, 0, 1}); }

Homography Homography::translation(double tx, double ty) noexcept {
  return Homography({1, 0, tx, 0, 1, ty, 0, 0, 1});
}

double Homography::determinant() const noexcept {
  const auto& a = m_;
  return a[0] * (a[4] * a[8] - a[5] * a[7]) - a[1] * (a[3] * a[8] - a[5] * a[6]) +
         a[2] * (a[3] * a[7] - a[4] * a[6]);
}

Point2d Homography::project(Point2d p, double epsilon) const {
  const double w = m_[6] * p.x + m_[7] * p.y + m_[8];
  if (std::abs(w) < epsilon) {
    throw Error(Errc::kProjectionAtInfinity,
                "point (" + std::to_string(p.x) + ", " + std::to_string(p.y) + ") maps to infinity");
  }
  return {(m_[0] * p.x + m_[1] * p.y + m_[2]) / w, (m_[3] * p.x + m_[4] * p.y + m_[5]) / w};
}

double Homography::distance(const Homography& other) const noexcept {
  double sum = 0.0;
  for (int i = 0; i < 9; ++i) sum += (m_[i] - other.m_[i]) * (m_[i] - other.m_[i]);
  return std::sqrt(sum);
}

Homography fit_homography_dlt(std::span<const PointPair> pairs) {
  if (pairs.size() < 4) {
    throw Error(Errc::kDegenerate, "need at least 4 correspondences, got " + std::to_string(pairs.size()));
  }
  const auto ns = make_normalizer(pairs, [](const PointPair& p) { return p.src; });
  const auto nd = make_normalizer(pairs, [](const PointPair& p) { return p.dst; });

  const auto rows = static_cast<Eigen::Index>(2 * pairs.size());
  Eigen::MatrixXd a(rows, 9);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double x = ns.scale * (pairs[i].src.x - ns.cx);
    const double y = ns.scale * (pairs[i].src.y - ns.cy);
    const double u = nd.scale * (pairs[i].dst.x - nd.cx);
    const double v = nd.scale * (pairs[i].dst.y - nd.cy);
    const auto r = static_cast<Eigen::Index>(2 * i);
    a.row(r) << -x, -y, -1.0, 0.0, 0.0, 0.0, u * x, u * y, u;
    a.row(r + 1) << 0.0, 0.0, 0.0, -x, -y, -1.0, v * x, v * y, v;
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  // Eight independent constraints are required; a collapsed eighth singular
  // value means the points do not pin down the transform.
  if (sv.size() < 8 || sv(7) <= kRankTolerance * sv(0)) {
    throw Error(Errc::kDegenerate, "correspondences are collinear or coincident");
  }
  const Eigen::VectorXd h = svd.matrixV().col(8);
  Eigen::Matrix3d hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  const Eigen::Matrix3d full = nd.matrix().inverse() * hn * ns.matrix();

  std::array<double, 9> m{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) m[3 * r + c] = full(r, c);
  }
  return Homography::from_matrix(m);
}

HomographyEstimate estimate_homography(std::span<const PointPair> pairs, const RansacConfig& config) {
  const std::size_t n = pairs.size();
  if (n < 4) throw Error(Errc::kDegenerate, "need at least 4 correspondences, got " + std::to_string(n));
  if (config.iterations < 1 || !(config.inlier_threshold > 0.0)) {
    throw Error(Errc::kInvalidArgument, "RANSAC needs iterations >= 1 and a positive threshold");
  }
  // Whole-set degeneracy is decided up front so that a collinear input is
  // reported as such rather than as a consensus failure.
  (void)fit_homography_dlt(pairs);

  const double threshold_sq = config.inlier_threshold * config.inlier_threshold;
  std::mt19937_64 rng(config.seed);

  std::vector<std::size_t> best_inliers;
  double best_sse = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> inliers;
  inliers.reserve(n);

  for (int iter = 0; iter < config.iterations; ++iter) {
    std::array<std::size_t, 4> idx{};
    for (int k = 0; k < 4;) {
      const std::size_t candidate = static_cast<std::size_t>(rng() % n);
      if (std::find(idx.begin(), idx.begin() + k, candidate) == idx.begin() + k) idx[k++] = candidate;
    }
    const std::array<PointPair, 4> sample{pairs[idx[0]], pairs[idx[1]], pairs[idx[2]], pairs[idx[3]]};
    if (sample_is_degenerate(sample)) continue;

    std::optional<Homography> model;
    try {
      model = fit_homography_dlt(sample);
    } catch (const Error&) {
      continue;
    }

    inliers.clear();
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = reprojection_error_sq(*model, pairs[i]);
      if (e < threshold_sq) {
        inliers.push_back(i);
        sse += e;
      }
    }
    if (inliers.size() > best_inliers.size() || (inliers.size() == best_inliers.size() && sse < best_sse)) {
      best_inliers = inliers;
      best_sse = sse;
    }
    if (best_inliers.size() == n && n > 4) break;
  }

  const double ratio = static_cast<double>(best_inliers.size()) / static_cast<double>(n);
  if (best_inliers.size() < 4 || ratio < config.min_inlier_ratio) {
    throw Error(Errc::kNoConsensus, "best model explains " + std::to_string(best_inliers.size()) + " of " +
                                        std::to_string(n) + " correspondences");
  }

  std::vector<PointPair> support;
  support.reserve(best_inliers.size());
  for (std::size_t i : best_inliers) support.push_back(pairs[i]);
  return {fit_homography_dlt(support), best_inliers.size()};
}

FlowField homography_induced_flow(const Homography& h, int width, int height) {
  FlowField flow(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const Point2d p = h.project({static_cast<double>(x), static_cast<double>(y)});
      flow.set(x, y, {static_cast<float>(p.x - x), static_cast<float>(p.y - y)});
    }
  }
  return flow;
}

Compensation compensate_camera_motion(const FlowField& flow, int sample_stride, const RansacConfig& ransac) {
  if (sample_stride < 1) throw Error(Errc::kInvalidArgument, "sample stride must be >= 1");
  std::vector<PointPair> pairs;
  for (int y = sample_stride / 2; y < flow.height(); y += sample_stride) {
    for (int x = sample_stride / 2; x < flow.width(); x += sample_stride) {
      const Vec2f d = flow.at(x, y);
      pairs.push_back({{static_cast<double>(x), static_cast<double>(y)},
                       {x + static_cast<double>(d.u), y + static_cast<double>(d.v)}});
    }
  }
  if (pairs.size() < 4) {
    throw Error(Errc::kDegenerate, "sampling grid holds " + std::to_string(pairs.size()) + " points");
  }

  HomographyEstimate estimate{Homography::identity(), 0};
  FlowField induced(flow.width(), flow.height());
  try {
    estimate = estimate_homography(pairs, ransac);
    induced = homography_induced_flow(estimate.model, flow.width(), flow.height());
  } catch (const Error& e) {
    if (e.code() == Errc::kNoConsensus || e.code() == Errc::kDegenerate ||
        e.code() == Errc::kProjectionAtInfinity) {
      return {flow, Homography::identity(), false, estimate.inliers};
    }
    throw;
  }

  std::vector<float> residual(flow.vectors().begin(), flow.vectors().end());
  const auto camera = induced.vectors();
  for (std::size_t i = 0; i < residual.size(); ++i) residual[i] -= camera[i];
  return {FlowField(flow.width(), flow.height(), std::move(residual)), estimate.model, true, estimate.inliers};
}

}  // namespace flowgate
