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

#include "flowgate/ecq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "flowgate/error.hpp"

namespace flowgate::ecq {

namespace {

void check_p_target(double p_target) {
  if (!(p_target > 0.0 && p_target < 1.0)) {
    throw Error(Errc::kInvalidArgument, "p_target must lie in (0, 1), got " + std::to_string(p_target));
  }
}

SelectionResult make_result(const SignificanceTable& table, std::vector<std::size_t> selected) {
  std::sort(selected.begin(), selected.end());
  double mass = 0.0;
  for (std::size_t i : selected) mass += table.entries[i].alpha;
  return {std::move(selected), mass, std::clamp(1.0 - mass, 0.0, 1.0)};
}

// Advances `idx` (strictly increasing, size c, values < n) to the next
// combination in lexicographic order.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t c = idx.size();
  for (std::size_t i = c; i-- > 0;) {
    if (idx[i] < n - c + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < c; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

EmbeddingVector EmbeddingVector::unit() const {
  double sq = 0.0;
  for (float v : values) {
    if (!std::isfinite(v)) throw Error(Errc::kNonFinite, "embedding component is not finite");
    sq += static_cast<double>(v) * v;
  }
  EmbeddingVector out{values, true};
  if (sq == 0.0) return out;
  const double inv = 1.0 / std::sqrt(sq);
  for (float& v : out.values) v = static_cast<float>(v * inv);
  return out;
}

SignificanceTable significance_from_scores(std::span<const double> scores) {
  if (scores.empty()) throw Error(Errc::kEmptyEventList, "no events to score");
  for (double s : scores) {
    if (!std::isfinite(s)) throw Error(Errc::kNonFinite, "similarity score is not finite");
  }
  const double peak = *std::max_element(scores.begin(), scores.end());
  SignificanceTable table;
  table.entries.resize(scores.size());
  double z = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    table.entries[i].similarity = scores[i];
    table.entries[i].alpha = std::exp(scores[i] - peak);
    z += table.entries[i].alpha;
  }
  for (auto& e : table.entries) e.alpha /= z;
  return table;
}

SignificanceTable event_significance(std::span<const EmbeddingVector> anchors, const EmbeddingVector& query,
                                     bool normalize) {
  if (anchors.empty()) throw Error(Errc::kEmptyEventList, "no anchor embeddings");
  const EmbeddingVector q = normalize ? query.unit() : query;
  std::vector<double> scores(anchors.size());
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    if (anchors[i].dim() != q.dim()) {
      throw Error(Errc::kDimensionMismatch, "anchor " + std::to_string(i) + " has dimension " +
                                                std::to_string(anchors[i].dim()) + ", query has " +
                                                std::to_string(q.dim()));
    }
    const EmbeddingVector a = normalize ? anchors[i].unit() : anchors[i];
    double dot = 0.0;
    for (std::size_t d = 0; d < q.dim(); ++d) dot += static_cast<double>(a.values[d]) * q.values[d];
    scores[i] = dot;
  }
  return significance_from_scores(scores);
}

SignificanceTable uniform_significance(std::size_t event_count) {
  const std::vector<double> zeros(event_count, 0.0);
  return significance_from_scores(zeros);
}

SelectionResult select_events_minimal(const SignificanceTable& table, double p_target) {
  check_p_target(p_target);
  if (table.entries.empty()) return {};
  std::vector<std::size_t> order(table.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return table.entries[a].alpha > table.entries[b].alpha;
  });
  const double target = 1.0 - p_target - kMassTolerance;
  double mass = 0.0;
  std::size_t taken = 0;
  while (taken < order.size()) {
    mass += table.entries[order[taken++]].alpha;
    if (mass >= target) break;
  }
  order.resize(taken);
  return make_result(table, std::move(order));
}

std::vector<std::size_t> select_events_topk(const SignificanceTable& table, std::size_t k) {
  if (k == 0) throw Error(Errc::kInvalidArgument, "k must be positive");
  if (k > table.size()) {
    throw Error(Errc::kKTooLarge, "k=" + std::to_string(k) + " exceeds " + std::to_string(table.size()) + " events");
  }
  std::vector<std::size_t> order(table.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return table.entries[a].similarity > table.entries[b].similarity;
  });
  order.resize(k);
  std::sort(order.begin(), order.end());
  return order;
}

SelectionResult brute_force_minimal(const SignificanceTable& table, double p_target) {
  check_p_target(p_target);
  const std::size_t n = table.size();
  if (n > kBruteForceLimit) {
    throw Error(Errc::kTooManyEvents, std::to_string(n) + " events exceed the enumeration limit of " +
                                          std::to_string(kBruteForceLimit));
  }
  if (n == 0) return {};
  const double target = 1.0 - p_target - kMassTolerance;
  for (std::size_t c = 1; c <= n; ++c) {
    std::vector<std::size_t> idx(c);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    do {
      double mass = 0.0;
      for (std::size_t i : idx) mass += table.entries[i].alpha;
      if (mass >= target) return make_result(table, idx);
    } while (next_combination(idx, n));
  }
  // Unreachable for a softmax table; fall back to everything.
  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), std::size_t{0});
  return make_result(table, std::move(all));
}

}  // namespace flowgate::ecq
