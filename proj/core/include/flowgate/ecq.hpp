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
#include <span>
#include <vector>

namespace flowgate::ecq {

/// Embedding from an image or text encoder.
struct EmbeddingVector {
  std::vector<float> values;
  bool normalized = false;

  std::size_t dim() const noexcept { return values.size(); }
  /// Copy scaled to unit L2 norm. A zero vector stays zero. Throws NonFinite.
  EmbeddingVector unit() const;
};

struct SignificanceEntry {
  double similarity = 0.0;
  double alpha = 0.0;
};

/// One entry per event, in event order.
struct SignificanceTable {
  std::vector<SignificanceEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
};

struct SelectionResult {
  std::vector<std::size_t> selected;  // ascending event indices
  double achieved_mass = 0.0;
  double p_value = 1.0;
};

/// Absolute slack allowed when comparing accumulated mass with 1 - p_target.
/// Sums of equal alphas such as 19 x 0.05 land a few ulps below the target.
inline constexpr double kMassTolerance = 1e-12;

/// Similarity is the dot product of (optionally normalized) anchor and query
/// embeddings; alpha is their softmax. Throws EmptyEventList,
/// DimensionMismatch or NonFinite.
SignificanceTable event_significance(std::span<const EmbeddingVector> anchors, const EmbeddingVector& query,
                                     bool normalize = true);

/// Softmax over raw similarity scores (max-shifted).
SignificanceTable significance_from_scores(std::span<const double> scores);

/// Equal mass over `event_count` events, used when no query is available.
SignificanceTable uniform_significance(std::size_t event_count);

/// Shortest prefix of events ranked by alpha (descending, lower index first on
/// ties) whose mass reaches 1 - p_target. Throws InvalidArgument.
SelectionResult select_events_minimal(const SignificanceTable& table, double p_target);

/// The k events with the highest similarity, lower index first on ties.
/// Throws KTooLarge.
std::vector<std::size_t> select_events_topk(const SignificanceTable& table, std::size_t k);

/// Exhaustive search for the smallest subset reaching 1 - p_target,
/// lexicographically smallest among equals. Throws TooManyEvents above 20.
SelectionResult brute_force_minimal(const SignificanceTable& table, double p_target);

inline constexpr std::size_t kBruteForceLimit = 20;

}  // namespace flowgate::ecq
