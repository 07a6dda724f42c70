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

#include "flowgate/error.hpp"

namespace flowgate {

std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::kBadMagic: return "BadMagic";
    case Errc::kTruncated: return "Truncated";
    case Errc::kNonFinite: return "NonFinite";
    case Errc::kInvalidDimensions: return "InvalidDimensions";
    case Errc::kDimensionMismatch: return "DimensionMismatch";
    case Errc::kDegenerate: return "Degenerate";
    case Errc::kNoConsensus: return "NoConsensus";
    case Errc::kProjectionAtInfinity: return "ProjectionAtInfinity";
    case Errc::kTooFewFrames: return "TooFewFrames";
    case Errc::kBoundaryOutOfRange: return "BoundaryOutOfRange";
    case Errc::kProviderFailure: return "ProviderFailure";
    case Errc::kEmptyEventList: return "EmptyEventList";
    case Errc::kKTooLarge: return "KTooLarge";
    case Errc::kTooManyEvents: return "TooManyEvents";
    case Errc::kAllZeroScore: return "AllZeroScore";
    case Errc::kGridTooFine: return "GridTooFine";
    case Errc::kCountMismatch: return "CountMismatch";
    case Errc::kCountExceedsLength: return "CountExceedsLength";
    case Errc::kAnchorsExceedBudget: return "AnchorsExceedBudget";
    case Errc::kMissingMask: return "MissingMask";
    case Errc::kTokenBudgetExceeded: return "TokenBudgetExceeded";
    case Errc::kInvalidArgument: return "InvalidArgument";
    case Errc::kIo: return "Io";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

}  // namespace flowgate
