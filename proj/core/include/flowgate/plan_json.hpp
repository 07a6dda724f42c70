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

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flowgate/planner.hpp"

namespace flowgate::planner {

std::string base64_encode(std::span<const std::uint8_t> bytes);
/// Throws InvalidArgument on malformed input.
std::vector<std::uint8_t> base64_decode(std::string_view text);

/// Row-major bits, most significant bit first within each byte, zero padded.
std::vector<std::uint8_t> pack_mask(const TokenMask& mask);
TokenMask unpack_mask(std::span<const std::uint8_t> bytes, int grid_w, int grid_h);

/// Canonical compact JSON of the configuration that determines a plan.
std::string config_json(const PlanConfig& config);
/// 16 hex digits of FNV-1a 64 over config_json.
std::string config_hash(const PlanConfig& config);

/// Pretty-printed plan with a fixed key order and a trailing newline.
std::string serialize_plan(const SelectionPlan& plan);

/// Inverse of serialize_plan. Throws InvalidArgument on malformed documents.
SelectionPlan parse_plan(std::string_view text);

}  // namespace flowgate::planner
