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
#include <filesystem>
#include <span>
#include <vector>

#include "flowgate/flowkit.hpp"

namespace flowgate {

/// Middlebury .flo sentinel, stored as little-endian float32 ("PIEH").
inline constexpr float kFlowSentinel = 202021.25f;

/// Parses a Middlebury flow buffer: sentinel, int32 width, int32 height, then
/// width*height interleaved float32 (u, v) pairs, little-endian, row-major.
/// Bytes past the declared payload are ignored.
/// Throws BadMagic, Truncated, InvalidDimensions or NonFinite.
FlowField read_flow_file(std::span<const std::byte> bytes);

/// Exact inverse of read_flow_file. Throws NonFinite on NaN/Inf components.
std::vector<std::byte> write_flow_file(const FlowField& flow);

FlowField load_flow(const std::filesystem::path& path);
void save_flow(const std::filesystem::path& path, const FlowField& flow);

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes);

}  // namespace flowgate
