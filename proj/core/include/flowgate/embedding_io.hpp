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

#include "flowgate/ecq.hpp"

namespace flowgate {

/// EMB1 container: ASCII "EMB1", uint32 count, uint32 dim, then count*dim
/// float32 values, all little-endian. Bytes past the payload are ignored.
/// Throws BadMagic, Truncated, InvalidDimensions or NonFinite.
std::vector<ecq::EmbeddingVector> read_embeddings(std::span<const std::byte> bytes);

/// Throws DimensionMismatch when the records differ in length, NonFinite on
/// NaN/Inf.
std::vector<std::byte> write_embeddings(std::span<const ecq::EmbeddingVector> records);

/// Reads EMB1, or a JSON array of arrays when the file starts with '['.
std::vector<ecq::EmbeddingVector> load_embeddings(const std::filesystem::path& path);
void save_embeddings(const std::filesystem::path& path, std::span<const ecq::EmbeddingVector> records);

}  // namespace flowgate
