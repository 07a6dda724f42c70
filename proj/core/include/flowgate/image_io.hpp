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
#include <filesystem>
#include <span>
#include <vector>

#include "flowgate/flowkit.hpp"

namespace flowgate {

struct Image {
  int width = 0;
  int height = 0;
  int channels = 0;  // 1 (gray) or 3 (RGB)
  std::vector<std::uint8_t> data;
};

struct ImageInfo {
  int width = 0;
  int height = 0;
  int channels = 0;  // colour channels plus alpha, as stored
  int bit_depth = 8;
};

/// Header-only inspection, used by provider validation.
ImageInfo probe_image(const std::filesystem::path& path);

/// Reads PNG (any bit depth/colour type, converted to 8-bit) or binary PNM
/// (P5/P6, maxval 255). `channels` selects gray (1) or RGB (3) output.
Image read_image(const std::filesystem::path& path, int channels);

/// Writes an 8-bit PNG with 1 or 3 channels.
void write_png(const std::filesystem::path& path, const Image& image);

/// Lossless frame files (.png, .ppm, .pgm, .pnm) in `dir`, sorted by name.
std::vector<std::filesystem::path> list_frame_files(const std::filesystem::path& dir);

/// Loads every frame of a directory; frame indices follow the sorted file
/// order. Throws DimensionMismatch when sizes differ.
std::vector<Frame> load_frames(const std::filesystem::path& dir);

void save_frame_png(const std::filesystem::path& path, const Frame& frame);

}  // namespace flowgate
