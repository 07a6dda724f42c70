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
#include <filesystem>
#include <vector>

#include "flowgate/ecq.hpp"
#include "flowgate/flowkit.hpp"
#include "flowgate/mtp.hpp"

namespace flowgate::synth {

struct SynthConfig {
  int width = 64;
  int height = 48;
  int min_scenes = 3;
  int max_scenes = 8;
  int min_scene_len = 12;
  int max_scene_len = 40;
  double jitter_sigma = 5.0 / 255.0;
  int objects_per_scene = 2;  // moving textured squares
  int object_size = 12;
  int max_object_speed = 2;   // px per frame, per axis
  int embedding_dim = 16;
};

struct MovingObject {
  int x0 = 0;
  int y0 = 0;
  int dx = 0;
  int dy = 0;
  int size = 0;
};

struct SynthVideo {
  std::vector<Frame> frames;
  std::vector<std::size_t> scene_starts;  // first frame of every scene but the first
  std::vector<std::size_t> scene_of_frame;
  std::vector<std::vector<MovingObject>> objects;  // per scene
  std::vector<SaliencyMap> saliency;               // per frame
  std::vector<ecq::EmbeddingVector> frame_embeddings;
  ecq::EmbeddingVector query;
  std::size_t query_scene = 0;
  std::uint64_t seed = 0;
};

/// Hard-cut video whose scenes are saturated noise textures with distinct
/// hues, moving textured squares and Gaussian pixel jitter.
SynthVideo generate_video(const SynthConfig& config, std::uint64_t seed);

/// Writes frames/frame_NNNNNN.png, saliency/sal_NNNNNN.png, embeddings.emb
/// (one record per frame), query.emb and truth.json under `dir`.
void write_video(const SynthVideo& video, const std::filesystem::path& dir);

/// Random noise image with every channel in [0, 255].
Frame noise_frame(int width, int height, std::uint64_t seed, std::size_t index = 0);

/// `base` circularly shifted so that pixel (x, y) moves to (x + dx, y + dy).
Frame shift_frame(const Frame& base, int dx, int dy, std::size_t index = 1);

}  // namespace flowgate::synth
