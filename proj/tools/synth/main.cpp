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

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "flowgate/error.hpp"
#include "synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generates hard-cut synthetic videos with ground truth, saliency maps and embeddings.",
               "flowgate_synth"};
  std::filesystem::path out = "corpus";
  int videos = 1;
  std::uint64_t seed = 0;
  flowgate::synth::SynthConfig config;
  app.add_option("--out", out, "Output directory")->capture_default_str();
  app.add_option("--videos", videos, "Number of videos")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed of the first video; video i uses seed + i")->capture_default_str();
  app.add_option("--width", config.width, "Frame width")->capture_default_str();
  app.add_option("--height", config.height, "Frame height")->capture_default_str();
  app.add_option("--min-scenes", config.min_scenes)->capture_default_str();
  app.add_option("--max-scenes", config.max_scenes)->capture_default_str();
  app.add_option("--min-scene-len", config.min_scene_len)->capture_default_str();
  app.add_option("--max-scene-len", config.max_scene_len)->capture_default_str();
  app.add_option("--objects", config.objects_per_scene, "Moving squares per scene")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    for (int i = 0; i < videos; ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "video_%03d", i);
      const auto video = flowgate::synth::generate_video(config, seed + static_cast<std::uint64_t>(i));
      flowgate::synth::write_video(video, out / name);
      std::cout << (out / name).string() << ": " << video.frames.size() << " frames, "
                << video.scene_starts.size() + 1 << " scenes\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "flowgate_synth: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
