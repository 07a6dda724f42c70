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

#include "synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include <json.hpp>

#include "flowgate/embedding_io.hpp"
#include "flowgate/error.hpp"
#include "flowgate/image_io.hpp"

namespace flowgate::synth {

namespace {

std::array<std::uint8_t, 3> hsv_to_rgb(double h, double s, double v) {
  h = h - std::floor(h);
  const double c = v * s;
  const double hp = h * 6.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = v - c;
  const auto to8 = [](double u) { return static_cast<std::uint8_t>(std::clamp(std::lround(u * 255.0), 0L, 255L)); };
  return {to8(r + m), to8(g + m), to8(b + m)};
}

// Texture of `w` x `h` RGB pixels around `hue`.
std::vector<std::uint8_t> texture(int w, int h, double hue, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dh(-0.05, 0.05), ds(0.6, 1.0), dv(0.35, 1.0);
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < rgb.size(); i += 3) {
    const auto px = hsv_to_rgb(hue + dh(rng), ds(rng), dv(rng));
    std::copy(px.begin(), px.end(), rgb.begin() + static_cast<std::ptrdiff_t>(i));
  }
  return rgb;
}

// Position along one axis for a square bouncing between 0 and `span`.
int bounce(int start, int speed, std::size_t tau, int span) {
  if (span <= 0) return 0;
  const long long period = 2LL * span;
  long long p = (start + static_cast<long long>(speed) * static_cast<long long>(tau)) % period;
  if (p < 0) p += period;
  return static_cast<int>(p <= span ? p : period - p);
}

ecq::EmbeddingVector random_unit(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  ecq::EmbeddingVector v;
  v.values.resize(static_cast<std::size_t>(dim));
  for (float& x : v.values) x = static_cast<float>(n(rng));
  return v.unit();
}

ecq::EmbeddingVector perturbed(const ecq::EmbeddingVector& base, double scale, std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, scale);
  ecq::EmbeddingVector v = base;
  for (float& x : v.values) x = static_cast<float>(x + n(rng));
  return v.unit();
}

}  // namespace

SynthVideo generate_video(const SynthConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto uniform_int = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
  const int w = config.width;
  const int h = config.height;

  SynthVideo video;
  video.seed = seed;
  const int scenes = uniform_int(config.min_scenes, config.max_scenes);

  // Golden-ratio hue steps keep consecutive scenes far apart on the colour wheel.
  const double hue0 = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  std::vector<double> hues(static_cast<std::size_t>(scenes));
  for (int s = 0; s < scenes; ++s) hues[static_cast<std::size_t>(s)] = hue0 + 0.6180339887498949 * s;

  std::vector<ecq::EmbeddingVector> scene_vectors;
  std::normal_distribution<double> jitter(0.0, config.jitter_sigma * 255.0);
  std::size_t frame_index = 0;
  for (int s = 0; s < scenes; ++s) {
    const int length = uniform_int(config.min_scene_len, config.max_scene_len);
    if (s > 0) video.scene_starts.push_back(frame_index);
    const auto background = texture(w, h, hues[static_cast<std::size_t>(s)], rng);

    std::vector<MovingObject> objects;
    std::vector<std::vector<std::uint8_t>> object_tex;
    const int size = std::min({config.object_size, w, h});
    for (int o = 0; o < config.objects_per_scene; ++o) {
      MovingObject obj{uniform_int(0, w - size), uniform_int(0, h - size), 0, 0, size};
      while (obj.dx == 0 && obj.dy == 0 && config.max_object_speed > 0) {
        obj.dx = uniform_int(-config.max_object_speed, config.max_object_speed);
        obj.dy = uniform_int(-config.max_object_speed, config.max_object_speed);
      }
      objects.push_back(obj);
      object_tex.push_back(texture(size, size, hues[static_cast<std::size_t>(s)] + 0.5, rng));
    }
    scene_vectors.push_back(random_unit(config.embedding_dim, rng));

    for (int tau = 0; tau < length; ++tau, ++frame_index) {
      std::vector<std::uint8_t> rgb = background;
      std::vector<float> sal(static_cast<std::size_t>(w) * h, 0.2f);
      for (std::size_t o = 0; o < objects.size(); ++o) {
        const auto& obj = objects[o];
        const int ox = bounce(obj.x0, obj.dx, static_cast<std::size_t>(tau), w - obj.size);
        const int oy = bounce(obj.y0, obj.dy, static_cast<std::size_t>(tau), h - obj.size);
        for (int y = 0; y < obj.size; ++y) {
          for (int x = 0; x < obj.size; ++x) {
            const std::size_t dst = static_cast<std::size_t>(oy + y) * w + (ox + x);
            const std::size_t src = static_cast<std::size_t>(y) * obj.size + x;
            for (int c = 0; c < 3; ++c) rgb[3 * dst + c] = object_tex[o][3 * src + c];
            sal[dst] = 1.0f;
          }
        }
      }
      for (auto& ch : rgb) {
        ch = static_cast<std::uint8_t>(std::clamp(std::lround(ch + jitter(rng)), 0L, 255L));
      }
      video.frames.emplace_back(frame_index, w, h, std::move(rgb));
      video.saliency.emplace_back(w, h, std::move(sal));
      video.scene_of_frame.push_back(static_cast<std::size_t>(s));
      video.frame_embeddings.push_back(perturbed(scene_vectors.back(), 0.05, rng));
    }
    video.objects.push_back(std::move(objects));
  }
  video.query_scene = static_cast<std::size_t>(uniform_int(0, scenes - 1));
  video.query = perturbed(scene_vectors[video.query_scene], 0.05, rng);
  return video;
}

void write_video(const SynthVideo& video, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "frames");
  std::filesystem::create_directories(dir / "saliency");
  for (std::size_t t = 0; t < video.frames.size(); ++t) {
    char name[32];
    std::snprintf(name, sizeof name, "frame_%06zu.png", t);
    save_frame_png(dir / "frames" / name, video.frames[t]);

    const auto values = video.saliency[t].values();
    Image gray{video.saliency[t].width(), video.saliency[t].height(), 1, {}};
    gray.data.resize(values.size());
    std::transform(values.begin(), values.end(), gray.data.begin(),
                   [](float v) { return static_cast<std::uint8_t>(std::lround(v * 255.0f)); });
    std::snprintf(name, sizeof name, "sal_%06zu.png", t);
    write_png(dir / "saliency" / name, gray);
  }
  save_embeddings(dir / "embeddings.emb", video.frame_embeddings);
  const std::vector<ecq::EmbeddingVector> query{video.query};
  save_embeddings(dir / "query.emb", query);

  nlohmann::ordered_json truth;
  truth["frames"] = video.frames.size();
  truth["scene_starts"] = video.scene_starts;
  truth["query_scene"] = video.query_scene;
  truth["seed"] = video.seed;
  std::ofstream out(dir / "truth.json", std::ios::binary);
  out << truth.dump(2) << "\n";
  if (!out) throw Error(Errc::kIo, "cannot write " + (dir / "truth.json").string());
}

Frame noise_frame(int width, int height, std::uint64_t seed, std::size_t index) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> byte(0, 255);
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(width) * height * 3);
  for (auto& c : rgb) c = static_cast<std::uint8_t>(byte(rng));
  return Frame(index, width, height, std::move(rgb));
}

Frame shift_frame(const Frame& base, int dx, int dy, std::size_t index) {
  const int w = base.width();
  const int h = base.height();
  std::vector<std::uint8_t> rgb(base.pixels().size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int sx = ((x - dx) % w + w) % w;
      const int sy = ((y - dy) % h + h) % h;
      const auto px = base.at(sx, sy);
      std::copy(px.begin(), px.end(), rgb.begin() + 3 * (static_cast<std::ptrdiff_t>(y) * w + x));
    }
  }
  return Frame(index, w, h, std::move(rgb));
}

}  // namespace flowgate::synth
