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

#include <gtest/gtest.h>

#include <fstream>
#include <numeric>

#include "flowgate/error.hpp"
#include "flowgate/flow_io.hpp"
#include "flowgate/image_io.hpp"
#include "flowgate/parallel.hpp"
#include "flowgate/providers.hpp"
#include "temp_dir.hpp"

namespace flowgate {
namespace {

using testing_support::TempDir;

Errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return Errc::kIo;
}

Frame gradient_frame(std::size_t index, int w, int h) {
  std::vector<std::uint8_t> rgb(static_cast<std::size_t>(w) * h * 3);
  for (std::size_t i = 0; i < rgb.size(); ++i) rgb[i] = static_cast<std::uint8_t>((i * 7 + index * 13) % 256);
  return Frame(index, w, h, std::move(rgb));
}

TEST(ImageIo, PngRoundTripGrayAndRgb) {
  TempDir dir;
  Image rgb{5, 3, 3, std::vector<std::uint8_t>(45)};
  std::iota(rgb.data.begin(), rgb.data.end(), std::uint8_t{100});
  write_png(dir / "rgb.png", rgb);
  const auto back = read_image(dir / "rgb.png", 3);
  EXPECT_EQ(back.data, rgb.data);
  const auto info = probe_image(dir / "rgb.png");
  EXPECT_EQ(info.width, 5);
  EXPECT_EQ(info.height, 3);

  Image gray{4, 2, 1, {0, 10, 20, 30, 40, 50, 60, 255}};
  write_png(dir / "gray.png", gray);
  EXPECT_EQ(read_image(dir / "gray.png", 1).data, gray.data);
  // Gray expands to equal RGB channels.
  const auto expanded = read_image(dir / "gray.png", 3);
  EXPECT_EQ(expanded.data[3], 10);
  EXPECT_EQ(expanded.data[4], 10);
  EXPECT_EQ(expanded.data[5], 10);
}

TEST(ImageIo, BinaryPnm) {
  TempDir dir;
  {
    std::ofstream out(dir / "a.ppm", std::ios::binary);
    out << "P6\n# comment\n2 1\n255\n";
    const char px[] = {1, 2, 3, 4, 5, 6};
    out.write(px, 6);
  }
  EXPECT_EQ(read_image(dir / "a.ppm", 3).data, (std::vector<std::uint8_t>{1, 2, 3, 4, 5, 6}));
}

TEST(ImageIo, FramesSortedAndSizeChecked) {
  TempDir dir;
  save_frame_png(dir / "frame_000001.png", gradient_frame(1, 8, 6));
  save_frame_png(dir / "frame_000000.png", gradient_frame(0, 8, 6));
  std::ofstream(dir / "notes.txt") << "ignored";
  const auto frames = load_frames(dir.path());
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_EQ(frames[0].index(), 0u);
  EXPECT_TRUE(std::ranges::equal(frames[1].pixels(), gradient_frame(1, 8, 6).pixels()));

  save_frame_png(dir / "frame_000002.png", gradient_frame(2, 4, 6));
  EXPECT_EQ(code_of([&] { load_frames(dir.path()); }), Errc::kDimensionMismatch);
}

TEST(ImageIo, MissingAndCorruptFiles) {
  TempDir dir;
  std::ofstream(dir / "bad.png") << "not a png";
  EXPECT_THROW(read_image(dir / "bad.png", 3), Error);
  EXPECT_THROW(read_image(dir / "none.png", 3), Error);
}

TEST(Providers, FileNames) {
  EXPECT_EQ(flow_file_name(12), "flow_000012.flo");
  EXPECT_EQ(saliency_file_name(3), "sal_000003.png");
}

TEST(Providers, DirectoryFlowReadsAndValidates) {
  TempDir dir;
  FlowField f(4, 3);
  f.set(1, 1, {0.5f, -2.0f});
  save_flow(dir / flow_file_name(0), f);
  save_flow(dir / flow_file_name(1), FlowField(2, 2));
  const DirectoryFlowProvider flows(dir.path(), 3, 4, 3);
  EXPECT_EQ(flows.flow(0).at(1, 1).v, -2.0f);
  EXPECT_EQ(code_of([&] { flows.flow(1); }), Errc::kProviderFailure);
  EXPECT_EQ(code_of([&] { flows.flow(2); }), Errc::kProviderFailure);
}

TEST(Providers, DirectorySaliencyScalesGray) {
  TempDir dir;
  write_png(dir / saliency_file_name(0), Image{2, 1, 1, {0, 255}});
  const DirectorySaliencyProvider sal(dir.path(), 2, 1);
  const auto m = sal.saliency(0);
  EXPECT_EQ(m.values()[0], 0.0f);
  EXPECT_EQ(m.values()[1], 1.0f);
  EXPECT_EQ(code_of([&] { sal.saliency(1); }), Errc::kProviderFailure);
  const DirectorySaliencyProvider wrong(dir.path(), 3, 1);
  EXPECT_EQ(code_of([&] { wrong.saliency(0); }), Errc::kProviderFailure);
}

TEST(Providers, BlockMatchingMatchesDirectCall) {
  const std::vector<Frame> frames{gradient_frame(0, 32, 24), gradient_frame(1, 32, 24)};
  const BlockMatchingFlowProvider flows(frames);
  EXPECT_EQ(flows.pair_count(), 1u);
  const auto a = flows.flow(0);
  const auto b = block_matching_flow(frames[0], frames[1], {});
  EXPECT_EQ(a, b);
  EXPECT_EQ(code_of([&] { flows.flow(1); }), Errc::kProviderFailure);
}

TEST(ParallelFor, CoversEveryIndexOnce) {
  for (int workers : {1, 2, 4, 16}) {
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), workers, [&](std::size_t i) { ++hits[i]; });
    EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
}

TEST(ParallelFor, RethrowsLowestIndexError) {
  try {
    parallel_for(100, 4, [](std::size_t i) {
      if (i == 17 || i == 60) throw std::runtime_error(std::to_string(i));
    });
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_STREQ(e.what(), "17");
  }
}

}  // namespace
}  // namespace flowgate
