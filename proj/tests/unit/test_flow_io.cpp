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

#include <bit>
#include <cstring>
#include <filesystem>
#include <random>

#include "flowgate/error.hpp"
#include "flowgate/flow_io.hpp"

namespace flowgate {
namespace {

std::vector<std::byte> le32(std::uint32_t v) {
  return {std::byte(v & 0xFF), std::byte((v >> 8) & 0xFF), std::byte((v >> 16) & 0xFF), std::byte(v >> 24)};
}

void append(std::vector<std::byte>& out, const std::vector<std::byte>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

Errc code_of(std::span<const std::byte> bytes) {
  try {
    read_flow_file(bytes);
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::kIo;
}

TEST(FlowFile, OneByOneZeroIsTwentyBytes) {
  const auto bytes = write_flow_file(FlowField(1, 1));
  ASSERT_EQ(bytes.size(), 20u);
  std::vector<std::byte> expected;
  append(expected, le32(std::bit_cast<std::uint32_t>(202021.25f)));
  append(expected, le32(1));
  append(expected, le32(1));
  append(expected, le32(0));
  append(expected, le32(0));
  EXPECT_EQ(bytes, expected);
  // The sentinel spells "PIEH" in little-endian order.
  EXPECT_EQ(std::memcmp(bytes.data(), "PIEH", 4), 0);
}

TEST(FlowFile, TwoByOneRoundTrips) {
  const FlowField f(2, 1, {1.5f, -2.25f, 1e-30f, 3e8f});
  EXPECT_EQ(read_flow_file(write_flow_file(f)), f);
}

TEST(FlowFile, RandomFieldsRoundTripBitExact) {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<std::uint32_t> bits;
  std::uniform_int_distribution<int> dim(1, 17);
  for (int trial = 0; trial < 200; ++trial) {
    const int w = dim(rng);
    const int h = dim(rng);
    std::vector<float> uv(static_cast<std::size_t>(w) * h * 2);
    for (float& v : uv) {
      do {
        v = std::bit_cast<float>(bits(rng));
      } while (!std::isfinite(v));
    }
    const FlowField f(w, h, uv);
    const auto bytes = write_flow_file(f);
    const FlowField back = read_flow_file(bytes);
    ASSERT_EQ(back.width(), w);
    ASSERT_EQ(back.height(), h);
    for (std::size_t i = 0; i < uv.size(); ++i) {
      ASSERT_EQ(std::bit_cast<std::uint32_t>(back.vectors()[i]), std::bit_cast<std::uint32_t>(uv[i]));
    }
    EXPECT_EQ(write_flow_file(back), bytes);
  }
}

TEST(FlowFile, ZeroSentinelIsBadMagic) {
  std::vector<std::byte> bytes;
  append(bytes, le32(0));
  append(bytes, le32(1));
  append(bytes, le32(1));
  append(bytes, le32(0));
  append(bytes, le32(0));
  EXPECT_EQ(code_of(bytes), Errc::kBadMagic);
}

TEST(FlowFile, ShortPayloadIsTruncated) {
  std::vector<std::byte> bytes;
  append(bytes, le32(std::bit_cast<std::uint32_t>(kFlowSentinel)));
  append(bytes, le32(4));
  append(bytes, le32(4));
  for (int i = 0; i < 20; ++i) append(bytes, le32(0));  // 10 pairs of 16
  EXPECT_EQ(code_of(bytes), Errc::kTruncated);
}

TEST(FlowFile, ShortHeaderIsTruncated) {
  std::vector<std::byte> bytes;
  append(bytes, le32(std::bit_cast<std::uint32_t>(kFlowSentinel)));
  append(bytes, le32(4));
  EXPECT_EQ(code_of(bytes), Errc::kTruncated);
  EXPECT_EQ(code_of(std::span<const std::byte>{}), Errc::kTruncated);
}

TEST(FlowFile, NonPositiveDimensionsRejected) {
  std::vector<std::byte> bytes;
  append(bytes, le32(std::bit_cast<std::uint32_t>(kFlowSentinel)));
  append(bytes, le32(0));
  append(bytes, le32(3));
  EXPECT_EQ(code_of(bytes), Errc::kInvalidDimensions);
}

TEST(FlowFile, NanPayloadIsNonFinite) {
  std::vector<std::byte> bytes;
  append(bytes, le32(std::bit_cast<std::uint32_t>(kFlowSentinel)));
  append(bytes, le32(1));
  append(bytes, le32(1));
  append(bytes, le32(0x7FC00000u));
  append(bytes, le32(0));
  EXPECT_EQ(code_of(bytes), Errc::kNonFinite);
}

TEST(FlowFile, SaveAndLoadThroughDisk) {
  const auto path = std::filesystem::temp_directory_path() / "flowgate_test_flow.flo";
  const FlowField f(3, 2, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11});
  save_flow(path, f);
  EXPECT_EQ(load_flow(path), f);
  std::filesystem::remove(path);
}

}  // namespace
}  // namespace flowgate
