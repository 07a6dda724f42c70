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

#include "flowgate/flow_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "byte_io.hpp"
#include "flowgate/error.hpp"

namespace flowgate {

namespace {

constexpr std::size_t kHeaderBytes = 12;

}  // namespace

FlowField read_flow_file(std::span<const std::byte> bytes) {
  if (bytes.size() < 4) throw Error(Errc::kTruncated, "flow buffer shorter than the sentinel");
  if (detail::get_u32(bytes, 0) != std::bit_cast<std::uint32_t>(kFlowSentinel)) {
    throw Error(Errc::kBadMagic, "missing PIEH sentinel");
  }
  if (bytes.size() < kHeaderBytes) throw Error(Errc::kTruncated, "flow header incomplete");

  const auto width = static_cast<std::int32_t>(detail::get_u32(bytes, 4));
  const auto height = static_cast<std::int32_t>(detail::get_u32(bytes, 8));
  if (width <= 0 || height <= 0) {
    throw Error(Errc::kInvalidDimensions,
                "flow header declares " + std::to_string(width) + "x" + std::to_string(height));
  }
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * 2;
  if (bytes.size() - kHeaderBytes < count * 4) {
    throw Error(Errc::kTruncated, "flow payload has " + std::to_string((bytes.size() - kHeaderBytes) / 8) +
                                      " vectors, header declares " + std::to_string(count / 2));
  }

  std::vector<float> uv(count);
  for (std::size_t i = 0; i < count; ++i) {
    uv[i] = detail::get_f32(bytes, kHeaderBytes + 4 * i);
    if (!std::isfinite(uv[i])) {
      throw Error(Errc::kNonFinite, "component " + std::to_string(i) + " is not finite");
    }
  }
  return FlowField(width, height, std::move(uv));
}

std::vector<std::byte> write_flow_file(const FlowField& flow) {
  const auto uv = flow.vectors();
  std::vector<std::byte> out;
  out.reserve(kHeaderBytes + 4 * uv.size());
  detail::put_f32(out, kFlowSentinel);
  detail::put_u32(out, static_cast<std::uint32_t>(flow.width()));
  detail::put_u32(out, static_cast<std::uint32_t>(flow.height()));
  for (std::size_t i = 0; i < uv.size(); ++i) {
    if (!std::isfinite(uv[i])) {
      throw Error(Errc::kNonFinite, "component " + std::to_string(i) + " is not finite");
    }
    detail::put_f32(out, uv[i]);
  }
  return out;
}

std::vector<std::byte> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open " + path.string());
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<std::byte> bytes(raw.size());
  std::memcpy(bytes.data(), raw.data(), raw.size());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::kIo, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::kIo, "short write to " + path.string());
}

FlowField load_flow(const std::filesystem::path& path) { return read_flow_file(read_file_bytes(path)); }

void save_flow(const std::filesystem::path& path, const FlowField& flow) {
  write_file_bytes(path, write_flow_file(flow));
}

}  // namespace flowgate
