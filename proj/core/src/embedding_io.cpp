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

#include "flowgate/embedding_io.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include <json.hpp>

#include "byte_io.hpp"
#include "flowgate/error.hpp"
#include "flowgate/flow_io.hpp"

namespace flowgate {

namespace {

constexpr char kMagic[4] = {'E', 'M', 'B', '1'};
constexpr std::size_t kHeaderBytes = 12;

std::vector<ecq::EmbeddingVector> parse_json(std::span<const std::byte> bytes, const std::string& origin) {
  const auto* first = reinterpret_cast<const char*>(bytes.data());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(first, first + bytes.size());
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kBadMagic, origin + ": invalid JSON embeddings: " + e.what());
  }
  if (!doc.is_array()) throw Error(Errc::kBadMagic, origin + ": JSON embeddings must be an array of arrays");
  std::vector<ecq::EmbeddingVector> out;
  for (const auto& row : doc) {
    if (!row.is_array()) throw Error(Errc::kBadMagic, origin + ": JSON embeddings must be an array of arrays");
    ecq::EmbeddingVector v;
    for (const auto& x : row) {
      if (!x.is_number()) throw Error(Errc::kNonFinite, origin + ": embedding component is not a number");
      v.values.push_back(x.get<float>());
      if (!std::isfinite(v.values.back())) throw Error(Errc::kNonFinite, origin + ": embedding component overflows");
    }
    if (!out.empty() && v.dim() != out.front().dim()) {
      throw Error(Errc::kDimensionMismatch, origin + ": JSON embedding rows differ in length");
    }
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

std::vector<ecq::EmbeddingVector> read_embeddings(std::span<const std::byte> bytes) {
  if (bytes.size() < 4) throw Error(Errc::kTruncated, "embedding buffer shorter than its magic");
  for (int i = 0; i < 4; ++i) {
    if (static_cast<char>(bytes[i]) != kMagic[i]) throw Error(Errc::kBadMagic, "missing EMB1 magic");
  }
  if (bytes.size() < kHeaderBytes) throw Error(Errc::kTruncated, "embedding header is incomplete");
  const std::uint32_t count = detail::get_u32(bytes, 4);
  const std::uint32_t dim = detail::get_u32(bytes, 8);
  if (dim == 0 && count > 0) throw Error(Errc::kInvalidDimensions, "embedding dimension is zero");
  const std::size_t values = static_cast<std::size_t>(count) * dim;
  if ((bytes.size() - kHeaderBytes) / 4 < values) {
    throw Error(Errc::kTruncated, "header declares " + std::to_string(count) + "x" + std::to_string(dim) +
                                      " values, payload holds " + std::to_string((bytes.size() - kHeaderBytes) / 4));
  }
  std::vector<ecq::EmbeddingVector> out(count);
  std::size_t offset = kHeaderBytes;
  for (auto& record : out) {
    record.values.resize(dim);
    for (float& v : record.values) {
      v = detail::get_f32(bytes, offset);
      offset += 4;
      if (!std::isfinite(v)) throw Error(Errc::kNonFinite, "embedding component is not finite");
    }
  }
  return out;
}

std::vector<std::byte> write_embeddings(std::span<const ecq::EmbeddingVector> records) {
  const std::size_t dim = records.empty() ? 0 : records.front().dim();
  std::vector<std::byte> out;
  out.reserve(kHeaderBytes + records.size() * dim * 4);
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  detail::put_u32(out, static_cast<std::uint32_t>(records.size()));
  detail::put_u32(out, static_cast<std::uint32_t>(dim));
  for (const auto& record : records) {
    if (record.dim() != dim) throw Error(Errc::kDimensionMismatch, "embedding records differ in dimension");
    for (float v : record.values) {
      if (!std::isfinite(v)) throw Error(Errc::kNonFinite, "embedding component is not finite");
      detail::put_f32(out, v);
    }
  }
  return out;
}

std::vector<ecq::EmbeddingVector> load_embeddings(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  std::size_t i = 0;
  while (i < bytes.size() && std::isspace(std::to_integer<unsigned char>(bytes[i]))) ++i;
  if (i < bytes.size() && static_cast<char>(bytes[i]) == '[') return parse_json(bytes, path.string());
  try {
    return read_embeddings(bytes);
  } catch (const Error& e) {
    throw Error(e.code(), path.string() + ": " + e.detail());
  }
}

void save_embeddings(const std::filesystem::path& path, std::span<const ecq::EmbeddingVector> records) {
  write_file_bytes(path, write_embeddings(records));
}

}  // namespace flowgate
