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

#include "flowgate/providers.hpp"

#include <cstdio>

#include "flowgate/error.hpp"
#include "flowgate/flow_io.hpp"
#include "flowgate/image_io.hpp"

namespace flowgate {

namespace {

std::string numbered(const char* prefix, std::size_t t, const char* suffix) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%06zu%s", prefix, t, suffix);
  return buf;
}

[[noreturn]] void provider_failure(const std::string& what) { throw Error(Errc::kProviderFailure, what); }

}  // namespace

std::string flow_file_name(std::size_t t) { return numbered("flow_", t, ".flo"); }
std::string saliency_file_name(std::size_t t) { return numbered("sal_", t, ".png"); }

BlockMatchingFlowProvider::BlockMatchingFlowProvider(std::span<const Frame> frames, BlockMatchConfig config)
    : frames_(frames), config_(config) {}

std::size_t BlockMatchingFlowProvider::pair_count() const { return frames_.empty() ? 0 : frames_.size() - 1; }

FlowField BlockMatchingFlowProvider::flow(std::size_t t) const {
  if (t >= pair_count()) provider_failure("no frame pair " + std::to_string(t));
  return block_matching_flow(frames_[t], frames_[t + 1], config_);
}

std::string BlockMatchingFlowProvider::id() const {
  return "builtin:block_matching(block=" + std::to_string(config_.block) +
         ",radius=" + std::to_string(config_.radius) + ")";
}

DirectoryFlowProvider::DirectoryFlowProvider(std::filesystem::path dir, std::size_t pair_count, int width,
                                             int height)
    : dir_(std::move(dir)), pair_count_(pair_count), width_(width), height_(height) {}

FlowField DirectoryFlowProvider::flow(std::size_t t) const {
  if (t >= pair_count_) provider_failure("no frame pair " + std::to_string(t));
  const auto path = dir_ / flow_file_name(t);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) provider_failure("missing flow file " + path.string());
  try {
    FlowField field = load_flow(path);
    if (width_ > 0 && (field.width() != width_ || field.height() != height_)) {
      provider_failure(path.string() + " is " + std::to_string(field.width()) + "x" +
                       std::to_string(field.height()) + ", frames are " + std::to_string(width_) + "x" +
                       std::to_string(height_));
    }
    return field;
  } catch (const Error& e) {
    if (e.code() == Errc::kProviderFailure) throw;
    provider_failure(path.string() + ": " + e.what());
  }
}

std::string DirectoryFlowProvider::id() const { return "dir:" + dir_.filename().string(); }

UniformSaliencyProvider::UniformSaliencyProvider(int width, int height, float value)
    : width_(width), height_(height), value_(value) {}

SaliencyMap UniformSaliencyProvider::saliency(std::size_t) const {
  return SaliencyMap::uniform(width_, height_, value_);
}

std::string UniformSaliencyProvider::id() const { return "uniform:" + std::to_string(value_); }

DirectorySaliencyProvider::DirectorySaliencyProvider(std::filesystem::path dir, int width, int height)
    : dir_(std::move(dir)), width_(width), height_(height) {}

SaliencyMap DirectorySaliencyProvider::saliency(std::size_t t) const {
  const auto path = dir_ / saliency_file_name(t);
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) provider_failure("missing saliency file " + path.string());
  try {
    Image gray = read_image(path, 1);
    if (gray.width != width_ || gray.height != height_) {
      provider_failure(path.string() + " is " + std::to_string(gray.width) + "x" + std::to_string(gray.height) +
                       ", frames are " + std::to_string(width_) + "x" + std::to_string(height_));
    }
    return SaliencyMap::from_gray8(gray.width, gray.height, gray.data);
  } catch (const Error& e) {
    if (e.code() == Errc::kProviderFailure) throw;
    provider_failure(path.string() + ": " + e.what());
  }
}

std::string DirectorySaliencyProvider::id() const { return "dir:" + dir_.filename().string(); }

}  // namespace flowgate
