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
#include <string>

#include "flowgate/flowkit.hpp"
#include "flowgate/mtp.hpp"

namespace flowgate {

/// Source of the flow between frame t and frame t+1. Implementations must be
/// safe to call concurrently. Any failure surfaces as ProviderFailure.
class FlowProvider {
 public:
  virtual ~FlowProvider() = default;
  virtual std::size_t pair_count() const = 0;
  virtual FlowField flow(std::size_t t) const = 0;
  virtual std::string id() const = 0;
};

/// Source of the saliency map of frame t.
class SaliencyProvider {
 public:
  virtual ~SaliencyProvider() = default;
  virtual SaliencyMap saliency(std::size_t t) const = 0;
  virtual std::string id() const = 0;
};

/// "flow_000012.flo"
std::string flow_file_name(std::size_t t);
/// "sal_000012.png"
std::string saliency_file_name(std::size_t t);

/// Builtin estimator over in-memory frames (block matching).
class BlockMatchingFlowProvider final : public FlowProvider {
 public:
  BlockMatchingFlowProvider(std::span<const Frame> frames, BlockMatchConfig config = {});

  std::size_t pair_count() const override;
  FlowField flow(std::size_t t) const override;
  std::string id() const override;

 private:
  std::span<const Frame> frames_;
  BlockMatchConfig config_;
};

/// Reads flow_{t:06}.flo files. When `width`/`height` are positive, fields of
/// any other size are rejected.
class DirectoryFlowProvider final : public FlowProvider {
 public:
  DirectoryFlowProvider(std::filesystem::path dir, std::size_t pair_count, int width = 0, int height = 0);

  std::size_t pair_count() const override { return pair_count_; }
  FlowField flow(std::size_t t) const override;
  std::string id() const override;

 private:
  std::filesystem::path dir_;
  std::size_t pair_count_;
  int width_;
  int height_;
};

/// Constant saliency everywhere; used when no saliency provider is given.
class UniformSaliencyProvider final : public SaliencyProvider {
 public:
  UniformSaliencyProvider(int width, int height, float value = 1.0f);

  SaliencyMap saliency(std::size_t t) const override;
  std::string id() const override;

 private:
  int width_;
  int height_;
  float value_;
};

/// Reads 8-bit grayscale sal_{t:06}.png files, value/255.
class DirectorySaliencyProvider final : public SaliencyProvider {
 public:
  DirectorySaliencyProvider(std::filesystem::path dir, int width, int height);

  SaliencyMap saliency(std::size_t t) const override;
  std::string id() const override;

 private:
  std::filesystem::path dir_;
  int width_;
  int height_;
};

}  // namespace flowgate
