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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "flowgate/des.hpp"
#include "flowgate/ecq.hpp"
#include "flowgate/error.hpp"
#include "flowgate/planner.hpp"

namespace flowgate::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitInternal = 1,
  kExitValidation = 2,
  kExitProvider = 3,
  kExitBudget = 4,
};

int exit_code_for(Errc code) noexcept;

struct PipelineOptions {
  std::optional<std::filesystem::path> frames_dir;
  std::optional<std::filesystem::path> video;  // decoded through `decoder`
  std::string decoder;                         // command with {input} and {output}
  std::string flow = "builtin";                // "builtin" or a directory
  std::optional<std::filesystem::path> saliency_dir;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> query;
  std::optional<std::filesystem::path> events_file;
  std::filesystem::path out_dir = ".";
  std::string name;  // video name recorded in the plan
  bool normalize_embeddings = true;
  bool overlays = false;
  int workers = 1;
  planner::PlanConfig config;

  std::uint64_t seed() const noexcept { return config.mtp.ransac.seed; }
  /// Paths that must exist. Throws InvalidArgument.
  void validate() const;
};

/// Loaded inputs shared by the commands.
struct Workspace {
  std::vector<Frame> frames;
  std::string video_name;
};

Workspace load_workspace(const PipelineOptions& options);

struct EventsReport {
  std::size_t frame_count = 0;
  std::vector<des::EventSegment> events;
  std::optional<des::SplitResult> split;  // absent when read from a file
};

EventsReport obtain_events(const PipelineOptions& options, const Workspace& ws);
std::vector<des::EventSegment> read_events_json(const std::filesystem::path& path, std::size_t& frame_count);

struct SelectionReport {
  ecq::SignificanceTable table;
  ecq::SelectionResult result;
  bool has_query = false;
  std::string embedding_provider;
};

SelectionReport obtain_selection(const PipelineOptions& options, const EventsReport& events);

/// events.json and diff.csv under out_dir.
void cmd_segment(const PipelineOptions& options);
/// selection.json under out_dir.
void cmd_select(const PipelineOptions& options);
/// plan.json (and overlays/ when requested) under out_dir.
void cmd_plan(const PipelineOptions& options);

/// Checks every provider file named by the options and prints one line per
/// file to `report`. Returns the number of problems found.
std::size_t validate_providers(const PipelineOptions& options, std::ostream& report);

/// Parses the command line and runs it; returns the process exit code.
int run(const std::vector<std::string>& args);

}  // namespace flowgate::cli
