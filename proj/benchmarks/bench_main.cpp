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

#include <benchmark/benchmark.h>

#include <random>

#include "flowgate/des.hpp"
#include "flowgate/ecq.hpp"
#include "flowgate/homography.hpp"
#include "flowgate/mtp.hpp"
#include "flowgate/planner.hpp"
#include "flowgate/providers.hpp"
#include "synthetic.hpp"

namespace {

using namespace flowgate;

void BM_BlockMatching(benchmark::State& state) {
  const int size = static_cast<int>(state.range(0));
  const auto a = synth::noise_frame(size, size, 1);
  const auto b = synth::shift_frame(a, 2, -1);
  for (auto _ : state) benchmark::DoNotOptimize(block_matching_flow(a, b));
  state.SetItemsProcessed(state.iterations() * size * size);
}
BENCHMARK(BM_BlockMatching)->Arg(64)->Arg(128)->Arg(256);

void BM_DynamicEventSplit(benchmark::State& state) {
  const auto video = synth::generate_video({}, 11);
  const BlockMatchingFlowProvider flows(video.frames);
  const int workers = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(des::dynamic_event_split(video.frames, flows, {}, workers));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(video.frames.size()));
}
BENCHMARK(BM_DynamicEventSplit)->Arg(1)->Arg(4);

void BM_CompensateCameraMotion(benchmark::State& state) {
  const int w = 320, h = 240;
  const auto model = Homography::from_matrix({1.01, 0.02, 3.0, -0.015, 0.99, -2.0, 1e-5, -2e-5, 1.0});
  auto flow = homography_induced_flow(model, w, h);
  for (int y = 100; y < 140; ++y) {
    for (int x = 140; x < 180; ++x) flow.set(x, y, {8.0f, 1.0f});
  }
  for (auto _ : state) benchmark::DoNotOptimize(compensate_camera_motion(flow));
}
BENCHMARK(BM_CompensateCameraMotion);

void BM_SelectEventsMinimal(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::vector<double> scores(static_cast<std::size_t>(state.range(0)));
  for (double& s : scores) s = d(rng);
  const auto table = ecq::significance_from_scores(scores);
  for (auto _ : state) benchmark::DoNotOptimize(ecq::select_events_minimal(table, 0.05));
}
BENCHMARK(BM_SelectEventsMinimal)->Arg(12)->Arg(256)->Arg(4096);

void BM_BruteForceMinimal(benchmark::State& state) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> d(-2.0, 2.0);
  std::vector<double> scores(static_cast<std::size_t>(state.range(0)));
  for (double& s : scores) s = d(rng);
  const auto table = ecq::significance_from_scores(scores);
  for (auto _ : state) benchmark::DoNotOptimize(ecq::brute_force_minimal(table, 0.05));
}
BENCHMARK(BM_BruteForceMinimal)->Arg(8)->Arg(12);

void BM_PatchMask(benchmark::State& state) {
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> d(1.0);
  ScalarField score(320, 240);
  for (double& v : score.values) v = d(rng);
  for (auto _ : state) benchmark::DoNotOptimize(patch_mask(score, {}));
}
BENCHMARK(BM_PatchMask);

void BM_PlanEvents(benchmark::State& state) {
  std::vector<des::EventSegment> events;
  std::size_t start = 0;
  for (int e = 0; e < state.range(0); ++e) {
    const std::size_t len = 20 + static_cast<std::size_t>(e * 7 % 50);
    events.push_back({start, start + len - 1, start + (len - 1) / 2});
    start += len;
  }
  const std::vector<std::size_t> selected{0, events.size() / 2};
  TokenMask half = TokenMask::all_kept(13, 13);
  for (std::size_t i = 85; i < 169; ++i) half.kept[i] = false;
  const planner::MaskSource masks = [&](std::span<const std::size_t> frames) {
    return std::vector<TokenMask>(frames.size(), half);
  };
  for (auto _ : state) benchmark::DoNotOptimize(planner::plan_events({events, {}, selected}, {}, masks));
}
BENCHMARK(BM_PlanEvents)->Arg(8)->Arg(64)->Arg(200);

}  // namespace

BENCHMARK_MAIN();
