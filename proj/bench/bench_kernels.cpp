// Copyright 2026 The collmeas Authors
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

// Parallel kernels against their serial reference implementations.

#include <benchmark/benchmark.h>

#include "collmeas/game.hpp"
#include "collmeas/tomography.hpp"

namespace {

using namespace collmeas;

GameConfig game_config(std::int64_t trials) {
  return GameConfig::ideal(UniformSpherePrior{}, StrategyKind::Collective, static_cast<std::uint64_t>(trials), 42);
}

TomographyConfig tomography_config(std::int64_t repeats) {
  TomographyConfig c;
  c.true_state = state_from_angles(1.1, 2.3);
  c.ensemble_sizes = {8, 32, 128, 512, 2048};
  c.repeats = static_cast<std::uint32_t>(repeats);
  c.seed = 3;
  c.frame = build_tetrahedron();
  c.device = make_device(build_mp_basis(c.frame));
  return c;
}

void BM_GameParallel(benchmark::State &state) {
  const GameConfig config = game_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_game(config).average_fidelity);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_GameSerial(benchmark::State &state) {
  const GameConfig config = game_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_game_serial(config).average_fidelity);
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_CurveParallel(benchmark::State &state) {
  const TomographyConfig config = tomography_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(infidelity_curve(config).back().mean_infidelity);
}

void BM_CurveSerial(benchmark::State &state) {
  const TomographyConfig config = tomography_config(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(infidelity_curve_serial(config).back().mean_infidelity);
}

}  // namespace

BENCHMARK(BM_GameParallel)->Arg(1 << 17)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_GameSerial)->Arg(1 << 17)->Arg(1 << 20)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurveParallel)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CurveSerial)->Arg(16)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
