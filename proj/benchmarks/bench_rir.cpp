// Copyright 2026 The sepbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "sepbench/room.hpp"

using namespace sepbench;

namespace {

void BM_simulate_rir(benchmark::State& state) {
  const double t60 = state.range(0) / 10.0;
  RoomSpec room{{8.0, 6.0, 3.0}, t60};
  const auto geo = circular_array(0.10, 2, false, {4.0, 3.0, 1.4});
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        simulate_rir(room, {2.0, 2.0, 1.5}, geo, -1, 0, 8000));
  }
}

void BM_measure_t60(benchmark::State& state) {
  RoomSpec room{{7.0, 6.0, 5.0}, 0.6};
  ArrayGeometry mic;
  mic.mic_positions = {{2.4, 2.2, 2.3}};
  const auto rirs = simulate_rir(room, {4.7, 4.0, 2.8}, mic, -1, 0, 8000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(measure_t60(rirs.full[0][0], 8000));
  }
}

}  // namespace

BENCHMARK(BM_simulate_rir)->Arg(3)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_measure_t60)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
