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

#include "sepbench/rng.hpp"
#include "sepbench/stft.hpp"

using namespace sepbench;

namespace {

MultichannelAudio one_second(int rate) {
  Rng rng(1);
  MultichannelAudio x(1, rate, rate);
  for (auto& v : x.raw()) v = rng.normal();
  return x;
}

void BM_stft_16k(benchmark::State& state) {
  const auto cfg = stft_config_from_ms(16.0, 8.0, 16000);
  const auto x = one_second(16000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stft(x, cfg));
  }
}

void BM_stft_8k(benchmark::State& state) {
  const auto cfg = stft_config_from_ms(32.0, 16.0, 8000);
  const auto x = one_second(8000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(stft(x, cfg));
  }
}

void BM_round_trip_16k(benchmark::State& state) {
  const auto cfg = stft_config_from_ms(16.0, 8.0, 16000);
  const auto x = one_second(16000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(istft(stft(x, cfg)));
  }
}

}  // namespace

BENCHMARK(BM_stft_16k)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_stft_8k)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_round_trip_16k)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
