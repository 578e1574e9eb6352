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

#include "sepbench/metrics.hpp"
#include "sepbench/mixture.hpp"
#include "sepbench/rng.hpp"

using namespace sepbench;

namespace {

std::vector<double> speech(int seconds, int rate, uint64_t seed) {
  Rng rng(seed);
  const auto a = make_speech_like(rng, static_cast<int64_t>(seconds) * rate, rate);
  return {a.channel(0).begin(), a.channel(0).end()};
}

void BM_si_sdr(benchmark::State& state) {
  const auto ref = speech(4, 8000, 1);
  auto est = ref;
  Rng rng(2);
  for (auto& v : est) v += 0.1 * rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(si_sdr(est, ref));
  }
}

void BM_estoi_8k(benchmark::State& state) {
  const auto ref = speech(4, 8000, 3);
  auto est = ref;
  Rng rng(4);
  for (auto& v : est) v += 0.1 * rng.normal();
  for (auto _ : state) {
    benchmark::DoNotOptimize(estoi(est, ref, 8000));
  }
}

void BM_pit_si_sdr_c2(benchmark::State& state) {
  Rng rng(5);
  std::vector<MultichannelAudio> refs, ests;
  for (int c = 0; c < 2; ++c) {
    refs.push_back(make_speech_like(rng, 2 * 8000, 8000));
    MultichannelAudio e = refs.back();
    for (auto& v : e.raw()) v += 0.1;
    ests.push_back(std::move(e));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(pit_evaluate_metric(ests, refs, PitMetric::si_sdr));
  }
}

}  // namespace

BENCHMARK(BM_si_sdr)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_estoi_8k)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pit_si_sdr_c2)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
