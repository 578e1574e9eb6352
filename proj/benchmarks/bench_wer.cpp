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

#include <string>
#include <vector>

#include "sepbench/rng.hpp"
#include "sepbench/transcript.hpp"

using namespace sepbench;

namespace {

std::vector<std::string> tokens(int n, uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> t;
  for (int i = 0; i < n; ++i) t.push_back("w" + std::to_string(rng.uniform_int(2000)));
  return t;
}

void BM_wer(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto ref = tokens(n, 1);
  auto hyp = ref;
  Rng rng(2);
  for (auto& w : hyp) {
    if (rng.uniform() < 0.08) w = "sub" + std::to_string(rng.uniform_int(50));
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(wer(ref, hyp));
  }
  state.SetComplexityN(n);
}

void BM_cpwer_4spk(benchmark::State& state) {
  Transcript ref;
  ref.session_id = "bench";
  std::vector<HypothesisStream> streams;
  for (int s = 0; s < 4; ++s) {
    ref.utterances.push_back(
        {"spk" + std::to_string(s), s * 10.0, s * 10.0 + 9.0, tokens(200, 10 + s)});
    auto hyp = tokens(200, 10 + (s + 1) % 4);  // misaligned labels
    streams.push_back({"h" + std::to_string(s), {hyp}});
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(cpwer(ref, streams));
  }
}

}  // namespace

BENCHMARK(BM_wer)->Arg(100)->Arg(500)->Arg(2000)->Complexity()->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_cpwer_4spk)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
