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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "sepbench/audio.hpp"
#include "sepbench/rng.hpp"
#include "sepbench/stft.hpp"

using namespace sepbench;

namespace {

MultichannelAudio random_audio(int channels, int64_t length, int rate,
                               uint64_t seed) {
  Rng rng(seed);
  MultichannelAudio a(channels, length, rate);
  for (auto& v : a.raw()) v = rng.normal();
  return a;
}

double relative_l2_error(const MultichannelAudio& a, const MultichannelAudio& b) {
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < a.raw().size(); ++i) {
    const double d = a.raw()[i] - b.raw()[i];
    num += d * d;
    den += a.raw()[i] * a.raw()[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_CASE("millisecond conversion yields exact sample counts or rejects") {
  const auto cfg16 = stft_config_from_ms(16.0, 8.0, 16000);
  CHECK(cfg16.frame_size == 256);
  CHECK(cfg16.hop_size == 128);
  const auto cfg8 = stft_config_from_ms(32.0, 16.0, 8000);
  CHECK(cfg8.frame_size == 256);
  CHECK(cfg8.hop_size == 128);
  // 16 ms at 11025 Hz is 176.4 samples.
  CHECK_THROWS(stft_config_from_ms(16.0, 8.0, 11025));
}

TEST_CASE("round trip at both paper configurations") {
  for (auto [rate, frame_ms, hop_ms] :
       {std::tuple<int, double, double>{16000, 16.0, 8.0}, {8000, 32.0, 16.0}}) {
    const auto cfg = stft_config_from_ms(frame_ms, hop_ms, rate);
    const auto x = random_audio(2, rate, rate, 11);  // 1 second
    const auto back = istft(stft(x, cfg));
    CHECK(back.length() == x.length());
    CHECK(relative_l2_error(x, back) <= 1e-6);
  }
}

TEST_CASE("all-zero input gives an all-zero spectrogram") {
  MultichannelAudio x(1, 4000, 8000);
  const auto spec = stft(x, {256, 128});
  for (const auto& v : spec.raw()) CHECK(std::abs(v) == 0.0);
  const auto back = istft(spec);
  for (double v : back.raw()) CHECK(v == 0.0);
}

TEST_CASE("unit impulse: the covering frames see |X| = window value") {
  const StftConfig cfg{256, 128};
  const auto w = sqrt_hann_window(256);
  MultichannelAudio x(1, 2048, 8000);
  const int64_t k = 700;
  x.at(0, k) = 1.0;
  const auto spec = stft(x, cfg);
  const int64_t pad = cfg.frame_size - cfg.hop_size;
  bool checked_any = false;
  for (int64_t f = 0; f < spec.frames(); ++f) {
    const int64_t start = f * cfg.hop_size - pad;
    const int64_t offset = k - start;
    if (offset < 0 || offset >= cfg.frame_size) continue;
    checked_any = true;
    for (int b = 0; b < spec.bins(); ++b) {
      CHECK(std::abs(spec.at(0, f, b)) == doctest::Approx(w[offset]).epsilon(1e-12));
    }
  }
  CHECK(checked_any);
}

TEST_CASE("linearity: stft(ax + by) = a stft(x) + b stft(y)") {
  const StftConfig cfg{256, 128};
  const auto x = random_audio(1, 5000, 16000, 21);
  const auto y = random_audio(1, 5000, 16000, 22);
  const double a = 1.7, b = -0.4;
  MultichannelAudio mix(1, 5000, 16000);
  for (size_t i = 0; i < mix.raw().size(); ++i) {
    mix.raw()[i] = a * x.raw()[i] + b * y.raw()[i];
  }
  const auto sx = stft(x, cfg);
  const auto sy = stft(y, cfg);
  const auto sm = stft(mix, cfg);
  double num = 0.0, den = 0.0;
  for (size_t i = 0; i < sm.raw().size(); ++i) {
    const auto expect = a * sx.raw()[i] + b * sy.raw()[i];
    num += std::norm(sm.raw()[i] - expect);
    den += std::norm(sm.raw()[i]);
  }
  CHECK(std::sqrt(num / den) < 1e-9);
}

TEST_CASE("scaling passes through the round trip") {
  const StftConfig cfg{256, 128};
  const auto x = random_audio(1, 3000, 8000, 31);
  MultichannelAudio ax(1, 3000, 8000);
  const double a = 3.25;
  for (size_t i = 0; i < ax.raw().size(); ++i) ax.raw()[i] = a * x.raw()[i];
  const auto rx = istft(stft(x, cfg));
  const auto rax = istft(stft(ax, cfg));
  double worst = 0.0;
  for (size_t i = 0; i < rx.raw().size(); ++i) {
    worst = std::max(worst, std::abs(rax.raw()[i] - a * rx.raw()[i]));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("windowed Parseval ratio is consistent across signals") {
  const StftConfig cfg{256, 128};
  double ratio0 = 0.0;
  for (uint64_t seed : {41u, 42u, 43u, 44u}) {
    const auto x = random_audio(1, 6000, 8000, seed);
    const auto spec = stft(x, cfg);
    double spec_energy = 0.0;
    for (int64_t f = 0; f < spec.frames(); ++f) {
      for (int b = 0; b < spec.bins(); ++b) {
        // One-sided spectrum: interior bins stand for two conjugate bins.
        const double weight = (b == 0 || b == spec.bins() - 1) ? 1.0 : 2.0;
        spec_energy += weight * std::norm(spec.at(0, f, b));
      }
    }
    spec_energy /= cfg.frame_size;
    const double time_energy = energy(x.channel(0));
    const double ratio = spec_energy / time_energy;
    if (ratio0 == 0.0) {
      ratio0 = ratio;
    } else {
      CHECK(ratio == doctest::Approx(ratio0).epsilon(1e-6));
    }
  }
}

TEST_CASE("1000 random round trips stay under 1e-6 relative error") {
  const auto cfg = stft_config_from_ms(16.0, 8.0, 16000);
  Rng rng(99);
  for (int trial = 0; trial < 1000; ++trial) {
    const int64_t len = 400 + static_cast<int64_t>(rng.uniform_int(2000));
    MultichannelAudio x(1, len, 16000);
    for (auto& v : x.raw()) v = rng.normal();
    const auto back = istft(stft(x, cfg));
    CHECK(relative_l2_error(x, back) <= 1e-6);
  }
}

TEST_CASE("frame larger than the padded signal is rejected") {
  MultichannelAudio x(1, 100, 8000);
  for (auto& v : x.raw()) v = 1.0;
  // hop == frame: the periodic sqrt-Hann cannot reconstruct, rejected.
  CHECK_THROWS(stft(x, {256, 256}));
  // Small overlap pads by only 56 samples per side; 100 + 112 < 256.
  CHECK_THROWS(stft(x, {256, 200}));
}

TEST_CASE("istft rejects an inconsistent bin count") {
  const auto x = random_audio(1, 1000, 8000, 5);
  auto spec = stft(x, {256, 128});
  ComplexSpectrogram bad(spec.channels(), spec.frames(), spec.bins() - 1,
                         spec.config(), spec.original_length(), spec.sample_rate());
  CHECK_THROWS(istft(bad));
}

TEST_CASE("config validation") {
  MultichannelAudio x(1, 1000, 8000);
  x.at(0, 0) = 1.0;
  CHECK_THROWS(stft(x, {0, 0}));
  CHECK_THROWS(stft(x, {128, 256}));  // hop > frame
}
