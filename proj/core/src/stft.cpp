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

#include "sepbench/stft.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sepbench/fft.hpp"

namespace sepbench {

namespace {

constexpr double kPi = 3.14159265358979323846;

void validate_config(const StftConfig& cfg) {
  if (cfg.frame_size < 1 || cfg.hop_size < 1) {
    throw std::invalid_argument("stft: frame_size and hop_size must be >= 1");
  }
  if (cfg.hop_size > cfg.frame_size) {
    throw std::invalid_argument("stft: hop_size must not exceed frame_size");
  }
  // Reconstruction needs the accumulated squared window to stay positive in
  // steady state. For hop == frame the periodic sqrt-Hann vanishes at frame
  // starts, so such configs are rejected up front.
  const auto w = sqrt_hann_window(cfg.frame_size);
  for (int n = 0; n < cfg.hop_size; ++n) {
    double cover = 0.0;
    for (int k = n; k < cfg.frame_size; k += cfg.hop_size) cover += w[k] * w[k];
    if (cover < 1e-6) {
      throw std::invalid_argument(
          "stft: window pair does not satisfy the reconstruction identity for hop " +
          std::to_string(cfg.hop_size));
    }
  }
}

}  // namespace

std::vector<double> sqrt_hann_window(int length) {
  std::vector<double> w(length);
  for (int n = 0; n < length; ++n) {
    const double hann = 0.5 * (1.0 - std::cos(2.0 * kPi * n / length));
    w[n] = std::sqrt(hann);
  }
  return w;
}

StftConfig stft_config_from_ms(double frame_ms, double hop_ms, int sample_rate) {
  if (sample_rate <= 0) throw std::invalid_argument("stft: sample_rate must be > 0");
  auto to_samples = [&](double ms, const char* what) {
    const double exact = ms * sample_rate / 1000.0;
    const double rounded = std::round(exact);
    if (std::abs(exact - rounded) > 1e-9 || rounded < 1.0) {
      throw std::invalid_argument(std::string("stft: ") + what + " of " +
                                  std::to_string(ms) + " ms is not a whole sample count at " +
                                  std::to_string(sample_rate) + " Hz");
    }
    return static_cast<int>(rounded);
  };
  return {to_samples(frame_ms, "frame size"), to_samples(hop_ms, "hop size")};
}

ComplexSpectrogram::ComplexSpectrogram(int channels, int64_t frames, int bins,
                                       StftConfig config, int64_t original_length,
                                       int sample_rate)
    : channels_(channels),
      frames_(frames),
      bins_(bins),
      config_(config),
      original_length_(original_length),
      sample_rate_(sample_rate) {
  data_.assign(static_cast<size_t>(channels) * frames * bins, {0.0, 0.0});
}

ComplexSpectrogram stft(const MultichannelAudio& audio, const StftConfig& cfg) {
  validate_config(cfg);
  if (audio.empty()) throw std::invalid_argument("stft: empty input");

  const int frame = cfg.frame_size;
  const int hop = cfg.hop_size;
  const int64_t pad = frame - hop;
  const int64_t padded = audio.length() + 2 * pad;
  if (frame > padded) {
    throw std::invalid_argument("stft: frame_size larger than padded signal");
  }

  const int64_t num_frames =
      padded <= frame ? 1 : 1 + (padded - frame + hop - 1) / hop;
  const int bins = frame / 2 + 1;
  const auto w = sqrt_hann_window(frame);

  ComplexSpectrogram spec(audio.channels(), num_frames, bins, cfg,
                          audio.length(), audio.sample_rate());
  std::vector<double> buf(frame);
  for (int c = 0; c < audio.channels(); ++c) {
    auto x = audio.channel(c);
    for (int64_t f = 0; f < num_frames; ++f) {
      const int64_t start = f * hop - pad;
      for (int n = 0; n < frame; ++n) {
        const int64_t idx = start + n;
        const double v =
            (idx >= 0 && idx < audio.length()) ? x[static_cast<size_t>(idx)] : 0.0;
        buf[n] = w[n] * v;
      }
      auto bins_out = rfft(buf);
      for (int b = 0; b < bins; ++b) spec.at(c, f, b) = bins_out[b];
    }
  }
  return spec;
}

MultichannelAudio istft(const ComplexSpectrogram& spec) {
  const StftConfig& cfg = spec.config();
  validate_config(cfg);
  const int frame = cfg.frame_size;
  const int hop = cfg.hop_size;
  if (spec.bins() != frame / 2 + 1) {
    throw std::invalid_argument("istft: bin count inconsistent with frame size");
  }

  const int64_t pad = frame - hop;
  const int64_t span = (spec.frames() - 1) * hop + frame;
  const auto w = sqrt_hann_window(frame);

  MultichannelAudio out(spec.channels(), spec.original_length(), spec.sample_rate());
  std::vector<double> acc(span);
  std::vector<double> wsum(span);
  std::vector<std::complex<double>> frame_bins(spec.bins());

  for (int c = 0; c < spec.channels(); ++c) {
    std::fill(acc.begin(), acc.end(), 0.0);
    std::fill(wsum.begin(), wsum.end(), 0.0);
    for (int64_t f = 0; f < spec.frames(); ++f) {
      for (int b = 0; b < spec.bins(); ++b) frame_bins[b] = spec.at(c, f, b);
      const auto y = irfft(frame_bins, frame);
      const int64_t start = f * hop;
      for (int n = 0; n < frame; ++n) {
        acc[start + n] += w[n] * y[n];
        wsum[start + n] += w[n] * w[n];
      }
    }
    auto dst = out.channel(c);
    for (int64_t t = 0; t < out.length(); ++t) {
      const int64_t idx = pad + t;
      dst[static_cast<size_t>(t)] =
          wsum[idx] > 1e-12 ? acc[idx] / wsum[idx] : 0.0;
    }
  }
  return out;
}

}  // namespace sepbench
