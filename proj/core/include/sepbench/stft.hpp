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

#ifndef SEPBENCH_STFT_HPP_
#define SEPBENCH_STFT_HPP_

#include <complex>
#include <cstdint>
#include <vector>

#include "sepbench/audio.hpp"

namespace sepbench {

/// Analysis parameters. The square-root Hann analysis/synthesis pair is
/// used; the inverse divides by the accumulated squared window, so exact
/// reconstruction holds for every hop at which that sum stays positive.
struct StftConfig {
  int frame_size = 0;  // samples
  int hop_size = 0;    // samples

  bool operator==(const StftConfig&) const = default;
};

/// Converts millisecond frame/hop sizes at a given rate. Sizes that do not
/// land on an integer sample count are rejected, not rounded.
StftConfig stft_config_from_ms(double frame_ms, double hop_ms, int sample_rate);

/// Complex STFT values, channels x frames x bins, bins = frame_size/2 + 1.
class ComplexSpectrogram {
 public:
  ComplexSpectrogram() = default;
  ComplexSpectrogram(int channels, int64_t frames, int bins, StftConfig config,
                     int64_t original_length, int sample_rate);

  int channels() const { return channels_; }
  int64_t frames() const { return frames_; }
  int bins() const { return bins_; }
  const StftConfig& config() const { return config_; }
  int64_t original_length() const { return original_length_; }
  int sample_rate() const { return sample_rate_; }

  std::complex<double>& at(int c, int64_t t, int f) {
    return data_[(static_cast<size_t>(c) * frames_ + t) * bins_ + f];
  }
  const std::complex<double>& at(int c, int64_t t, int f) const {
    return data_[(static_cast<size_t>(c) * frames_ + t) * bins_ + f];
  }

  std::vector<std::complex<double>>& raw() { return data_; }
  const std::vector<std::complex<double>>& raw() const { return data_; }

 private:
  int channels_ = 0;
  int64_t frames_ = 0;
  int bins_ = 0;
  StftConfig config_;
  int64_t original_length_ = 0;
  int sample_rate_ = 0;
  std::vector<std::complex<double>> data_;
};

/// Forward STFT. The signal is zero-padded by frame_size - hop_size on each
/// side so the round trip is exact at the boundaries.
ComplexSpectrogram stft(const MultichannelAudio& audio, const StftConfig& config);

/// Inverse STFT; returns exactly original_length samples.
MultichannelAudio istft(const ComplexSpectrogram& spec);

/// The periodic square-root Hann window of the given length.
std::vector<double> sqrt_hann_window(int length);

}  // namespace sepbench

#endif  // SEPBENCH_STFT_HPP_
