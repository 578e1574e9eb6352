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

#ifndef SEPBENCH_AUDIO_HPP_
#define SEPBENCH_AUDIO_HPP_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sepbench {

/// Time-domain audio, channels x samples, stored row-major in doubles.
/// All channels have equal length; values are plain amplitudes.
class MultichannelAudio {
 public:
  MultichannelAudio() = default;
  MultichannelAudio(int channels, int64_t length, int sample_rate);

  int channels() const { return channels_; }
  int64_t length() const { return length_; }
  int sample_rate() const { return sample_rate_; }

  std::span<double> channel(int c);
  std::span<const double> channel(int c) const;

  double& at(int c, int64_t t) { return data_[static_cast<size_t>(c) * length_ + t]; }
  double at(int c, int64_t t) const { return data_[static_cast<size_t>(c) * length_ + t]; }

  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  bool empty() const { return channels_ == 0 || length_ == 0; }

  /// Copies one channel into a fresh mono signal.
  MultichannelAudio extract_channel(int c) const;

  /// Throws if any sample is NaN or infinite.
  void check_finite(const std::string& what) const;

 private:
  int channels_ = 0;
  int64_t length_ = 0;
  int sample_rate_ = 0;
  std::vector<double> data_;
};

enum class WavEncoding { pcm16, float32 };

/// Reads a RIFF/WAVE file. Accepts PCM 16-bit and IEEE float 32-bit
/// (including the WAVE_FORMAT_EXTENSIBLE wrappers of both); anything else
/// is rejected with an error naming the offending format.
MultichannelAudio read_wav(const std::string& path);

void write_wav(const std::string& path, const MultichannelAudio& audio,
               WavEncoding encoding = WavEncoding::float32);

double rms(std::span<const double> x);
double energy(std::span<const double> x);

}  // namespace sepbench

#endif  // SEPBENCH_AUDIO_HPP_
