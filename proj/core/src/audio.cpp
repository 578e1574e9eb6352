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

#include "sepbench/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace sepbench {

MultichannelAudio::MultichannelAudio(int channels, int64_t length,
                                     int sample_rate)
    : channels_(channels), length_(length), sample_rate_(sample_rate) {
  if (channels < 1) throw std::invalid_argument("audio: channels must be >= 1");
  if (length < 0) throw std::invalid_argument("audio: negative length");
  if (sample_rate <= 0) throw std::invalid_argument("audio: sample_rate must be > 0");
  data_.assign(static_cast<size_t>(channels) * static_cast<size_t>(length), 0.0);
}

std::span<double> MultichannelAudio::channel(int c) {
  if (c < 0 || c >= channels_) throw std::out_of_range("audio: channel index");
  return {data_.data() + static_cast<size_t>(c) * length_, static_cast<size_t>(length_)};
}

std::span<const double> MultichannelAudio::channel(int c) const {
  if (c < 0 || c >= channels_) throw std::out_of_range("audio: channel index");
  return {data_.data() + static_cast<size_t>(c) * length_, static_cast<size_t>(length_)};
}

MultichannelAudio MultichannelAudio::extract_channel(int c) const {
  MultichannelAudio out(1, length_, sample_rate_);
  auto src = channel(c);
  std::copy(src.begin(), src.end(), out.channel(0).begin());
  return out;
}

void MultichannelAudio::check_finite(const std::string& what) const {
  for (double v : data_) {
    if (!std::isfinite(v)) {
      throw std::runtime_error(what + ": non-finite sample value");
    }
  }
}

namespace {

struct FmtChunk {
  uint16_t audio_format = 0;
  uint16_t num_channels = 0;
  uint32_t sample_rate = 0;
  uint32_t byte_rate = 0;
  uint16_t block_align = 0;
  uint16_t bits_per_sample = 0;
};

constexpr uint16_t kFormatPcm = 1;
constexpr uint16_t kFormatFloat = 3;
constexpr uint16_t kFormatExtensible = 0xFFFE;

void write_u32(std::ofstream& f, uint32_t v) {
  f.write(reinterpret_cast<const char*>(&v), 4);
}
void write_u16(std::ofstream& f, uint16_t v) {
  f.write(reinterpret_cast<const char*>(&v), 2);
}

}  // namespace

MultichannelAudio read_wav(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("wav: cannot open " + path);

  char riff[4], wave[4];
  uint32_t riff_size = 0;
  file.read(riff, 4);
  file.read(reinterpret_cast<char*>(&riff_size), 4);
  file.read(wave, 4);
  if (!file || std::strncmp(riff, "RIFF", 4) != 0 ||
      std::strncmp(wave, "WAVE", 4) != 0) {
    throw std::runtime_error("wav: not a RIFF/WAVE file: " + path);
  }

  FmtChunk fmt;
  bool found_fmt = false;
  std::vector<char> payload;

  // Chunk scan; fmt may carry extensions, data may precede unknown chunks.
  while (file) {
    char id[4];
    uint32_t size = 0;
    file.read(id, 4);
    file.read(reinterpret_cast<char*>(&size), 4);
    if (!file) break;
    if (std::strncmp(id, "fmt ", 4) == 0) {
      std::vector<char> raw(size);
      file.read(raw.data(), size);
      if (size < 16) throw std::runtime_error("wav: truncated fmt chunk: " + path);
      std::memcpy(&fmt, raw.data(), sizeof(FmtChunk));
      if (fmt.audio_format == kFormatExtensible) {
        if (size < 40) throw std::runtime_error("wav: truncated extensible fmt: " + path);
        uint16_t sub = 0;
        std::memcpy(&sub, raw.data() + 24, 2);  // first word of SubFormat GUID
        fmt.audio_format = sub;
      }
      found_fmt = true;
    } else if (std::strncmp(id, "data", 4) == 0) {
      if (!found_fmt) throw std::runtime_error("wav: data chunk before fmt: " + path);
      payload.resize(size);
      file.read(payload.data(), size);
      break;
    } else {
      file.seekg(size + (size & 1), std::ios::cur);
    }
  }
  if (!found_fmt) throw std::runtime_error("wav: missing fmt chunk: " + path);
  if (payload.empty() && !file) throw std::runtime_error("wav: missing data chunk: " + path);
  if (fmt.num_channels < 1) throw std::runtime_error("wav: zero channels: " + path);

  const bool pcm16 = fmt.audio_format == kFormatPcm && fmt.bits_per_sample == 16;
  const bool f32 = fmt.audio_format == kFormatFloat && fmt.bits_per_sample == 32;
  if (!pcm16 && !f32) {
    throw std::runtime_error(
        "wav: unsupported encoding (format tag " + std::to_string(fmt.audio_format) +
        ", " + std::to_string(fmt.bits_per_sample) +
        " bits); only 16-bit PCM and 32-bit float are accepted: " + path);
  }

  const int channels = fmt.num_channels;
  const size_t bytes_per_sample = pcm16 ? 2 : 4;
  const size_t frame_bytes = bytes_per_sample * channels;
  const int64_t frames = static_cast<int64_t>(payload.size() / frame_bytes);

  MultichannelAudio audio(channels, frames, static_cast<int>(fmt.sample_rate));
  const char* p = payload.data();
  for (int64_t t = 0; t < frames; ++t) {
    for (int c = 0; c < channels; ++c) {
      double v;
      if (pcm16) {
        int16_t s;
        std::memcpy(&s, p, 2);
        v = static_cast<double>(s) / 32768.0;
        p += 2;
      } else {
        float s;
        std::memcpy(&s, p, 4);
        v = static_cast<double>(s);
        p += 4;
      }
      audio.at(c, t) = v;
    }
  }
  return audio;
}

void write_wav(const std::string& path, const MultichannelAudio& audio,
               WavEncoding encoding) {
  if (audio.empty()) throw std::invalid_argument("wav: refusing to write empty audio");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("wav: cannot create " + path);

  const uint16_t channels = static_cast<uint16_t>(audio.channels());
  const uint16_t bits = encoding == WavEncoding::pcm16 ? 16 : 32;
  const uint16_t block_align = static_cast<uint16_t>(channels * bits / 8);
  const uint32_t data_bytes =
      static_cast<uint32_t>(audio.length() * block_align);

  f.write("RIFF", 4);
  write_u32(f, 36 + data_bytes);
  f.write("WAVE", 4);
  f.write("fmt ", 4);
  write_u32(f, 16);
  write_u16(f, encoding == WavEncoding::pcm16 ? kFormatPcm : kFormatFloat);
  write_u16(f, channels);
  write_u32(f, static_cast<uint32_t>(audio.sample_rate()));
  write_u32(f, static_cast<uint32_t>(audio.sample_rate()) * block_align);
  write_u16(f, block_align);
  write_u16(f, bits);
  f.write("data", 4);
  write_u32(f, data_bytes);

  for (int64_t t = 0; t < audio.length(); ++t) {
    for (int c = 0; c < channels; ++c) {
      const double v = audio.at(c, t);
      if (encoding == WavEncoding::pcm16) {
        const long q = std::lrint(std::clamp(v, -1.0, 1.0) * 32768.0);
        const int16_t s = static_cast<int16_t>(std::clamp<long>(q, -32768, 32767));
        f.write(reinterpret_cast<const char*>(&s), 2);
      } else {
        const float s = static_cast<float>(v);
        f.write(reinterpret_cast<const char*>(&s), 4);
      }
    }
  }
  if (!f) throw std::runtime_error("wav: write failed: " + path);
}

double energy(std::span<const double> x) {
  double e = 0.0;
  for (double v : x) e += v * v;
  return e;
}

double rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return std::sqrt(energy(x) / static_cast<double>(x.size()));
}

}  // namespace sepbench
