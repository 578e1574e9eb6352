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

// Extended short-time objective intelligibility: one-third octave band
// envelopes, 384 ms sliding segments, row- and column-normalized segment
// correlation. Runs at the native 8 or 16 kHz rate; bands whose upper edge
// exceeds Nyquist are dropped instead of resampling to 10 kHz.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "sepbench/fft.hpp"
#include "sepbench/metrics.hpp"

namespace sepbench {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDynamicRangeDb = 40.0;  // silent-frame threshold
constexpr double kSegmentMs = 384.0;
constexpr int kNumBandsFull = 15;
constexpr double kBandBaseHz = 150.0;

std::vector<double> hann_window(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * i / n));
  return w;
}

// Drops frames whose reference energy sits more than 40 dB below the peak
// frame, then rebuilds both signals by overlap-adding the kept frames.
void remove_silent_frames(std::vector<double>& est, std::vector<double>& ref,
                          int frame, int hop) {
  const auto w = hann_window(frame);
  const int64_t n = static_cast<int64_t>(ref.size());
  std::vector<std::vector<double>> ref_frames, est_frames;
  std::vector<double> energies_db;
  for (int64_t start = 0; start + frame <= n; start += hop) {
    std::vector<double> rf(frame), ef(frame);
    double e = 0.0;
    for (int i = 0; i < frame; ++i) {
      rf[i] = w[i] * ref[start + i];
      ef[i] = w[i] * est[start + i];
      e += rf[i] * rf[i];
    }
    ref_frames.push_back(std::move(rf));
    est_frames.push_back(std::move(ef));
    energies_db.push_back(10.0 * std::log10(e + 1e-300));
  }
  if (ref_frames.empty()) {
    throw std::invalid_argument("estoi: signal shorter than one analysis frame");
  }
  const double peak = *std::max_element(energies_db.begin(), energies_db.end());

  std::vector<double> ref_out, est_out;
  int64_t pos = 0;
  for (size_t f = 0; f < ref_frames.size(); ++f) {
    if (peak - energies_db[f] >= kDynamicRangeDb) continue;
    ref_out.resize(pos + frame, 0.0);
    est_out.resize(pos + frame, 0.0);
    for (int i = 0; i < frame; ++i) {
      ref_out[pos + i] += ref_frames[f][i];
      est_out[pos + i] += est_frames[f][i];
    }
    pos += hop;
  }
  ref = std::move(ref_out);
  est = std::move(est_out);
}

// Band envelope matrix, bands x frames.
std::vector<std::vector<double>> band_envelopes(const std::vector<double>& x,
                                                int frame, int hop, int nfft,
                                                const std::vector<std::pair<int, int>>& bands) {
  const auto w = hann_window(frame);
  const int64_t n = static_cast<int64_t>(x.size());
  std::vector<std::vector<double>> env(bands.size());
  std::vector<double> buf(nfft, 0.0);
  for (int64_t start = 0; start + frame <= n; start += hop) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int i = 0; i < frame; ++i) buf[i] = w[i] * x[start + i];
    const auto spec = rfft(buf);
    for (size_t b = 0; b < bands.size(); ++b) {
      double e = 0.0;
      for (int k = bands[b].first; k < bands[b].second; ++k) {
        e += std::norm(spec[k]);
      }
      env[b].push_back(std::sqrt(e));
    }
  }
  return env;
}

}  // namespace

double estoi(std::span<const double> estimate, std::span<const double> reference,
             int sample_rate) {
  if (sample_rate != 8000 && sample_rate != 16000) {
    throw std::invalid_argument("estoi: only 8 kHz and 16 kHz are supported");
  }
  if (estimate.size() != reference.size()) {
    throw std::invalid_argument("estoi: signals differ in length");
  }

  // 32 ms frames at 50% overlap, spectra zero-padded by 2x.
  const int frame = sample_rate * 32 / 1000;
  const int hop = frame / 2;
  const int nfft = 2 * frame;
  const double bin_hz = static_cast<double>(sample_rate) / nfft;
  const double nyquist = sample_rate / 2.0;

  // One-third octave bands with center 150 * 2^(k/3); keep those whose
  // upper edge stays below Nyquist (all 15 at 16 kHz, 14 at 8 kHz).
  std::vector<std::pair<int, int>> bands;
  for (int k = 0; k < kNumBandsFull; ++k) {
    const double cf = kBandBaseHz * std::pow(2.0, k / 3.0);
    const double lo = cf / std::pow(2.0, 1.0 / 6.0);
    const double hi = cf * std::pow(2.0, 1.0 / 6.0);
    if (hi >= nyquist) break;
    const int first = static_cast<int>(std::ceil(lo / bin_hz));
    const int last = static_cast<int>(std::ceil(hi / bin_hz));  // exclusive
    if (last <= first) {
      throw std::logic_error("estoi: empty one-third octave band");
    }
    bands.emplace_back(first, last);
  }

  std::vector<double> est(estimate.begin(), estimate.end());
  std::vector<double> ref(reference.begin(), reference.end());
  remove_silent_frames(est, ref, frame, hop);

  const auto ref_env = band_envelopes(ref, frame, hop, nfft, bands);
  const auto est_env = band_envelopes(est, frame, hop, nfft, bands);
  const int num_bands = static_cast<int>(bands.size());
  const int num_frames = static_cast<int>(ref_env[0].size());

  const int seg = static_cast<int>(kSegmentMs * sample_rate / 1000.0) / hop;
  if (num_frames < seg) {
    throw std::invalid_argument(
        "estoi: too few active frames for one 384 ms segment");
  }

  auto normalize_rows = [&](std::vector<std::vector<double>>& m) {
    for (auto& row : m) {
      double mean = 0.0;
      for (double v : row) mean += v;
      mean /= seg;
      double norm = 0.0;
      for (double& v : row) {
        v -= mean;
        norm += v * v;
      }
      norm = std::sqrt(norm);
      if (norm > 0.0) {
        for (double& v : row) v /= norm;
      }
    }
  };
  auto normalize_cols = [&](std::vector<std::vector<double>>& m) {
    for (int t = 0; t < seg; ++t) {
      double mean = 0.0;
      for (int b = 0; b < num_bands; ++b) mean += m[b][t];
      mean /= num_bands;
      double norm = 0.0;
      for (int b = 0; b < num_bands; ++b) {
        m[b][t] -= mean;
        norm += m[b][t] * m[b][t];
      }
      norm = std::sqrt(norm);
      if (norm > 0.0) {
        for (int b = 0; b < num_bands; ++b) m[b][t] /= norm;
      }
    }
  };

  double sum = 0.0;
  int count = 0;
  std::vector<std::vector<double>> xs(num_bands, std::vector<double>(seg));
  std::vector<std::vector<double>> ys(num_bands, std::vector<double>(seg));
  for (int end = seg; end <= num_frames; ++end) {
    const int start = end - seg;
    for (int b = 0; b < num_bands; ++b) {
      for (int t = 0; t < seg; ++t) {
        xs[b][t] = ref_env[b][start + t];
        ys[b][t] = est_env[b][start + t];
      }
    }
    normalize_rows(xs);
    normalize_rows(ys);
    normalize_cols(xs);
    normalize_cols(ys);
    double d = 0.0;
    for (int t = 0; t < seg; ++t) {
      double inner = 0.0;
      for (int b = 0; b < num_bands; ++b) inner += xs[b][t] * ys[b][t];
      d += inner;
    }
    sum += d / seg;
    ++count;
  }
  return sum / count;
}

}  // namespace sepbench
