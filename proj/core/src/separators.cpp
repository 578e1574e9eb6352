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

#include "sepbench/separators.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>
#include <stdexcept>

namespace sepbench {

namespace {

constexpr double kMaskEpsilon = 1e-8;

void require_components(const MixtureBundle& bundle, bool need_noise) {
  if (bundle.direct_path.empty()) {
    throw std::invalid_argument("separator: bundle carries no direct-path images");
  }
  if (need_noise && bundle.noise.empty()) {
    throw std::invalid_argument("separator: bundle carries no noise component");
  }
}

}  // namespace

SeparationOutput passthrough(const MixtureBundle& bundle) {
  if (bundle.mixture.empty()) {
    throw std::invalid_argument("separator: bundle has no mixture");
  }
  SeparationOutput out;
  out.provenance = "unprocessed";
  const int ref = bundle.reference_mic();
  const int speakers = std::max(1, bundle.num_speakers());
  const MultichannelAudio ref_channel = bundle.mixture.extract_channel(ref);
  out.estimates.assign(speakers, ref_channel);
  return out;
}

SeparationOutput oracle_direct_path(const MixtureBundle& bundle) {
  require_components(bundle, /*need_noise=*/false);
  SeparationOutput out;
  out.provenance = "oracle_direct";
  const int ref = bundle.reference_mic();
  for (const auto& s : bundle.direct_path) {
    out.estimates.push_back(s.extract_channel(ref));
  }
  return out;
}

SeparationOutput ideal_mask(const MixtureBundle& bundle, const StftConfig& config,
                            MaskKind kind) {
  require_components(bundle, /*need_noise=*/kind != MaskKind::complex_mapping);
  const int ref = bundle.reference_mic();
  const int speakers = bundle.num_speakers();

  SeparationOutput out;
  switch (kind) {
    case MaskKind::irm:
      out.provenance = "ideal_mask:irm";
      break;
    case MaskKind::ibm:
      out.provenance = "ideal_mask:ibm";
      break;
    case MaskKind::complex_mapping:
      out.provenance = "ideal_mask:complex_mapping";
      break;
  }

  std::vector<ComplexSpectrogram> direct_specs;
  direct_specs.reserve(speakers);
  for (const auto& s : bundle.direct_path) {
    direct_specs.push_back(stft(s.extract_channel(ref), config));
  }

  if (kind == MaskKind::complex_mapping) {
    for (const auto& spec : direct_specs) out.estimates.push_back(istft(spec));
    return out;
  }

  if (bundle.mixture.empty()) {
    throw std::invalid_argument("separator: bundle has no mixture");
  }
  if (bundle.mixture.sample_rate() != bundle.direct_path[0].sample_rate()) {
    throw std::invalid_argument("separator: component sample rates differ");
  }
  ComplexSpectrogram mix_spec = stft(bundle.mixture.extract_channel(ref), config);
  ComplexSpectrogram noise_spec = stft(bundle.noise.extract_channel(ref), config);

  for (int c = 0; c < speakers; ++c) {
    ComplexSpectrogram masked = mix_spec;
    for (int64_t t = 0; t < masked.frames(); ++t) {
      for (int b = 0; b < masked.bins(); ++b) {
        double mask;
        if (kind == MaskKind::irm) {
          double denom = std::abs(noise_spec.at(0, t, b)) + kMaskEpsilon;
          for (int k = 0; k < speakers; ++k) {
            denom += std::abs(direct_specs[k].at(0, t, b));
          }
          mask = std::abs(direct_specs[c].at(0, t, b)) / denom;
        } else {
          // Binary: largest direct-path magnitude wins; ties go to the
          // lowest speaker index so the masks always partition.
          int best = 0;
          double best_mag = std::abs(direct_specs[0].at(0, t, b));
          for (int k = 1; k < speakers; ++k) {
            const double mag = std::abs(direct_specs[k].at(0, t, b));
            if (mag > best_mag) {
              best = k;
              best_mag = mag;
            }
          }
          mask = best == c ? 1.0 : 0.0;
        }
        masked.at(0, t, b) *= mask;
      }
    }
    out.estimates.push_back(istft(masked));
  }
  return out;
}

SeparationOutput load_external(const std::string& dir, int num_speakers,
                               int64_t expected_length, int sample_rate) {
  SeparationOutput out;
  out.provenance = "external:" + std::filesystem::path(dir).filename().string();
  for (int i = 1; i <= num_speakers; ++i) {
    const std::string path = dir + "/est" + std::to_string(i) + ".wav";
    if (!std::filesystem::exists(path)) {
      throw std::runtime_error("external separator output missing: " + path);
    }
    MultichannelAudio est = read_wav(path);
    if (est.channels() != 1) {
      throw std::runtime_error("external estimate must be mono: " + path);
    }
    if (est.sample_rate() != sample_rate) {
      throw std::runtime_error("external estimate sample rate mismatch: " + path);
    }
    if (est.length() != expected_length) {
      std::cerr << "warning: " << path << " has " << est.length()
                << " samples, aligning to " << expected_length << "\n";
      MultichannelAudio aligned(1, expected_length, sample_rate);
      const int64_t n = std::min(expected_length, est.length());
      auto src = est.channel(0);
      auto dst = aligned.channel(0);
      std::copy(src.begin(), src.begin() + n, dst.begin());
      est = std::move(aligned);
    }
    out.estimates.push_back(std::move(est));
  }
  return out;
}

void write_estimates(const std::string& dir, const SeparationOutput& output) {
  std::filesystem::create_directories(dir);
  for (size_t i = 0; i < output.estimates.size(); ++i) {
    write_wav(dir + "/est" + std::to_string(i + 1) + ".wav", output.estimates[i],
              WavEncoding::float32);
  }
}

}  // namespace sepbench
