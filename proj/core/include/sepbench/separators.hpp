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

#ifndef SEPBENCH_SEPARATORS_HPP_
#define SEPBENCH_SEPARATORS_HPP_

#include <string>
#include <vector>

#include "sepbench/mixture.hpp"
#include "sepbench/stft.hpp"

namespace sepbench {

/// Per-speaker estimates at the reference microphone, all mono and equally
/// long, plus a provenance tag for reports.
struct SeparationOutput {
  std::vector<MultichannelAudio> estimates;
  std::string provenance;
};

/// No separation at all: every stream is a copy of the mixture's reference
/// channel. The evaluation floor.
SeparationOutput passthrough(const MixtureBundle& bundle);

/// Returns the direct-path images at the reference microphone. The ceiling
/// every separator is measured against.
SeparationOutput oracle_direct_path(const MixtureBundle& bundle);

enum class MaskKind { irm, ibm, complex_mapping };

/// Ideal time-frequency masks built from the bundle components:
///  - irm: |S_c| / (sum_k |S_k| + |N| + eps) applied to the mixture
///  - ibm: 1 on cells where speaker c has the largest direct-path magnitude
///  - complex_mapping: the direct-path spectrogram itself, inverted exactly
SeparationOutput ideal_mask(const MixtureBundle& bundle, const StftConfig& config,
                            MaskKind kind);

/// Loads est1.wav .. est<C>.wav written by an external separator. Estimates
/// are length-aligned to expected_length (trailing zero-pad or truncation,
/// with a warning on stderr); wrong channel counts or sample rates are
/// errors.
SeparationOutput load_external(const std::string& dir, int num_speakers,
                               int64_t expected_length, int sample_rate);

/// Writes estimates as <dir>/est<i>.wav (mono float32), the exchange format
/// load_external understands.
void write_estimates(const std::string& dir, const SeparationOutput& output);

}  // namespace sepbench

#endif  // SEPBENCH_SEPARATORS_HPP_
