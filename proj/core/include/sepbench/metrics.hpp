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

#ifndef SEPBENCH_METRICS_HPP_
#define SEPBENCH_METRICS_HPP_

#include <functional>
#include <span>
#include <vector>

#include "sepbench/audio.hpp"
#include "sepbench/stft.hpp"

namespace sepbench {

/// Ratios are clamped to +-100 dB; the ceiling stands in for the infinite
/// value a perfect estimate would produce.
constexpr double kMetricClampDb = 100.0;

/// Numerator convention for SI-SDR. `projected` uses the energy of the
/// scaled reference (the form that is actually scale-invariant) and is the
/// default; `reference_energy` keeps the raw reference energy.
enum class SiSdrVariant { projected, reference_energy };

/// Scale-invariant signal-to-distortion ratio in dB:
/// alpha = <s, s_hat> / <s, s>, then 10 log10(|alpha s|^2 / |s_hat - alpha s|^2).
double si_sdr(std::span<const double> estimate, std::span<const double> reference,
              SiSdrVariant variant = SiSdrVariant::projected);

/// Plain energy-ratio SDR: 10 log10(|s|^2 / |s_hat - s|^2).
double sdr(std::span<const double> estimate, std::span<const double> reference);

/// Extended short-time objective intelligibility in [-1, 1]. Supports 8 and
/// 16 kHz natively; at 8 kHz the one-third octave bands that no longer fit
/// below Nyquist are dropped.
double estoi(std::span<const double> estimate, std::span<const double> reference,
             int sample_rate);

/// Magnitude-term convention for the RI-Mag loss. `difference_magnitude`
/// (default) takes the L1 norm of |S - S_hat|; `magnitude_difference` takes
/// the L1 norm of |S| - |S_hat|.
enum class RiMagVariant { difference_magnitude, magnitude_difference };

/// L1 real-part difference + L1 imaginary-part difference + L1 magnitude
/// term over all time-frequency cells.
double ri_mag_loss(const ComplexSpectrogram& estimate,
                   const ComplexSpectrogram& reference,
                   RiMagVariant variant = RiMagVariant::difference_magnitude);

struct LossBreakdown {
  double ri_mag = 0.0;
  double si_sdr_loss = 0.0;  // negated dB sum over sources
  double total = 0.0;        // ri_mag + si_sdr_loss
};

/// The training objective: RI-Mag summed over sources plus the negated
/// SI-SDR sum. Spectrograms are taken with the given config.
LossBreakdown composite_loss(const std::vector<MultichannelAudio>& estimates,
                             const std::vector<MultichannelAudio>& references,
                             const StftConfig& config,
                             SiSdrVariant si_variant = SiSdrVariant::projected,
                             RiMagVariant mag_variant = RiMagVariant::difference_magnitude);

struct PitResult {
  std::vector<int> permutation;  // estimate index -> reference index
  double score = 0.0;            // objective re-evaluated under permutation
  bool maximized = true;         // direction tag
};

/// Optimal assignment over a pairwise score matrix (rows: estimates,
/// columns: references); score is the sum of the selected entries.
PitResult pit_assign(const std::vector<std::vector<double>>& pair_scores,
                     bool maximize);

enum class PitMetric { si_sdr, sdr, estoi };

/// Utterance-level PIT over a per-pair metric; the stored score is the mean
/// metric across the matched pairs.
PitResult pit_evaluate_metric(const std::vector<MultichannelAudio>& estimates,
                              const std::vector<MultichannelAudio>& references,
                              PitMetric metric);

/// Utterance-level PIT over the composite loss. Both loss terms decompose
/// over sources, so the optimum is found by assignment rather than a C!
/// search; the stored score is the total loss under the permutation.
PitResult pit_evaluate_composite(const std::vector<MultichannelAudio>& estimates,
                                 const std::vector<MultichannelAudio>& references,
                                 const StftConfig& config,
                                 SiSdrVariant si_variant = SiSdrVariant::projected,
                                 RiMagVariant mag_variant = RiMagVariant::difference_magnitude);

/// Brute force over all permutations for objectives that do not decompose
/// into per-pair terms. count must be at most 8.
PitResult pit_evaluate_exhaustive(
    int count, const std::function<double(const std::vector<int>&)>& objective,
    bool maximize);

struct SignalScores {
  double si_sdr = 0.0;
  double sdr = 0.0;
  double estoi = 0.0;
};

SignalScores score_pair(std::span<const double> estimate,
                        std::span<const double> reference, int sample_rate);

}  // namespace sepbench

#endif  // SEPBENCH_METRICS_HPP_
