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

#include "sepbench/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sepbench/assignment.hpp"

namespace sepbench {

namespace {

double clamp_db(double num, double den) {
  if (!(den > 0.0)) return kMetricClampDb;
  if (!(num > 0.0)) return -kMetricClampDb;
  const double value = 10.0 * std::log10(num / den);
  return std::clamp(value, -kMetricClampDb, kMetricClampDb);
}

void require_equal_length(std::span<const double> a, std::span<const double> b,
                          const char* what) {
  if (a.size() != b.size()) {
    throw std::invalid_argument(std::string(what) + ": signals differ in length");
  }
  if (a.empty()) {
    throw std::invalid_argument(std::string(what) + ": empty signals");
  }
}

}  // namespace

double si_sdr(std::span<const double> estimate, std::span<const double> reference,
              SiSdrVariant variant) {
  require_equal_length(estimate, reference, "si_sdr");
  double dot = 0.0, ref_energy = 0.0, est_energy = 0.0;
  for (size_t i = 0; i < reference.size(); ++i) {
    dot += reference[i] * estimate[i];
    ref_energy += reference[i] * reference[i];
    est_energy += estimate[i] * estimate[i];
  }
  if (!(ref_energy > 0.0)) throw std::invalid_argument("si_sdr: zero-energy reference");
  if (!(est_energy > 0.0)) throw std::invalid_argument("si_sdr: zero-energy estimate");

  const double alpha = dot / ref_energy;
  double err = 0.0;
  for (size_t i = 0; i < reference.size(); ++i) {
    const double d = estimate[i] - alpha * reference[i];
    err += d * d;
  }
  const double num = variant == SiSdrVariant::projected ? alpha * alpha * ref_energy
                                                        : ref_energy;
  return clamp_db(num, err);
}

double sdr(std::span<const double> estimate, std::span<const double> reference) {
  require_equal_length(estimate, reference, "sdr");
  double ref_energy = 0.0, err = 0.0;
  for (size_t i = 0; i < reference.size(); ++i) {
    ref_energy += reference[i] * reference[i];
    const double d = estimate[i] - reference[i];
    err += d * d;
  }
  if (!(ref_energy > 0.0)) throw std::invalid_argument("sdr: zero-energy reference");
  return clamp_db(ref_energy, err);
}

double ri_mag_loss(const ComplexSpectrogram& estimate,
                   const ComplexSpectrogram& reference, RiMagVariant variant) {
  if (estimate.channels() != reference.channels() ||
      estimate.frames() != reference.frames() ||
      estimate.bins() != reference.bins()) {
    throw std::invalid_argument("ri_mag_loss: spectrogram shapes differ");
  }
  const auto& a = estimate.raw();
  const auto& b = reference.raw();
  double real_l1 = 0.0, imag_l1 = 0.0, mag_l1 = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    const double dr = b[i].real() - a[i].real();
    const double di = b[i].imag() - a[i].imag();
    real_l1 += std::abs(dr);
    imag_l1 += std::abs(di);
    if (variant == RiMagVariant::difference_magnitude) {
      mag_l1 += std::hypot(dr, di);
    } else {
      mag_l1 += std::abs(std::abs(b[i]) - std::abs(a[i]));
    }
  }
  return real_l1 + imag_l1 + mag_l1;
}

LossBreakdown composite_loss(const std::vector<MultichannelAudio>& estimates,
                             const std::vector<MultichannelAudio>& references,
                             const StftConfig& config, SiSdrVariant si_variant,
                             RiMagVariant mag_variant) {
  if (estimates.size() != references.size() || estimates.empty()) {
    throw std::invalid_argument("composite_loss: source counts differ");
  }
  LossBreakdown out;
  for (size_t c = 0; c < estimates.size(); ++c) {
    out.ri_mag += ri_mag_loss(stft(estimates[c], config),
                              stft(references[c], config), mag_variant);
    out.si_sdr_loss -=
        si_sdr(estimates[c].channel(0), references[c].channel(0), si_variant);
  }
  out.total = out.ri_mag + out.si_sdr_loss;
  return out;
}

PitResult pit_assign(const std::vector<std::vector<double>>& pair_scores,
                     bool maximize) {
  AssignmentResult res = solve_assignment(pair_scores, /*minimize=*/!maximize);
  PitResult pit;
  pit.permutation = res.assignment;
  pit.score = res.cost;
  pit.maximized = maximize;
  return pit;
}

namespace {

double metric_value(PitMetric metric, const MultichannelAudio& est,
                    const MultichannelAudio& ref) {
  switch (metric) {
    case PitMetric::si_sdr:
      return si_sdr(est.channel(0), ref.channel(0));
    case PitMetric::sdr:
      return sdr(est.channel(0), ref.channel(0));
    case PitMetric::estoi:
      return estoi(est.channel(0), ref.channel(0), ref.sample_rate());
  }
  throw std::logic_error("pit: unknown metric");
}

}  // namespace

PitResult pit_evaluate_metric(const std::vector<MultichannelAudio>& estimates,
                              const std::vector<MultichannelAudio>& references,
                              PitMetric metric) {
  const size_t n = estimates.size();
  if (n == 0 || references.size() != n) {
    throw std::invalid_argument("pit: estimate/reference counts differ");
  }
  std::vector<std::vector<double>> scores(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      scores[i][j] = metric_value(metric, estimates[i], references[j]);
    }
  }
  PitResult pit = pit_assign(scores, /*maximize=*/true);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) total += scores[i][pit.permutation[i]];
  pit.score = total / static_cast<double>(n);
  return pit;
}

PitResult pit_evaluate_composite(const std::vector<MultichannelAudio>& estimates,
                                 const std::vector<MultichannelAudio>& references,
                                 const StftConfig& config, SiSdrVariant si_variant,
                                 RiMagVariant mag_variant) {
  const size_t n = estimates.size();
  if (n == 0 || references.size() != n) {
    throw std::invalid_argument("pit: estimate/reference counts differ");
  }
  std::vector<ComplexSpectrogram> est_specs, ref_specs;
  est_specs.reserve(n);
  ref_specs.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    est_specs.push_back(stft(estimates[i], config));
    ref_specs.push_back(stft(references[i], config));
  }
  std::vector<std::vector<double>> loss(n, std::vector<double>(n));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) {
      loss[i][j] = ri_mag_loss(est_specs[i], ref_specs[j], mag_variant) -
                   si_sdr(estimates[i].channel(0), references[j].channel(0), si_variant);
    }
  }
  PitResult pit = pit_assign(loss, /*maximize=*/false);

  // Re-evaluate the full objective under the chosen permutation.
  std::vector<MultichannelAudio> permuted_refs;
  permuted_refs.reserve(n);
  for (size_t i = 0; i < n; ++i) permuted_refs.push_back(references[pit.permutation[i]]);
  pit.score = composite_loss(estimates, permuted_refs, config, si_variant, mag_variant).total;
  pit.maximized = false;
  return pit;
}

PitResult pit_evaluate_exhaustive(
    int count, const std::function<double(const std::vector<int>&)>& objective,
    bool maximize) {
  if (count < 1) throw std::invalid_argument("pit: count must be >= 1");
  if (count > 8) {
    throw std::invalid_argument(
        "pit: brute-force search over " + std::to_string(count) +
        "! permutations refused; limit is 8 sources");
  }
  std::vector<int> perm(count);
  std::iota(perm.begin(), perm.end(), 0);
  PitResult best;
  best.maximized = maximize;
  bool first = true;
  do {
    const double value = objective(perm);
    const bool better = maximize ? value > best.score : value < best.score;
    if (first || better) {
      best.score = value;
      best.permutation = perm;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

SignalScores score_pair(std::span<const double> estimate,
                        std::span<const double> reference, int sample_rate) {
  SignalScores s;
  s.si_sdr = si_sdr(estimate, reference);
  s.sdr = sdr(estimate, reference);
  s.estoi = estoi(estimate, reference, sample_rate);
  return s;
}

}  // namespace sepbench
