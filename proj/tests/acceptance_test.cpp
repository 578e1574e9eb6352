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

// Acceptance suite: one numbered criterion per section, one PASS/FAIL line
// per criterion on stdout, nonzero exit if any fail. Oracles are written
// inline so this binary stays independent of the unit tests.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "sepbench/assignment.hpp"
#include "sepbench/metrics.hpp"
#include "sepbench/mixture.hpp"
#include "sepbench/pipeline.hpp"
#include "sepbench/report.hpp"
#include "sepbench/rng.hpp"
#include "sepbench/room.hpp"
#include "sepbench/stft.hpp"
#include "sepbench/transcript.hpp"

using namespace sepbench;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Checker {
  int failures = 0;
  std::string first_failure;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      ++failures;
      if (first_failure.empty()) first_failure = what;
    }
  }
};

using CriterionFn = std::function<void(Checker&)>;

int run_criterion(int id, const std::string& name, const CriterionFn& fn) {
  Checker check;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    fn(check);
  } catch (const std::exception& e) {
    check.require(false, std::string("exception: ") + e.what());
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (check.failures == 0) {
    std::printf("[PASS] %2d. %-34s (%.1f s)\n", id, name.c_str(), seconds);
    return 0;
  }
  std::printf("[FAIL] %2d. %-34s (%.1f s) %d failed check(s); first: %s\n", id,
              name.c_str(), seconds, check.failures, check.first_failure.c_str());
  return 1;
}

std::vector<double> random_vec(Rng& rng, size_t n) {
  std::vector<double> x(n);
  for (auto& v : x) v = rng.normal();
  return x;
}

double interp_at(const std::vector<double>& h, double t) {
  const int64_t n0 = static_cast<int64_t>(std::floor(t));
  double acc = 0.0;
  for (int64_t k = n0 - 60; k <= n0 + 60; ++k) {
    if (k < 0 || k >= static_cast<int64_t>(h.size())) continue;
    const double x = t - static_cast<double>(k);
    acc += h[k] * (x == 0.0 ? 1.0 : std::sin(kPi * x) / (kPi * x));
  }
  return acc;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  if (!f) return "<missing: " + p.string() + ">";
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// ---------------------------------------------------------------------------

void criterion_stft_round_trip(Checker& check) {
  const auto t0 = std::chrono::steady_clock::now();
  for (auto [rate, frame_ms, hop_ms] :
       {std::tuple<int, double, double>{16000, 16.0, 8.0}, {8000, 32.0, 16.0}}) {
    const auto cfg = stft_config_from_ms(frame_ms, hop_ms, rate);
    Rng rng(1000 + rate);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const int64_t len = rate;  // one second
      MultichannelAudio x(1, len, rate);
      for (auto& v : x.raw()) v = rng.normal();
      const auto back = istft(stft(x, cfg));
      double num = 0.0, den = 0.0;
      for (int64_t t = 0; t < len; ++t) {
        const double d = back.at(0, t) - x.at(0, t);
        num += d * d;
        den += x.at(0, t) * x.at(0, t);
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
    check.require(worst <= 1e-6, "round-trip error " + std::to_string(worst) +
                                     " at rate " + std::to_string(rate));
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  check.require(seconds < 30.0,
                "round trips took " + std::to_string(seconds) + " s (budget 30)");
}

void criterion_room_acoustics(Checker& check) {
  // Near-cubic rooms; flat rooms decay measurably slower than the Sabine
  // inversion predicts (grazing image families), see the module tests.
  struct RoomCase {
    Point3 dims;
    double t60;
    Point3 src, mic;
  };
  const RoomCase cases[] = {
      {{4.5, 4.0, 3.2}, 0.3, {3.1, 2.7, 1.7}, {1.6, 1.4, 1.5}},
      {{7.0, 6.0, 5.0}, 0.6, {4.7, 4.0, 2.8}, {2.4, 2.2, 2.3}},
      {{8.0, 7.0, 5.0}, 1.0, {5.3, 4.6, 2.8}, {2.7, 2.5, 2.3}},
  };
  for (const auto& rc : cases) {
    RoomSpec room{rc.dims, rc.t60};
    ArrayGeometry mic;
    mic.mic_positions = {rc.mic};
    const int rate = 8000;
    const auto rirs = simulate_rir(room, rc.src, mic, -1, 0, rate);
    const double measured = measure_t60(rirs.full[0][0], rate);
    check.require(measured >= 0.8 * rc.t60 && measured <= 1.2 * rc.t60,
                  "T60 target " + std::to_string(rc.t60) + " measured " +
                      std::to_string(measured));
  }

  // Anechoic free field: amplitude 1/(4 pi d) within 1%, delay d/c within
  // 0.1 sample.
  RoomSpec free_field{{10.0, 8.0, 4.0}, 0.0, 343.0, true};
  ArrayGeometry mic;
  mic.mic_positions = {{3.0, 4.0, 2.0}};
  const int rate = 16000;
  const auto rirs = simulate_rir(free_field, {5.0, 4.0, 2.0}, mic, -1, 4000, rate);
  const double expected_delay = 2.0 / 343.0 * rate;
  const double expected_amp = 1.0 / (4.0 * kPi * 2.0);
  double best_t = 0.0, best_v = 0.0;
  for (double t = expected_delay - 3.0; t <= expected_delay + 3.0; t += 1.0 / 64.0) {
    const double v = std::abs(interp_at(rirs.full[0][0], t));
    if (v > best_v) {
      best_v = v;
      best_t = t;
    }
  }
  check.require(std::abs(best_t - expected_delay) <= 0.1,
                "free-field delay off by " +
                    std::to_string(best_t - expected_delay) + " samples");
  check.require(std::abs(best_v - expected_amp) <= 0.01 * expected_amp,
                "free-field amplitude " + std::to_string(best_v) + " vs " +
                    std::to_string(expected_amp));
}

void criterion_mixture_identities(Checker& check) {
  const int rate = 8000;
  Rng master(77001);
  double worst_snr_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    MixtureSpec spec;
    spec.id = "acc";
    spec.seed = master.next_u64();
    RoomDraw draw;
    draw.room = RoomSpec{{5.0 + master.uniform(), 4.0 + master.uniform(), 3.0},
                         0.2 + 0.2 * master.uniform()};
    draw.array = circular_array(0.10, 2, false,
                                {2.5 + 0.3 * master.uniform(),
                                 2.0 + 0.3 * master.uniform(), 1.4});
    draw.source_positions = {{1.4, 1.2, 1.5}, {3.9, 3.1, 1.5}};
    spec.room = draw;
    spec.snr_db = master.uniform(0.0, 40.0);

    const auto rirs = simulate_rirs(draw.room, draw.source_positions, draw.array,
                                    -1, 0, rate);
    Rng srng(spec.seed ^ 0x5EED);
    std::vector<MultichannelAudio> sources{
        make_speech_like(srng, rate / 2, rate), make_speech_like(srng, rate / 2, rate)};
    const int64_t out_len =
        rate / 2 + static_cast<int64_t>(rirs.full[0][0].size()) - 1;
    Rng nrng(spec.seed ^ 0x4015E);
    const auto noise = make_white_noise(nrng, 2, out_len, rate);
    const auto bundle = synthesize(spec, rirs, sources, noise);

    // Bit-exact identities in the documented accumulation order.
    for (int c = 0; c < 2 && check.failures == 0; ++c) {
      for (int64_t t = 0; t < out_len; ++t) {
        const double y = (bundle.reverberant[0].at(c, t) +
                          bundle.reverberant[1].at(c, t)) +
                         bundle.noise.at(c, t);
        if (bundle.mixture.at(c, t) != y) {
          check.require(false, "Y != sum(X) + N at t=" + std::to_string(t));
          break;
        }
        for (int s = 0; s < 2; ++s) {
          if (bundle.reverberant[s].at(c, t) !=
              bundle.direct_path[s].at(c, t) + bundle.reflections[s].at(c, t)) {
            check.require(false, "X != S + H at t=" + std::to_string(t));
            break;
          }
        }
      }
    }

    // Achieved SNR at the reference microphone.
    const int ref = bundle.reference_mic();
    MultichannelAudio speech_sum(2, out_len, rate);
    for (const auto& x : bundle.reverberant) {
      for (size_t i = 0; i < speech_sum.raw().size(); ++i) {
        speech_sum.raw()[i] += x.raw()[i];
      }
    }
    const double achieved =
        10.0 * std::log10(energy(speech_sum.channel(ref)) /
                          energy(bundle.noise.channel(ref)));
    worst_snr_err = std::max(worst_snr_err, std::abs(achieved - spec.snr_db));
  }
  check.require(worst_snr_err < 0.01,
                "worst SNR error " + std::to_string(worst_snr_err) + " dB");
}

void criterion_si_sdr(Checker& check) {
  Rng rng(44001);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const size_t n = 64 + rng.uniform_int(512);
    const auto ref = random_vec(rng, n);
    auto est = random_vec(rng, n);
    const double mix = rng.uniform();
    for (size_t i = 0; i < n; ++i) est[i] = mix * ref[i] + (1.0 - mix) * est[i];

    // Independent closed-form recomputation in long double.
    long double dot = 0.0L, ref_e = 0.0L;
    for (size_t i = 0; i < n; ++i) {
      dot += static_cast<long double>(ref[i]) * est[i];
      ref_e += static_cast<long double>(ref[i]) * ref[i];
    }
    const long double alpha = dot / ref_e;
    long double num = 0.0L, den = 0.0L;
    for (size_t i = 0; i < n; ++i) {
      const long double target = alpha * ref[i];
      num += target * target;
      const long double err = est[i] - target;
      den += err * err;
    }
    const double expected = std::clamp(
        10.0 * std::log10(static_cast<double>(num / den)), -100.0, 100.0);
    worst = std::max(worst, std::abs(si_sdr(est, ref) - expected));

    // Scale invariance.
    auto scaled = est;
    for (auto& v : scaled) v *= 17.0;
    worst = std::max(worst, std::abs(si_sdr(scaled, ref) - si_sdr(est, ref)));
  }
  check.require(worst < 1e-9, "worst deviation " + std::to_string(worst) + " dB");

  Rng idr(44002);
  const auto s = random_vec(idr, 500);
  check.require(si_sdr(s, s) == 100.0, "identity input did not hit +100 dB");
}

void criterion_estoi(Checker& check) {
  for (int rate : {8000, 16000}) {
    Rng rng(55000 + rate);
    const auto utt = make_speech_like(rng, 2 * rate, rate);
    const std::vector<double> s(utt.channel(0).begin(), utt.channel(0).end());
    const double self = estoi(s, s, rate);
    check.require(std::abs(self - 1.0) <= 1e-6,
                  "estoi(s, s) = " + std::to_string(self) + " at " +
                      std::to_string(rate) + " Hz");

    Rng rng2(56000 + rate);
    auto est = s;
    for (auto& v : est) v += 0.05 * rng2.normal();
    const double base = estoi(est, s, rate);
    auto scaled = est;
    for (auto& v : scaled) v *= 2.0;  // dyadic scale: bit-exact invariance
    check.require(estoi(scaled, s, rate) == base,
                  "estoi changed under estimate scaling");
  }
}

void criterion_losses(Checker& check) {
  const StftConfig cfg{64, 32};
  Rng rng(66001);
  std::vector<MultichannelAudio> refs, ests;
  for (int c = 0; c < 2; ++c) {
    MultichannelAudio r(1, 400, 8000), e(1, 400, 8000);
    for (auto& v : r.raw()) v = rng.normal();
    for (auto& v : e.raw()) v = rng.normal();
    refs.push_back(std::move(r));
    ests.push_back(std::move(e));
  }
  const auto loss = composite_loss(ests, refs, cfg);
  check.require(loss.total == loss.ri_mag + loss.si_sdr_loss,
                "composite total is not the exact sum");

  const auto self = composite_loss(refs, refs, cfg);
  check.require(self.ri_mag == 0.0, "RI-Mag loss of identical spectra not zero");

  // Zero iff identical: random perturbations always cost something.
  ComplexSpectrogram a(1, 3, 5, cfg, 100, 8000);
  for (auto& v : a.raw()) v = {rng.normal(), rng.normal()};
  bool strictly_positive = true;
  for (int trial = 0; trial < 100; ++trial) {
    ComplexSpectrogram b = a;
    const size_t idx = rng.uniform_int(b.raw().size());
    b.raw()[idx] += std::complex<double>(1e-9 + rng.uniform(), rng.uniform());
    strictly_positive = strictly_positive && ri_mag_loss(b, a) > 0.0;
  }
  check.require(strictly_positive, "perturbed spectra gave zero loss");

  // Single cell 1 + 1i against zero: |1| + |1| + |1 + 1i| = 2 + sqrt(2).
  ComplexSpectrogram ref_cell(1, 1, 1, cfg, 1, 8000);
  ComplexSpectrogram est_cell(1, 1, 1, cfg, 1, 8000);
  ref_cell.at(0, 0, 0) = {1.0, 1.0};
  const double expected = 2.0 + std::sqrt(2.0);
  check.require(std::abs(ri_mag_loss(est_cell, ref_cell) - expected) <= 1e-12,
                "single-cell RI-Mag value off");
}

void criterion_pit(Checker& check) {
  Rng rng(77002);
  for (int n : {2, 3, 4}) {
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<std::vector<double>> scores(n, std::vector<double>(n));
      for (auto& row : scores) {
        for (auto& v : row) v = 25.0 * (2.0 * rng.uniform() - 1.0);
      }
      const auto fast = pit_assign(scores, /*maximize=*/true);

      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      double best = -1e18;
      do {
        double total = 0.0;
        for (int i = 0; i < n; ++i) total += scores[i][perm[i]];
        best = std::max(best, total);
      } while (std::next_permutation(perm.begin(), perm.end()));

      if (std::abs(fast.score - best) > 1e-12) {
        check.require(false, "assignment != brute force at C=" + std::to_string(n));
        return;
      }
      double identity = 0.0;
      for (int i = 0; i < n; ++i) identity += scores[i][i];
      if (fast.score < identity - 1e-12) {
        check.require(false, "PIT score below identity assignment");
        return;
      }
    }
  }
  check.require(true, "");
}

void criterion_wer(Checker& check) {
  const auto b = wer({"a", "b", "c"}, {"a", "x", "c", "d"});
  check.require(b.substitutions == 1 && b.insertions == 1 && b.deletions == 0,
                "frozen case counts wrong");

  Rng rng(88001);
  for (int trial = 0; trial < 500; ++trial) {
    auto make_tokens = [&](int max_len) {
      std::vector<std::string> t;
      const int len = static_cast<int>(rng.uniform_int(max_len + 1));
      for (int i = 0; i < len; ++i) {
        t.push_back("w" + std::to_string(rng.uniform_int(6)));
      }
      return t;
    };
    const auto ref = make_tokens(30);
    const auto hyp = make_tokens(30);

    // Quadratic DP oracle for total edits.
    std::vector<std::vector<int64_t>> dp(ref.size() + 1,
                                         std::vector<int64_t>(hyp.size() + 1));
    for (size_t i = 0; i <= ref.size(); ++i) dp[i][0] = i;
    for (size_t j = 0; j <= hyp.size(); ++j) dp[0][j] = j;
    for (size_t i = 1; i <= ref.size(); ++i) {
      for (size_t j = 1; j <= hyp.size(); ++j) {
        dp[i][j] = std::min({dp[i - 1][j - 1] + (ref[i - 1] == hyp[j - 1] ? 0 : 1),
                             dp[i - 1][j] + 1, dp[i][j - 1] + 1});
      }
    }
    if (wer(ref, hyp).edits() != dp[ref.size()][hyp.size()]) {
      check.require(false, "edit total differs from DP oracle");
      return;
    }
  }
  check.require(true, "");
}

void criterion_cpwer(Checker& check) {
  Rng rng(99001);
  auto make_tokens = [&](int max_len) {
    std::vector<std::string> t{"anchor"};
    const int len = static_cast<int>(rng.uniform_int(max_len));
    for (int i = 0; i < len; ++i) {
      t.push_back("w" + std::to_string(rng.uniform_int(5)));
    }
    return t;
  };

  for (int trial = 0; trial < 200; ++trial) {
    const int speakers = 2 + static_cast<int>(rng.uniform_int(3));  // 2..4
    Transcript ref;
    ref.session_id = "acc";
    std::vector<std::vector<std::string>> ref_tokens;
    for (int s = 0; s < speakers; ++s) {
      const auto tokens = make_tokens(8);
      ref.utterances.push_back(
          {"spk" + std::to_string(s), s * 1.0, s * 1.0 + 0.9, tokens});
      ref_tokens.push_back(tokens);
    }
    std::vector<HypothesisStream> streams;
    std::vector<std::vector<std::string>> hyp_tokens;
    for (int s = 0; s < speakers; ++s) {
      const auto tokens = make_tokens(8);
      streams.push_back({"h" + std::to_string(s), {tokens}});
      hyp_tokens.push_back(tokens);
    }
    const auto res = cpwer(ref, streams);

    std::vector<int> perm(speakers);
    std::iota(perm.begin(), perm.end(), 0);
    int64_t best = -1;
    do {
      int64_t total = 0;
      for (int i = 0; i < speakers; ++i) {
        total += wer(ref_tokens[perm[i]], hyp_tokens[i]).edits();
      }
      if (best < 0 || total < best) best = total;
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (res.breakdown.edits() != best) {
      check.require(false, "cpwer differs from exhaustive search");
      return;
    }

    // Relabel invariance: reverse the stream order and rename.
    std::vector<HypothesisStream> relabeled;
    for (int s = speakers - 1; s >= 0; --s) {
      relabeled.push_back({"z" + std::to_string(s), streams[s].utterance_tokens});
    }
    if (cpwer(ref, relabeled).breakdown.edits() != best) {
      check.require(false, "cpwer changed under stream relabeling");
      return;
    }
  }

  // Single speaker, single stream: plain WER of the concatenations.
  Transcript single;
  single.session_id = "single";
  single.utterances.push_back({"spk", 0.0, 1.0, {"the", "quick", "fox"}});
  single.utterances.push_back({"spk", 1.0, 2.0, {"jumps"}});
  std::vector<HypothesisStream> one{{"h", {{"the", "quick", "box", "jumps"}}}};
  const auto res = cpwer(single, one);
  const auto plain =
      wer({"the", "quick", "fox", "jumps"}, {"the", "quick", "box", "jumps"});
  check.require(res.breakdown.edits() == plain.edits() &&
                    res.breakdown.wer == plain.wer,
                "single-speaker cpwer does not collapse to wer");
}

void criterion_collar(Checker& check) {
  // Hand-computed: expansion, clipping at both ends, same-speaker merge.
  const std::vector<SegmentBoundary> segs{
      {"a", 0.1, 1.0}, {"a", 1.3, 2.0}, {"b", 0.5, 1.1}, {"a", 4.0, 4.5}};
  const auto out = apply_collar(segs, 0.25, 4.6);
  // speaker a: (0.1,1.0)->(0,1.25), (1.3,2.0)->(1.05,2.25): merge to (0,2.25);
  // (4.0,4.5)->(3.75,4.6 clipped). speaker b: (0.25,1.35).
  bool ok = out.size() == 3;
  if (ok) {
    ok = ok && out[0].speaker == "a" && std::abs(out[0].start - 0.0) < 1e-12 &&
         std::abs(out[0].end - 2.25) < 1e-12;
    ok = ok && out[1].speaker == "a" && std::abs(out[1].start - 3.75) < 1e-12 &&
         std::abs(out[1].end - 4.6) < 1e-12;
    ok = ok && out[2].speaker == "b" && std::abs(out[2].start - 0.25) < 1e-12 &&
         std::abs(out[2].end - 1.35) < 1e-12;
  }
  check.require(ok, "collar boundaries do not match the hand computation");

  Rng rng(101);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<SegmentBoundary> random_segs;
    for (int i = 0; i < 5; ++i) {
      const double start = 8.0 * rng.uniform();
      random_segs.push_back({"spk" + std::to_string(rng.uniform_int(2)), start,
                             start + 0.2 + rng.uniform()});
    }
    double prev = -1.0;
    for (double collar : {0.0, 0.05, 0.1, 0.25, 0.5, 1.0}) {
      double covered = 0.0;
      for (const auto& s : apply_collar(random_segs, collar, 10.0)) {
        covered += s.end - s.start;
      }
      if (covered < prev - 1e-12) {
        check.require(false, "covered duration shrank as the collar grew");
        return;
      }
      prev = covered;
    }
  }
  check.require(true, "");
}

void criterion_paper_arithmetic(Checker& check) {
  check.require(std::abs(relative_improvement(7.25, 6.85) - 5.5) <= 0.05,
                "7.25/6.85 cell");
  check.require(std::abs(relative_improvement(7.21, 6.71) - 6.9) <= 0.05,
                "7.21/6.71 cell");
  check.require(std::abs(relative_improvement(6.19, 5.41) - 12.6) <= 0.05,
                "6.19/5.41 cell");
}

void criterion_end_to_end(Checker& check) {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path root = fs::temp_directory_path() / "sepbench_acceptance_e2e";
  fs::remove_all(root);
  fs::create_directories(root);

  const auto pool =
      make_source_pool((root / "pool").string(), 6, {1.0, 1.5}, 8000, 20260808);
  RecipeConfig recipe = recipe_sms_wsj_large();
  recipe.sources = pool;
  recipe.array_mics = 2;  // two-element array keeps the run desk-sized

  const Manifest manifest =
      build_grid_manifest(recipe, sms_wsj_large_test_grid(), 5, 424242);
  check.require(manifest.entries.size() == 60, "manifest is not 60 entries");
  for (const auto& e : manifest.entries) {
    if (e.offsets[0] != 0 || e.offsets[1] != 0) {
      check.require(false, "grid recipe drew a nonzero offset");
      break;
    }
  }
  const std::string manifest_path = (root / "manifest.json").string();
  save_manifest(manifest_path, manifest);

  RunConfig oracle;
  oracle.manifest_path = manifest_path;
  oracle.out_dir = (root / "oracle").string();
  oracle.separator = "oracle_direct";
  const auto oracle_result = run_pipeline(oracle);
  check.require(oracle_result.failed_entries == 0, "oracle run had failures");
  check.require(oracle_result.report.cells.size() == 12, "not 12 grid cells");
  int64_t counted = 0;
  for (const auto& [key, stats] : oracle_result.report.cells) {
    (void)key;
    counted += stats.count;
    if (!(stats.metric_mean("si_sdr") >= 40.0)) {
      check.require(false, "oracle cell SI-SDR mean below 40 dB");
    }
    if (!(stats.metric_mean("estoi") >= 0.999)) {
      check.require(false, "oracle cell eSTOI mean below 0.999");
    }
  }
  check.require(counted == 60, "cell counts do not partition the manifest");

  RunConfig floor = oracle;
  floor.out_dir = (root / "passthrough").string();
  floor.separator = "passthrough";
  const auto floor_result = run_pipeline(floor);
  check.require(floor_result.failed_entries == 0, "passthrough run had failures");
  for (const auto& [key, stats] : floor_result.report.cells) {
    (void)key;
    if (!(stats.metric_mean("si_sdr") <= 5.0)) {
      check.require(false, "passthrough cell SI-SDR mean above 5 dB");
    }
  }

  // Determinism: a second oracle run is byte-identical.
  RunConfig again = oracle;
  again.out_dir = (root / "oracle2").string();
  again.jobs = 2;
  run_pipeline(again);
  check.require(slurp(root / "oracle" / "report.json") ==
                    slurp(root / "oracle2" / "report.json"),
                "report.json differs between runs");
  check.require(slurp(root / "oracle" / "signal_scores.jsonl") ==
                    slurp(root / "oracle2" / "signal_scores.jsonl"),
                "signal_scores.jsonl differs between runs");

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  check.require(seconds < 600.0,
                "end-to-end took " + std::to_string(seconds) + " s (budget 600)");
}

}  // namespace

int main() {
  int failures = 0;
  failures += run_criterion(1, "stft round trip", criterion_stft_round_trip);
  failures += run_criterion(2, "room acoustics", criterion_room_acoustics);
  failures += run_criterion(3, "mixture identities", criterion_mixture_identities);
  failures += run_criterion(4, "si-sdr closed form", criterion_si_sdr);
  failures += run_criterion(5, "estoi", criterion_estoi);
  failures += run_criterion(6, "losses", criterion_losses);
  failures += run_criterion(7, "pit assignment", criterion_pit);
  failures += run_criterion(8, "wer", criterion_wer);
  failures += run_criterion(9, "cpwer", criterion_cpwer);
  failures += run_criterion(10, "relaxation collar", criterion_collar);
  failures += run_criterion(11, "paper arithmetic", criterion_paper_arithmetic);
  failures += run_criterion(12, "end-to-end grid run", criterion_end_to_end);
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all 12 criteria passed\n");
  return 0;
}
