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

#ifndef SEPBENCH_MIXTURE_HPP_
#define SEPBENCH_MIXTURE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sepbench/audio.hpp"
#include "sepbench/rng.hpp"
#include "sepbench/room.hpp"

namespace sepbench {

struct SourceRef {
  std::string id;
  std::string path;
};

struct NoiseSpec {
  enum class Kind { white, file };
  Kind kind = Kind::white;
  std::string path;         // file noise only
  int64_t crop_offset = 0;  // samples into the file, applied modulo its length
};

/// A fully realized room draw: geometry plus source and array placement.
struct RoomDraw {
  RoomSpec room;
  std::vector<Point3> source_positions;
  ArrayGeometry array;
};

/// Everything needed to resynthesize one mixture deterministically.
struct MixtureSpec {
  std::string id;
  uint64_t seed = 0;
  std::vector<SourceRef> source_refs;
  std::vector<int64_t> offsets;  // per-source onset, samples
  std::optional<RoomDraw> room;  // absent: dry single-channel mixing
  double snr_db = 0.0;
  NoiseSpec noise;
  int t60_bin = -1;  // condition tags; -1 when the manifest has no grid
  int snr_bin = -1;
};

/// A synthesized example. The construction keeps the decomposition exact:
/// reverberant[c] == direct_path[c] + reflections[c] for every sample, and
/// mixture == (reverberant[0] + ... + reverberant[C-1]) + noise with the
/// sums accumulated in that order.
struct MixtureBundle {
  MultichannelAudio mixture;                   // Y
  std::vector<MultichannelAudio> reverberant;  // X(c)
  std::vector<MultichannelAudio> direct_path;  // S(c)
  std::vector<MultichannelAudio> reflections;  // H(c)
  MultichannelAudio noise;                     // N, already scaled
  MixtureSpec spec;

  int reference_mic() const {
    return spec.room ? spec.room->array.reference_index : 0;
  }
  int num_speakers() const { return static_cast<int>(direct_path.size()); }
};

struct ConditionGrid {
  std::vector<std::array<double, 2>> t60_bins;  // [lo, hi) seconds
  std::vector<std::array<double, 2>> snr_bins;  // [lo, hi) dB

  void validate() const;
  /// Index of the bin containing the value, or -1.
  static int find_bin(const std::vector<std::array<double, 2>>& bins, double v);
};

struct Manifest {
  std::string recipe;
  uint64_t seed = 0;
  int sample_rate = 8000;
  int speakers = 2;
  std::optional<ConditionGrid> grid;
  std::vector<MixtureSpec> entries;
};

/// Sampling ranges and geometry for a dataset recipe.
struct RecipeConfig {
  std::string name = "custom";
  int sample_rate = 8000;
  int speakers = 2;

  bool use_room = true;
  std::array<double, 2> room_length{7.0, 9.0};
  std::array<double, 2> room_width{5.0, 7.0};
  std::array<double, 2> room_height{2.8, 3.5};
  std::array<double, 2> t60_range{0.2, 0.5};

  std::array<double, 2> snr_range{20.0, 30.0};
  bool snr_normal = false;  // draw SNR from normal(snr_mean, snr_std) instead
  double snr_mean = -2.0;
  double snr_std = 3.6;

  double array_radius = 0.10;
  int array_mics = 6;
  bool array_center_mic = false;
  std::array<double, 2> array_height{1.2, 1.6};
  std::array<double, 2> speaker_distance{1.0, 2.0};
  std::array<double, 2> speaker_height{1.4, 1.8};
  double wall_margin = 0.3;

  double max_offset_seconds = 0.0;  // > 0: one speaker starts late

  std::vector<SourceRef> sources;
  std::vector<std::string> noise_files;  // empty: white sensor noise
};

/// Reverberant 2-talker recipe: 8 kHz, 10 cm circle of 6 mics (first mic is
/// the reference), T60 in [0.2, 0.5] s, white noise at 20-30 dB SNR.
RecipeConfig recipe_sms_wsj();

/// Same geometry with widened training ranges: T60 [0.2, 1.1] s, SNR
/// [0, 40] dB.
RecipeConfig recipe_sms_wsj_large();

/// Dry 16 kHz 2-talker mixing; SNR from normal(-2, 3.6) dB and a random
/// onset offset on one of the two speakers.
RecipeConfig recipe_libri2mix();

/// The 3 x 4 test grid: T60 {[0.2,0.5],[0.5,0.8],[0.8,1.1]} s by SNR
/// {[0,10],[10,20],[20,30],[30,40]} dB.
ConditionGrid sms_wsj_large_test_grid();

/// 4.25 cm circle of 6 mics plus a center reference microphone.
ArrayGeometry libricss_array(const Point3& center);

// ---------------------------------------------------------------------------
// Operations

/// Zero-pads each mono source by its onset offset in front and to the
/// common maximum length in back.
std::vector<MultichannelAudio> pad_and_offset(
    const std::vector<MultichannelAudio>& sources,
    const std::vector<int64_t>& offsets);

/// Returns the noise scaled so that, at the reference channel,
/// 10 log10(P_speech / P_noise) equals snr_db. One gain is applied to all
/// noise channels.
MultichannelAudio scale_noise_to_snr(const MultichannelAudio& speech_mix,
                                     const MultichannelAudio& noise,
                                     double snr_db, int reference_index);

/// One draw from normal(mean_db, std_db); std_db == 0 returns the mean.
double sample_snr_normal(Rng& rng, double mean_db, double std_db);

/// Convolves the sources with the impulse responses and mixes with noise at
/// the requested SNR. The noise must already have the output length
/// (common source length + RIR length - 1) and channel count.
MixtureBundle synthesize(const MixtureSpec& spec, const RirSet& rirs,
                         const std::vector<MultichannelAudio>& sources,
                         const MultichannelAudio& noise);

/// Loads sources, simulates (or fabricates) the RIRs, generates noise from
/// the entry seed, and synthesizes the bundle.
MixtureBundle realize(const MixtureSpec& spec, int sample_rate);

/// Draws `count` mixture specs from the recipe ranges.
Manifest build_manifest(const RecipeConfig& recipe, int count, uint64_t seed);

/// Draws `per_cell` specs inside every (T60 bin, SNR bin) cell and tags
/// them with their cell coordinates.
Manifest build_grid_manifest(const RecipeConfig& recipe, const ConditionGrid& grid,
                             int per_cell, uint64_t seed);

std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const std::string& json_text);
void save_manifest(const std::string& path, const Manifest& manifest);
Manifest load_manifest(const std::string& path);

/// Writes the per-entry audio layout:
/// <out>/<entry_id>/{mixture,src1_direct,...,src<C>_direct,noise}.wav
void write_bundle_audio(const std::string& out_root, const MixtureBundle& bundle);

/// Speech-shaped test material: a harmonic voice with pitch drift, formant
/// coloring, syllabic amplitude modulation, and unvoiced noise bursts.
MultichannelAudio make_speech_like(Rng& rng, int64_t length, int sample_rate);

/// Writes `count` speech-like utterances into dir and returns their refs.
std::vector<SourceRef> make_source_pool(const std::string& dir, int count,
                                        std::array<double, 2> duration_seconds,
                                        int sample_rate, uint64_t seed);

/// White Gaussian noise, independent per channel.
MultichannelAudio make_white_noise(Rng& rng, int channels, int64_t length,
                                   int sample_rate);

}  // namespace sepbench

#endif  // SEPBENCH_MIXTURE_HPP_
