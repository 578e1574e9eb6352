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

#include "sepbench/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "sepbench/fft.hpp"

namespace sepbench {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Seed mixing for per-purpose substreams of an entry seed.
uint64_t substream_seed(uint64_t seed, uint64_t tag) {
  uint64_t s = seed ^ (tag * 0x9E3779B97F4A7C15ULL);
  return splitmix64(s);
}

constexpr uint64_t kNoiseStream = 1;
constexpr uint64_t kDrawStream = 2;

void require_mono(const MultichannelAudio& a, const std::string& what) {
  if (a.channels() != 1) {
    throw std::invalid_argument(what + ": expected a mono signal, got " +
                                std::to_string(a.channels()) + " channels");
  }
}

}  // namespace

void ConditionGrid::validate() const {
  auto check = [](const std::vector<std::array<double, 2>>& bins, const char* what) {
    if (bins.empty()) throw std::invalid_argument(std::string("grid: no ") + what);
    for (size_t i = 0; i < bins.size(); ++i) {
      if (!(bins[i][0] < bins[i][1])) {
        throw std::invalid_argument(std::string("grid: empty ") + what + " bin");
      }
      if (i > 0 && bins[i][0] < bins[i - 1][1]) {
        throw std::invalid_argument(std::string("grid: ") + what +
                                    " bins overlap or are unordered");
      }
    }
  };
  check(t60_bins, "t60");
  check(snr_bins, "snr");
}

int ConditionGrid::find_bin(const std::vector<std::array<double, 2>>& bins, double v) {
  for (size_t i = 0; i < bins.size(); ++i) {
    if (v >= bins[i][0] && v < bins[i][1]) return static_cast<int>(i);
  }
  return -1;
}

RecipeConfig recipe_sms_wsj() {
  RecipeConfig cfg;
  cfg.name = "sms-wsj";
  cfg.sample_rate = 8000;
  cfg.speakers = 2;
  cfg.use_room = true;
  cfg.t60_range = {0.2, 0.5};
  cfg.snr_range = {20.0, 30.0};
  cfg.array_radius = 0.10;
  cfg.array_mics = 6;
  cfg.array_center_mic = false;
  return cfg;
}

RecipeConfig recipe_sms_wsj_large() {
  RecipeConfig cfg = recipe_sms_wsj();
  cfg.name = "sms-wsj-large";
  cfg.t60_range = {0.2, 1.1};
  cfg.snr_range = {0.0, 40.0};
  return cfg;
}

RecipeConfig recipe_libri2mix() {
  RecipeConfig cfg;
  cfg.name = "libri2mix";
  cfg.sample_rate = 16000;
  cfg.speakers = 2;
  cfg.use_room = false;
  cfg.snr_normal = true;
  cfg.snr_mean = -2.0;
  cfg.snr_std = 3.6;
  cfg.max_offset_seconds = 2.0;
  return cfg;
}

ConditionGrid sms_wsj_large_test_grid() {
  ConditionGrid grid;
  grid.t60_bins = {{0.2, 0.5}, {0.5, 0.8}, {0.8, 1.1}};
  grid.snr_bins = {{0.0, 10.0}, {10.0, 20.0}, {20.0, 30.0}, {30.0, 40.0}};
  return grid;
}

ArrayGeometry libricss_array(const Point3& center) {
  return circular_array(0.0425, 6, /*include_center=*/true, center);
}

std::vector<MultichannelAudio> pad_and_offset(
    const std::vector<MultichannelAudio>& sources,
    const std::vector<int64_t>& offsets) {
  if (sources.size() != offsets.size()) {
    throw std::invalid_argument("pad_and_offset: sources/offsets size mismatch");
  }
  if (sources.empty()) throw std::invalid_argument("pad_and_offset: no sources");
  int64_t common = 0;
  for (size_t i = 0; i < sources.size(); ++i) {
    require_mono(sources[i], "pad_and_offset");
    if (offsets[i] < 0) throw std::invalid_argument("pad_and_offset: negative offset");
    common = std::max(common, sources[i].length() + offsets[i]);
  }
  std::vector<MultichannelAudio> out;
  out.reserve(sources.size());
  for (size_t i = 0; i < sources.size(); ++i) {
    MultichannelAudio padded(1, common, sources[i].sample_rate());
    auto src = sources[i].channel(0);
    auto dst = padded.channel(0);
    std::copy(src.begin(), src.end(), dst.begin() + offsets[i]);
    out.push_back(std::move(padded));
  }
  return out;
}

MultichannelAudio scale_noise_to_snr(const MultichannelAudio& speech_mix,
                                     const MultichannelAudio& noise,
                                     double snr_db, int reference_index) {
  if (!std::isfinite(snr_db)) throw std::invalid_argument("snr: non-finite target");
  const double p_speech = energy(speech_mix.channel(reference_index));
  const double p_noise = energy(noise.channel(reference_index));
  if (!(p_speech > 0.0)) {
    throw std::invalid_argument("snr: speech is silent at the reference channel");
  }
  if (!(p_noise > 0.0)) {
    throw std::invalid_argument("snr: noise is silent at the reference channel");
  }
  const double gain = std::sqrt(p_speech / (p_noise * std::pow(10.0, snr_db / 10.0)));
  MultichannelAudio scaled = noise;
  for (double& v : scaled.raw()) v *= gain;
  return scaled;
}

double sample_snr_normal(Rng& rng, double mean_db, double std_db) {
  if (std_db < 0.0) throw std::invalid_argument("snr: negative std");
  if (std_db == 0.0) return mean_db;
  return rng.normal(mean_db, std_db);
}

MixtureBundle synthesize(const MixtureSpec& spec, const RirSet& rirs,
                         const std::vector<MultichannelAudio>& sources,
                         const MultichannelAudio& noise) {
  const int num_sources = static_cast<int>(sources.size());
  if (num_sources < 1) throw std::invalid_argument("synthesize: no sources");
  if (rirs.num_sources() != num_sources) {
    throw std::invalid_argument("synthesize: RIR source count does not match");
  }
  const int num_mics = rirs.num_mics();
  if (num_mics < 1) throw std::invalid_argument("synthesize: RIR set has no mics");

  const int rate = sources[0].sample_rate();
  for (const auto& s : sources) {
    require_mono(s, "synthesize source");
    if (s.sample_rate() != rate) {
      throw std::invalid_argument("synthesize: source sample rates differ");
    }
  }
  if (rirs.sample_rate != rate) {
    throw std::invalid_argument("synthesize: RIR sample rate does not match sources");
  }
  if (noise.sample_rate() != rate) {
    throw std::invalid_argument("synthesize: noise sample rate does not match");
  }
  if (noise.channels() != num_mics) {
    throw std::invalid_argument("synthesize: noise channel count does not match mics");
  }

  std::vector<int64_t> offsets = spec.offsets;
  if (offsets.empty()) offsets.assign(num_sources, 0);
  const auto aligned = pad_and_offset(sources, offsets);
  const int64_t src_len = aligned[0].length();

  int64_t rir_len = 0;
  for (int c = 0; c < num_sources; ++c) {
    for (int m = 0; m < num_mics; ++m) {
      rir_len = std::max(rir_len, static_cast<int64_t>(rirs.full[c][m].size()));
      if (rirs.full[c][m].size() != rirs.direct[c][m].size()) {
        throw std::invalid_argument("synthesize: full/direct RIR lengths differ");
      }
    }
  }
  const int64_t out_len = src_len + rir_len - 1;
  if (noise.length() != out_len) {
    throw std::invalid_argument(
        "synthesize: noise length must equal source length + RIR length - 1 (" +
        std::to_string(out_len) + " samples)");
  }

  MixtureBundle bundle;
  bundle.spec = spec;
  bundle.direct_path.reserve(num_sources);
  bundle.reflections.reserve(num_sources);
  bundle.reverberant.reserve(num_sources);

  for (int c = 0; c < num_sources; ++c) {
    MultichannelAudio s_img(num_mics, out_len, rate);
    MultichannelAudio h_img(num_mics, out_len, rate);
    MultichannelAudio x_img(num_mics, out_len, rate);
    auto src = aligned[c].channel(0);
    for (int m = 0; m < num_mics; ++m) {
      const auto& full = rirs.full[c][m];
      const auto& direct = rirs.direct[c][m];
      std::vector<double> refl(full.size());
      for (size_t i = 0; i < full.size(); ++i) refl[i] = full[i] - direct[i];

      const auto s_conv = fft_convolve(src, direct);
      const auto h_conv = fft_convolve(src, refl);
      auto s_ch = s_img.channel(m);
      auto h_ch = h_img.channel(m);
      auto x_ch = x_img.channel(m);
      for (int64_t t = 0; t < out_len; ++t) {
        const double sv = static_cast<size_t>(t) < s_conv.size() ? s_conv[t] : 0.0;
        const double hv = static_cast<size_t>(t) < h_conv.size() ? h_conv[t] : 0.0;
        s_ch[static_cast<size_t>(t)] = sv;
        h_ch[static_cast<size_t>(t)] = hv;
        x_ch[static_cast<size_t>(t)] = sv + hv;
      }
    }
    bundle.direct_path.push_back(std::move(s_img));
    bundle.reflections.push_back(std::move(h_img));
    bundle.reverberant.push_back(std::move(x_img));
  }

  // Sum of reverberant images, accumulated in speaker order.
  MultichannelAudio speech_sum(num_mics, out_len, rate);
  for (int c = 0; c < num_sources; ++c) {
    const auto& x = bundle.reverberant[c].raw();
    auto& acc = speech_sum.raw();
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += x[i];
  }

  const int ref = spec.room ? spec.room->array.reference_index : 0;
  bundle.noise = scale_noise_to_snr(speech_sum, noise, spec.snr_db, ref);

  bundle.mixture = std::move(speech_sum);
  {
    const auto& n = bundle.noise.raw();
    auto& y = bundle.mixture.raw();
    for (size_t i = 0; i < y.size(); ++i) y[i] += n[i];
  }
  return bundle;
}

MixtureBundle realize(const MixtureSpec& spec, int sample_rate) {
  std::vector<MultichannelAudio> sources;
  sources.reserve(spec.source_refs.size());
  for (const auto& ref : spec.source_refs) {
    MultichannelAudio s = read_wav(ref.path);
    if (s.sample_rate() != sample_rate) {
      throw std::runtime_error("realize: source " + ref.path + " has sample rate " +
                               std::to_string(s.sample_rate()) + ", expected " +
                               std::to_string(sample_rate));
    }
    require_mono(s, "realize source " + ref.path);
    sources.push_back(std::move(s));
  }
  if (sources.empty()) throw std::invalid_argument("realize: entry has no sources");

  RirSet rirs;
  int num_mics = 1;
  if (spec.room) {
    num_mics = static_cast<int>(spec.room->array.mic_positions.size());
    rirs = simulate_rirs(spec.room->room, spec.room->source_positions,
                         spec.room->array, /*max_order=*/-1,
                         /*length_samples=*/0, sample_rate);
  } else {
    rirs = identity_rirs(static_cast<int>(sources.size()), 1, sample_rate);
  }

  std::vector<int64_t> offsets = spec.offsets;
  if (offsets.empty()) offsets.assign(sources.size(), 0);
  int64_t common = 0;
  for (size_t i = 0; i < sources.size(); ++i) {
    common = std::max(common, sources[i].length() + offsets[i]);
  }
  int64_t rir_len = 1;
  for (const auto& per_mic : rirs.full) {
    for (const auto& h : per_mic) {
      rir_len = std::max(rir_len, static_cast<int64_t>(h.size()));
    }
  }
  const int64_t out_len = common + rir_len - 1;

  MultichannelAudio noise(num_mics, out_len, sample_rate);
  if (spec.noise.kind == NoiseSpec::Kind::white) {
    Rng rng(substream_seed(spec.seed, kNoiseStream));
    noise = make_white_noise(rng, num_mics, out_len, sample_rate);
  } else {
    MultichannelAudio file_noise = read_wav(spec.noise.path);
    if (file_noise.sample_rate() != sample_rate) {
      throw std::runtime_error("realize: noise file sample rate mismatch: " +
                               spec.noise.path);
    }
    // Tiled from crop_offset; channels cycled when the file has fewer than
    // the array needs, extra file channels ignored.
    const int64_t n = file_noise.length();
    if (n == 0) throw std::runtime_error("realize: empty noise file");
    for (int c = 0; c < num_mics; ++c) {
      auto src = file_noise.channel(c % file_noise.channels());
      auto dst = noise.channel(c);
      for (int64_t t = 0; t < out_len; ++t) {
        dst[static_cast<size_t>(t)] = src[static_cast<size_t>((spec.noise.crop_offset + t) % n)];
      }
    }
  }

  return synthesize(spec, rirs, sources, noise);
}

namespace {

// Draw order inside one entry (fixed, documented): sources, offsets, room
// dimensions, T60, array placement, speaker placements, SNR, noise pick.
MixtureSpec draw_entry(const RecipeConfig& recipe, uint64_t entry_seed,
                       const std::string& id, double t60_lo, double t60_hi,
                       std::optional<std::array<double, 2>> snr_cell) {
  if (recipe.sources.empty()) {
    throw std::invalid_argument("manifest: source pool is empty");
  }
  MixtureSpec spec;
  spec.id = id;
  spec.seed = entry_seed;
  Rng rng(substream_seed(entry_seed, kDrawStream));

  // Without replacement when the pool allows it.
  const int pool = static_cast<int>(recipe.sources.size());
  std::vector<int> chosen;
  for (int c = 0; c < recipe.speakers; ++c) {
    int pick;
    do {
      pick = static_cast<int>(rng.uniform_int(pool));
    } while (pool >= recipe.speakers &&
             std::find(chosen.begin(), chosen.end(), pick) != chosen.end());
    chosen.push_back(pick);
    spec.source_refs.push_back(recipe.sources[pick]);
  }

  spec.offsets.assign(recipe.speakers, 0);
  if (recipe.max_offset_seconds > 0.0 && recipe.speakers > 1) {
    const int late = static_cast<int>(rng.uniform_int(recipe.speakers));
    const int64_t max_off =
        static_cast<int64_t>(recipe.max_offset_seconds * recipe.sample_rate);
    spec.offsets[late] = static_cast<int64_t>(rng.uniform_int(max_off + 1));
  }

  if (recipe.use_room) {
    RoomDraw draw;
    draw.room.dimensions = {rng.uniform(recipe.room_length[0], recipe.room_length[1]),
                            rng.uniform(recipe.room_width[0], recipe.room_width[1]),
                            rng.uniform(recipe.room_height[0], recipe.room_height[1])};
    draw.room.target_t60 = rng.uniform(t60_lo, t60_hi);

    const auto& dims = draw.room.dimensions;
    const double margin = recipe.wall_margin;
    const double r = recipe.array_radius;
    Point3 center{
        rng.uniform(margin + r, dims[0] - margin - r),
        rng.uniform(margin + r, dims[1] - margin - r),
        std::min(rng.uniform(recipe.array_height[0], recipe.array_height[1]),
                 dims[2] - margin)};
    draw.array = circular_array(r, recipe.array_mics, recipe.array_center_mic, center);

    for (int c = 0; c < recipe.speakers; ++c) {
      Point3 pos;
      bool ok = false;
      for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
        const double angle = rng.uniform(0.0, 2.0 * kPi);
        const double dist =
            rng.uniform(recipe.speaker_distance[0], recipe.speaker_distance[1]);
        pos = {center[0] + dist * std::cos(angle), center[1] + dist * std::sin(angle),
               std::min(rng.uniform(recipe.speaker_height[0], recipe.speaker_height[1]),
                        dims[2] - margin)};
        ok = pos[0] > margin && pos[0] < dims[0] - margin && pos[1] > margin &&
             pos[1] < dims[1] - margin && pos[2] > margin;
      }
      if (!ok) {
        throw std::runtime_error(
            "manifest: could not place speaker inside the room; widen the room "
            "ranges or shrink the speaker distance");
      }
      draw.source_positions.push_back(pos);
    }
    spec.room = std::move(draw);
  }

  if (snr_cell) {
    spec.snr_db = rng.uniform((*snr_cell)[0], (*snr_cell)[1]);
  } else if (recipe.snr_normal) {
    spec.snr_db = sample_snr_normal(rng, recipe.snr_mean, recipe.snr_std);
  } else {
    spec.snr_db = rng.uniform(recipe.snr_range[0], recipe.snr_range[1]);
  }

  if (!recipe.noise_files.empty()) {
    spec.noise.kind = NoiseSpec::Kind::file;
    spec.noise.path =
        recipe.noise_files[rng.uniform_int(recipe.noise_files.size())];
    spec.noise.crop_offset = static_cast<int64_t>(rng.uniform_int(1ULL << 30));
  } else {
    spec.noise.kind = NoiseSpec::Kind::white;
  }
  return spec;
}

std::string entry_id(size_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%06zu", index);
  return buf;
}

}  // namespace

Manifest build_manifest(const RecipeConfig& recipe, int count, uint64_t seed) {
  if (count < 1) throw std::invalid_argument("manifest: count must be >= 1");
  Manifest m;
  m.recipe = recipe.name;
  m.seed = seed;
  m.sample_rate = recipe.sample_rate;
  m.speakers = recipe.speakers;
  uint64_t sm = seed;
  for (int i = 0; i < count; ++i) {
    const uint64_t entry_seed = splitmix64(sm);
    m.entries.push_back(draw_entry(recipe, entry_seed, entry_id(i),
                                   recipe.t60_range[0], recipe.t60_range[1],
                                   std::nullopt));
  }
  return m;
}

Manifest build_grid_manifest(const RecipeConfig& recipe, const ConditionGrid& grid,
                             int per_cell, uint64_t seed) {
  grid.validate();
  if (per_cell < 1) throw std::invalid_argument("manifest: per_cell must be >= 1");
  Manifest m;
  m.recipe = recipe.name;
  m.seed = seed;
  m.sample_rate = recipe.sample_rate;
  m.speakers = recipe.speakers;
  m.grid = grid;
  uint64_t sm = seed;
  size_t index = 0;
  for (size_t ti = 0; ti < grid.t60_bins.size(); ++ti) {
    for (size_t si = 0; si < grid.snr_bins.size(); ++si) {
      for (int k = 0; k < per_cell; ++k) {
        const uint64_t entry_seed = splitmix64(sm);
        MixtureSpec spec = draw_entry(recipe, entry_seed, entry_id(index++),
                                      grid.t60_bins[ti][0], grid.t60_bins[ti][1],
                                      grid.snr_bins[si]);
        spec.t60_bin = static_cast<int>(ti);
        spec.snr_bin = static_cast<int>(si);
        m.entries.push_back(std::move(spec));
      }
    }
  }
  return m;
}

// --------------------------------------------------------------------------
// JSON serialization

namespace {

using nlohmann::json;

json point_to_json(const Point3& p) { return json::array({p[0], p[1], p[2]}); }

Point3 point_from_json(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

json spec_to_json(const MixtureSpec& spec) {
  json j;
  j["id"] = spec.id;
  j["seed"] = spec.seed;
  json sources = json::array();
  for (size_t i = 0; i < spec.source_refs.size(); ++i) {
    sources.push_back({{"id", spec.source_refs[i].id},
                       {"path", spec.source_refs[i].path},
                       {"offset", spec.offsets.size() > i ? spec.offsets[i] : 0}});
  }
  j["sources"] = sources;
  if (spec.room) {
    json room;
    room["dims"] = point_to_json(spec.room->room.dimensions);
    room["t60"] = spec.room->room.target_t60;
    room["speed_of_sound"] = spec.room->room.speed_of_sound;
    room["anechoic"] = spec.room->room.anechoic;
    json mics = json::array();
    for (const auto& m : spec.room->array.mic_positions) mics.push_back(point_to_json(m));
    room["mics"] = mics;
    room["reference"] = spec.room->array.reference_index;
    json srcs = json::array();
    for (const auto& s : spec.room->source_positions) srcs.push_back(point_to_json(s));
    room["sources_xyz"] = srcs;
    j["room"] = room;
  } else {
    j["room"] = nullptr;
  }
  j["snr_db"] = spec.snr_db;
  if (spec.noise.kind == NoiseSpec::Kind::white) {
    j["noise"] = {{"kind", "white"}};
  } else {
    j["noise"] = {{"kind", "file"},
                  {"path", spec.noise.path},
                  {"crop_offset", spec.noise.crop_offset}};
  }
  j["t60_bin"] = spec.t60_bin;
  j["snr_bin"] = spec.snr_bin;
  return j;
}

MixtureSpec spec_from_json(const json& j) {
  MixtureSpec spec;
  spec.id = j.at("id").get<std::string>();
  spec.seed = j.at("seed").get<uint64_t>();
  for (const auto& s : j.at("sources")) {
    spec.source_refs.push_back({s.at("id").get<std::string>(),
                                s.at("path").get<std::string>()});
    spec.offsets.push_back(s.at("offset").get<int64_t>());
  }
  if (!j.at("room").is_null()) {
    const auto& room = j.at("room");
    RoomDraw draw;
    draw.room.dimensions = point_from_json(room.at("dims"));
    draw.room.target_t60 = room.at("t60").get<double>();
    draw.room.speed_of_sound = room.at("speed_of_sound").get<double>();
    draw.room.anechoic = room.at("anechoic").get<bool>();
    for (const auto& m : room.at("mics")) {
      draw.array.mic_positions.push_back(point_from_json(m));
    }
    draw.array.reference_index = room.at("reference").get<int>();
    for (const auto& s : room.at("sources_xyz")) {
      draw.source_positions.push_back(point_from_json(s));
    }
    spec.room = std::move(draw);
  }
  spec.snr_db = j.at("snr_db").get<double>();
  const std::string kind = j.at("noise").at("kind").get<std::string>();
  if (kind == "white") {
    spec.noise.kind = NoiseSpec::Kind::white;
  } else if (kind == "file") {
    spec.noise.kind = NoiseSpec::Kind::file;
    spec.noise.path = j.at("noise").at("path").get<std::string>();
    spec.noise.crop_offset = j.at("noise").at("crop_offset").get<int64_t>();
  } else {
    throw std::runtime_error("manifest: unknown noise kind: " + kind);
  }
  spec.t60_bin = j.at("t60_bin").get<int>();
  spec.snr_bin = j.at("snr_bin").get<int>();
  return spec;
}

json grid_to_json(const ConditionGrid& grid) {
  json j;
  j["t60_bins"] = json::array();
  for (const auto& b : grid.t60_bins) j["t60_bins"].push_back({b[0], b[1]});
  j["snr_bins"] = json::array();
  for (const auto& b : grid.snr_bins) j["snr_bins"].push_back({b[0], b[1]});
  return j;
}

ConditionGrid grid_from_json(const json& j) {
  ConditionGrid grid;
  for (const auto& b : j.at("t60_bins")) {
    grid.t60_bins.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
  }
  for (const auto& b : j.at("snr_bins")) {
    grid.snr_bins.push_back({b.at(0).get<double>(), b.at(1).get<double>()});
  }
  return grid;
}

}  // namespace

std::string manifest_to_json(const Manifest& manifest) {
  json j;
  j["format"] = "sepbench-manifest-v1";
  j["recipe"] = manifest.recipe;
  j["seed"] = manifest.seed;
  j["sample_rate"] = manifest.sample_rate;
  j["speakers"] = manifest.speakers;
  j["grid"] = manifest.grid ? grid_to_json(*manifest.grid) : json(nullptr);
  json entries = json::array();
  for (const auto& e : manifest.entries) entries.push_back(spec_to_json(e));
  j["entries"] = entries;
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& json_text) {
  json j = json::parse(json_text);
  if (j.value("format", "") != "sepbench-manifest-v1") {
    throw std::runtime_error("manifest: unrecognized format tag");
  }
  Manifest m;
  m.recipe = j.at("recipe").get<std::string>();
  m.seed = j.at("seed").get<uint64_t>();
  m.sample_rate = j.at("sample_rate").get<int>();
  m.speakers = j.at("speakers").get<int>();
  if (!j.at("grid").is_null()) m.grid = grid_from_json(j.at("grid"));
  for (const auto& e : j.at("entries")) m.entries.push_back(spec_from_json(e));
  return m;
}

void save_manifest(const std::string& path, const Manifest& manifest) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("manifest: cannot create " + path);
  f << manifest_to_json(manifest);
  if (!f) throw std::runtime_error("manifest: write failed: " + path);
}

Manifest load_manifest(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("manifest: cannot open " + path);
  std::string text((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  return manifest_from_json(text);
}

void write_bundle_audio(const std::string& out_root, const MixtureBundle& bundle) {
  const std::string dir = out_root + "/" + bundle.spec.id;
  std::filesystem::create_directories(dir);
  write_wav(dir + "/mixture.wav", bundle.mixture, WavEncoding::float32);
  for (int c = 0; c < bundle.num_speakers(); ++c) {
    write_wav(dir + "/src" + std::to_string(c + 1) + "_direct.wav",
              bundle.direct_path[c], WavEncoding::float32);
  }
  write_wav(dir + "/noise.wav", bundle.noise, WavEncoding::float32);
}

MultichannelAudio make_speech_like(Rng& rng, int64_t length, int sample_rate) {
  MultichannelAudio out(1, length, sample_rate);
  auto x = out.channel(0);

  const double f0_base = rng.uniform(100.0, 220.0);
  const double f0_drift = rng.uniform(10.0, 40.0);
  const double drift_rate = rng.uniform(0.4, 1.2);
  const double syllable_rate = rng.uniform(2.5, 5.0);
  const double phase0 = rng.uniform(0.0, 2.0 * kPi);

  // Two formant-like resonances shape the harmonic amplitudes.
  const double formant1 = rng.uniform(300.0, 900.0);
  const double formant2 = rng.uniform(1200.0, 2600.0);
  const double bw1 = rng.uniform(80.0, 160.0);
  const double bw2 = rng.uniform(150.0, 300.0);
  auto formant_gain = [&](double f) {
    const double d1 = (f - formant1) / bw1;
    const double d2 = (f - formant2) / bw2;
    return 1.0 / (1.0 + d1 * d1) + 0.6 / (1.0 + d2 * d2) + 0.02;
  };

  const double nyquist = sample_rate / 2.0;
  const int max_harmonics = 40;
  std::vector<double> phases(max_harmonics);
  for (auto& p : phases) p = rng.uniform(0.0, 2.0 * kPi);

  // Unvoiced (noise-burst) syllables mixed in at random.
  const int64_t syllable_len =
      std::max<int64_t>(1, static_cast<int64_t>(sample_rate / syllable_rate));
  std::vector<bool> unvoiced((length / syllable_len) + 2);
  for (size_t i = 0; i < unvoiced.size(); ++i) unvoiced[i] = rng.uniform() < 0.2;

  double phase_f0 = phase0;
  for (int64_t t = 0; t < length; ++t) {
    const double sec = static_cast<double>(t) / sample_rate;
    const double f0 = f0_base + f0_drift * std::sin(2.0 * kPi * drift_rate * sec);
    phase_f0 += 2.0 * kPi * f0 / sample_rate;

    const double syl = std::sin(kPi * syllable_rate * sec);
    const double envelope = std::pow(std::abs(syl), 0.7);
    const size_t syl_idx = static_cast<size_t>(t / syllable_len);

    double v;
    if (unvoiced[syl_idx]) {
      v = 0.25 * rng.normal();
    } else {
      v = 0.0;
      for (int k = 1; k <= max_harmonics; ++k) {
        const double fk = k * f0;
        if (fk >= nyquist * 0.95 || fk > 4000.0) break;
        v += formant_gain(fk) / k * std::sin(k * phase_f0 + phases[k - 1]);
      }
    }
    x[static_cast<size_t>(t)] = envelope * v;
  }

  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    const double g = 0.5 / peak;
    for (double& v : x) v *= g;
  }
  return out;
}

std::vector<SourceRef> make_source_pool(const std::string& dir, int count,
                                        std::array<double, 2> duration_seconds,
                                        int sample_rate, uint64_t seed) {
  if (count < 1) throw std::invalid_argument("source pool: count must be >= 1");
  std::filesystem::create_directories(dir);
  std::vector<SourceRef> refs;
  uint64_t sm = seed;
  for (int i = 0; i < count; ++i) {
    Rng rng(splitmix64(sm));
    const double dur = rng.uniform(duration_seconds[0], duration_seconds[1]);
    const int64_t len = static_cast<int64_t>(dur * sample_rate);
    const MultichannelAudio utt = make_speech_like(rng, len, sample_rate);
    char name[32];
    std::snprintf(name, sizeof(name), "utt%04d.wav", i);
    const std::string path = dir + "/" + name;
    write_wav(path, utt, WavEncoding::float32);
    char id[16];
    std::snprintf(id, sizeof(id), "utt%04d", i);
    refs.push_back({id, path});
  }
  return refs;
}

MultichannelAudio make_white_noise(Rng& rng, int channels, int64_t length,
                                   int sample_rate) {
  MultichannelAudio noise(channels, length, sample_rate);
  for (int c = 0; c < channels; ++c) {
    auto ch = noise.channel(c);
    for (auto& v : ch) v = rng.normal();
  }
  return noise;
}

}  // namespace sepbench
