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

#include "sepbench/room.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <stdexcept>

#include "sepbench/audio.hpp"

namespace sepbench {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr int kSincTaps = 81;
constexpr double kSincHalfWidth = (kSincTaps - 1) / 2.0 + 0.5;  // 40.5

void validate_room(const RoomSpec& room) {
  for (double d : room.dimensions) {
    if (d <= 0.0) throw std::invalid_argument("room: dimensions must be > 0");
  }
  if (room.speed_of_sound <= 0.0) {
    throw std::invalid_argument("room: speed of sound must be > 0");
  }
  if (!room.anechoic && room.target_t60 <= 0.0) {
    throw std::invalid_argument("room: target_t60 must be > 0 unless anechoic");
  }
}

void require_inside(const RoomSpec& room, const Point3& p, const char* what) {
  for (int i = 0; i < 3; ++i) {
    if (!(p[i] > 0.0 && p[i] < room.dimensions[i])) {
      throw std::invalid_argument(std::string("room: ") + what +
                                  " must lie strictly inside the room");
    }
  }
}

// Stamps gain * hann_windowed_sinc(n - delay) into rir. One sin() serves
// every sinc tap via sin(pi(k - f)) = -(-1)^k sin(pi f); the Hann factor
// uses the angle-addition identity against per-tap tables.
struct SincTables {
  std::array<double, kSincTaps> cos_a;
  std::array<double, kSincTaps> sin_a;
  SincTables() {
    for (int i = 0; i < kSincTaps; ++i) {
      const int k = i - (kSincTaps - 1) / 2;
      const double a = kPi * k / kSincHalfWidth;
      cos_a[i] = std::cos(a);
      sin_a[i] = std::sin(a);
    }
  }
};

// Allen-Berkley 100 Hz high-pass. Image amplitudes are all positive, so the
// dense late tail of a reverberant response accumulates a DC component that
// decays far slower than the true reverberation; this filter removes it.
void highpass_inplace(std::vector<double>& h, int sample_rate) {
  const double w = 2.0 * kPi * 100.0 / sample_rate;
  const double r1 = std::exp(-w);
  const double b1 = 2.0 * r1 * std::cos(w);
  const double b2 = -r1 * r1;
  const double a1 = -(1.0 + r1);
  double y0 = 0.0, y1 = 0.0, y2 = 0.0;
  for (double& v : h) {
    y2 = y1;
    y1 = y0;
    y0 = b1 * y1 + b2 * y2 + v;
    v = y0 + a1 * y1 + r1 * y2;
  }
}

void stamp_image(std::vector<double>& rir, double delay_samples, double gain,
                 const SincTables& tab) {
  const int64_t n0 = static_cast<int64_t>(std::floor(delay_samples));
  const double frac = delay_samples - static_cast<double>(n0);
  const int half = (kSincTaps - 1) / 2;

  const double sin_pf = std::sin(kPi * frac);
  const double b = kPi * frac / kSincHalfWidth;
  const double cos_b = std::cos(b);
  const double sin_b = std::sin(b);

  const int64_t len = static_cast<int64_t>(rir.size());
  for (int i = 0; i < kSincTaps; ++i) {
    const int k = i - half;
    const int64_t n = n0 + k;
    if (n < 0 || n >= len) continue;
    const double x = static_cast<double>(k) - frac;
    double sinc;
    if (frac == 0.0) {
      sinc = (k == 0) ? 1.0 : 0.0;
    } else {
      const double sign = (k & 1) ? 1.0 : -1.0;
      sinc = sign * sin_pf / (kPi * x);
    }
    // Hann over [-40.5, 40.5]: 0.5 (1 + cos(pi x / 40.5)).
    const double window = 0.5 * (1.0 + tab.cos_a[i] * cos_b + tab.sin_a[i] * sin_b);
    rir[static_cast<size_t>(n)] += gain * window * sinc;
  }
}

}  // namespace

ArrayGeometry circular_array(double radius, int count, bool include_center,
                             const Point3& center) {
  if (radius <= 0.0) throw std::invalid_argument("array: radius must be > 0");
  if (count < 1) throw std::invalid_argument("array: count must be >= 1");
  ArrayGeometry geo;
  geo.mic_positions.reserve(count + (include_center ? 1 : 0));
  for (int i = 0; i < count; ++i) {
    const double theta = 2.0 * kPi * i / count;
    geo.mic_positions.push_back({center[0] + radius * std::cos(theta),
                                 center[1] + radius * std::sin(theta),
                                 center[2]});
  }
  if (include_center) {
    geo.mic_positions.push_back(center);
    geo.reference_index = count;
  } else {
    geo.reference_index = 0;
  }
  return geo;
}

double absorption_from_t60(const RoomSpec& room) {
  validate_room(room);
  if (room.anechoic) return 1.0;
  const auto& L = room.dimensions;
  const double volume = L[0] * L[1] * L[2];
  const double surface = 2.0 * (L[0] * L[1] + L[0] * L[2] + L[1] * L[2]);
  const double alpha = 0.161 * volume / (surface * room.target_t60);
  if (alpha > 1.0) {
    throw std::invalid_argument(
        "room: requested T60 of " + std::to_string(room.target_t60) +
        " s is unreachable for this geometry (Sabine absorption " +
        std::to_string(alpha) + " > 1); enlarge the room or raise T60");
  }
  return alpha;
}

RirSet simulate_rir(const RoomSpec& room, const Point3& source,
                    const ArrayGeometry& array, int max_order,
                    int64_t length_samples, int sample_rate) {
  validate_room(room);
  if (sample_rate <= 0) throw std::invalid_argument("rir: sample_rate must be > 0");
  if (array.mic_positions.empty()) throw std::invalid_argument("rir: no microphones");
  if (array.reference_index < 0 ||
      array.reference_index >= static_cast<int>(array.mic_positions.size())) {
    throw std::invalid_argument("rir: reference_index out of range");
  }
  require_inside(room, source, "source");
  for (const auto& m : array.mic_positions) require_inside(room, m, "microphone");

  const double alpha = absorption_from_t60(room);
  const double beta = std::sqrt(std::max(0.0, 1.0 - alpha));
  const double c = room.speed_of_sound;

  if (length_samples <= 0) {
    const double seconds = room.anechoic ? 0.05 : 1.5 * room.target_t60;
    length_samples = static_cast<int64_t>(std::ceil(seconds * sample_rate)) + kSincTaps;
  }

  const auto& L = room.dimensions;
  const double max_dist = static_cast<double>(length_samples) / sample_rate * c;

  // Lattice ranges: far enough to cover max_dist, and no farther than the
  // reflection-order cap allows.
  std::array<int64_t, 3> nmax;
  for (int i = 0; i < 3; ++i) {
    int64_t n = static_cast<int64_t>(std::ceil(max_dist / (2.0 * L[i])));
    if (max_order >= 0) n = std::min(n, static_cast<int64_t>(max_order) / 2 + 1);
    if (room.anechoic) n = 0;
    nmax[i] = n;
  }

  // beta^k lookup; exponents are bounded by the lattice extent.
  const int max_exp =
      static_cast<int>(2 * (nmax[0] + nmax[1] + nmax[2]) + 6);
  std::vector<double> beta_pow(max_exp + 1);
  beta_pow[0] = 1.0;
  for (int i = 1; i <= max_exp; ++i) beta_pow[i] = beta_pow[i - 1] * beta;

  static const SincTables tab;
  const double samples_per_meter = sample_rate / c;

  RirSet out;
  out.sample_rate = sample_rate;
  out.full.resize(1);
  out.direct.resize(1);
  const int num_mics = static_cast<int>(array.mic_positions.size());
  out.full[0].assign(num_mics, std::vector<double>(length_samples, 0.0));
  out.direct[0].assign(num_mics, std::vector<double>(length_samples, 0.0));

  for (int mic = 0; mic < num_mics; ++mic) {
    const auto& r = array.mic_positions[mic];

    // Direct-path sanity: the response must be long enough to hold it.
    {
      const double dx = source[0] - r[0], dy = source[1] - r[1], dz = source[2] - r[2];
      const double d0 = std::sqrt(dx * dx + dy * dy + dz * dz);
      if (std::floor(d0 * samples_per_meter) >= static_cast<double>(length_samples)) {
        throw std::invalid_argument(
            "rir: requested length is shorter than the direct-path delay");
      }
    }

    auto& h_full = out.full[0][mic];
    auto& h_direct = out.direct[0][mic];

    for (int64_t mx = -nmax[0]; mx <= nmax[0]; ++mx) {
      const double rx0 = 2.0 * mx * L[0] - r[0];
      for (int64_t my = -nmax[1]; my <= nmax[1]; ++my) {
        const double ry0 = 2.0 * my * L[1] - r[1];
        for (int64_t mz = -nmax[2]; mz <= nmax[2]; ++mz) {
          const double rz0 = 2.0 * mz * L[2] - r[2];
          for (int q = 0; q <= 1; ++q) {
            const double px = (1 - 2 * q) * source[0] + rx0;
            const int ex = static_cast<int>(std::llabs(2 * mx - q));
            for (int j = 0; j <= 1; ++j) {
              const double py = (1 - 2 * j) * source[1] + ry0;
              const int ey = static_cast<int>(std::llabs(2 * my - j));
              for (int k = 0; k <= 1; ++k) {
                const double pz = (1 - 2 * k) * source[2] + rz0;
                const int ez = static_cast<int>(std::llabs(2 * mz - k));
                const int reflections = ex + ey + ez;
                if (max_order >= 0 && reflections > max_order) continue;
                if (room.anechoic && reflections > 0) continue;

                const double dist = std::sqrt(px * px + py * py + pz * pz);
                const double delay = dist * samples_per_meter;
                if (std::floor(delay) >= static_cast<double>(length_samples)) continue;

                const double gain =
                    beta_pow[reflections] / (4.0 * kPi * std::max(dist, 1e-9));
                stamp_image(h_full, delay, gain, tab);
                if (reflections == 0) stamp_image(h_direct, delay, gain, tab);
              }
            }
          }
        }
      }
    }
    if (!room.anechoic) {
      highpass_inplace(h_full, sample_rate);
      highpass_inplace(h_direct, sample_rate);
    }
  }
  return out;
}

RirSet simulate_rirs(const RoomSpec& room, const std::vector<Point3>& sources,
                     const ArrayGeometry& array, int max_order,
                     int64_t length_samples, int sample_rate) {
  if (sources.empty()) throw std::invalid_argument("rir: no sources");
  RirSet out;
  out.sample_rate = sample_rate;
  for (const auto& src : sources) {
    RirSet one = simulate_rir(room, src, array, max_order, length_samples, sample_rate);
    out.full.push_back(std::move(one.full[0]));
    out.direct.push_back(std::move(one.direct[0]));
  }
  return out;
}

RirSet identity_rirs(int num_sources, int num_mics, int sample_rate) {
  if (num_sources < 1 || num_mics < 1) {
    throw std::invalid_argument("rir: counts must be >= 1");
  }
  RirSet out;
  out.sample_rate = sample_rate;
  out.full.assign(num_sources,
                  std::vector<std::vector<double>>(num_mics, std::vector<double>{1.0}));
  out.direct = out.full;
  return out;
}

double measure_t60(const std::vector<double>& rir, int sample_rate) {
  if (sample_rate <= 0) throw std::invalid_argument("t60: sample_rate must be > 0");
  double total = 0.0;
  for (double v : rir) total += v * v;
  if (!(total > 0.0)) throw std::invalid_argument("t60: impulse response has no energy");

  // Schroeder backward integration, in dB relative to the full energy.
  std::vector<double> level_db(rir.size());
  double tail = 0.0;
  for (size_t i = rir.size(); i-- > 0;) {
    tail += rir[i] * rir[i];
    level_db[i] = 10.0 * std::log10(tail / total);
  }

  constexpr double kFitHigh = -5.0;
  constexpr double kFitLow = -25.0;
  size_t i_high = level_db.size(), i_low = level_db.size();
  for (size_t i = 0; i < level_db.size(); ++i) {
    if (i_high == level_db.size() && level_db[i] <= kFitHigh) i_high = i;
    if (level_db[i] <= kFitLow) {
      i_low = i;
      break;
    }
  }
  if (i_high >= level_db.size() || i_low >= level_db.size() || i_low <= i_high + 8) {
    throw std::invalid_argument(
        "t60: decay range too short for a -5 dB to -25 dB fit (need at least "
        "20 dB of usable decay)");
  }

  // Least-squares line over the fit span; slope in dB per second.
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(i_low - i_high + 1);
  for (size_t i = i_high; i <= i_low; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    sx += t;
    sy += level_db[i];
    sxx += t * t;
    sxy += t * level_db[i];
  }
  const double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) throw std::invalid_argument("t60: degenerate fit span");
  const double slope = (n * sxy - sx * sy) / denom;
  if (slope >= 0.0) throw std::invalid_argument("t60: decay curve is not decreasing");
  return -60.0 / slope;
}

void save_rir_set(const std::string& dir, const RirSet& rirs) {
  std::filesystem::create_directories(dir);
  for (int s = 0; s < rirs.num_sources(); ++s) {
    for (int kind = 0; kind < 2; ++kind) {
      const auto& mat = kind == 0 ? rirs.full[s] : rirs.direct[s];
      const int64_t len = static_cast<int64_t>(mat[0].size());
      MultichannelAudio audio(static_cast<int>(mat.size()), len, rirs.sample_rate);
      for (size_t m = 0; m < mat.size(); ++m) {
        std::copy(mat[m].begin(), mat[m].end(), audio.channel(static_cast<int>(m)).begin());
      }
      const std::string name = "src" + std::to_string(s + 1) +
                               (kind == 0 ? "_full.wav" : "_direct.wav");
      write_wav(dir + "/" + name, audio, WavEncoding::float32);
    }
  }
}

RirSet load_rir_set(const std::string& dir, int num_sources) {
  RirSet out;
  for (int s = 0; s < num_sources; ++s) {
    for (int kind = 0; kind < 2; ++kind) {
      const std::string name = dir + "/src" + std::to_string(s + 1) +
                               (kind == 0 ? "_full.wav" : "_direct.wav");
      MultichannelAudio audio = read_wav(name);
      if (out.sample_rate == 0) out.sample_rate = audio.sample_rate();
      if (audio.sample_rate() != out.sample_rate) {
        throw std::runtime_error("rir: inconsistent sample rates in " + dir);
      }
      std::vector<std::vector<double>> mat(audio.channels());
      for (int m = 0; m < audio.channels(); ++m) {
        auto ch = audio.channel(m);
        mat[m].assign(ch.begin(), ch.end());
      }
      if (kind == 0) {
        out.full.push_back(std::move(mat));
      } else {
        out.direct.push_back(std::move(mat));
      }
    }
  }
  return out;
}

}  // namespace sepbench
