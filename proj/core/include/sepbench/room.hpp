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

#ifndef SEPBENCH_ROOM_HPP_
#define SEPBENCH_ROOM_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace sepbench {

using Point3 = std::array<double, 3>;

/// Shoebox room with a reverberation target. Anechoic rooms keep walls
/// fully absorbent regardless of target_t60.
struct RoomSpec {
  Point3 dimensions{0.0, 0.0, 0.0};  // meters
  double target_t60 = 0.0;           // seconds
  double speed_of_sound = 343.0;     // m/s
  bool anechoic = false;
};

struct ArrayGeometry {
  std::vector<Point3> mic_positions;
  int reference_index = 0;
};

/// Evenly spaced microphones on a horizontal circle. When include_center is
/// set an extra microphone is appended at the center and becomes the
/// reference; otherwise the first microphone on the circle is the reference.
ArrayGeometry circular_array(double radius, int count, bool include_center,
                             const Point3& center);

/// Uniform Sabine absorption for the requested reverberation time:
/// alpha = 0.161 * V / (S_total * T60). Throws when the room cannot reach
/// the target (alpha would exceed 1).
double absorption_from_t60(const RoomSpec& room);

/// Impulse responses for sources x microphones at a common sample rate.
/// direct holds only the order-0 (no reflection) image of each pair.
struct RirSet {
  std::vector<std::vector<std::vector<double>>> full;    // [source][mic][tap]
  std::vector<std::vector<std::vector<double>>> direct;  // [source][mic][tap]
  int sample_rate = 0;

  int num_sources() const { return static_cast<int>(full.size()); }
  int num_mics() const { return full.empty() ? 0 : static_cast<int>(full[0].size()); }
};

/// Image-source simulation for one source. Each image contributes
/// beta^reflections / (4 pi d) at delay d/c through an 81-tap Hann-windowed
/// sinc. max_order < 0 means unlimited (bounded by the response length);
/// length_samples <= 0 picks 1.5 * target_t60 of propagation time.
RirSet simulate_rir(const RoomSpec& room, const Point3& source,
                    const ArrayGeometry& array, int max_order,
                    int64_t length_samples, int sample_rate);

/// Convenience wrapper stacking simulate_rir over several sources.
RirSet simulate_rirs(const RoomSpec& room, const std::vector<Point3>& sources,
                     const ArrayGeometry& array, int max_order,
                     int64_t length_samples, int sample_rate);

/// Unit-impulse responses (dry mixing): C sources x P mics, full == direct.
RirSet identity_rirs(int num_sources, int num_mics, int sample_rate);

/// Schroeder backward integration with a least-squares fit on the -5 dB to
/// -25 dB span of the decay curve; returns 3 x the fitted T20. Throws when
/// the curve never decays past -25 dB or the fit span is degenerate.
double measure_t60(const std::vector<double>& rir, int sample_rate);

/// WAV round trip for externally generated responses: one float32 file per
/// source and kind, <dir>/src<i>_{full,direct}.wav with mics as channels.
void save_rir_set(const std::string& dir, const RirSet& rirs);
RirSet load_rir_set(const std::string& dir, int num_sources);

}  // namespace sepbench

#endif  // SEPBENCH_ROOM_HPP_
