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

#include "sepbench/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace sepbench {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_pow2(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Iterative radix-2 Cooley-Tukey; n must be a power of two.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
  const size_t n = a.size();
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * kPi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= scale;
  }
}

// Bluestein's chirp z-transform for arbitrary lengths, built on fft_pow2.
void fft_bluestein(std::vector<std::complex<double>>& a, bool inverse) {
  const size_t n = a.size();
  const size_t m = next_pow2(2 * n - 1);

  // Chirp: w[k] = exp(+-i * pi * k^2 / n). k^2 mod 2n keeps the angle exact
  // for large k.
  std::vector<std::complex<double>> chirp(n);
  for (size_t k = 0; k < n; ++k) {
    const uint64_t k2 = (static_cast<uint64_t>(k) * k) % (2 * n);
    const double ang =
        (inverse ? 1.0 : -1.0) * kPi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = {std::cos(ang), std::sin(ang)};
  }

  std::vector<std::complex<double>> x(m, {0.0, 0.0});
  std::vector<std::complex<double>> y(m, {0.0, 0.0});
  for (size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
  y[0] = std::conj(chirp[0]);
  for (size_t k = 1; k < n; ++k) {
    y[k] = std::conj(chirp[k]);
    y[m - k] = std::conj(chirp[k]);
  }

  fft_pow2(x, false);
  fft_pow2(y, false);
  for (size_t k = 0; k < m; ++k) x[k] *= y[k];
  fft_pow2(x, true);

  for (size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
  if (inverse) {
    const double scale = 1.0 / static_cast<double>(n);
    for (auto& z : a) z *= scale;
  }
}

}  // namespace

void fft(std::vector<std::complex<double>>& data, bool inverse) {
  const size_t n = data.size();
  if (n == 0) throw std::invalid_argument("fft: empty input");
  if (n == 1) return;
  if (is_pow2(n)) {
    fft_pow2(data, inverse);
  } else {
    fft_bluestein(data, inverse);
  }
}

std::vector<std::complex<double>> rfft(std::span<const double> x) {
  const size_t n = x.size();
  if (n == 0) throw std::invalid_argument("rfft: empty input");
  std::vector<std::complex<double>> buf(n);
  for (size_t i = 0; i < n; ++i) buf[i] = {x[i], 0.0};
  fft(buf, false);
  buf.resize(n / 2 + 1);
  return buf;
}

std::vector<double> irfft(std::span<const std::complex<double>> spectrum,
                          size_t n) {
  if (n == 0) throw std::invalid_argument("irfft: zero length");
  if (spectrum.size() != n / 2 + 1) {
    throw std::invalid_argument("irfft: spectrum size does not match length");
  }
  std::vector<std::complex<double>> buf(n);
  for (size_t i = 0; i < spectrum.size(); ++i) buf[i] = spectrum[i];
  for (size_t i = spectrum.size(); i < n; ++i) buf[i] = std::conj(buf[n - i]);
  fft(buf, true);
  std::vector<double> out(n);
  for (size_t i = 0; i < n; ++i) out[i] = buf[i].real();
  return out;
}

std::vector<double> fft_convolve(std::span<const double> a,
                                 std::span<const double> b) {
  if (a.empty() || b.empty()) {
    throw std::invalid_argument("fft_convolve: empty input");
  }
  const size_t out_len = a.size() + b.size() - 1;
  const size_t m = next_pow2(out_len);
  std::vector<std::complex<double>> fa(m, {0.0, 0.0});
  std::vector<std::complex<double>> fb(m, {0.0, 0.0});
  for (size_t i = 0; i < a.size(); ++i) fa[i] = {a[i], 0.0};
  for (size_t i = 0; i < b.size(); ++i) fb[i] = {b[i], 0.0};
  fft(fa, false);
  fft(fb, false);
  for (size_t i = 0; i < m; ++i) fa[i] *= fb[i];
  fft(fa, true);
  std::vector<double> out(out_len);
  for (size_t i = 0; i < out_len; ++i) out[i] = fa[i].real();
  return out;
}

}  // namespace sepbench
