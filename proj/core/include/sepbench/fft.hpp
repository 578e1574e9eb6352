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

#ifndef SEPBENCH_FFT_HPP_
#define SEPBENCH_FFT_HPP_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sepbench {

// In-place DFT of arbitrary length (radix-2 when the length is a power of
// two, Bluestein otherwise). Forward transform is unnormalized; the inverse
// divides by the length.
void fft(std::vector<std::complex<double>>& data, bool inverse);

// Real-input forward DFT, returning bins 0..n/2 (n = x.size()).
std::vector<std::complex<double>> rfft(std::span<const double> x);

// Inverse of rfft for an even/odd original length n; spectrum must hold
// n/2 + 1 bins.
std::vector<double> irfft(std::span<const std::complex<double>> spectrum,
                          size_t n);

// Full linear convolution, output length a.size() + b.size() - 1.
std::vector<double> fft_convolve(std::span<const double> a,
                                 std::span<const double> b);

}  // namespace sepbench

#endif  // SEPBENCH_FFT_HPP_
