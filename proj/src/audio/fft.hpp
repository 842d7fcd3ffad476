// Copyright 2026 The Augforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <vector>

// Internal radix-2 FFT on split re/im double arrays. Plan-free and
// reentrant, so it is safe under utterance-level parallelism.

namespace augforge {

/// In-place complex FFT, n = re.size() = im.size() must be a power of two.
void fft_inplace(std::vector<double>& re, std::vector<double>& im,
                 bool inverse);

size_t next_pow2(size_t n);

/// Full linear convolution of x (length N) with h (length K), returning
/// N + K - 1 samples in double precision. Picks direct evaluation for
/// small kernels and FFT overlap for K >= 128.
std::vector<double> convolve_full(const float* x, size_t n, const float* h,
                                  size_t k);

}  // namespace augforge
