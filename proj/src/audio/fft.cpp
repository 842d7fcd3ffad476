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

#include "fft.hpp"

#include <cmath>

#include "augforge/error.hpp"
#include "augforge/kernels.hpp"

namespace augforge {

namespace {
constexpr size_t kFftConvThreshold = 128;  // taps below this go direct
}

size_t next_pow2(size_t n) {
  size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

void fft_inplace(std::vector<double>& re, std::vector<double>& im,
                 bool inverse) {
  const size_t n = re.size();
  if (n != im.size() || (n & (n - 1)) != 0)
    throw InvalidArgument("fft: size must be a power of two");
  if (n <= 1) return;

  // bit-reversal permutation
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) {
      std::swap(re[i], re[j]);
      std::swap(im[i], im[j]);
    }
  }

  for (size_t len = 2; len <= n; len <<= 1) {
    double ang = 2.0 * M_PI / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    double wr = std::cos(ang), wi = std::sin(ang);
    for (size_t i = 0; i < n; i += len) {
      double cr = 1.0, ci = 0.0;
      for (size_t j = 0; j < len / 2; ++j) {
        size_t a = i + j, b = i + j + len / 2;
        double tr = re[b] * cr - im[b] * ci;
        double ti = re[b] * ci + im[b] * cr;
        re[b] = re[a] - tr;
        im[b] = im[a] - ti;
        re[a] += tr;
        im[a] += ti;
        double ncr = cr * wr - ci * wi;
        ci = cr * wi + ci * wr;
        cr = ncr;
      }
    }
  }

  if (inverse) {
    double s = 1.0 / static_cast<double>(n);
    for (size_t i = 0; i < n; ++i) {
      re[i] *= s;
      im[i] *= s;
    }
  }
}

std::vector<double> convolve_full(const float* x, size_t n, const float* h,
                                  size_t k) {
  if (n == 0 || k == 0) throw InvalidArgument("convolve: empty input");
  const size_t out_len = n + k - 1;

  if (k < kFftConvThreshold) {
    std::vector<double> out(out_len, 0.0);
    for (size_t j = 0; j < k; ++j) {
      double hj = static_cast<double>(h[j]);
      if (hj == 0.0) continue;
      for (size_t i = 0; i < n; ++i) out[i + j] += hj * x[i];
    }
    return out;
  }

  const size_t s = next_pow2(out_len);
  std::vector<double> xr(s, 0.0), xi(s, 0.0), hr(s, 0.0), hi(s, 0.0);
  for (size_t i = 0; i < n; ++i) xr[i] = x[i];
  for (size_t j = 0; j < k; ++j) hr[j] = h[j];

  fft_inplace(xr, xi, false);
  fft_inplace(hr, hi, false);
  kernels::complex_mul(xr.data(), xi.data(), hr.data(), hi.data(), xr.data(),
                       xi.data(), s);
  fft_inplace(xr, xi, true);

  xr.resize(out_len);
  return xr;
}

}  // namespace augforge
