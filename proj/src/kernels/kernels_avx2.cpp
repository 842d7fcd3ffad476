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

// AVX2 kernel variants. This TU is compiled with -mavx2 -mfma
// -ffp-contract=off. Elementwise kernels use separate mul/add so each lane
// rounds exactly like the scalar reference; reductions use FMA and widen
// to double before accumulating.

#include "kernels_impl.hpp"

#if AUGFORGE_HAVE_AVX2

#include <immintrin.h>

#include <cmath>

namespace augforge::kernels::avx2 {

namespace {

// Horizontal sum of 4 doubles.
inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

}  // namespace

double sum_sq(const float* x, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_loadu_ps(x + i);
    __m256d lo = _mm256_cvtps_pd(_mm256_castps256_ps128(v));
    __m256d hi = _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1));
    acc0 = _mm256_fmadd_pd(lo, lo, acc0);
    acc1 = _mm256_fmadd_pd(hi, hi, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    double v = static_cast<double>(x[i]);
    acc += v * v;
  }
  return acc;
}

double dot(const float* x, const float* y, size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 vx = _mm256_loadu_ps(x + i);
    __m256 vy = _mm256_loadu_ps(y + i);
    __m256d xlo = _mm256_cvtps_pd(_mm256_castps256_ps128(vx));
    __m256d xhi = _mm256_cvtps_pd(_mm256_extractf128_ps(vx, 1));
    __m256d ylo = _mm256_cvtps_pd(_mm256_castps256_ps128(vy));
    __m256d yhi = _mm256_cvtps_pd(_mm256_extractf128_ps(vy, 1));
    acc0 = _mm256_fmadd_pd(xlo, ylo, acc0);
    acc1 = _mm256_fmadd_pd(xhi, yhi, acc1);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) {
    acc += static_cast<double>(x[i]) * static_cast<double>(y[i]);
  }
  return acc;
}

void axpy(float a, const float* x, float* y, size_t n) {
  __m256 av = _mm256_set1_ps(a);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 vx = _mm256_loadu_ps(x + i);
    __m256 vy = _mm256_loadu_ps(y + i);
    // mul + add (not fmadd) to match scalar rounding exactly
    vy = _mm256_add_ps(vy, _mm256_mul_ps(av, vx));
    _mm256_storeu_ps(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void scale(float a, float* x, size_t n) {
  __m256 av = _mm256_set1_ps(a);
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(x + i, _mm256_mul_ps(av, _mm256_loadu_ps(x + i)));
  }
  for (; i < n; ++i) x[i] *= a;
}

void mul(const float* a, const float* b, float* out, size_t n) {
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    _mm256_storeu_ps(out + i,
                     _mm256_mul_ps(_mm256_loadu_ps(a + i), _mm256_loadu_ps(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

float peak_abs(const float* x, size_t n) {
  const __m256 sign_mask = _mm256_set1_ps(-0.0f);
  __m256 peak = _mm256_setzero_ps();
  size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    __m256 v = _mm256_andnot_ps(sign_mask, _mm256_loadu_ps(x + i));
    peak = _mm256_max_ps(peak, v);
  }
  __m128 lo = _mm256_castps256_ps128(peak);
  __m128 hi = _mm256_extractf128_ps(peak, 1);
  lo = _mm_max_ps(lo, hi);
  lo = _mm_max_ps(lo, _mm_movehl_ps(lo, lo));
  lo = _mm_max_ss(lo, _mm_shuffle_ps(lo, lo, 1));
  float p = _mm_cvtss_f32(lo);
  for (; i < n; ++i) {
    float v = std::fabs(x[i]);
    if (v > p) p = v;
  }
  return p;
}

void complex_mul(const double* ar, const double* ai, const double* br,
                 const double* bi, double* out_re, double* out_im, size_t n) {
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d var = _mm256_loadu_pd(ar + i);
    __m256d vai = _mm256_loadu_pd(ai + i);
    __m256d vbr = _mm256_loadu_pd(br + i);
    __m256d vbi = _mm256_loadu_pd(bi + i);
    __m256d re = _mm256_sub_pd(_mm256_mul_pd(var, vbr), _mm256_mul_pd(vai, vbi));
    __m256d im = _mm256_add_pd(_mm256_mul_pd(var, vbi), _mm256_mul_pd(vai, vbr));
    _mm256_storeu_pd(out_re + i, re);
    _mm256_storeu_pd(out_im + i, im);
  }
  for (; i < n; ++i) {
    double re = ar[i] * br[i] - ai[i] * bi[i];
    double im = ar[i] * bi[i] + ai[i] * br[i];
    out_re[i] = re;
    out_im[i] = im;
  }
}

}  // namespace augforge::kernels::avx2

#endif  // AUGFORGE_HAVE_AVX2
