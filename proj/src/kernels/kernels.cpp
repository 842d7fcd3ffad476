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

#include "augforge/kernels.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <cstring>

#include "augforge/error.hpp"
#include "kernels_impl.hpp"

namespace augforge::kernels {

namespace scalar {

double sum_sq(const float* x, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double v = static_cast<double>(x[i]);
    acc += v * v;
  }
  return acc;
}

double dot(const float* x, const float* y, size_t n) {
  double acc = 0.0;
  for (size_t i = 0; i < n; ++i) {
    acc += static_cast<double>(x[i]) * static_cast<double>(y[i]);
  }
  return acc;
}

void axpy(float a, const float* x, float* y, size_t n) {
  for (size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void scale(float a, float* x, size_t n) {
  for (size_t i = 0; i < n; ++i) x[i] *= a;
}

void mul(const float* a, const float* b, float* out, size_t n) {
  for (size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

float peak_abs(const float* x, size_t n) {
  float peak = 0.0f;
  for (size_t i = 0; i < n; ++i) {
    float v = std::fabs(x[i]);
    if (v > peak) peak = v;
  }
  return peak;
}

void complex_mul(const double* ar, const double* ai, const double* br,
                 const double* bi, double* out_re, double* out_im, size_t n) {
  for (size_t i = 0; i < n; ++i) {
    double re = ar[i] * br[i] - ai[i] * bi[i];
    double im = ar[i] * bi[i] + ai[i] * br[i];
    out_re[i] = re;
    out_im[i] = im;
  }
}

}  // namespace scalar

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Backend detect_backend() {
  if (const char* env = std::getenv("AUGFORGE_SIMD")) {
    if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
    if (std::strcmp(env, "avx2") == 0) {
      if (!cpu_has_avx2())
        throw ConfigError("AUGFORGE_SIMD=avx2 but CPU lacks AVX2/FMA");
      return Backend::avx2;
    }
    // anything else (including "auto") falls through to detection
  }
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& backend_slot() {
  static std::atomic<Backend> slot{detect_backend()};
  return slot;
}

}  // namespace

Backend active_backend() { return backend_slot().load(std::memory_order_relaxed); }

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
  }
  return "?";
}

bool backend_supported(Backend b) {
  return b == Backend::scalar || (b == Backend::avx2 && cpu_has_avx2());
}

void force_backend(Backend b) {
  if (!backend_supported(b))
    throw ConfigError(strformat("backend %s not supported on this CPU",
                                backend_name(b)));
  backend_slot().store(b, std::memory_order_relaxed);
}

#if !AUGFORGE_HAVE_AVX2
namespace avx2 {
// Stubs on non-x86 builds; never reached because backend_supported(avx2)
// is false there.
double sum_sq(const float* x, size_t n) { return scalar::sum_sq(x, n); }
double dot(const float* x, const float* y, size_t n) {
  return scalar::dot(x, y, n);
}
void axpy(float a, const float* x, float* y, size_t n) {
  scalar::axpy(a, x, y, n);
}
void scale(float a, float* x, size_t n) { scalar::scale(a, x, n); }
void mul(const float* a, const float* b, float* out, size_t n) {
  scalar::mul(a, b, out, n);
}
float peak_abs(const float* x, size_t n) { return scalar::peak_abs(x, n); }
void complex_mul(const double* ar, const double* ai, const double* br,
                 const double* bi, double* out_re, double* out_im, size_t n) {
  scalar::complex_mul(ar, ai, br, bi, out_re, out_im, n);
}
}  // namespace avx2
#endif

double sum_sq(const float* x, size_t n) {
  return active_backend() == Backend::avx2 ? avx2::sum_sq(x, n)
                                           : scalar::sum_sq(x, n);
}

double dot(const float* x, const float* y, size_t n) {
  return active_backend() == Backend::avx2 ? avx2::dot(x, y, n)
                                           : scalar::dot(x, y, n);
}

void axpy(float a, const float* x, float* y, size_t n) {
  if (active_backend() == Backend::avx2)
    avx2::axpy(a, x, y, n);
  else
    scalar::axpy(a, x, y, n);
}

void scale(float a, float* x, size_t n) {
  if (active_backend() == Backend::avx2)
    avx2::scale(a, x, n);
  else
    scalar::scale(a, x, n);
}

void mul(const float* a, const float* b, float* out, size_t n) {
  if (active_backend() == Backend::avx2)
    avx2::mul(a, b, out, n);
  else
    scalar::mul(a, b, out, n);
}

float peak_abs(const float* x, size_t n) {
  return active_backend() == Backend::avx2 ? avx2::peak_abs(x, n)
                                           : scalar::peak_abs(x, n);
}

void complex_mul(const double* ar, const double* ai, const double* br,
                 const double* bi, double* out_re, double* out_im, size_t n) {
  if (active_backend() == Backend::avx2)
    avx2::complex_mul(ar, ai, br, bi, out_re, out_im, n);
  else
    scalar::complex_mul(ar, ai, br, bi, out_re, out_im, n);
}

}  // namespace augforge::kernels
