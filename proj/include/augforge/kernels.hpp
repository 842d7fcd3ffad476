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

// Data-parallel inner loops shared by the DSP operations. Each kernel has a
// scalar reference implementation and an AVX2 variant; the variant is picked
// at runtime from CPU features (override with AUGFORGE_SIMD=scalar|avx2 or
// force_backend()). Elementwise kernels are bit-exact across backends;
// reductions may differ in summation order and are equivalence-tested to a
// tight tolerance. All reductions accumulate in double.

namespace augforge::kernels {

enum class Backend { scalar, avx2 };

/// Backend selected at startup (CPU features + AUGFORGE_SIMD env var).
Backend active_backend();

const char* backend_name(Backend b);

bool backend_supported(Backend b);

/// Force a backend for the rest of the process. Throws ConfigError if the
/// CPU does not support it. Intended for tests and benchmarking.
void force_backend(Backend b);

/// sum of x[i]^2
double sum_sq(const float* x, size_t n);

/// sum of x[i]*y[i]
double dot(const float* x, const float* y, size_t n);

/// y[i] += a * x[i]
void axpy(float a, const float* x, float* y, size_t n);

/// x[i] *= a
void scale(float a, float* x, size_t n);

/// out[i] = a[i] * b[i]
void mul(const float* a, const float* b, float* out, size_t n);

/// max over |x[i]|; 0 for n == 0
float peak_abs(const float* x, size_t n);

/// Pointwise complex multiply on split re/im arrays:
///   out = a * b, out_re[i] = ar[i]*br[i] - ai[i]*bi[i], etc.
/// In-place use (out aliasing a or b) is allowed.
void complex_mul(const double* ar, const double* ai, const double* br,
                 const double* bi, double* out_re, double* out_im, size_t n);

}  // namespace augforge::kernels
