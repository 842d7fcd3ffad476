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

// Internal: per-backend entry points behind the dispatch in kernels.cpp.

#if defined(__x86_64__) || defined(__i386__)
#define AUGFORGE_HAVE_AVX2 1
#else
#define AUGFORGE_HAVE_AVX2 0
#endif

namespace augforge::kernels {

namespace scalar {
double sum_sq(const float* x, size_t n);
double dot(const float* x, const float* y, size_t n);
void axpy(float a, const float* x, float* y, size_t n);
void scale(float a, float* x, size_t n);
void mul(const float* a, const float* b, float* out, size_t n);
float peak_abs(const float* x, size_t n);
void complex_mul(const double* ar, const double* ai, const double* br,
                 const double* bi, double* out_re, double* out_im, size_t n);
}  // namespace scalar

namespace avx2 {
double sum_sq(const float* x, size_t n);
double dot(const float* x, const float* y, size_t n);
void axpy(float a, const float* x, float* y, size_t n);
void scale(float a, float* x, size_t n);
void mul(const float* a, const float* b, float* out, size_t n);
float peak_abs(const float* x, size_t n);
void complex_mul(const double* ar, const double* ai, const double* br,
                 const double* bi, double* out_re, double* out_im, size_t n);
}  // namespace avx2

}  // namespace augforge::kernels
