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

#include <bit>
#include <cstdint>
#include <string_view>

namespace augforge {

namespace detail {
// splitmix64 finalizer; stable across platforms and compilers.
inline uint64_t mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

/// Small deterministic generator (splitmix64 stream). Every randomized
/// operation takes one of these explicitly; there is no global RNG.
/// The draw sequence for a given seed is part of the reproducibility
/// contract, so draws must not be reordered.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return detail::mix64(state_);
  }

  /// Uniform double in [0, 1).
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform double in [lo, hi). Returns lo when lo == hi.
  double uniform(double lo, double hi) {
    return lo + (hi - lo) * uniform01();
  }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Uniform index in [0, n). n must be > 0.
  size_t uniform_index(size_t n) {
    size_t i = static_cast<size_t>(uniform01() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

 private:
  uint64_t state_;
};

/// Incremental 64-bit hash used to key per-utterance RNG streams.
/// FNV-1a over the field bytes with a splitmix64 finalizer; field
/// boundaries are injected so ("ab","c") != ("a","bc").
class Hash64 {
 public:
  explicit Hash64(uint64_t seed) : h_(detail::mix64(seed ^ kInit)) {}

  Hash64& add(std::string_view s) {
    for (unsigned char c : s) step(c);
    step(0xff);  // field separator
    return *this;
  }

  Hash64& add(uint64_t v) {
    for (int i = 0; i < 8; ++i) step(static_cast<unsigned char>(v >> (8 * i)));
    step(0xfe);
    return *this;
  }

  Hash64& add(double v) { return add(std::bit_cast<uint64_t>(v)); }

  uint64_t digest() const { return detail::mix64(h_); }

 private:
  static constexpr uint64_t kInit = 0xcbf29ce484222325ULL;  // FNV offset basis
  static constexpr uint64_t kPrime = 0x100000001b3ULL;      // FNV prime

  void step(unsigned char c) { h_ = (h_ ^ c) * kPrime; }

  uint64_t h_;
};

}  // namespace augforge
