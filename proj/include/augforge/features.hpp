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
#include <filesystem>
#include <vector>

#include "augforge/audio.hpp"
#include "augforge/rng.hpp"

namespace augforge {

struct FeatureConfig {
  int n_mels = 64;
  double window_ms = 20.0;
  double hop_ms = 10.0;
  int fft_size = 512;
  double log_floor = 1e-5;
  double mel_fmin_hz = 0.0;
  double mel_fmax_hz = 0.0;  // 0 selects Nyquist
};

// Log-power features, row-major frames x mels, natural log.
struct Spectrogram {
  size_t n_frames = 0;
  size_t n_mels = 0;
  std::vector<float> values;

  float& at(size_t frame, size_t mel) { return values[frame * n_mels + mel]; }
  float at(size_t frame, size_t mel) const {
    return values[frame * n_mels + mel];
  }
};

struct CutoutConfig {
  int n_rects = 5;
  int max_freq_bins = 15;
  int max_time_frames = 25;
  double log_floor = 1e-5;  // fill value is ln(log_floor)
};

double hz_to_mel(double hz);
double mel_to_hz(double mel);

// Triangular filters with peaks normalized to 1, n_mels rows of
// fft_size/2 + 1 weights. Throws ConfigError if any filter lands between
// FFT bins (all-zero row).
std::vector<std::vector<double>> mel_filterbank(const FeatureConfig& config,
                                                int sample_rate_hz);

// Hann window, zero-padded FFT, mel projection, ln(x + log_floor). No frame
// padding: frames = floor((N - window) / hop) + 1. Requires 16 kHz input of
// at least one window (TooShortError otherwise).
Spectrogram log_mel(const AudioBuffer& buf, const FeatureConfig& config = {});

// Masks n_rects random rectangles (sizes 1..max per axis, positions uniform,
// clipped to bounds) with ln(log_floor).
Spectrogram spec_cutout(const Spectrogram& spec, const CutoutConfig& config,
                        Rng& rng);

// Bit-exact container: "NRFT0001", u32 LE frames, u32 LE mels, row-major
// float32 LE values.
void write_features(const std::filesystem::path& path, const Spectrogram& spec);
Spectrogram read_features(const std::filesystem::path& path);

}  // namespace augforge
