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

#include <algorithm>
#include <cmath>

#include "augforge/audio.hpp"
#include "augforge/error.hpp"
#include "augforge/kernels.hpp"
#include "fft.hpp"

namespace augforge {

namespace {

// Whole-mixture rescale threshold; avoids hard clipping.
constexpr float kPeakLimit = 0.99f;

double rms_of(const float* x, size_t n) {
  return std::sqrt(kernels::sum_sq(x, n) / static_cast<double>(n));
}

void normalize_peak(AudioBuffer& buf) {
  float peak = kernels::peak_abs(buf.samples.data(), buf.samples.size());
  if (peak > kPeakLimit) {
    kernels::scale(kPeakLimit / peak, buf.samples.data(), buf.samples.size());
  }
}

}  // namespace

double rms(const AudioBuffer& buf) {
  if (buf.samples.empty()) throw InvalidArgument("rms: empty buffer");
  return rms_of(buf.samples.data(), buf.samples.size());
}

double snr_gain(double signal_rms, double noise_rms, double snr_db) {
  if (signal_rms < 0 || noise_rms < 0)
    throw InvalidArgument("snr_gain: negative RMS");
  if (signal_rms == 0) throw SilentSignalError("snr_gain: silent signal");
  if (noise_rms == 0) throw SilentNoiseError("snr_gain: silent noise");
  return (signal_rms / noise_rms) * std::pow(10.0, -snr_db / 20.0);
}

AudioBuffer mix_noise(const AudioBuffer& speech, const AudioBuffer& noise,
                      double snr_db, NoiseMode mode, Rng& rng) {
  if (speech.sample_rate_hz != noise.sample_rate_hz)
    throw InvalidArgument(
        strformat("mix_noise: sample rate mismatch (%d vs %d)",
                  speech.sample_rate_hz, noise.sample_rate_hz));
  if (noise.samples.empty()) throw InvalidArgument("mix_noise: empty noise");
  if (speech.samples.empty()) throw InvalidArgument("mix_noise: empty speech");

  const size_t n = speech.samples.size();
  AudioBuffer out = speech;

  if (mode == NoiseMode::background) {
    // Tile the noise circularly from a random start to cover the utterance.
    size_t start = rng.uniform_index(noise.samples.size());
    std::vector<float> track(n);
    size_t src = start;
    for (size_t i = 0; i < n; ++i) {
      track[i] = noise.samples[src];
      if (++src == noise.samples.size()) src = 0;
    }
    double speech_rms = rms_of(speech.samples.data(), n);
    if (speech_rms == 0) throw SilentSignalError("mix_noise: silent speech");
    double track_rms = rms_of(track.data(), n);
    if (track_rms == 0) throw SilentNoiseError("mix_noise: silent noise");
    double g = snr_gain(speech_rms, track_rms, snr_db);
    kernels::axpy(static_cast<float>(g), track.data(), out.samples.data(), n);
  } else {
    // One segment at a random offset; SNR measured over the overlap only.
    size_t seg_len = std::min(noise.samples.size(), n);
    size_t offset = rng.uniform_index(n - seg_len + 1);
    double speech_rms = rms_of(speech.samples.data() + offset, seg_len);
    if (speech_rms == 0)
      throw SilentSignalError("mix_noise: silent speech in overlap region");
    double seg_rms = rms_of(noise.samples.data(), seg_len);
    if (seg_rms == 0) throw SilentNoiseError("mix_noise: silent noise");
    double g = snr_gain(speech_rms, seg_rms, snr_db);
    kernels::axpy(static_cast<float>(g), noise.samples.data(),
                  out.samples.data() + offset, seg_len);
  }

  normalize_peak(out);
  return out;
}

AudioBuffer convolve_rir(const AudioBuffer& speech, const RirBuffer& rir) {
  if (speech.sample_rate_hz != rir.sample_rate_hz)
    throw InvalidArgument(
        strformat("convolve_rir: sample rate mismatch (%d vs %d)",
                  speech.sample_rate_hz, rir.sample_rate_hz));
  if (rir.taps.empty()) throw InvalidArgument("convolve_rir: empty RIR");
  if (speech.samples.empty())
    throw InvalidArgument("convolve_rir: empty speech");

  // Direct path = strongest tap; align it to lag 0 so the output is not
  // delayed relative to the input.
  size_t peak_idx = 0;
  float peak = 0.0f;
  for (size_t i = 0; i < rir.taps.size(); ++i) {
    float v = std::fabs(rir.taps[i]);
    if (v > peak) {
      peak = v;
      peak_idx = i;
    }
  }
  if (peak == 0.0f) throw InvalidArgument("convolve_rir: all-zero RIR");

  const size_t n = speech.samples.size();
  std::vector<double> full = convolve_full(speech.samples.data(), n,
                                           rir.taps.data(), rir.taps.size());

  double in_sq = 0.0, out_sq = 0.0;
  for (size_t i = 0; i < n; ++i) {
    double s = speech.samples[i];
    in_sq += s * s;
    double o = full[i + peak_idx];
    out_sq += o * o;
  }
  double gain = out_sq > 0.0 ? std::sqrt(in_sq / out_sq) : 1.0;

  AudioBuffer out;
  out.sample_rate_hz = speech.sample_rate_hz;
  out.samples.resize(n);
  for (size_t i = 0; i < n; ++i)
    out.samples[i] = static_cast<float>(full[i + peak_idx] * gain);
  return out;
}

AudioBuffer narrowband_simulate(const AudioBuffer& buf) {
  if (buf.sample_rate_hz != kCanonicalRateHz)
    throw InvalidArgument("narrowband_simulate: input must be 16 kHz");
  return resample(resample(buf, 8000), kCanonicalRateHz);
}

}  // namespace augforge
