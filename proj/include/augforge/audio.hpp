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

#include <cstdint>
#include <vector>

#include "augforge/rng.hpp"

namespace augforge {

/// Canonical training sample rate; everything is converted to this on load.
constexpr int kCanonicalRateHz = 16000;

/// Mono audio, samples nominally in [-1, 1]. Immutable by convention once
/// produced: operations return new buffers.
struct AudioBuffer {
  std::vector<float> samples;
  int sample_rate_hz = 0;

  double duration_secs() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
  size_t size() const { return samples.size(); }
};

/// Room impulse response taps at a given rate.
struct RirBuffer {
  std::vector<float> taps;
  int sample_rate_hz = 0;
};

enum class NoiseMode { foreground, background };

/// sqrt(mean(samples^2)), accumulated in double. Throws InvalidArgument on
/// an empty buffer.
double rms(const AudioBuffer& buf);

/// Gain g such that 20*log10(signal_rms / (g * noise_rms)) == snr_db.
/// Throws SilentSignalError / SilentNoiseError on zero inputs.
double snr_gain(double signal_rms, double noise_rms, double snr_db);

/// Add noise to speech at the requested SNR.
///
/// background: the noise is tiled circularly from a random start offset to
/// cover the whole utterance; the gain is computed from full-utterance RMS
/// of the speech vs the tiled track, so the measured component SNR equals
/// the request exactly (up to float rounding).
///
/// foreground: one segment of length min(|noise|, |speech|) is placed at a
/// random offset; the gain is computed over the overlap region only.
/// Samples outside the overlap are untouched.
///
/// Consumes exactly one rng draw (the placement). If the mixture peak
/// exceeds 0.99 the whole mixture is rescaled.
AudioBuffer mix_noise(const AudioBuffer& speech, const AudioBuffer& noise,
                      double snr_db, NoiseMode mode, Rng& rng);

/// Full linear convolution with the RIR, then direct-path alignment (the
/// peak |tap| maps to lag 0), truncation to the input length, and RMS
/// rescaling back to the input level. Uses FFT convolution for >= 128 taps.
AudioBuffer convolve_rir(const AudioBuffer& speech, const RirBuffer& rir);

/// Band-limited rational resampling (polyphase windowed sinc, Kaiser
/// window, >= 60 dB stopband). target == source returns the input
/// unchanged. Output length is ceil(n * target / source).
AudioBuffer resample(const AudioBuffer& buf, int target_rate_hz);

/// 16 kHz -> 8 kHz -> 16 kHz round trip; simulates telephony capture.
AudioBuffer narrowband_simulate(const AudioBuffer& buf);

}  // namespace augforge
