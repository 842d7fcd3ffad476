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

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "augforge/audio.hpp"
#include "augforge/error.hpp"
#include "augforge/manifest.hpp"
#include "augforge/rng.hpp"
#include "augforge/wav.hpp"

// Deterministic synthetic corpus: tone-complex "speech", four spectrally
// distinct noise types, and sparse decaying impulse responses. Used by the
// mkcorpus demo tool and the integration tests; not part of the library.
namespace augforge::demo {

inline AudioBuffer make_speech(double secs, Rng& rng,
                               int rate = kCanonicalRateHz) {
  AudioBuffer buf;
  buf.sample_rate_hz = rate;
  buf.samples.resize(static_cast<size_t>(secs * rate));
  double f0 = rng.uniform(140.0, 320.0);
  double am_hz = rng.uniform(2.0, 5.0);
  double phase = rng.uniform(0.0, 2.0 * M_PI);
  for (size_t i = 0; i < buf.samples.size(); ++i) {
    double t = static_cast<double>(i) / rate;
    double env = 0.6 + 0.4 * std::sin(2.0 * M_PI * am_hz * t + phase);
    double s = 0.5 * std::sin(2.0 * M_PI * f0 * t) +
               0.3 * std::sin(2.0 * M_PI * 2.0 * f0 * t) +
               0.2 * std::sin(2.0 * M_PI * 3.0 * f0 * t);
    buf.samples[i] = static_cast<float>(0.25 * env * s);
  }
  return buf;
}

inline AudioBuffer make_noise(const std::string& type, double secs, Rng& rng,
                              int rate = kCanonicalRateHz) {
  AudioBuffer buf;
  buf.sample_rate_hz = rate;
  buf.samples.resize(static_cast<size_t>(secs * rate));
  if (type == "background") {
    // Low-passed white noise.
    double y = 0.0;
    for (auto& s : buf.samples) {
      y += 0.08 * (rng.uniform(-1.0, 1.0) - y);
      s = static_cast<float>(2.0 * y);
    }
  } else if (type == "babble") {
    // Several amplitude-modulated voices plus a noise bed.
    double f[5], m[5], p[5];
    for (int v = 0; v < 5; ++v) {
      f[v] = rng.uniform(120.0, 400.0);
      m[v] = rng.uniform(1.5, 6.0);
      p[v] = rng.uniform(0.0, 2.0 * M_PI);
    }
    for (size_t i = 0; i < buf.samples.size(); ++i) {
      double t = static_cast<double>(i) / rate;
      double acc = 0.05 * rng.uniform(-1.0, 1.0);
      for (int v = 0; v < 5; ++v)
        acc += 0.08 * (0.5 + 0.5 * std::sin(2.0 * M_PI * m[v] * t + p[v])) *
               std::sin(2.0 * M_PI * f[v] * t);
      buf.samples[i] = static_cast<float>(acc);
    }
  } else if (type == "music") {
    // Arpeggiated two-partial notes, four per second.
    static const double scale[] = {220.0, 261.63, 329.63, 392.0, 440.0};
    for (size_t i = 0; i < buf.samples.size(); ++i) {
      double t = static_cast<double>(i) / rate;
      size_t step = static_cast<size_t>(t * 4.0);
      double f = scale[(step * 2654435769u) % 5];
      double local = t - static_cast<double>(step) / 4.0;
      double env = std::exp(-6.0 * local);
      buf.samples[i] = static_cast<float>(
          0.2 * env *
          (std::sin(2.0 * M_PI * f * t) +
           0.3 * std::sin(2.0 * M_PI * 2.0 * f * t)));
    }
  } else {
    // "television": alternating one-second tone and noise segments.
    double tone_hz = rng.uniform(500.0, 1500.0);
    for (size_t i = 0; i < buf.samples.size(); ++i) {
      double t = static_cast<double>(i) / rate;
      bool tone = (static_cast<int64_t>(t) % 2) == 0;
      buf.samples[i] = static_cast<float>(
          tone ? 0.15 * std::sin(2.0 * M_PI * tone_hz * t)
               : 0.12 * rng.uniform(-1.0, 1.0));
    }
  }
  return buf;
}

inline AudioBuffer make_rir(double secs, Rng& rng,
                            int rate = kCanonicalRateHz) {
  AudioBuffer buf;
  buf.sample_rate_hz = rate;
  buf.samples.assign(static_cast<size_t>(secs * rate), 0.0f);
  size_t direct = static_cast<size_t>(0.0025 * rate);
  if (direct >= buf.samples.size()) direct = 0;
  buf.samples[direct] = 1.0f;
  for (int k = 0; k < 60; ++k) {
    size_t pos = direct + 1 +
                 rng.uniform_index(buf.samples.size() - direct - 1);
    double t = static_cast<double>(pos - direct) / rate;
    buf.samples[pos] += static_cast<float>(0.5 * std::exp(-t / 0.05) *
                                           rng.uniform(-1.0, 1.0));
  }
  return buf;
}

struct MiniCorpusSpec {
  int n_utts = 16;
  double utt_secs = 1.5;
  double noise_secs = 6.0;
  int n_rirs = 2;
  double rir_secs = 0.25;
  uint64_t seed = 1;
};

struct MiniCorpus {
  std::filesystem::path speech_manifest;
  std::filesystem::path speech_dir;
  std::filesystem::path noise_dir;
  std::filesystem::path rir_dir;
  double total_audio_secs = 0.0;
};

// Lays out root/speech{,.jsonl}, root/noise/<type>/, root/rir/. Everything
// is derived from spec.seed, so two runs produce identical trees.
inline MiniCorpus make_mini_corpus(const std::filesystem::path& root,
                                   const MiniCorpusSpec& spec = {}) {
  namespace fs = std::filesystem;
  static const char* kWords[] = {"alpha", "bravo", "delta", "echo",
                                 "lima",  "oscar", "sierra", "tango"};
  static const char* kTypes[] = {"babble", "music", "television",
                                 "background"};

  MiniCorpus out;
  out.speech_dir = root / "speech";
  out.noise_dir = root / "noise";
  out.rir_dir = root / "rir";
  out.speech_manifest = root / "speech.jsonl";

  Rng rng(spec.seed);
  fs::create_directories(out.speech_dir);
  std::vector<ManifestEntry> entries;
  for (int u = 0; u < spec.n_utts; ++u) {
    AudioBuffer buf = make_speech(spec.utt_secs, rng);
    fs::path path = out.speech_dir / strformat("utt_%03d.wav", u);
    write_wav(path, buf, WavFormat::pcm16);
    std::string text;
    for (int w = 0; w < 3; ++w) {
      if (w) text += ' ';
      text += kWords[rng.uniform_index(8)];
    }
    ManifestEntry entry;
    entry.audio_filepath = path.string();
    entry.duration = buf.duration_secs();
    entry.text = text;
    entries.push_back(std::move(entry));
    out.total_audio_secs += buf.duration_secs();
  }
  write_manifest(out.speech_manifest, entries);

  for (const char* type : kTypes) {
    fs::create_directories(out.noise_dir / type);
    AudioBuffer buf = make_noise(type, spec.noise_secs, rng);
    write_wav(out.noise_dir / type / strformat("%s_0.wav", type), buf,
              WavFormat::pcm16);
    out.total_audio_secs += buf.duration_secs();
  }

  fs::create_directories(out.rir_dir);
  for (int r = 0; r < spec.n_rirs; ++r) {
    AudioBuffer buf = make_rir(spec.rir_secs, rng);
    write_wav(out.rir_dir / strformat("rir_%d.wav", r), buf,
              WavFormat::float32);
    out.total_audio_secs += buf.duration_secs();
  }
  return out;
}

}  // namespace augforge::demo
