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

#include "augforge/features.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "augforge/error.hpp"
#include "../audio/fft.hpp"

namespace augforge {
namespace {

constexpr char kMagic[8] = {'N', 'R', 'F', 'T', '0', '0', '0', '1'};

int window_samples(const FeatureConfig& c, int rate) {
  return static_cast<int>(std::lround(c.window_ms * rate / 1000.0));
}

int hop_samples(const FeatureConfig& c, int rate) {
  return static_cast<int>(std::lround(c.hop_ms * rate / 1000.0));
}

void check_config(const FeatureConfig& c, int rate) {
  int win = window_samples(c, rate);
  int hop = hop_samples(c, rate);
  if (c.n_mels < 1) throw ConfigError("n_mels must be >= 1");
  if (hop <= 0 || hop > win) throw ConfigError("hop must be in (0, window]");
  if (c.fft_size < win) throw ConfigError("fft_size smaller than window");
  if ((c.fft_size & (c.fft_size - 1)) != 0)
    throw ConfigError("fft_size must be a power of two");
  if (!(c.log_floor > 0.0)) throw ConfigError("log_floor must be positive");
}

void write_u32_le(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v & 0xff),
                        static_cast<unsigned char>((v >> 8) & 0xff),
                        static_cast<unsigned char>((v >> 16) & 0xff),
                        static_cast<unsigned char>((v >> 24) & 0xff)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

uint32_t read_u32_le(std::istream& in, const std::string& what) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw IoError("truncated feature file reading " + what);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

}  // namespace

double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }

double mel_to_hz(double mel) {
  return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0);
}

std::vector<std::vector<double>> mel_filterbank(const FeatureConfig& config,
                                                int sample_rate_hz) {
  check_config(config, sample_rate_hz);
  double fmax = config.mel_fmax_hz > 0.0 ? config.mel_fmax_hz
                                         : sample_rate_hz / 2.0;
  double mel_lo = hz_to_mel(config.mel_fmin_hz);
  double mel_hi = hz_to_mel(fmax);
  if (!(mel_hi > mel_lo)) throw ConfigError("fmax must exceed fmin");

  int n_edges = config.n_mels + 2;
  std::vector<double> edge_hz(n_edges);
  for (int i = 0; i < n_edges; ++i)
    edge_hz[i] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * i / (n_edges - 1));

  size_t n_bins = static_cast<size_t>(config.fft_size) / 2 + 1;
  double bin_hz = static_cast<double>(sample_rate_hz) / config.fft_size;

  std::vector<std::vector<double>> bank(config.n_mels,
                                        std::vector<double>(n_bins, 0.0));
  for (int m = 0; m < config.n_mels; ++m) {
    double left = edge_hz[m], center = edge_hz[m + 1], right = edge_hz[m + 2];
    double row_max = 0.0;
    for (size_t k = 0; k < n_bins; ++k) {
      double f = k * bin_hz;
      double w = 0.0;
      if (f > left && f < center)
        w = (f - left) / (center - left);
      else if (f >= center && f < right)
        w = (right - f) / (right - center);
      bank[m][k] = w;
      row_max = std::max(row_max, w);
    }
    if (row_max <= 0.0)
      throw ConfigError(strformat(
          "mel filter %d has no FFT bin under it; reduce n_mels", m));
    for (double& w : bank[m]) w /= row_max;
  }
  return bank;
}

Spectrogram log_mel(const AudioBuffer& buf, const FeatureConfig& config) {
  if (buf.sample_rate_hz != kCanonicalRateHz)
    throw InvalidArgument(strformat("log_mel expects %d Hz input, got %d",
                                    kCanonicalRateHz, buf.sample_rate_hz));
  check_config(config, buf.sample_rate_hz);
  size_t win = static_cast<size_t>(window_samples(config, buf.sample_rate_hz));
  size_t hop = static_cast<size_t>(hop_samples(config, buf.sample_rate_hz));
  if (buf.size() < win)
    throw TooShortError(strformat("need at least %zu samples, got %zu", win,
                                  buf.size()));

  auto bank = mel_filterbank(config, buf.sample_rate_hz);
  size_t n_frames = (buf.size() - win) / hop + 1;
  size_t n_bins = static_cast<size_t>(config.fft_size) / 2 + 1;

  std::vector<double> hann(win);
  for (size_t i = 0; i < win; ++i)
    hann[i] = 0.5 - 0.5 * std::cos(2.0 * M_PI * i / (win - 1));

  Spectrogram spec;
  spec.n_frames = n_frames;
  spec.n_mels = static_cast<size_t>(config.n_mels);
  spec.values.resize(n_frames * spec.n_mels);

  std::vector<double> re(config.fft_size), im(config.fft_size);
  std::vector<double> power(n_bins);
  for (size_t f = 0; f < n_frames; ++f) {
    const float* x = buf.samples.data() + f * hop;
    for (size_t i = 0; i < win; ++i) re[i] = x[i] * hann[i];
    std::fill(re.begin() + win, re.end(), 0.0);
    std::fill(im.begin(), im.end(), 0.0);
    fft_inplace(re, im, false);
    for (size_t k = 0; k < n_bins; ++k)
      power[k] = re[k] * re[k] + im[k] * im[k];
    for (size_t m = 0; m < spec.n_mels; ++m) {
      const auto& row = bank[m];
      double acc = 0.0;
      for (size_t k = 0; k < n_bins; ++k) acc += row[k] * power[k];
      spec.at(f, m) = static_cast<float>(std::log(acc + config.log_floor));
    }
  }
  return spec;
}

Spectrogram spec_cutout(const Spectrogram& spec, const CutoutConfig& config,
                        Rng& rng) {
  Spectrogram out = spec;
  if (config.n_rects <= 0 || spec.n_frames == 0 || spec.n_mels == 0)
    return out;
  if (config.max_freq_bins < 1 || config.max_time_frames < 1)
    throw InvalidArgument("cutout maxima must be >= 1");

  float fill = static_cast<float>(std::log(config.log_floor));
  for (int r = 0; r < config.n_rects; ++r) {
    size_t f0 = rng.uniform_index(spec.n_frames);
    size_t m0 = rng.uniform_index(spec.n_mels);
    size_t df = 1 + rng.uniform_index(static_cast<size_t>(config.max_time_frames));
    size_t dm = 1 + rng.uniform_index(static_cast<size_t>(config.max_freq_bins));
    size_t f1 = std::min(f0 + df, spec.n_frames);
    size_t m1 = std::min(m0 + dm, spec.n_mels);
    for (size_t f = f0; f < f1; ++f)
      for (size_t m = m0; m < m1; ++m) out.at(f, m) = fill;
  }
  return out;
}

void write_features(const std::filesystem::path& path,
                    const Spectrogram& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write features: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  write_u32_le(out, static_cast<uint32_t>(spec.n_frames));
  write_u32_le(out, static_cast<uint32_t>(spec.n_mels));
  static_assert(sizeof(float) == 4);
  out.write(reinterpret_cast<const char*>(spec.values.data()),
            static_cast<std::streamsize>(spec.values.size() * 4));
  if (!out) throw IoError("write failed: " + path.string());
}

Spectrogram read_features(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open features: " + path.string());
  char magic[8];
  if (!in.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0)
    throw IoError("bad feature-file magic in " + path.string());
  Spectrogram spec;
  spec.n_frames = read_u32_le(in, "frame count");
  spec.n_mels = read_u32_le(in, "mel count");
  spec.values.resize(spec.n_frames * spec.n_mels);
  in.read(reinterpret_cast<char*>(spec.values.data()),
          static_cast<std::streamsize>(spec.values.size() * 4));
  if (!in) throw IoError("truncated feature values in " + path.string());
  return spec;
}

}  // namespace augforge
