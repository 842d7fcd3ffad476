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
#include <filesystem>

#include "augforge/audio.hpp"

// WAV I/O: PCM 16-bit and IEEE float-32, little-endian. Multichannel input
// is downmixed to mono by averaging. PCM16 uses the exact scale 1/32768, so
// a read/write round trip of 16-bit data is byte-identical.

namespace augforge {

enum class WavFormat { pcm16, float32 };

struct WavInfo {
  uint32_t sample_rate_hz = 0;
  uint16_t channels = 0;
  WavFormat format = WavFormat::pcm16;
  uint64_t frames = 0;

  double duration_secs() const {
    return static_cast<double>(frames) / sample_rate_hz;
  }
};

/// Parse the header only; does not read sample data.
WavInfo probe_wav(const std::filesystem::path& path);

/// Read the whole file, downmixed to mono.
AudioBuffer read_wav(const std::filesystem::path& path);

/// Read frames [offset_secs, offset_secs + length_secs), downmixed to mono.
/// The range is clamped to the file length.
AudioBuffer read_wav_segment(const std::filesystem::path& path,
                             double offset_secs, double length_secs);

/// Like read_wav but also reports the on-disk format.
AudioBuffer read_wav(const std::filesystem::path& path, WavInfo* info_out);

void write_wav(const std::filesystem::path& path, const AudioBuffer& buf,
               WavFormat format);

}  // namespace augforge
