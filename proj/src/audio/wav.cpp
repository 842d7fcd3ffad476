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

#include "augforge/wav.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>

#include "augforge/error.hpp"

namespace augforge {

namespace {

constexpr uint16_t kFmtPcm = 1;
constexpr uint16_t kFmtIeeeFloat = 3;
constexpr uint16_t kFmtExtensible = 0xfffe;

// PCM16 <-> float scale. 1/32768 is exact in binary float, so s -> s/32768
// -> round(s*32768) is the identity on int16.
constexpr float kPcmScale = 32768.0f;

struct ChunkHeader {
  char id[4];
  uint32_t size;
};

uint32_t read_u32(std::istream& s) {
  unsigned char b[4];
  s.read(reinterpret_cast<char*>(b), 4);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

uint16_t read_u16(std::istream& s) {
  unsigned char b[2];
  s.read(reinterpret_cast<char*>(b), 2);
  return static_cast<uint16_t>(b[0] | (b[1] << 8));
}

struct ParsedHeader {
  WavInfo info;
  uint16_t bits_per_sample = 0;
  uint64_t data_offset = 0;   // byte offset of sample data in the file
  uint64_t data_bytes = 0;
};

ParsedHeader parse_header(std::ifstream& f, const std::filesystem::path& path) {
  auto fail = [&](const std::string& why) -> ParsedHeader {
    throw IoError(path.string() + ": " + why);
  };

  char riff[4], wave[4];
  f.read(riff, 4);
  read_u32(f);  // riff size, unreliable in practice
  f.read(wave, 4);
  if (!f || std::memcmp(riff, "RIFF", 4) != 0 || std::memcmp(wave, "WAVE", 4) != 0)
    fail("not a RIFF/WAVE file");

  ParsedHeader h;
  uint16_t audio_format = 0;
  bool have_fmt = false, have_data = false;

  while (f && !have_data) {
    char id[4];
    f.read(id, 4);
    uint32_t size = read_u32(f);
    if (!f) break;
    if (std::memcmp(id, "fmt ", 4) == 0) {
      audio_format = read_u16(f);
      h.info.channels = read_u16(f);
      h.info.sample_rate_hz = read_u32(f);
      read_u32(f);  // byte rate
      read_u16(f);  // block align
      h.bits_per_sample = read_u16(f);
      if (audio_format == kFmtExtensible && size >= 40) {
        read_u16(f);                      // cbSize
        read_u16(f);                      // valid bits
        read_u32(f);                      // channel mask
        audio_format = read_u16(f);       // first 2 bytes of subformat GUID
        f.seekg(14, std::ios::cur);       // rest of GUID
        if (size > 40) f.seekg(size - 40, std::ios::cur);
      } else if (size > 16) {
        f.seekg(size - 16, std::ios::cur);
      }
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      h.data_offset = static_cast<uint64_t>(f.tellg());
      h.data_bytes = size;
      have_data = true;
    } else {
      f.seekg(size + (size & 1), std::ios::cur);  // chunks are word-aligned
    }
  }

  if (!have_fmt || !have_data) fail("missing fmt or data chunk");
  if (h.info.channels == 0 || h.info.sample_rate_hz == 0)
    fail("invalid fmt chunk");

  if (audio_format == kFmtPcm && h.bits_per_sample == 16) {
    h.info.format = WavFormat::pcm16;
  } else if (audio_format == kFmtIeeeFloat && h.bits_per_sample == 32) {
    h.info.format = WavFormat::float32;
  } else {
    fail(strformat("unsupported sample format (format=%u bits=%u); "
                   "expected PCM16 or IEEE float32",
                   audio_format, h.bits_per_sample));
  }

  uint32_t bytes_per_frame = h.info.channels * (h.bits_per_sample / 8);
  h.info.frames = h.data_bytes / bytes_per_frame;
  return h;
}

AudioBuffer read_frames(std::ifstream& f, const ParsedHeader& h,
                        uint64_t first_frame, uint64_t n_frames,
                        const std::filesystem::path& path) {
  uint32_t ch = h.info.channels;
  uint32_t bytes_per_sample = h.bits_per_sample / 8;
  uint64_t bytes_per_frame = static_cast<uint64_t>(ch) * bytes_per_sample;

  f.seekg(static_cast<std::streamoff>(h.data_offset + first_frame * bytes_per_frame));
  std::vector<char> raw(n_frames * bytes_per_frame);
  f.read(raw.data(), static_cast<std::streamsize>(raw.size()));
  if (!f) throw IoError(path.string() + ": truncated data chunk");

  AudioBuffer out;
  out.sample_rate_hz = static_cast<int>(h.info.sample_rate_hz);
  out.samples.resize(n_frames);

  if (h.info.format == WavFormat::pcm16) {
    const unsigned char* p = reinterpret_cast<const unsigned char*>(raw.data());
    for (uint64_t i = 0; i < n_frames; ++i) {
      float acc = 0.0f;
      for (uint32_t c = 0; c < ch; ++c) {
        int16_t s = static_cast<int16_t>(p[0] | (p[1] << 8));
        acc += static_cast<float>(s) / kPcmScale;
        p += 2;
      }
      out.samples[i] = ch == 1 ? acc : acc / static_cast<float>(ch);
    }
  } else {
    const char* p = raw.data();
    for (uint64_t i = 0; i < n_frames; ++i) {
      float acc = 0.0f;
      for (uint32_t c = 0; c < ch; ++c) {
        float v;
        std::memcpy(&v, p, 4);
        if (!std::isfinite(v))
          throw IoError(path.string() + ": non-finite sample in float data");
        acc += v;
        p += 4;
      }
      out.samples[i] = ch == 1 ? acc : acc / static_cast<float>(ch);
    }
  }
  return out;
}

void write_u32(std::ostream& s, uint32_t v) {
  char b[4] = {static_cast<char>(v), static_cast<char>(v >> 8),
               static_cast<char>(v >> 16), static_cast<char>(v >> 24)};
  s.write(b, 4);
}

void write_u16(std::ostream& s, uint16_t v) {
  char b[2] = {static_cast<char>(v), static_cast<char>(v >> 8)};
  s.write(b, 2);
}

}  // namespace

WavInfo probe_wav(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(path.string() + ": cannot open");
  return parse_header(f, path).info;
}

AudioBuffer read_wav(const std::filesystem::path& path, WavInfo* info_out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(path.string() + ": cannot open");
  ParsedHeader h = parse_header(f, path);
  if (info_out) *info_out = h.info;
  return read_frames(f, h, 0, h.info.frames, path);
}

AudioBuffer read_wav(const std::filesystem::path& path) {
  return read_wav(path, nullptr);
}

AudioBuffer read_wav_segment(const std::filesystem::path& path,
                             double offset_secs, double length_secs) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(path.string() + ": cannot open");
  ParsedHeader h = parse_header(f, path);

  uint64_t first = static_cast<uint64_t>(
      std::llround(offset_secs * h.info.sample_rate_hz));
  if (first > h.info.frames) first = h.info.frames;
  uint64_t count = static_cast<uint64_t>(
      std::llround(length_secs * h.info.sample_rate_hz));
  count = std::min(count, h.info.frames - first);
  return read_frames(f, h, first, count, path);
}

void write_wav(const std::filesystem::path& path, const AudioBuffer& buf,
               WavFormat format) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError(path.string() + ": cannot open for writing");

  uint32_t n = static_cast<uint32_t>(buf.samples.size());
  uint32_t rate = static_cast<uint32_t>(buf.sample_rate_hz);

  if (format == WavFormat::pcm16) {
    uint32_t data_bytes = n * 2;
    f.write("RIFF", 4);
    write_u32(f, 36 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    write_u32(f, 16);
    write_u16(f, kFmtPcm);
    write_u16(f, 1);
    write_u32(f, rate);
    write_u32(f, rate * 2);
    write_u16(f, 2);
    write_u16(f, 16);
    f.write("data", 4);
    write_u32(f, data_bytes);
    std::vector<char> raw(data_bytes);
    char* p = raw.data();
    for (uint32_t i = 0; i < n; ++i) {
      float v = buf.samples[i] * kPcmScale;
      long s = std::lround(v);
      s = std::clamp(s, -32768L, 32767L);
      p[0] = static_cast<char>(s & 0xff);
      p[1] = static_cast<char>((s >> 8) & 0xff);
      p += 2;
    }
    f.write(raw.data(), raw.size());
  } else {
    // IEEE float needs the 18-byte fmt chunk plus a fact chunk.
    uint32_t data_bytes = n * 4;
    f.write("RIFF", 4);
    write_u32(f, 50 + data_bytes);
    f.write("WAVE", 4);
    f.write("fmt ", 4);
    write_u32(f, 18);
    write_u16(f, kFmtIeeeFloat);
    write_u16(f, 1);
    write_u32(f, rate);
    write_u32(f, rate * 4);
    write_u16(f, 4);
    write_u16(f, 32);
    write_u16(f, 0);  // cbSize
    f.write("fact", 4);
    write_u32(f, 4);
    write_u32(f, n);
    f.write("data", 4);
    write_u32(f, data_bytes);
    std::vector<char> raw(data_bytes);
    std::memcpy(raw.data(), buf.samples.data(), data_bytes);
    f.write(raw.data(), raw.size());
  }
  if (!f) throw IoError(path.string() + ": write failed");
}

}  // namespace augforge
