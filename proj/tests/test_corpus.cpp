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

#include <unistd.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "augforge/error.hpp"
#include "augforge/manifest.hpp"
#include "augforge/rng.hpp"
#include "augforge/wav.hpp"
#include "doctest.h"

using namespace augforge;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* tag) {
  static int counter = 0;
  fs::path d = fs::temp_directory_path() /
               strformat("augforge-corpus-%d-%s-%d",
                         static_cast<int>(getpid()), tag, counter++);
  fs::create_directories(d);
  return d;
}

void write_tone_wav(const fs::path& path, double secs, int rate = 16000,
                    WavFormat format = WavFormat::pcm16) {
  AudioBuffer buf;
  buf.sample_rate_hz = rate;
  buf.samples.resize(static_cast<size_t>(std::llround(secs * rate)));
  for (size_t i = 0; i < buf.samples.size(); ++i)
    buf.samples[i] =
        static_cast<float>(0.3 * std::sin(2.0 * M_PI * 440.0 * i / rate));
  fs::create_directories(path.parent_path());
  write_wav(path, buf, format);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// chunk_spans / chunk_noise

TEST_CASE("chunking a 65 s timeline yields three full chunks plus the tail") {
  const int64_t rate = 16000;
  auto spans = chunk_spans(65 * rate, 20 * rate, 1 * rate);
  REQUIRE(spans.size() == 4);
  CHECK(spans[0] == std::pair<int64_t, int64_t>{0, 20 * rate});
  CHECK(spans[1] == std::pair<int64_t, int64_t>{20 * rate, 20 * rate});
  CHECK(spans[2] == std::pair<int64_t, int64_t>{40 * rate, 20 * rate});
  CHECK(spans[3] == std::pair<int64_t, int64_t>{60 * rate, 5 * rate});
}

TEST_CASE("chunking keeps a lone short file and drops sub-threshold tails") {
  const int64_t rate = 16000;
  // 10 s file, 20 s chunks: one 10 s segment.
  auto spans = chunk_spans(10 * rate, 20 * rate, 1 * rate);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].second == 10 * rate);
  // 0.5 s file: below the 1 s minimum, no segments.
  CHECK(chunk_spans(rate / 2, 20 * rate, rate).empty());
  // 20.5 s file: the 0.5 s tail is dropped.
  auto tail = chunk_spans(20 * rate + rate / 2, 20 * rate, rate);
  REQUIRE(tail.size() == 1);
  CHECK(tail[0].second == 20 * rate);
}

TEST_CASE("chunking is exhaustive and non-overlapping for random lengths") {
  Rng rng(401);
  for (int trial = 0; trial < 200; ++trial) {
    int64_t total = static_cast<int64_t>(rng.uniform01() * 2'000'000);
    int64_t chunk = 1 + static_cast<int64_t>(rng.uniform01() * 100'000);
    int64_t min_len = 1 + static_cast<int64_t>(rng.uniform01() * (chunk - 1));
    if (min_len >= chunk) min_len = chunk - 1;
    if (min_len < 1) min_len = 1;
    auto spans = chunk_spans(total, chunk, min_len);
    int64_t expected_offset = 0;
    int64_t covered = 0;
    for (auto [off, len] : spans) {
      CHECK(off == expected_offset);
      CHECK(len > 0);
      CHECK(len <= chunk);
      CHECK(len >= min_len);
      expected_offset = off + len;
      covered += len;
    }
    int64_t dropped = total - covered;
    CHECK(dropped >= 0);
    CHECK(dropped < std::max(chunk, min_len));
  }
}

TEST_CASE("chunk_spans validates its preconditions") {
  CHECK_THROWS_AS(chunk_spans(100, 0, 0), InvalidArgument);
  CHECK_THROWS_AS(chunk_spans(100, 10, 10), InvalidArgument);
  CHECK_THROWS_AS(chunk_spans(100, 10, 20), InvalidArgument);
  CHECK_THROWS_AS(chunk_spans(100, 10, 0), InvalidArgument);
}

TEST_CASE("chunk_noise probes the header and reports spans in seconds") {
  fs::path dir = fresh_dir("chunknoise");
  fs::path wav = dir / "long.wav";
  write_tone_wav(wav, 45.0);
  auto segments = chunk_noise(wav, 20.0, 1.0);
  REQUIRE(segments.size() == 3);
  CHECK(segments[0].offset_secs == doctest::Approx(0.0));
  CHECK(segments[0].length_secs == doctest::Approx(20.0));
  CHECK(segments[1].offset_secs == doctest::Approx(20.0));
  CHECK(segments[2].offset_secs == doctest::Approx(40.0));
  CHECK(segments[2].length_secs == doctest::Approx(5.0));
  for (const auto& seg : segments) CHECK(seg.source_path == wav);

  CHECK_THROWS_AS(chunk_noise(dir / "missing.wav", 20.0, 1.0), IoError);
  fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// manifest lines

TEST_CASE("manifest lines round trip losslessly") {
  ManifestEntry e;
  e.audio_filepath = "/data/speech/utt 01.wav";
  e.duration = 3.25;
  e.text = "hello \"quoted\" world";
  std::string line = manifest_line(e);
  ManifestEntry back = parse_manifest_line(line, 1);
  CHECK(back.audio_filepath == e.audio_filepath);
  CHECK(back.duration == e.duration);
  CHECK(back.text == e.text);
  CHECK_FALSE(back.has_offset());
  CHECK(back.type.empty());
  // Serialization is byte-stable.
  CHECK(manifest_line(back) == line);
}

TEST_CASE("manifest lines keep optional offset and type keys") {
  ManifestEntry e;
  e.audio_filepath = "noise/babble/a.wav";
  e.duration = 20.0;
  e.offset = 40.0;
  e.type = "babble";
  std::string line = manifest_line(e);
  ManifestEntry back = parse_manifest_line(line, 3);
  CHECK(back.has_offset());
  CHECK(back.offset == 40.0);
  CHECK(back.type == "babble");
  CHECK(manifest_line(back) == line);
}

TEST_CASE("malformed manifest lines report their line number") {
  auto line_of = [](const std::string& line, size_t no) -> size_t {
    try {
      parse_manifest_line(line, no);
    } catch (const ParseError& e) {
      return e.line_no();
    }
    return 0;
  };
  CHECK(line_of("not json", 7) == 7);
  CHECK(line_of("{\"duration\": 1.0}", 9) == 9);              // missing path
  CHECK(line_of("{\"audio_filepath\": \"a.wav\"}", 2) == 2);  // missing duration
  CHECK(line_of("{\"audio_filepath\": \"a.wav\", \"duration\": -1}", 4) == 4);
  CHECK(line_of("[1, 2]", 5) == 5);  // not an object
}

TEST_CASE("manifest files round trip through parse and write") {
  fs::path dir = fresh_dir("roundtrip");
  fs::path path = dir / "m.jsonl";
  std::vector<ManifestEntry> entries(3);
  entries[0] = {"a.wav", 1.5, "one", -1.0, ""};
  entries[1] = {"b.wav", 20.0, "", 20.0, "music"};
  entries[2] = {"c.wav", 0.75, "three words here", -1.0, ""};
  write_manifest(path, entries);
  auto back = parse_manifest(path);
  REQUIRE(back.size() == 3);
  std::string first = slurp(path);
  write_manifest(path, back);
  CHECK(slurp(path) == first);
  CHECK_THROWS_AS(parse_manifest(dir / "missing.jsonl"), IoError);
  fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// build_manifest

TEST_CASE("building a manifest from an empty directory yields zero entries") {
  fs::path dir = fresh_dir("empty");
  fs::path out = dir / "out.jsonl";
  BuildSummary s = build_manifest(dir, CorpusKind::noise, out);
  CHECK(s.n_entries == 0);
  CHECK(s.total_secs == 0.0);
  CHECK(parse_manifest(out).empty());
  fs::remove_all(dir);
}

TEST_CASE("noise manifests chunk 20/45/5 s files into five segments") {
  fs::path dir = fresh_dir("noisebuild");
  fs::path scan = dir / "noise";
  write_tone_wav(scan / "music" / "a.wav", 20.0);
  write_tone_wav(scan / "music" / "b.wav", 45.0);
  write_tone_wav(scan / "babble" / "c.wav", 5.0);
  fs::path out = dir / "noise.jsonl";
  BuildSummary s = build_manifest(scan, CorpusKind::noise, out, 20.0, 1.0);
  CHECK(s.n_entries == 5);  // 1 + 3 + 1
  CHECK(s.total_secs == doctest::Approx(70.0));

  auto entries = parse_manifest(out);
  REQUIRE(entries.size() == 5);
  // Lexicographic scan order: babble/c.wav, music/a.wav, music/b.wav.
  CHECK(entries[0].type == "babble");
  CHECK(entries[0].duration == doctest::Approx(5.0));
  CHECK(entries[1].type == "music");
  CHECK(entries[1].offset == doctest::Approx(0.0));
  CHECK(entries[2].offset == doctest::Approx(0.0));
  CHECK(entries[3].offset == doctest::Approx(20.0));
  CHECK(entries[4].offset == doctest::Approx(40.0));
  for (const auto& e : entries) {
    CHECK(e.has_offset());
    CHECK(e.text.empty());
  }
  fs::remove_all(dir);
}

TEST_CASE("scanning the same directory twice is byte-identical") {
  fs::path dir = fresh_dir("determ");
  fs::path scan = dir / "rir";
  write_tone_wav(scan / "room1.wav", 0.4);
  write_tone_wav(scan / "room2.wav", 0.3);
  write_tone_wav(scan / "hall" / "big.wav", 0.5);
  fs::path out1 = dir / "one.jsonl";
  fs::path out2 = dir / "two.jsonl";
  build_manifest(scan, CorpusKind::rir, out1);
  build_manifest(scan, CorpusKind::rir, out2);
  std::string a = slurp(out1);
  CHECK_FALSE(a.empty());
  CHECK(a == slurp(out2));
  fs::remove_all(dir);
}

TEST_CASE("speech manifests carry one whole-file entry each") {
  fs::path dir = fresh_dir("speechbuild");
  fs::path scan = dir / "speech";
  write_tone_wav(scan / "u1.wav", 1.25);
  write_tone_wav(scan / "u2.wav", 2.5);
  std::ofstream(scan / "notes.txt") << "ignored";
  fs::path out = dir / "speech.jsonl";
  BuildSummary s = build_manifest(scan, CorpusKind::speech, out);
  CHECK(s.n_entries == 2);
  CHECK(s.total_secs == doctest::Approx(3.75));
  auto entries = parse_manifest(out);
  REQUIRE(entries.size() == 2);
  CHECK_FALSE(entries[0].has_offset());
  CHECK(entries[0].duration == doctest::Approx(1.25));
  fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// validate_manifest

TEST_CASE("validation passes a manifest that matches its files") {
  fs::path dir = fresh_dir("validok");
  write_tone_wav(dir / "a.wav", 1.0);
  write_tone_wav(dir / "b.wav", 45.0);
  fs::path out = dir / "m.jsonl";
  std::vector<ManifestEntry> entries(2);
  entries[0] = {(dir / "a.wav").string(), 1.0, "hi", -1.0, ""};
  entries[1] = {(dir / "b.wav").string(), 20.0, "", 20.0, "music"};
  write_manifest(out, entries);
  ValidationReport r = validate_manifest(out);
  CHECK(r.n_entries == 2);
  CHECK(r.ok());
  fs::remove_all(dir);
}

TEST_CASE("validation flags duration drift, missing files, and bad segments") {
  fs::path dir = fresh_dir("validbad");
  write_tone_wav(dir / "real2s.wav", 2.0);
  write_tone_wav(dir / "short.wav", 10.0);
  fs::path out = dir / "m.jsonl";
  std::vector<ManifestEntry> entries(4);
  entries[0] = {(dir / "real2s.wav").string(), 5.0, "", -1.0, ""};   // drift
  entries[1] = {(dir / "gone.wav").string(), 1.0, "", -1.0, ""};     // missing
  entries[2] = {(dir / "short.wav").string(), 20.0, "", 8.0, ""};    // overrun
  entries[3] = {(dir / "real2s.wav").string(), 2.0, "ok", -1.0, ""};
  write_manifest(out, entries);
  ValidationReport r = validate_manifest(out);
  CHECK(r.n_entries == 4);
  REQUIRE(r.failures.size() == 3);
  CHECK(r.failures[0].line_no == 1);
  CHECK(r.failures[1].line_no == 2);
  CHECK(r.failures[2].line_no == 3);
  fs::remove_all(dir);
}

TEST_CASE("validation accepts declared durations within the 0.1 s tolerance") {
  fs::path dir = fresh_dir("validtol");
  write_tone_wav(dir / "a.wav", 2.0);
  fs::path out = dir / "m.jsonl";
  std::vector<ManifestEntry> entries(2);
  entries[0] = {(dir / "a.wav").string(), 2.09, "", -1.0, ""};
  entries[1] = {(dir / "a.wav").string(), 2.2, "", -1.0, ""};
  write_manifest(out, entries);
  ValidationReport r = validate_manifest(out);
  REQUIRE(r.failures.size() == 1);
  CHECK(r.failures[0].line_no == 2);
  fs::remove_all(dir);
}

TEST_CASE("validating a malformed manifest raises a parse error") {
  fs::path dir = fresh_dir("validparse");
  fs::path out = dir / "m.jsonl";
  std::ofstream(out) << "{\"audio_filepath\": \"a.wav\", \"duration\": 1.0}\n"
                     << "garbage\n";
  try {
    validate_manifest(out);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line_no() == 2);
  }
  fs::remove_all(dir);
}
