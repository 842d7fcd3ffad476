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
#include <string>
#include <utility>
#include <vector>

namespace augforge {

// One line of a JSONL manifest. `offset` < 0 and an empty `type` mean the
// optional keys were absent.
struct ManifestEntry {
  std::string audio_filepath;
  double duration = 0.0;
  std::string text;
  double offset = -1.0;
  std::string type;

  bool has_offset() const { return offset >= 0.0; }
};

// Throws ParseError with the 1-based line number on malformed input.
ManifestEntry parse_manifest_line(const std::string& line, size_t line_no);

// Serializes one entry; key order is fixed so round trips are byte-stable.
std::string manifest_line(const ManifestEntry& entry);

std::vector<ManifestEntry> parse_manifest(const std::filesystem::path& path);

void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestEntry>& entries);

// A window into a longer noise recording.
struct NoiseSegment {
  std::filesystem::path source_path;
  double offset_secs = 0.0;
  double length_secs = 0.0;
};

// Splits [0, total_frames) into consecutive spans of chunk_frames; a final
// remainder is kept iff it is at least min_frames long. Returns
// (offset, length) pairs in frames.
std::vector<std::pair<int64_t, int64_t>> chunk_spans(int64_t total_frames,
                                                     int64_t chunk_frames,
                                                     int64_t min_frames);

// Reads the WAV header at `path` and chunks its timeline.
std::vector<NoiseSegment> chunk_noise(const std::filesystem::path& path,
                                      double chunk_secs = 20.0,
                                      double min_chunk_secs = 1.0);

enum class CorpusKind { speech, noise, rir };

CorpusKind corpus_kind_from_string(const std::string& s);

struct BuildSummary {
  size_t n_entries = 0;
  double total_secs = 0.0;
};

// Scans `scan_dir` recursively for .wav files (lexicographic order), probes
// durations, and writes a manifest. kind=noise emits one entry per chunk with
// `offset` set and `type` taken from the file's first subdirectory under
// scan_dir (empty for files at the top level).
BuildSummary build_manifest(const std::filesystem::path& scan_dir,
                            CorpusKind kind,
                            const std::filesystem::path& out_path,
                            double chunk_secs = 20.0,
                            double min_chunk_secs = 1.0);

struct ValidationFailure {
  size_t line_no = 0;
  std::string audio_filepath;
  std::string reason;
};

struct ValidationReport {
  size_t n_entries = 0;
  std::vector<ValidationFailure> failures;

  bool ok() const { return failures.empty(); }
};

// Checks that every entry's file exists, its header parses, and the declared
// duration matches the probed one within 0.1 s (for segment entries, that the
// segment fits inside the file).
ValidationReport validate_manifest(const std::filesystem::path& path);

}  // namespace augforge
