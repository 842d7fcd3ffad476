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

#include "augforge/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "augforge/error.hpp"
#include "augforge/wav.hpp"
#include "json.hpp"

namespace augforge {
namespace {

using njson = nlohmann::ordered_json;

constexpr double kDurationToleranceSecs = 0.1;

bool is_blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

bool has_wav_extension(const std::filesystem::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return ext == ".wav";
}

}  // namespace

ManifestEntry parse_manifest_line(const std::string& line, size_t line_no) {
  njson obj;
  try {
    obj = njson::parse(line);
  } catch (const njson::parse_error& e) {
    throw ParseError(line_no, e.what());
  }
  if (!obj.is_object()) throw ParseError(line_no, "not a JSON object");

  ManifestEntry entry;
  try {
    entry.audio_filepath = obj.at("audio_filepath").get<std::string>();
    entry.duration = obj.at("duration").get<double>();
    if (obj.contains("text")) entry.text = obj["text"].get<std::string>();
    if (obj.contains("offset")) entry.offset = obj["offset"].get<double>();
    if (obj.contains("type")) entry.type = obj["type"].get<std::string>();
  } catch (const njson::exception& e) {
    throw ParseError(line_no, e.what());
  }
  if (entry.audio_filepath.empty())
    throw ParseError(line_no, "empty audio_filepath");
  if (!(entry.duration > 0.0))
    throw ParseError(line_no,
                     strformat("non-positive duration %g", entry.duration));
  if (entry.has_offset() && entry.offset < 0.0)
    throw ParseError(line_no, "negative offset");
  return entry;
}

std::string manifest_line(const ManifestEntry& entry) {
  njson obj;
  obj["audio_filepath"] = entry.audio_filepath;
  obj["duration"] = entry.duration;
  obj["text"] = entry.text;
  if (entry.has_offset()) obj["offset"] = entry.offset;
  if (!entry.type.empty()) obj["type"] = entry.type;
  return obj.dump();
}

std::vector<ManifestEntry> parse_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());
  std::vector<ManifestEntry> entries;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    entries.push_back(parse_manifest_line(line, line_no));
  }
  return entries;
}

void write_manifest(const std::filesystem::path& path,
                    const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write manifest: " + path.string());
  for (const auto& entry : entries) out << manifest_line(entry) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::pair<int64_t, int64_t>> chunk_spans(int64_t total_frames,
                                                     int64_t chunk_frames,
                                                     int64_t min_frames) {
  if (min_frames <= 0 || chunk_frames <= min_frames)
    throw InvalidArgument("chunk_spans requires chunk > min > 0");
  std::vector<std::pair<int64_t, int64_t>> spans;
  int64_t offset = 0;
  while (total_frames - offset >= chunk_frames) {
    spans.emplace_back(offset, chunk_frames);
    offset += chunk_frames;
  }
  int64_t tail = total_frames - offset;
  if (tail >= min_frames) spans.emplace_back(offset, tail);
  return spans;
}

std::vector<NoiseSegment> chunk_noise(const std::filesystem::path& path,
                                      double chunk_secs,
                                      double min_chunk_secs) {
  WavInfo info = probe_wav(path);
  int64_t rate = info.sample_rate_hz;
  auto spans = chunk_spans(static_cast<int64_t>(info.frames),
                           std::llround(chunk_secs * rate),
                           std::llround(min_chunk_secs * rate));
  std::vector<NoiseSegment> segments;
  segments.reserve(spans.size());
  for (const auto& [offset, length] : spans) {
    NoiseSegment seg;
    seg.source_path = path;
    seg.offset_secs = static_cast<double>(offset) / rate;
    seg.length_secs = static_cast<double>(length) / rate;
    segments.push_back(std::move(seg));
  }
  return segments;
}

CorpusKind corpus_kind_from_string(const std::string& s) {
  if (s == "speech") return CorpusKind::speech;
  if (s == "noise") return CorpusKind::noise;
  if (s == "rir") return CorpusKind::rir;
  throw InvalidArgument("unknown corpus kind: " + s);
}

BuildSummary build_manifest(const std::filesystem::path& scan_dir,
                            CorpusKind kind,
                            const std::filesystem::path& out_path,
                            double chunk_secs, double min_chunk_secs) {
  if (!std::filesystem::is_directory(scan_dir))
    throw IoError("not a directory: " + scan_dir.string());

  std::vector<std::filesystem::path> files;
  for (const auto& de :
       std::filesystem::recursive_directory_iterator(scan_dir)) {
    if (de.is_regular_file() && has_wav_extension(de.path()))
      files.push_back(de.path());
  }
  std::sort(files.begin(), files.end(),
            [](const auto& a, const auto& b) {
              return a.generic_string() < b.generic_string();
            });

  std::vector<ManifestEntry> entries;
  for (const auto& file : files) {
    if (kind == CorpusKind::noise) {
      auto rel = std::filesystem::relative(file, scan_dir);
      std::string type =
          rel.has_parent_path() ? rel.begin()->string() : std::string();
      for (const auto& seg : chunk_noise(file, chunk_secs, min_chunk_secs)) {
        ManifestEntry entry;
        entry.audio_filepath = file.string();
        entry.duration = seg.length_secs;
        entry.offset = seg.offset_secs;
        entry.type = type;
        entries.push_back(std::move(entry));
      }
    } else {
      WavInfo info = probe_wav(file);
      ManifestEntry entry;
      entry.audio_filepath = file.string();
      entry.duration = info.duration_secs();
      entries.push_back(std::move(entry));
    }
  }

  write_manifest(out_path, entries);
  BuildSummary summary;
  summary.n_entries = entries.size();
  for (const auto& e : entries) summary.total_secs += e.duration;
  return summary;
}

ValidationReport validate_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open manifest: " + path.string());

  ValidationReport report;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (is_blank(line)) continue;
    ManifestEntry entry = parse_manifest_line(line, line_no);
    ++report.n_entries;

    auto fail = [&](std::string reason) {
      report.failures.push_back(
          {line_no, entry.audio_filepath, std::move(reason)});
    };

    if (!std::filesystem::exists(entry.audio_filepath)) {
      fail("file not found");
      continue;
    }
    WavInfo info;
    try {
      info = probe_wav(entry.audio_filepath);
    } catch (const Error& e) {
      fail(std::string("unreadable header: ") + e.what());
      continue;
    }
    double probed = info.duration_secs();
    if (entry.has_offset()) {
      if (entry.offset + entry.duration > probed + kDurationToleranceSecs)
        fail(strformat("segment [%g, %g) exceeds file duration %g",
                       entry.offset, entry.offset + entry.duration, probed));
    } else if (std::abs(probed - entry.duration) > kDurationToleranceSecs) {
      fail(strformat("declared duration %g but file has %g", entry.duration,
                     probed));
    }
  }
  return report;
}

}  // namespace augforge
