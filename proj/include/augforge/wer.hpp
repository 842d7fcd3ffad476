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
#include <string>
#include <vector>

namespace augforge {

enum class EditOp { match, substitute, erase, insert };

struct AlignCounts {
  size_t substitutions = 0;
  size_t deletions = 0;
  size_t insertions = 0;

  size_t total() const { return substitutions + deletions + insertions; }
};

// Minimum-edit-distance alignment with unit costs. Ties during backtrace
// prefer substitution, then deletion, then insertion, giving one canonical
// alignment. `ops`, if given, receives the edit script in sequence order.
AlignCounts align(const std::vector<std::string>& ref,
                  const std::vector<std::string>& hyp,
                  std::vector<EditOp>* ops = nullptr);

struct WerReport {
  size_t n_ref_tokens = 0;
  size_t substitutions = 0;
  size_t deletions = 0;
  size_t insertions = 0;
  double error_rate_percent = 0.0;
};

enum class ScoreMode { word, character };

ScoreMode score_mode_from_string(const std::string& s);

inline constexpr const char* kDefaultStripPunctuation = ".,!?;:\"()[]{}";

// word: lowercase, strip the given punctuation characters, split on
// whitespace. character: one token per UTF-8 codepoint, whitespace dropped,
// text otherwise untouched.
std::vector<std::string> tokenize(const std::string& text, ScoreMode mode,
                                  const std::string& strip_punctuation =
                                      kDefaultStripPunctuation);

struct Utterance {
  std::string id;
  std::string text;
};

// Hypotheses file: JSONL objects {"id":..., "text":...} or two-column TSV.
std::vector<Utterance> parse_hypotheses(const std::filesystem::path& path);

// Corpus-pooled scoring: sums S, D, I and reference tokens over utterances,
// then takes one ratio. Throws ScoringError when ids do not pair up,
// InvalidArgument when the pooled reference is empty.
WerReport score(const std::vector<Utterance>& refs,
                const std::vector<Utterance>& hyps, ScoreMode mode,
                const std::string& strip_punctuation =
                    kDefaultStripPunctuation);

// Per-frame argmax (ties break to the lowest index), collapse consecutive
// repeats, drop blanks, concatenate symbols.
std::string ctc_greedy_decode(const std::vector<std::vector<float>>& log_probs,
                              const std::vector<std::string>& vocab,
                              size_t blank_index);

struct SweepRow {
  double snr_db = 0.0;
  std::string noise_type;
  int iteration = 0;
  double wer_percent = 0.0;
};

struct SweepMean {
  double snr_db = 0.0;
  double mean_wer_percent = 0.0;
  size_t n_cells = 0;
};

struct SweepSummary {
  std::vector<SweepRow> rows;       // sorted by (snr, type, iteration)
  std::vector<SweepMean> means;     // one per SNR, ascending
  std::vector<std::string> missing_cells;  // vs the inferred full grid
};

SweepSummary aggregate_sweep(std::vector<SweepRow> rows);

}  // namespace augforge
