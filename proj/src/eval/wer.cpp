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

#include "augforge/wer.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <unordered_map>

#include "augforge/error.hpp"
#include "json.hpp"

namespace augforge {
namespace {

std::string join_ids(const std::vector<std::string>& ids) {
  std::string out;
  size_t shown = std::min<size_t>(ids.size(), 10);
  for (size_t i = 0; i < shown; ++i) {
    if (i) out += ", ";
    out += ids[i];
  }
  if (ids.size() > shown)
    out += strformat(" (and %zu more)", ids.size() - shown);
  return out;
}

}  // namespace

AlignCounts align(const std::vector<std::string>& ref,
                  const std::vector<std::string>& hyp,
                  std::vector<EditOp>* ops) {
  size_t nr = ref.size(), nh = hyp.size();
  // dist is (nr+1) x (nh+1), row-major.
  std::vector<uint32_t> dist((nr + 1) * (nh + 1));
  auto d = [&](size_t i, size_t j) -> uint32_t& {
    return dist[i * (nh + 1) + j];
  };
  for (size_t i = 0; i <= nr; ++i) d(i, 0) = static_cast<uint32_t>(i);
  for (size_t j = 0; j <= nh; ++j) d(0, j) = static_cast<uint32_t>(j);
  for (size_t i = 1; i <= nr; ++i) {
    for (size_t j = 1; j <= nh; ++j) {
      uint32_t diag = d(i - 1, j - 1) + (ref[i - 1] == hyp[j - 1] ? 0 : 1);
      uint32_t up = d(i - 1, j) + 1;
      uint32_t left = d(i, j - 1) + 1;
      d(i, j) = std::min({diag, up, left});
    }
  }

  // Backtrace, preferring substitution, then deletion, then insertion.
  std::vector<EditOp> trace;
  AlignCounts counts;
  size_t i = nr, j = nh;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      bool is_match = ref[i - 1] == hyp[j - 1];
      uint32_t diag = d(i - 1, j - 1) + (is_match ? 0 : 1);
      if (diag == d(i, j)) {
        trace.push_back(is_match ? EditOp::match : EditOp::substitute);
        if (!is_match) ++counts.substitutions;
        --i, --j;
        continue;
      }
    }
    if (i > 0 && d(i - 1, j) + 1 == d(i, j)) {
      trace.push_back(EditOp::erase);
      ++counts.deletions;
      --i;
      continue;
    }
    trace.push_back(EditOp::insert);
    ++counts.insertions;
    --j;
  }
  if (ops) {
    ops->assign(trace.rbegin(), trace.rend());
  }
  return counts;
}

ScoreMode score_mode_from_string(const std::string& s) {
  if (s == "word") return ScoreMode::word;
  if (s == "char" || s == "character") return ScoreMode::character;
  throw InvalidArgument("unknown score mode: " + s);
}

std::vector<std::string> tokenize(const std::string& text, ScoreMode mode,
                                  const std::string& strip_punctuation) {
  std::vector<std::string> tokens;
  if (mode == ScoreMode::word) {
    std::string current;
    for (unsigned char c : text) {
      if (std::isspace(c)) {
        if (!current.empty()) tokens.push_back(std::move(current)), current.clear();
        continue;
      }
      if (strip_punctuation.find(static_cast<char>(c)) != std::string::npos)
        continue;
      current.push_back(static_cast<char>(std::tolower(c)));
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
  }

  // character mode: one token per UTF-8 codepoint, whitespace removed.
  size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    size_t len = 1;
    if ((c & 0x80) == 0x00)
      len = 1;
    else if ((c & 0xe0) == 0xc0)
      len = 2;
    else if ((c & 0xf0) == 0xe0)
      len = 3;
    else if ((c & 0xf8) == 0xf0)
      len = 4;
    len = std::min(len, text.size() - i);
    if (len == 1 && std::isspace(c)) {
      ++i;
      continue;
    }
    tokens.push_back(text.substr(i, len));
    i += len;
  }
  return tokens;
}

std::vector<Utterance> parse_hypotheses(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open hypotheses: " + path.string());
  std::vector<Utterance> hyps;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    Utterance utt;
    if (line.front() == '{') {
      nlohmann::json obj;
      try {
        obj = nlohmann::json::parse(line);
        utt.id = obj.at("id").get<std::string>();
        utt.text = obj.at("text").get<std::string>();
      } catch (const nlohmann::json::exception& e) {
        throw ParseError(line_no, e.what());
      }
    } else {
      size_t tab = line.find('\t');
      if (tab == std::string::npos)
        throw ParseError(line_no, "expected JSON object or id<TAB>text");
      utt.id = line.substr(0, tab);
      utt.text = line.substr(tab + 1);
    }
    if (utt.id.empty()) throw ParseError(line_no, "empty utterance id");
    hyps.push_back(std::move(utt));
  }
  return hyps;
}

WerReport score(const std::vector<Utterance>& refs,
                const std::vector<Utterance>& hyps, ScoreMode mode,
                const std::string& strip_punctuation) {
  std::unordered_map<std::string, const std::string*> hyp_by_id;
  for (const auto& h : hyps) {
    if (!hyp_by_id.emplace(h.id, &h.text).second)
      throw ScoringError("duplicate hypothesis id: " + h.id);
  }

  std::vector<std::string> unmatched;
  std::set<std::string> ref_ids;
  for (const auto& r : refs) {
    ref_ids.insert(r.id);
    if (!hyp_by_id.count(r.id)) unmatched.push_back("missing hyp: " + r.id);
  }
  for (const auto& h : hyps)
    if (!ref_ids.count(h.id)) unmatched.push_back("missing ref: " + h.id);
  if (!unmatched.empty())
    throw ScoringError("unmatched utterance ids: " + join_ids(unmatched));

  WerReport report;
  for (const auto& r : refs) {
    auto ref_tokens = tokenize(r.text, mode, strip_punctuation);
    auto hyp_tokens = tokenize(*hyp_by_id.at(r.id), mode, strip_punctuation);
    AlignCounts c = align(ref_tokens, hyp_tokens);
    report.n_ref_tokens += ref_tokens.size();
    report.substitutions += c.substitutions;
    report.deletions += c.deletions;
    report.insertions += c.insertions;
  }
  if (report.n_ref_tokens == 0)
    throw InvalidArgument("reference corpus has zero tokens");
  report.error_rate_percent =
      100.0 *
      static_cast<double>(report.substitutions + report.deletions +
                          report.insertions) /
      static_cast<double>(report.n_ref_tokens);
  return report;
}

std::string ctc_greedy_decode(const std::vector<std::vector<float>>& log_probs,
                              const std::vector<std::string>& vocab,
                              size_t blank_index) {
  if (blank_index >= vocab.size())
    throw InvalidArgument("blank index outside vocab");
  std::string out;
  size_t prev = vocab.size();  // sentinel: nothing emitted yet
  for (size_t f = 0; f < log_probs.size(); ++f) {
    const auto& row = log_probs[f];
    if (row.size() != vocab.size())
      throw InvalidArgument(
          strformat("frame %zu has %zu columns, vocab has %zu", f, row.size(),
                    vocab.size()));
    size_t best = 0;
    for (size_t k = 1; k < row.size(); ++k)
      if (row[k] > row[best]) best = k;
    if (best != prev && best != blank_index) out += vocab[best];
    prev = best;
  }
  return out;
}

SweepSummary aggregate_sweep(std::vector<SweepRow> rows) {
  SweepSummary summary;
  std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    if (a.snr_db != b.snr_db) return a.snr_db < b.snr_db;
    if (a.noise_type != b.noise_type) return a.noise_type < b.noise_type;
    return a.iteration < b.iteration;
  });
  summary.rows = rows;

  std::set<double> snrs;
  std::set<std::string> types;
  std::set<int> iterations;
  std::set<std::tuple<double, std::string, int>> present;
  std::map<double, std::pair<double, size_t>> acc;
  for (const auto& r : rows) {
    snrs.insert(r.snr_db);
    types.insert(r.noise_type);
    iterations.insert(r.iteration);
    present.insert({r.snr_db, r.noise_type, r.iteration});
    auto& [sum, n] = acc[r.snr_db];
    sum += r.wer_percent;
    ++n;
  }
  for (const auto& [snr, sum_n] : acc)
    summary.means.push_back({snr, sum_n.first / sum_n.second, sum_n.second});

  for (double snr : snrs)
    for (const auto& type : types)
      for (int it : iterations)
        if (!present.count({snr, type, it}))
          summary.missing_cells.push_back(
              strformat("snr=%g type=%s iter=%d", snr, type.c_str(), it));
  return summary;
}

}  // namespace augforge
