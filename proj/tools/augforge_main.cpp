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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "augforge/augment.hpp"
#include "augforge/codec.hpp"
#include "augforge/error.hpp"
#include "augforge/features.hpp"
#include "augforge/manifest.hpp"
#include "augforge/parallel.hpp"
#include "augforge/simulate.hpp"
#include "augforge/wav.hpp"
#include "augforge/wer.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using namespace augforge;
using njson = nlohmann::ordered_json;

std::vector<std::string> g_argv;

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double secs() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Every subcommand drops one of these beside its outputs so a run can be
// replayed from its recorded arguments and seed.
void write_run_summary(const fs::path& path, const std::string& command,
                       const njson& counts, double wall_secs,
                       const njson& seed = nullptr) {
  njson obj;
  obj["command"] = command;
  obj["argv"] = g_argv;
  if (!seed.is_null()) obj["seed"] = seed;
  obj["counts"] = counts;
  obj["wall_time_secs"] = wall_secs;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write run summary: " + path.string());
  out << obj.dump(2) << '\n';
}

uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<uint64_t>(rd()) << 32) ^ rd();
}

struct SeedFlag {
  uint64_t value = 0;
  bool given = false;

  // Explicit seed, or a generated one that the run summary records.
  uint64_t resolve() const { return given ? value : fresh_seed(); }
};

void add_seed_option(CLI::App* cmd, SeedFlag& seed) {
  cmd->add_option("--seed", seed.value, "RNG seed (generated if omitted)")
      ->each([&seed](const std::string&) { seed.given = true; });
}

// ---------------------------------------------------------------------------
// prepare-noise / build-manifest

struct PrepareArgs {
  std::string input_dir;
  std::string out;
  std::string kind = "noise";
  double chunk_secs = 20.0;
  double min_chunk_secs = 1.0;
};

int run_build(const PrepareArgs& args, const std::string& command) {
  Stopwatch timer;
  BuildSummary s =
      build_manifest(args.input_dir, corpus_kind_from_string(args.kind),
                     args.out, args.chunk_secs, args.min_chunk_secs);
  njson counts;
  counts["entries"] = s.n_entries;
  counts["total_secs"] = s.total_secs;
  write_run_summary(args.out + ".run.json", command, counts, timer.secs());
  if (s.n_entries == 0)
    std::cerr << "warning: no audio found under " << args.input_dir << "\n";
  std::cout << command << ": " << s.n_entries << " entries, "
            << strformat("%.3f", s.total_secs / 3600.0) << " h -> " << args.out
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// validate-manifest

int run_validate(const std::string& manifest) {
  ValidationReport report = validate_manifest(manifest);
  for (const auto& f : report.failures)
    std::cerr << "line " << f.line_no << " (" << f.audio_filepath
              << "): " << f.reason << "\n";
  std::cout << "validate-manifest: " << report.n_entries << " entries, "
            << report.failures.size() << " failures\n";
  return report.ok() ? 0 : 1;
}

// ---------------------------------------------------------------------------
// augment

struct AugmentArgs {
  std::string manifest;
  std::string noise;
  std::string rir;
  std::string policy_file;
  std::string preset;
  SeedFlag seed;
  std::string out_dir;
  int workers = 1;
  std::string shim;
  int shim_timeout = 60;
  double max_error_fraction = 0.0;
};

int run_augment(const AugmentArgs& args) {
  Stopwatch timer;
  AugmentPolicy policy = args.policy_file.empty()
                             ? policy_preset(args.preset)
                             : load_policy(args.policy_file);
  if (args.seed.given) policy.seed = args.seed.value;

  auto entries = parse_manifest(args.manifest);
  std::optional<NoiseCorpus> noise;
  if (!args.noise.empty()) noise.emplace(args.noise);
  std::optional<RirCorpus> rirs;
  if (!args.rir.empty()) rirs.emplace(args.rir);

  AugmentOptions options;
  options.out_dir = args.out_dir;
  options.workers = args.workers;
  options.max_error_fraction = args.max_error_fraction;
  options.shim.command_template = args.shim;
  options.shim.timeout_secs = args.shim_timeout;
  if (!args.shim.empty()) probe_shim(options.shim);

  AugmentResult result =
      augment_manifest(entries, policy, rirs ? &*rirs : nullptr,
                       noise ? &*noise : nullptr, options);

  write_manifest(fs::path(args.out_dir) / "augmented.jsonl", result.manifest);
  if (!result.errors.empty()) {
    std::ofstream err_out(fs::path(args.out_dir) / "errors.jsonl",
                          std::ios::binary);
    for (const auto& e : result.errors) {
      njson rec;
      rec["index"] = e.index;
      rec["utterance_id"] = e.utterance_id;
      rec["error"] = e.message;
      err_out << rec.dump() << '\n';
    }
  }

  njson counts;
  counts["processed"] = result.n_processed;
  counts["written"] = result.manifest.size();
  counts["augmented"] = result.n_augmented;
  counts["errors"] = result.errors.size();
  write_run_summary(fs::path(args.out_dir) / "run_summary.json", "augment",
                    counts, timer.secs(), policy.seed);

  double fraction =
      result.n_processed == 0
          ? 0.0
          : static_cast<double>(result.errors.size()) / result.n_processed;
  std::cout << "augment: " << result.manifest.size() << " written, "
            << result.n_augmented << " augmented, " << result.errors.size()
            << " errors (seed " << policy.seed << ")\n";
  if (fraction > args.max_error_fraction) {
    std::cerr << strformat(
        "error fraction %.3f exceeds --max-error-fraction %.3f\n", fraction,
        args.max_error_fraction);
    return 1;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// transcode

struct TranscodeArgs {
  std::string in;
  std::string out;
  std::string family = "amr-nb";
  std::string value;
  SeedFlag seed;
  std::string shim;
  int shim_timeout = 60;
};

int run_transcode(const TranscodeArgs& args) {
  Stopwatch timer;
  CodecShim shim{args.shim, args.shim_timeout};
  probe_shim(shim);

  CodecFamily family = codec_family_from_string(args.family);
  CodecSetting setting;
  uint64_t seed = 0;
  if (args.value.empty()) {
    seed = args.seed.resolve();
    Rng rng(seed);
    setting = choose_setting(family, rng);
  } else {
    const auto& legal = codec_values(family);
    if (std::find(legal.begin(), legal.end(), args.value) == legal.end())
      throw InvalidArgument("illegal value for " + args.family + ": " +
                            args.value);
    setting = {family, args.value};
  }

  WavInfo info;
  AudioBuffer in_buf = read_wav(args.in, &info);
  AudioBuffer out_buf = transcode(in_buf, setting, shim);
  write_wav(args.out, out_buf, info.format);

  double drift_ms =
      1000.0 * (out_buf.duration_secs() - in_buf.duration_secs());
  njson counts;
  counts["family"] = codec_family_to_string(setting.family);
  counts["value"] = setting.value;
  counts["samples_in"] = in_buf.size();
  counts["samples_out"] = out_buf.size();
  counts["duration_drift_ms"] = drift_ms;
  write_run_summary(args.out + ".run.json", "transcode", counts, timer.secs(),
                    args.value.empty() ? njson(seed) : njson(nullptr));
  std::cout << "transcode: " << codec_family_to_string(setting.family) << " "
            << setting.value << ", drift "
            << strformat("%.3f", drift_ms) << " ms -> " << args.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// featurize

struct FeaturizeArgs {
  std::string manifest;
  std::string out_dir;
  bool speccutout = false;
  SeedFlag seed;
  int workers = 1;
  FeatureConfig feature;
  CutoutConfig cutout;
};

int run_featurize(const FeaturizeArgs& args) {
  Stopwatch timer;
  auto entries = parse_manifest(args.manifest);
  fs::create_directories(args.out_dir);
  uint64_t seed = args.speccutout ? args.seed.resolve() : 0;

  std::vector<size_t> frames(entries.size(), 0);
  parallel_for(entries.size(), args.workers, [&](size_t i) {
    const ManifestEntry& entry = entries[i];
    AudioBuffer buf =
        entry.has_offset()
            ? read_wav_segment(entry.audio_filepath, entry.offset,
                               entry.duration)
            : read_wav(entry.audio_filepath);
    buf = resample(buf, kCanonicalRateHz);
    Spectrogram spec = log_mel(buf, args.feature);
    if (args.speccutout) {
      Rng rng(Hash64(seed).add(entry.audio_filepath).digest());
      spec = spec_cutout(spec, args.cutout, rng);
    }
    fs::path out_path =
        fs::path(args.out_dir) /
        strformat("%06zu_%s.nrft", i,
                  fs::path(entry.audio_filepath).stem().string().c_str());
    write_features(out_path, spec);
    frames[i] = spec.n_frames;
  });

  size_t total_frames = 0;
  for (size_t f : frames) total_frames += f;
  njson counts;
  counts["utterances"] = entries.size();
  counts["frames"] = total_frames;
  write_run_summary(fs::path(args.out_dir) / "run_summary.json", "featurize",
                    counts, timer.secs(),
                    args.speccutout ? njson(seed) : njson(nullptr));
  std::cout << "featurize: " << entries.size() << " utterances, "
            << total_frames << " frames -> " << args.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// simulate-testset

struct SimulateArgs {
  std::string testset;
  std::string noise;
  std::vector<std::string> types;
  std::vector<double> snrs;
  int iterations = 5;
  bool narrowband = false;
  SeedFlag seed;
  std::string out_dir;
  int workers = 1;
};

int run_simulate(const SimulateArgs& args) {
  Stopwatch timer;
  auto testset = parse_manifest(args.testset);
  NoiseCorpus noise(args.noise);

  SimPlan plan;
  plan.snr_list_db = args.snrs;
  plan.noise_types = args.types;
  plan.iterations = args.iterations;
  plan.narrowband = args.narrowband;
  plan.seed = args.seed.resolve();

  SimSummary s = simulate(testset, noise, plan, args.out_dir, args.workers);

  njson counts;
  counts["sets"] = s.manifests.size();
  counts["utterances_per_set"] = s.n_utterances;
  write_run_summary(fs::path(args.out_dir) / "run_summary.json",
                    "simulate-testset", counts, timer.secs(), plan.seed);
  std::cout << "simulate-testset: " << s.manifests.size() << " sets x "
            << s.n_utterances << " utterances (seed " << plan.seed << ") -> "
            << args.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string refs;
  std::string hyps;
  std::string mode = "word";
  std::string out;
  std::string strip_punct = kDefaultStripPunctuation;
};

int run_evaluate(const EvaluateArgs& args) {
  Stopwatch timer;
  auto ref_entries = parse_manifest(args.refs);
  std::vector<Utterance> refs;
  refs.reserve(ref_entries.size());
  for (const auto& e : ref_entries) refs.push_back({e.audio_filepath, e.text});
  auto hyps = parse_hypotheses(args.hyps);

  WerReport report =
      score(refs, hyps, score_mode_from_string(args.mode), args.strip_punct);

  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw IoError("cannot write report: " + args.out);
  out << "n_ref_tokens,substitutions,deletions,insertions,error_rate_percent\n"
      << strformat("%zu,%zu,%zu,%zu,%.6f\n", report.n_ref_tokens,
                   report.substitutions, report.deletions, report.insertions,
                   report.error_rate_percent);
  out.close();

  njson counts;
  counts["utterances"] = refs.size();
  counts["n_ref_tokens"] = report.n_ref_tokens;
  counts["substitutions"] = report.substitutions;
  counts["deletions"] = report.deletions;
  counts["insertions"] = report.insertions;
  counts["error_rate_percent"] = report.error_rate_percent;
  write_run_summary(args.out + ".run.json", "evaluate", counts, timer.secs());
  std::cout << strformat(
      "evaluate: %s error rate %.2f%% (S=%zu D=%zu I=%zu N=%zu)\n",
      args.mode.c_str(), report.error_rate_percent, report.substitutions,
      report.deletions, report.insertions, report.n_ref_tokens);
  return 0;
}

// ---------------------------------------------------------------------------
// sweep-report

struct SweepArgs {
  std::string in_dir;
  std::string out;
};

bool parse_cell_stem(const std::string& stem, std::string* type, double* snr,
                     int* iteration) {
  size_t iter_pos = stem.rfind("_iter");
  if (iter_pos == std::string::npos) return false;
  size_t snr_pos = stem.rfind("_snr", iter_pos);
  if (snr_pos == std::string::npos || snr_pos == 0) return false;
  try {
    size_t used = 0;
    std::string iter_str = stem.substr(iter_pos + 5);
    *iteration = std::stoi(iter_str, &used);
    if (used != iter_str.size()) return false;
    std::string snr_str = stem.substr(snr_pos + 4, iter_pos - snr_pos - 4);
    *snr = std::stod(snr_str, &used);
    if (used != snr_str.size()) return false;
  } catch (const std::exception&) {
    return false;
  }
  *type = stem.substr(0, snr_pos);
  return true;
}

double read_wer_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report: " + path.string());
  std::string header, row;
  if (!std::getline(in, header) || !std::getline(in, row))
    throw ParseError(1, "truncated report: " + path.string());
  if (header.rfind("n_ref_tokens,", 0) != 0)
    throw ParseError(1, "unexpected report header in " + path.string());
  size_t comma = row.rfind(',');
  if (comma == std::string::npos)
    throw ParseError(2, "malformed report row in " + path.string());
  return std::stod(row.substr(comma + 1));
}

int run_sweep_report(const SweepArgs& args) {
  Stopwatch timer;
  std::vector<SweepRow> rows;
  std::vector<fs::path> files;
  for (const auto& de : fs::directory_iterator(args.in_dir))
    if (de.is_regular_file() && de.path().extension() == ".csv")
      files.push_back(de.path());
  std::sort(files.begin(), files.end());

  for (const auto& file : files) {
    SweepRow row;
    if (!parse_cell_stem(file.stem().string(), &row.noise_type, &row.snr_db,
                         &row.iteration))
      continue;
    row.wer_percent = read_wer_csv(file);
    rows.push_back(std::move(row));
  }

  SweepSummary summary = aggregate_sweep(std::move(rows));

  std::ofstream out(args.out, std::ios::binary);
  if (!out) throw IoError("cannot write sweep report: " + args.out);
  out << "snr_db,noise_type,iteration,wer_percent\n";
  for (const auto& r : summary.rows)
    out << strformat("%g,%s,%d,%.6f\n", r.snr_db, r.noise_type.c_str(),
                     r.iteration, r.wer_percent);
  out.close();

  fs::path means_path = fs::path(args.out).parent_path() / "means.csv";
  std::ofstream means(means_path, std::ios::binary);
  if (!means) throw IoError("cannot write means: " + means_path.string());
  means << "snr_db,mean_wer_percent,n_cells\n";
  for (const auto& m : summary.means)
    means << strformat("%g,%.6f,%zu\n", m.snr_db, m.mean_wer_percent,
                       m.n_cells);
  means.close();

  if (summary.rows.empty())
    std::cerr << "warning: no per-set reports found under " << args.in_dir
              << "\n";
  for (const auto& missing : summary.missing_cells)
    std::cerr << "warning: missing cell " << missing << "\n";

  njson counts;
  counts["cells"] = summary.rows.size();
  counts["snr_points"] = summary.means.size();
  counts["missing_cells"] = summary.missing_cells.size();
  write_run_summary(args.out + ".run.json", "sweep-report", counts,
                    timer.secs());
  std::cout << "sweep-report: " << summary.rows.size() << " cells, "
            << summary.means.size() << " SNR points -> " << args.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  g_argv.assign(argv, argv + argc);

  CLI::App app{"Deterministic audio augmentation and evaluation toolkit"};
  app.require_subcommand(1);

  PrepareArgs prep;
  auto* prep_cmd = app.add_subcommand(
      "prepare-noise", "Chunk noise recordings and write their manifest");
  prep_cmd->add_option("--input-dir", prep.input_dir, "Directory of WAV files")
      ->required()
      ->check(CLI::ExistingDirectory);
  prep_cmd->add_option("--chunk-secs", prep.chunk_secs, "Chunk length");
  prep_cmd->add_option("--min-chunk-secs", prep.min_chunk_secs,
                       "Minimum kept remainder");
  prep_cmd->add_option("--out", prep.out, "Output manifest path")->required();

  PrepareArgs build;
  auto* build_cmd = app.add_subcommand(
      "build-manifest", "Scan a directory of WAVs into a manifest");
  build_cmd
      ->add_option("--input-dir", build.input_dir, "Directory of WAV files")
      ->required()
      ->check(CLI::ExistingDirectory);
  build_cmd->add_option("--kind", build.kind, "speech, noise, or rir")
      ->required()
      ->check(CLI::IsMember({"speech", "noise", "rir"}));
  build_cmd->add_option("--chunk-secs", build.chunk_secs,
                        "Chunk length (noise only)");
  build_cmd->add_option("--min-chunk-secs", build.min_chunk_secs,
                        "Minimum kept remainder (noise only)");
  build_cmd->add_option("--out", build.out, "Output manifest path")
      ->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand(
      "validate-manifest", "Check manifest entries against their files");
  validate_cmd->add_option("--manifest", validate_path, "Manifest to check")
      ->required()
      ->check(CLI::ExistingFile);

  AugmentArgs aug;
  auto* aug_cmd = app.add_subcommand(
      "augment", "Apply the augmentation policy over a speech manifest");
  aug_cmd->add_option("--manifest", aug.manifest, "Speech manifest")
      ->required()
      ->check(CLI::ExistingFile);
  aug_cmd->add_option("--noise", aug.noise, "Noise manifest")
      ->check(CLI::ExistingFile);
  aug_cmd->add_option("--rir", aug.rir, "RIR manifest")
      ->check(CLI::ExistingFile);
  auto* policy_opt =
      aug_cmd->add_option("--policy", aug.policy_file, "Policy JSON file")
          ->check(CLI::ExistingFile);
  aug_cmd->add_option("--preset", aug.preset, "Built-in policy preset")
      ->check(CLI::IsMember(policy_preset_names()))
      ->excludes(policy_opt);
  add_seed_option(aug_cmd, aug.seed);
  aug_cmd->add_option("--out-dir", aug.out_dir, "Output directory")
      ->required();
  aug_cmd->add_option("--workers", aug.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  aug_cmd->add_option("--shim", aug.shim,
                      "Codec command template with {in} {out} {family} "
                      "{value}");
  aug_cmd->add_option("--shim-timeout", aug.shim_timeout,
                      "Shim timeout in seconds");
  aug_cmd->add_option("--max-error-fraction", aug.max_error_fraction,
                      "Tolerated per-entry failure fraction");

  TranscodeArgs trans;
  auto* trans_cmd = app.add_subcommand(
      "transcode", "Round-trip one WAV through the codec shim");
  trans_cmd->add_option("--in", trans.in, "Input WAV")
      ->required()
      ->check(CLI::ExistingFile);
  trans_cmd->add_option("--out", trans.out, "Output WAV")->required();
  trans_cmd->add_option("--family", trans.family,
                        "amr-nb, ogg-vorbis, or g711");
  trans_cmd->add_option("--value", trans.value,
                        "Codec setting (drawn uniformly if omitted)");
  add_seed_option(trans_cmd, trans.seed);
  trans_cmd->add_option("--shim", trans.shim, "Codec command template")
      ->required();
  trans_cmd->add_option("--shim-timeout", trans.shim_timeout,
                        "Shim timeout in seconds");

  FeaturizeArgs feat;
  auto* feat_cmd = app.add_subcommand(
      "featurize", "Extract log-mel features for every manifest entry");
  feat_cmd->add_option("--manifest", feat.manifest, "Input manifest")
      ->required()
      ->check(CLI::ExistingFile);
  feat_cmd->add_option("--out-dir", feat.out_dir, "Output directory")
      ->required();
  feat_cmd->add_flag("--speccutout", feat.speccutout,
                     "Mask random rectangles after extraction");
  add_seed_option(feat_cmd, feat.seed);
  feat_cmd->add_option("--workers", feat.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  feat_cmd->add_option("--n-mels", feat.feature.n_mels, "Mel bins");
  feat_cmd->add_option("--fft-size", feat.feature.fft_size, "FFT size");
  feat_cmd->add_option("--cutout-rects", feat.cutout.n_rects,
                       "Rectangles per utterance");
  feat_cmd->add_option("--cutout-freq", feat.cutout.max_freq_bins,
                       "Max masked mel bins per rectangle");
  feat_cmd->add_option("--cutout-time", feat.cutout.max_time_frames,
                       "Max masked frames per rectangle");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand(
      "simulate-testset", "Generate noisy copies of a test set over an "
                          "SNR x type x iteration grid");
  sim_cmd->add_option("--testset", sim.testset, "Clean test manifest")
      ->required()
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("--noise", sim.noise, "Noise manifest with types")
      ->required()
      ->check(CLI::ExistingFile);
  sim_cmd->add_option("--types", sim.types, "Noise types to draw from")
      ->required()
      ->delimiter(',');
  sim_cmd->add_option("--snrs", sim.snrs, "SNR grid in dB")
      ->required()
      ->delimiter(',');
  sim_cmd->add_option("--iterations", sim.iterations, "Copies per (snr,type)")
      ->check(CLI::PositiveNumber);
  sim_cmd->add_flag("--narrowband", sim.narrowband,
                    "Run the whole grid at 8 kHz");
  add_seed_option(sim_cmd, sim.seed);
  sim_cmd->add_option("--out-dir", sim.out_dir, "Output directory")
      ->required();
  sim_cmd->add_option("--workers", sim.workers, "Worker threads")
      ->check(CLI::PositiveNumber);

  EvaluateArgs eval;
  auto* eval_cmd = app.add_subcommand(
      "evaluate", "Score hypotheses against a reference manifest");
  eval_cmd->add_option("--refs", eval.refs, "Reference manifest")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--hyps", eval.hyps, "Hypotheses (JSONL or TSV)")
      ->required()
      ->check(CLI::ExistingFile);
  eval_cmd->add_option("--mode", eval.mode, "word or char")
      ->check(CLI::IsMember({"word", "char"}));
  eval_cmd->add_option("--strip-punct", eval.strip_punct,
                       "Punctuation stripped in word mode");
  eval_cmd->add_option("--out", eval.out, "Output CSV")->required();

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand(
      "sweep-report", "Aggregate per-set WER reports into curves");
  sweep_cmd->add_option("--in", sweep.in_dir, "Directory of per-set CSVs")
      ->required()
      ->check(CLI::ExistingDirectory);
  sweep_cmd->add_option("--out", sweep.out, "Output rows CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*prep_cmd) return run_build(prep, "prepare-noise");
    if (*build_cmd) return run_build(build, "build-manifest");
    if (*validate_cmd) return run_validate(validate_path);
    if (*aug_cmd) {
      if (aug.policy_file.empty() && aug.preset.empty())
        throw ConfigError("augment needs --policy or --preset");
      return run_augment(aug);
    }
    if (*trans_cmd) return run_transcode(trans);
    if (*feat_cmd) return run_featurize(feat);
    if (*sim_cmd) return run_simulate(sim);
    if (*eval_cmd) return run_evaluate(eval);
    if (*sweep_cmd) return run_sweep_report(sweep);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
