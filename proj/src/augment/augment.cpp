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

#include "augforge/augment.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "augforge/error.hpp"
#include "augforge/parallel.hpp"
#include "augforge/rng.hpp"
#include "augforge/wav.hpp"
#include "json.hpp"

namespace augforge {
namespace {

using njson = nlohmann::ordered_json;

void check_probability(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0))
    throw ConfigError(strformat("%s must be in [0,1], got %g", name, p));
}

void check_interval(const SnrInterval& iv, const char* name) {
  if (!(iv.lo <= iv.hi))
    throw ConfigError(strformat("%s must have lo <= hi, got [%g, %g]", name,
                                iv.lo, iv.hi));
}

std::vector<CodecFamily> normalize_families(std::vector<CodecFamily> fams) {
  std::sort(fams.begin(), fams.end());
  fams.erase(std::unique(fams.begin(), fams.end()), fams.end());
  return fams;
}

}  // namespace

void validate_policy(const AugmentPolicy& policy) {
  check_probability(policy.p_aug, "p_aug");
  check_probability(policy.p_rir, "p_rir");
  check_probability(policy.codec_p_aug, "codec_p_aug");
  check_interval(policy.fg_snr_db, "fg_snr_db");
  check_interval(policy.bg_snr_db, "bg_snr_db");
  if (policy.codec_p_aug > 0.0 && policy.codec_families.empty())
    throw ConfigError("codec_p_aug > 0 requires codec_families");
}

AugmentPolicy policy_preset(const std::string& name) {
  AugmentPolicy policy;
  policy.p_rir = 1.0;
  policy.fg_snr_db = {0.0, 30.0};
  policy.bg_snr_db = {10.0, 40.0};
  if (name == "qn-en-nr") {
    policy.p_aug = 0.2;
    policy.codec_p_aug = 0.1;
    policy.codec_families = {CodecFamily::amr_nb, CodecFamily::ogg_vorbis};
  } else if (name == "qn-mn-nr") {
    policy.p_aug = 0.1;
    policy.codec_p_aug = 0.5;
    policy.codec_families = {CodecFamily::amr_nb, CodecFamily::g711};
  } else {
    throw ConfigError("unknown policy preset: " + name);
  }
  return policy;
}

std::vector<std::string> policy_preset_names() {
  return {"qn-en-nr", "qn-mn-nr"};
}

std::string policy_to_json(const AugmentPolicy& policy) {
  njson obj;
  obj["p_aug"] = policy.p_aug;
  obj["p_rir"] = policy.p_rir;
  obj["fg_snr_db"] = {policy.fg_snr_db.lo, policy.fg_snr_db.hi};
  obj["bg_snr_db"] = {policy.bg_snr_db.lo, policy.bg_snr_db.hi};
  obj["codec_p_aug"] = policy.codec_p_aug;
  njson fams = njson::array();
  for (CodecFamily f : policy.codec_families)
    fams.push_back(codec_family_to_string(f));
  obj["codec_families"] = fams;
  obj["seed"] = policy.seed;
  return obj.dump(2);
}

AugmentPolicy policy_from_json(const std::string& json_text) {
  njson obj;
  try {
    obj = njson::parse(json_text);
  } catch (const njson::parse_error& e) {
    throw ConfigError(std::string("bad policy JSON: ") + e.what());
  }
  if (!obj.is_object()) throw ConfigError("policy must be a JSON object");

  static const std::set<std::string> known = {
      "p_aug",       "p_rir",          "fg_snr_db", "bg_snr_db",
      "codec_p_aug", "codec_families", "seed"};
  for (const auto& [key, _] : obj.items())
    if (!known.count(key)) throw ConfigError("unknown policy key: " + key);

  AugmentPolicy policy;
  try {
    if (obj.contains("p_aug")) policy.p_aug = obj["p_aug"].get<double>();
    if (obj.contains("p_rir")) policy.p_rir = obj["p_rir"].get<double>();
    auto interval = [&](const char* key, SnrInterval& iv) {
      if (!obj.contains(key)) return;
      const auto& arr = obj[key];
      if (!arr.is_array() || arr.size() != 2)
        throw ConfigError(strformat("%s must be a [lo, hi] pair", key));
      iv.lo = arr[0].get<double>();
      iv.hi = arr[1].get<double>();
    };
    interval("fg_snr_db", policy.fg_snr_db);
    interval("bg_snr_db", policy.bg_snr_db);
    if (obj.contains("codec_p_aug"))
      policy.codec_p_aug = obj["codec_p_aug"].get<double>();
    if (obj.contains("codec_families")) {
      for (const auto& f : obj["codec_families"])
        policy.codec_families.push_back(
            codec_family_from_string(f.get<std::string>()));
    }
    if (obj.contains("seed")) policy.seed = obj["seed"].get<uint64_t>();
  } catch (const njson::exception& e) {
    throw ConfigError(std::string("bad policy value: ") + e.what());
  }
  policy.codec_families = normalize_families(policy.codec_families);
  validate_policy(policy);
  return policy;
}

AugmentPolicy load_policy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open policy: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return policy_from_json(text);
}

void save_policy(const std::filesystem::path& path,
                 const AugmentPolicy& policy) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write policy: " + path.string());
  out << policy_to_json(policy) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

AugmentPlan draw_plan(const AugmentPolicy& policy,
                      const std::string& utterance_id, CorporaSizes sizes) {
  Rng rng(Hash64(policy.seed).add(utterance_id).digest());

  AugmentPlan plan;
  plan.apply = rng.bernoulli(policy.p_aug);
  if (!plan.apply) return plan;

  // The draw order below is frozen: it defines the reproducibility contract.
  plan.use_rir = rng.bernoulli(policy.p_rir);
  if (plan.use_rir) {
    if (sizes.n_rirs == 0)
      throw ConfigError("RIR step fired but the RIR corpus is empty");
    plan.rir_index = rng.uniform_index(sizes.n_rirs);
  }

  if (sizes.n_noise == 0)
    throw ConfigError("augmentation fired but the noise corpus is empty");
  FgPlan fg;
  fg.noise_index = rng.uniform_index(sizes.n_noise);
  fg.snr_db = rng.uniform(policy.fg_snr_db.lo, policy.fg_snr_db.hi);
  fg.offset_seed = rng.next_u64();
  plan.fg = fg;

  BgPlan bg;
  bg.noise_index = rng.uniform_index(sizes.n_noise);
  bg.snr_db = rng.uniform(policy.bg_snr_db.lo, policy.bg_snr_db.hi);
  bg.phase_seed = rng.next_u64();
  plan.bg = bg;

  if (rng.bernoulli(policy.codec_p_aug)) {
    if (policy.codec_families.empty())
      throw ConfigError("codec step fired but no codec families configured");
    CodecFamily family =
        policy.codec_families[rng.uniform_index(policy.codec_families.size())];
    plan.codec = choose_setting(family, rng);
  }
  return plan;
}

NoiseCorpus::NoiseCorpus(const std::filesystem::path& manifest_path)
    : entries_(parse_manifest(manifest_path)) {}

NoiseCorpus::NoiseCorpus(std::vector<ManifestEntry> entries)
    : entries_(std::move(entries)) {}

AudioBuffer NoiseCorpus::load(size_t index, int target_rate) const {
  const ManifestEntry& e = entries_.at(index);
  AudioBuffer buf =
      e.has_offset()
          ? read_wav_segment(e.audio_filepath, e.offset, e.duration)
          : read_wav(e.audio_filepath);
  return resample(buf, target_rate);
}

std::vector<std::string> NoiseCorpus::types() const {
  std::set<std::string> seen;
  for (const auto& e : entries_) seen.insert(e.type);
  return {seen.begin(), seen.end()};
}

NoiseCorpus NoiseCorpus::filter_type(const std::string& type) const {
  std::vector<ManifestEntry> kept;
  for (const auto& e : entries_)
    if (e.type == type) kept.push_back(e);
  return NoiseCorpus(std::move(kept));
}

RirCorpus::RirCorpus(const std::filesystem::path& manifest_path)
    : entries_(parse_manifest(manifest_path)) {}

RirCorpus::RirCorpus(std::vector<ManifestEntry> entries)
    : entries_(std::move(entries)) {}

RirBuffer RirCorpus::load(size_t index, int target_rate) const {
  const ManifestEntry& e = entries_.at(index);
  AudioBuffer buf = resample(read_wav(e.audio_filepath), target_rate);
  RirBuffer rir;
  rir.taps = std::move(buf.samples);
  rir.sample_rate_hz = buf.sample_rate_hz;
  return rir;
}

AudioBuffer apply_plan(const AudioBuffer& speech, const AugmentPlan& plan,
                       const RirCorpus* rirs, const NoiseCorpus* noise,
                       const CodecShim* shim) {
  if (!plan.apply) return speech;
  if (speech.sample_rate_hz != kCanonicalRateHz)
    throw InvalidArgument(strformat("apply_plan expects %d Hz speech, got %d",
                                    kCanonicalRateHz, speech.sample_rate_hz));

  AudioBuffer current = speech;
  if (plan.use_rir) {
    if (!rirs) throw ConfigError("plan uses an RIR but no RIR corpus given");
    current = convolve_rir(current, rirs->load(*plan.rir_index));
  }
  if (plan.fg) {
    if (!noise) throw ConfigError("plan mixes noise but no corpus given");
    Rng rng(plan.fg->offset_seed);
    current = mix_noise(current, noise->load(plan.fg->noise_index),
                        plan.fg->snr_db, NoiseMode::foreground, rng);
  }
  if (plan.bg) {
    if (!noise) throw ConfigError("plan mixes noise but no corpus given");
    Rng rng(plan.bg->phase_seed);
    current = mix_noise(current, noise->load(plan.bg->noise_index),
                        plan.bg->snr_db, NoiseMode::background, rng);
  }
  if (plan.codec) {
    if (!shim || shim->command_template.empty())
      throw ConfigError("plan transcodes but no codec shim configured");
    current = transcode(current, *plan.codec, *shim);
  }
  return current;
}

AugmentResult augment_manifest(const std::vector<ManifestEntry>& entries,
                               const AugmentPolicy& policy,
                               const RirCorpus* rirs, const NoiseCorpus* noise,
                               const AugmentOptions& options) {
  validate_policy(policy);
  if (policy.p_aug > 0.0 && policy.codec_p_aug > 0.0 &&
      options.shim.command_template.empty())
    throw ConfigError(
        "policy enables codec augmentation but no shim is configured");
  std::filesystem::create_directories(options.out_dir);

  CorporaSizes sizes;
  sizes.n_rirs = rirs ? rirs->size() : 0;
  sizes.n_noise = noise ? noise->size() : 0;

  std::vector<std::optional<ManifestEntry>> outputs(entries.size());
  std::vector<std::optional<EntryError>> failures(entries.size());
  std::vector<char> augmented(entries.size(), 0);

  parallel_for(entries.size(), options.workers, [&](size_t i) {
    const ManifestEntry& entry = entries[i];
    const std::string& utterance_id = entry.audio_filepath;
    try {
      AugmentPlan plan = draw_plan(policy, utterance_id, sizes);
      augmented[i] = plan.apply ? 1 : 0;

      std::filesystem::path in_path(entry.audio_filepath);
      std::filesystem::path out_path =
          options.out_dir /
          strformat("%06zu_%s.wav", i, in_path.stem().string().c_str());

      ManifestEntry out_entry = entry;
      out_entry.audio_filepath = out_path.string();
      out_entry.offset = -1.0;

      if (!plan.apply && !entry.has_offset()) {
        // Pure passthrough stays byte-identical to the source file.
        std::filesystem::copy_file(
            in_path, out_path,
            std::filesystem::copy_options::overwrite_existing);
        outputs[i] = std::move(out_entry);
        return;
      }

      WavInfo info;
      AudioBuffer buf =
          entry.has_offset()
              ? read_wav_segment(entry.audio_filepath, entry.offset,
                                 entry.duration)
              : read_wav(entry.audio_filepath, &info);
      if (entry.has_offset()) info = probe_wav(entry.audio_filepath);
      buf = resample(buf, kCanonicalRateHz);

      AudioBuffer out = apply_plan(buf, plan, rirs, noise, &options.shim);
      write_wav(out_path, out, info.format);
      out_entry.duration = out.duration_secs();
      outputs[i] = std::move(out_entry);
    } catch (const std::exception& e) {
      failures[i] = EntryError{i, utterance_id, e.what()};
    }
  });

  AugmentResult result;
  result.n_processed = entries.size();
  for (size_t i = 0; i < entries.size(); ++i) {
    if (outputs[i]) {
      result.manifest.push_back(std::move(*outputs[i]));
      if (augmented[i]) ++result.n_augmented;
    } else if (failures[i]) {
      result.errors.push_back(std::move(*failures[i]));
    }
  }
  return result;
}

}  // namespace augforge
