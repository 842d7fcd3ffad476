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
#include <optional>
#include <string>
#include <vector>

#include "augforge/audio.hpp"
#include "augforge/codec.hpp"
#include "augforge/manifest.hpp"

namespace augforge {

struct SnrInterval {
  double lo = 0.0;
  double hi = 0.0;
};

struct AugmentPolicy {
  double p_aug = 0.0;
  double p_rir = 0.0;
  SnrInterval fg_snr_db{0.0, 30.0};
  SnrInterval bg_snr_db{10.0, 40.0};
  double codec_p_aug = 0.0;
  std::vector<CodecFamily> codec_families;  // kept sorted and unique
  uint64_t seed = 0;
};

// Probabilities in [0,1], interval lo <= hi, families present whenever
// codec_p_aug > 0. Throws ConfigError.
void validate_policy(const AugmentPolicy& policy);

// Shipped presets: "qn-en-nr" and "qn-mn-nr".
AugmentPolicy policy_preset(const std::string& name);
std::vector<std::string> policy_preset_names();

std::string policy_to_json(const AugmentPolicy& policy);
AugmentPolicy policy_from_json(const std::string& json_text);
AugmentPolicy load_policy(const std::filesystem::path& path);
void save_policy(const std::filesystem::path& path,
                 const AugmentPolicy& policy);

struct FgPlan {
  size_t noise_index = 0;
  double snr_db = 0.0;
  uint64_t offset_seed = 0;  // seeds the placement draw inside mix_noise
};

struct BgPlan {
  size_t noise_index = 0;
  double snr_db = 0.0;
  uint64_t phase_seed = 0;  // seeds the start-phase draw inside mix_noise
};

struct AugmentPlan {
  bool apply = false;
  bool use_rir = false;
  std::optional<size_t> rir_index;
  std::optional<FgPlan> fg;
  std::optional<BgPlan> bg;
  std::optional<CodecSetting> codec;
};

struct CorporaSizes {
  size_t n_rirs = 0;
  size_t n_noise = 0;
};

// Pure function of (policy.seed, utterance_id, sizes): the per-utterance RNG
// is seeded by hashing the two, so manifest order and worker count cannot
// change any plan. Throws ConfigError when a fired stage has no corpus.
AugmentPlan draw_plan(const AugmentPolicy& policy,
                      const std::string& utterance_id, CorporaSizes sizes);

// Lazily-loading view over a noise manifest; load() reads the entry's
// segment and resamples it to target_rate.
class NoiseCorpus {
 public:
  explicit NoiseCorpus(const std::filesystem::path& manifest_path);
  explicit NoiseCorpus(std::vector<ManifestEntry> entries);

  size_t size() const { return entries_.size(); }
  const ManifestEntry& entry(size_t index) const { return entries_.at(index); }
  AudioBuffer load(size_t index, int target_rate = kCanonicalRateHz) const;

  std::vector<std::string> types() const;
  NoiseCorpus filter_type(const std::string& type) const;

 private:
  std::vector<ManifestEntry> entries_;
};

class RirCorpus {
 public:
  explicit RirCorpus(const std::filesystem::path& manifest_path);
  explicit RirCorpus(std::vector<ManifestEntry> entries);

  size_t size() const { return entries_.size(); }
  const ManifestEntry& entry(size_t index) const { return entries_.at(index); }
  RirBuffer load(size_t index, int target_rate = kCanonicalRateHz) const;

 private:
  std::vector<ManifestEntry> entries_;
};

// Applies the plan's stages in order: RIR, foreground mix, background mix,
// codec. Each SNR is measured against the signal as it stands after the
// previous stage. A non-applying plan returns the input unchanged.
AudioBuffer apply_plan(const AudioBuffer& speech, const AugmentPlan& plan,
                       const RirCorpus* rirs, const NoiseCorpus* noise,
                       const CodecShim* shim);

struct AugmentOptions {
  std::filesystem::path out_dir;
  int workers = 1;
  double max_error_fraction = 0.0;
  CodecShim shim;  // empty command_template means no shim configured
};

struct EntryError {
  size_t index = 0;
  std::string utterance_id;
  std::string message;
};

struct AugmentResult {
  std::vector<ManifestEntry> manifest;  // input order, failed entries dropped
  size_t n_processed = 0;
  size_t n_augmented = 0;
  std::vector<EntryError> errors;
};

// Batch driver: one output WAV per entry under options.out_dir, named
// {index:06}_{input stem}.wav. Entries whose plan does not apply are copied
// byte-for-byte. Per-entry failures land in the error list; callers decide
// whether the error fraction is fatal.
AugmentResult augment_manifest(const std::vector<ManifestEntry>& entries,
                               const AugmentPolicy& policy,
                               const RirCorpus* rirs, const NoiseCorpus* noise,
                               const AugmentOptions& options);

}  // namespace augforge
