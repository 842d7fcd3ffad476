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
#include <vector>

#include "augforge/augment.hpp"
#include "augforge/manifest.hpp"

namespace augforge {

struct SimPlan {
  std::vector<double> snr_list_db;
  std::vector<std::string> noise_types;
  int iterations = 5;
  bool narrowband = false;
  uint64_t seed = 0;
};

struct SimSummary {
  std::vector<std::filesystem::path> manifests;
  size_t n_utterances = 0;  // per generated set
};

// Builds one noisy copy of the test set per (snr, type, iteration) cell:
// background-mode mixing at exactly the cell's SNR, noise drawn from the
// type's partition, RNG keyed by (seed, snr, type, iteration, utterance id).
// narrowband runs the whole cell at 8 kHz. Each cell writes
// {type}_snr{snr}_iter{k}.jsonl plus a directory of WAVs with k counting
// from 1. Missing noise types fail before anything is written.
SimSummary simulate(const std::vector<ManifestEntry>& testset,
                    const NoiseCorpus& noise, const SimPlan& plan,
                    const std::filesystem::path& out_dir, int workers);

}  // namespace augforge
