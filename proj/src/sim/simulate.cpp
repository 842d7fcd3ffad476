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

#include "augforge/simulate.hpp"

#include <cmath>

#include "augforge/error.hpp"
#include "augforge/parallel.hpp"
#include "augforge/rng.hpp"
#include "augforge/wav.hpp"

namespace augforge {
namespace {

std::string cell_stem(const std::string& type, double snr, int iteration) {
  return strformat("%s_snr%g_iter%d", type.c_str(), snr, iteration);
}

}  // namespace

SimSummary simulate(const std::vector<ManifestEntry>& testset,
                    const NoiseCorpus& noise, const SimPlan& plan,
                    const std::filesystem::path& out_dir, int workers) {
  if (plan.snr_list_db.empty()) throw InvalidArgument("empty SNR list");
  if (plan.noise_types.empty()) throw InvalidArgument("empty noise type list");
  if (plan.iterations < 1) throw InvalidArgument("iterations must be >= 1");

  std::vector<NoiseCorpus> partitions;
  partitions.reserve(plan.noise_types.size());
  for (const auto& type : plan.noise_types) {
    NoiseCorpus part = noise.filter_type(type);
    if (part.size() == 0)
      throw ConfigError("noise corpus has no entries of type: " + type);
    partitions.push_back(std::move(part));
  }

  int rate = plan.narrowband ? 8000 : kCanonicalRateHz;
  std::filesystem::create_directories(out_dir);

  struct Cell {
    double snr;
    size_t type_index;
    int iteration;
    std::string stem;
  };
  std::vector<Cell> cells;
  for (double snr : plan.snr_list_db)
    for (size_t t = 0; t < plan.noise_types.size(); ++t)
      for (int k = 1; k <= plan.iterations; ++k)
        cells.push_back({snr, t, k, cell_stem(plan.noise_types[t], snr, k)});

  for (const auto& cell : cells)
    std::filesystem::create_directories(out_dir / cell.stem);

  size_t n_utts = testset.size();
  std::vector<std::vector<ManifestEntry>> cell_manifests(
      cells.size(), std::vector<ManifestEntry>(n_utts));

  parallel_for(cells.size() * n_utts, workers, [&](size_t job) {
    const Cell& cell = cells[job / n_utts];
    size_t u = job % n_utts;
    const ManifestEntry& entry = testset[u];
    const NoiseCorpus& part = partitions[cell.type_index];

    Rng rng(Hash64(plan.seed)
                .add(cell.snr)
                .add(plan.noise_types[cell.type_index])
                .add(static_cast<uint64_t>(cell.iteration))
                .add(entry.audio_filepath)
                .digest());

    AudioBuffer speech = resample(read_wav(entry.audio_filepath), rate);
    size_t noise_index = rng.uniform_index(part.size());
    AudioBuffer noisy = mix_noise(speech, part.load(noise_index, rate),
                                  cell.snr, NoiseMode::background, rng);

    std::filesystem::path out_path =
        out_dir / cell.stem /
        strformat("%06zu_%s.wav", u,
                  std::filesystem::path(entry.audio_filepath)
                      .stem()
                      .string()
                      .c_str());
    write_wav(out_path, noisy, WavFormat::pcm16);

    ManifestEntry out = entry;
    out.audio_filepath = out_path.string();
    out.duration = noisy.duration_secs();
    out.offset = -1.0;
    out.type.clear();
    cell_manifests[job / n_utts][u] = std::move(out);
  });

  SimSummary summary;
  summary.n_utterances = n_utts;
  for (size_t c = 0; c < cells.size(); ++c) {
    std::filesystem::path manifest_path = out_dir / (cells[c].stem + ".jsonl");
    write_manifest(manifest_path, cell_manifests[c]);
    summary.manifests.push_back(manifest_path);
  }
  return summary;
}

}  // namespace augforge
