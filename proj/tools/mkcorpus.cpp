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

#include <iostream>

#include "CLI11.hpp"
#include "minicorpus.hpp"

// Generates the synthetic demo corpus used by the README walkthrough.
int main(int argc, char** argv) {
  CLI::App app{"Generate a small deterministic demo corpus"};
  std::string out_dir;
  augforge::demo::MiniCorpusSpec spec;
  app.add_option("--out", out_dir, "Corpus root directory")->required();
  app.add_option("--n-utts", spec.n_utts, "Utterance count");
  app.add_option("--utt-secs", spec.utt_secs, "Utterance length");
  app.add_option("--noise-secs", spec.noise_secs, "Noise file length");
  app.add_option("--n-rirs", spec.n_rirs, "Impulse response count");
  app.add_option("--seed", spec.seed, "RNG seed");
  CLI11_PARSE(app, argc, argv);

  try {
    auto corpus = augforge::demo::make_mini_corpus(out_dir, spec);
    std::cout << "mkcorpus: " << spec.n_utts << " utterances, "
              << augforge::strformat("%.1f", corpus.total_audio_secs)
              << " s of audio -> " << out_dir << "\n";
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
