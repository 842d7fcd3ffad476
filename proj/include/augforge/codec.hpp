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

#include <string>
#include <vector>

#include "augforge/audio.hpp"
#include "augforge/rng.hpp"

namespace augforge {

enum class CodecFamily { amr_nb, ogg_vorbis, g711 };

std::string codec_family_to_string(CodecFamily family);
CodecFamily codec_family_from_string(const std::string& s);

// Legal settings per family. AMR-NB: the five modes from 4.75 to 7.4 kbps.
// Vorbis: quality -1 through 4. G.711: companding law.
const std::vector<std::string>& codec_values(CodecFamily family);

// Sample rate the codec consumes; transcode resamples to it and back.
int codec_sample_rate(CodecFamily family);

struct CodecSetting {
  CodecFamily family = CodecFamily::amr_nb;
  std::string value;
};

// Uniform draw from the family's legal value set.
CodecSetting choose_setting(CodecFamily family, Rng& rng);

// External transcoder invocation. The template is expanded with {in}, {out},
// {family}, {value} and run under `sh -c`; {in}/{out} are shell-quoted WAV
// paths inside a per-call temp workspace.
struct CodecShim {
  std::string command_template;
  int timeout_secs = 60;
};

// Throws ConfigError when the template lacks {in}/{out} or its executable
// cannot be found. Called once at startup, not per transcode.
void probe_shim(const CodecShim& shim);

// Round trip: resample to the codec rate, run the shim, read the result,
// resample back to the input rate. Temp files are removed on every path.
AudioBuffer transcode(const AudioBuffer& buf, const CodecSetting& setting,
                      const CodecShim& shim);

}  // namespace augforge
