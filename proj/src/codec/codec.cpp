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

#include "augforge/codec.hpp"

#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "augforge/error.hpp"
#include "augforge/wav.hpp"

namespace augforge {
namespace {

namespace fs = std::filesystem;

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  out += "'";
  return out;
}

std::string replace_all(std::string text, const std::string& from,
                        const std::string& to) {
  size_t pos = 0;
  while ((pos = text.find(from, pos)) != std::string::npos) {
    text.replace(pos, from.size(), to);
    pos += to.size();
  }
  return text;
}

// Per-call workspace under AUGFORGE_TMPDIR (or the system temp dir),
// removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<uint64_t> counter{0};
    const char* base_env = std::getenv("AUGFORGE_TMPDIR");
    fs::path base = base_env && *base_env ? fs::path(base_env)
                                          : fs::temp_directory_path();
    fs::create_directories(base);
    path_ = base / strformat("augforge-%d-%llu", static_cast<int>(getpid()),
                             static_cast<unsigned long long>(
                                 counter.fetch_add(1)));
    fs::create_directory(path_);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string read_tail(const fs::path& file, size_t max_bytes = 2000) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return "";
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string all = ss.str();
  if (all.size() > max_bytes) all = "..." + all.substr(all.size() - max_bytes);
  while (!all.empty() && (all.back() == '\n' || all.back() == '\r'))
    all.pop_back();
  return all;
}

// Runs `sh -c command` with stderr captured; throws TranscodeError on
// nonzero exit or timeout.
void run_command(const std::string& command, int timeout_secs,
                 const fs::path& stderr_file) {
  pid_t pid = fork();
  if (pid < 0) throw TranscodeError("fork failed");
  if (pid == 0) {
    // Own process group, so a timeout kill reaches the shell's children too.
    setpgid(0, 0);
    FILE* err = std::freopen(stderr_file.c_str(), "w", stderr);
    (void)err;
    execl("/bin/sh", "sh", "-c", command.c_str(), nullptr);
    _exit(127);
  }
  setpgid(pid, pid);  // mirror the child; whichever call runs first wins

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::seconds(timeout_secs);
  int status = 0;
  for (;;) {
    pid_t done = waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0) throw TranscodeError("waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      kill(-pid, SIGKILL);
      waitpid(pid, &status, 0);
      throw TranscodeError(strformat("shim timed out after %d s: %s",
                                     timeout_secs, command.c_str()));
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::string tail = read_tail(stderr_file);
    throw TranscodeError(strformat("shim exited with %d: %s%s%s", code,
                                   command.c_str(), tail.empty() ? "" : "\n",
                                   tail.c_str()));
  }
}

std::string shim_executable(const std::string& command_template) {
  size_t start = command_template.find_first_not_of(" \t");
  if (start == std::string::npos) return "";
  size_t end = command_template.find_first_of(" \t", start);
  return command_template.substr(start, end == std::string::npos
                                            ? std::string::npos
                                            : end - start);
}

bool on_path(const std::string& exe) {
  if (exe.find('/') != std::string::npos)
    return access(exe.c_str(), X_OK) == 0;
  const char* path_env = std::getenv("PATH");
  if (!path_env) return false;
  std::istringstream dirs(path_env);
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) continue;
    if (access((fs::path(dir) / exe).c_str(), X_OK) == 0) return true;
  }
  return false;
}

}  // namespace

std::string codec_family_to_string(CodecFamily family) {
  switch (family) {
    case CodecFamily::amr_nb:
      return "amr-nb";
    case CodecFamily::ogg_vorbis:
      return "ogg-vorbis";
    case CodecFamily::g711:
      return "g711";
  }
  throw InvalidArgument("bad codec family");
}

CodecFamily codec_family_from_string(const std::string& s) {
  if (s == "amr-nb" || s == "amr_nb") return CodecFamily::amr_nb;
  if (s == "ogg-vorbis" || s == "ogg_vorbis") return CodecFamily::ogg_vorbis;
  if (s == "g711") return CodecFamily::g711;
  throw InvalidArgument("unknown codec family: " + s);
}

const std::vector<std::string>& codec_values(CodecFamily family) {
  static const std::vector<std::string> amr = {"4.75", "5.15", "5.90", "6.70",
                                               "7.40"};
  static const std::vector<std::string> vorbis = {"-1", "0", "1", "2", "3",
                                                  "4"};
  static const std::vector<std::string> g711 = {"a-law", "u-law"};
  switch (family) {
    case CodecFamily::amr_nb:
      return amr;
    case CodecFamily::ogg_vorbis:
      return vorbis;
    case CodecFamily::g711:
      return g711;
  }
  throw InvalidArgument("bad codec family");
}

int codec_sample_rate(CodecFamily family) {
  return family == CodecFamily::ogg_vorbis ? 16000 : 8000;
}

CodecSetting choose_setting(CodecFamily family, Rng& rng) {
  const auto& values = codec_values(family);
  CodecSetting setting;
  setting.family = family;
  setting.value = values[rng.uniform_index(values.size())];
  return setting;
}

void probe_shim(const CodecShim& shim) {
  if (shim.command_template.find("{in}") == std::string::npos ||
      shim.command_template.find("{out}") == std::string::npos)
    throw ConfigError("shim template must contain {in} and {out}: " +
                      shim.command_template);
  if (shim.timeout_secs <= 0)
    throw ConfigError("shim timeout must be positive");
  std::string exe = shim_executable(shim.command_template);
  if (exe.empty()) throw ConfigError("empty shim template");
  if (!on_path(exe))
    throw ConfigError("shim executable not found: " + exe);
}

AudioBuffer transcode(const AudioBuffer& buf, const CodecSetting& setting,
                      const CodecShim& shim) {
  int work_rate = codec_sample_rate(setting.family);
  AudioBuffer work = resample(buf, work_rate);

  TempDir dir;
  fs::path in_wav = dir.path() / "in.wav";
  fs::path out_wav = dir.path() / "out.wav";
  fs::path err_file = dir.path() / "stderr.txt";
  write_wav(in_wav, work, WavFormat::pcm16);

  std::string command = shim.command_template;
  command = replace_all(command, "{in}", shell_quote(in_wav.string()));
  command = replace_all(command, "{out}", shell_quote(out_wav.string()));
  command = replace_all(command, "{family}",
                        codec_family_to_string(setting.family));
  command = replace_all(command, "{value}", setting.value);

  run_command(command, shim.timeout_secs, err_file);

  if (!fs::exists(out_wav))
    throw TranscodeError("shim produced no output: " + command);
  AudioBuffer decoded = read_wav(out_wav);
  return resample(decoded, buf.sample_rate_hz);
}

}  // namespace augforge
