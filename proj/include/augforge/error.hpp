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

#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace augforge {

/// Root of the augforge error hierarchy. Everything thrown by the library
/// derives from this (or from std::invalid_argument via InvalidArgument).
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

/// Signal has zero RMS where a non-silent signal is required.
class SilentSignalError : public Error {
 public:
  explicit SilentSignalError(const std::string& msg) : Error(msg) {}
};

/// Noise has zero RMS where a non-silent noise is required.
class SilentNoiseError : public Error {
 public:
  explicit SilentNoiseError(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

/// Bad run configuration (empty corpus, missing executable, invalid preset).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// External transcoder failed (nonzero exit, timeout, unreadable output).
class TranscodeError : public Error {
 public:
  explicit TranscodeError(const std::string& msg) : Error(msg) {}
};

/// Malformed manifest or hypothesis line; carries the 1-based line number.
class ParseError : public Error {
 public:
  ParseError(size_t line_no, const std::string& msg)
      : Error("line " + std::to_string(line_no) + ": " + msg),
        line_no_(line_no) {}
  size_t line_no() const { return line_no_; }

 private:
  size_t line_no_;
};

/// Input audio shorter than one analysis window.
class TooShortError : public Error {
 public:
  explicit TooShortError(const std::string& msg) : Error(msg) {}
};

class ScoringError : public Error {
 public:
  explicit ScoringError(const std::string& msg) : Error(msg) {}
};

/// printf-style formatting into std::string.
inline std::string strformat(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  va_list copy;
  va_copy(copy, args);
  int n = std::vsnprintf(nullptr, 0, fmt, copy);
  va_end(copy);
  std::string out;
  if (n > 0) {
    out.resize(static_cast<size_t>(n));
    std::vsnprintf(out.data(), out.size() + 1, fmt, args);
  }
  va_end(args);
  return out;
}

}  // namespace augforge
