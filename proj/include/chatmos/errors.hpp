// Copyright 2026 The chatmos Authors.
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

#ifndef CHATMOS_ERRORS_HPP_
#define CHATMOS_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace chatmos {

/// Base class for all chatmos errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid or inconsistent configuration (bad config file, bad checkpoint
/// header, invariant violations in loaded data).
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Malformed CSV input or an I/O failure while reading/writing CSV files.
class CsvError : public Error {
 public:
  explicit CsvError(const std::string& what) : Error(what) {}
};

/// Embedding or scoring backend unavailable / returned an invalid response.
class ProviderError : public Error {
 public:
  explicit ProviderError(const std::string& what) : Error(what) {}
};

/// Backend response contained no usable integer.
class ScoreParseError : public Error {
 public:
  explicit ScoreParseError(const std::string& what) : Error(what) {}
};

/// Backend response contained an integer outside {-1, 1..5}.
class ScoreRangeError : public Error {
 public:
  explicit ScoreRangeError(const std::string& what) : Error(what) {}
};

/// A pipeline stage failed; the message names the stage.
class PipelineError : public Error {
 public:
  explicit PipelineError(const std::string& what) : Error(what) {}
};

}  // namespace chatmos

#endif  // CHATMOS_ERRORS_HPP_
