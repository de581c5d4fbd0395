// Copyright 2026 The lindstat Authors
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

#include <stdexcept>
#include <string>

namespace lindstat {

// Numeric codes are shared with the C API (lindstat.h).
enum class ErrorCode : int {
  kArgument = 1,
  kConfig = 2,
  kConvergence = 3,
  kDegeneracy = 4,
  kSampleSize = 5,
  kEmptySpectrum = 6,
  kPartialResult = 7,
  kCatalog = 8,
  kIo = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

struct ArgumentError : Error {
  explicit ArgumentError(const std::string& w) : Error(ErrorCode::kArgument, w) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorCode::kConfig, w) {}
};

struct ConvergenceError : Error {
  ConvergenceError(const std::string& w, double best_residual)
      : Error(ErrorCode::kConvergence, w), best_residual(best_residual) {}
  double best_residual;
};

struct DegeneracyError : Error {
  explicit DegeneracyError(const std::string& w) : Error(ErrorCode::kDegeneracy, w) {}
};

struct SampleSizeError : Error {
  explicit SampleSizeError(const std::string& w) : Error(ErrorCode::kSampleSize, w) {}
};

struct EmptySpectrumError : Error {
  explicit EmptySpectrumError(const std::string& w)
      : Error(ErrorCode::kEmptySpectrum, w) {}
};

struct CatalogError : Error {
  explicit CatalogError(const std::string& w) : Error(ErrorCode::kCatalog, w) {}
};

struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorCode::kIo, w) {}
};

}  // namespace lindstat
