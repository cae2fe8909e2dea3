// Copyright 2026 The nasg Authors
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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nasg {

/// Failure categories shared by the C++ core and the C API status codes.
enum class ErrorCode {
  kInvalidArgument = 1,
  kParse = 2,
  kIo = 3,
  kDiverged = 4,
  kNotConverged = 5,
  kPrecondition = 6,
  kInternal = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string& msg)
      : Error(ErrorCode::kInvalidArgument, msg) {}
};

/// Malformed LIBSVM input. `line()` is 1-based, 0 when the error is not
/// tied to a line (e.g. empty input).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& msg)
      : Error(ErrorCode::kParse,
              line == 0 ? msg : msg + " at line " + std::to_string(line)),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& msg) : Error(ErrorCode::kIo, msg) {}
};

/// An iterate became NaN/Inf. `epoch()` is the epoch in which it happened.
class DivergenceError : public Error {
 public:
  explicit DivergenceError(int epoch)
      : Error(ErrorCode::kDiverged,
              "non-finite iterate in epoch " + std::to_string(epoch)),
        epoch_(epoch) {}

  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

class ConvergenceError : public Error {
 public:
  explicit ConvergenceError(const std::string& msg)
      : Error(ErrorCode::kNotConverged, msg) {}
};

/// A documented hypothesis of a schedule, lemma or bound does not hold.
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& msg)
      : Error(ErrorCode::kPrecondition, msg) {}
};

}  // namespace nasg
