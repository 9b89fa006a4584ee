// Copyright 2026 The mecafuse Authors
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

#ifndef MECAFUSE_ERRORS_H_
#define MECAFUSE_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace mecafuse {

// Base for every error raised by the library. Callers that only need to
// distinguish "bad input" from "runtime failure" can catch the two
// intermediate classes below.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied something outside an operation's domain.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

// A configuration value failed validation. `field` names the offending key.
class ConfigError : public InvalidInput {
 public:
  ConfigError(std::string field, const std::string& message)
      : InvalidInput(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// A row of a recorded log could not be parsed. Rows are 1-based and count
// the header line as row 1.
class ParseError : public InvalidInput {
 public:
  ParseError(std::size_t row, const std::string& message)
      : InvalidInput("row " + std::to_string(row) + ": " + message),
        row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// Events handed to the filter were not sorted by timestamp.
class StreamOrderError : public InvalidInput {
 public:
  StreamOrderError(std::size_t index, const std::string& message)
      : InvalidInput("event " + std::to_string(index) + ": " + message),
        index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// A query fell outside the time span covered by a reference series.
class OutOfRange : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// Covariance lost symmetry or positive definiteness.
class ConsistencyError : public Error {
 public:
  ConsistencyError(const std::string& message, double eigenvalue)
      : Error(message), eigenvalue_(eigenvalue) {}
  double eigenvalue() const { return eigenvalue_; }

 private:
  double eigenvalue_;
};

// The innovation covariance was too ill-conditioned to invert. The caller
// keeps its prior state.
class UpdateRejected : public Error {
 public:
  UpdateRejected(const std::string& message, double condition)
      : Error(message), condition_(condition) {}
  double condition() const { return condition_; }

 private:
  double condition_;
};

// Trilateration did not converge.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& message, double residual)
      : Error(message), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

}  // namespace mecafuse

#endif  // MECAFUSE_ERRORS_H_
