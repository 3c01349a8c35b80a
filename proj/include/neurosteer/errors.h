// Copyright 2026 The Neurosteer Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NEUROSTEER_ERRORS_H_
#define NEUROSTEER_ERRORS_H_

#include <stdexcept>
#include <string>

namespace neurosteer {

// Error categories map one-to-one onto the CLI exit codes.
enum class ErrorKind {
  kParameter,  // invalid argument or precondition violation
  kConfig,     // invalid configuration (unknown preset, missing angle, ...)
  kNumerical,  // singular / degenerate numerical input
  kIo,         // file system or format errors
};

int ExitCodeFor(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ParameterError : public Error {
 public:
  explicit ParameterError(const std::string& what)
      : Error(ErrorKind::kParameter, what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what)
      : Error(ErrorKind::kConfig, what) {}
};

// Singular, rank-deficient or otherwise degenerate numerical input.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what)
      : Error(ErrorKind::kNumerical, what) {}
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& what) : Error(ErrorKind::kIo, what) {}
};

inline int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParameter:
    case ErrorKind::kConfig:
      return 2;
    case ErrorKind::kNumerical:
      return 3;
    case ErrorKind::kIo:
      return 4;
  }
  return 1;
}

}  // namespace neurosteer

#endif  // NEUROSTEER_ERRORS_H_
