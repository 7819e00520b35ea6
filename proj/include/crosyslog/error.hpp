// Copyright 2026 The CroSysLog Authors.
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

#ifndef CROSYSLOG_ERROR_HPP_
#define CROSYSLOG_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace crosyslog {

// Every library failure derives from Error. The three intermediate classes
// map onto the CLI exit codes (config 2, data 3, infeasible sampling 4).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class SamplingError : public Error {
 public:
  using Error::Error;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

// Canonical record missing a required key. line is 1-based.
class SchemaError : public DataError {
 public:
  SchemaError(std::size_t line, const std::string& what)
      : DataError("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class MalformedLine : public DataError {
 public:
  using DataError::DataError;
};

class FormatError : public DataError {
 public:
  using DataError::DataError;
};

class DimMismatch : public DataError {
 public:
  using DataError::DataError;
};

class MissingEmbedding : public DataError {
 public:
  using DataError::DataError;
};

class ShapeMismatch : public DataError {
 public:
  using DataError::DataError;
};

class LengthMismatch : public DataError {
 public:
  using DataError::DataError;
};

class InfeasibleRate : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class InvalidK : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class NoTasks : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace crosyslog

#endif  // CROSYSLOG_ERROR_HPP_
