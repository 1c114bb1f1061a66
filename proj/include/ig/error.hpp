/*
 * Copyright 2026 The insightgraph Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ig {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text: CSV, JSON, expressions, dates.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::size_t offset = npos)
      : Error(offset == npos ? what : what + " (at byte " + std::to_string(offset) + ")"),
        offset_(offset) {}

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// File system failures.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Schema and type-checking failures: unknown attributes, type mismatches,
/// aggregate misuse, wildcards where a concrete value is required.
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A transform or model spec still contains wildcards: it describes an
/// objective, not an executable analysis.
class NotExecutableError : public SchemaError {
 public:
  using SchemaError::SchemaError;
};

/// Knowledge-graph rule violations: duplicate names, dangling references,
/// self-edges, cycles.
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Relationship-model failures: untrained use, degenerate training sets.
class ModelError : public Error {
 public:
  using Error::Error;
};

}  // namespace ig
