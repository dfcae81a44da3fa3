/*
 * Copyright 2026 The rrarb Authors
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

namespace rrarb {

/// Invalid configuration values (zero ports, zero time slice, bad
/// workload parameters, ...).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A vector or sequence has the wrong width/length for the context.
class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A trace file violates the CSV schema. Carries the 1-based line
/// number (0 for file-level problems such as an unopenable path).
class TraceParseError : public std::runtime_error {
 public:
  TraceParseError(std::size_t line, const std::string& what)
      : std::runtime_error(
            line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// A gate graph is structurally unusable (combinational cycle).
class GraphStructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A gate-graph evaluation is missing a source assignment.
class GraphInputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rrarb
