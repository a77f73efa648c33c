// Copyright 2026 The emtk Authors
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

#ifndef EMTK_ERROR_HPP
#define EMTK_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace emtk {

/// Malformed input file. `line` is 1-based, 0 when not tied to a line.
class FormatError : public std::runtime_error {
 public:
  explicit FormatError(const std::string& what, std::size_t line = 0)
      : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Inconsistent or missing resources for the requested operation.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Precondition on data violated (empty corpus, missing class, ...).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double final_objective)
      : std::runtime_error(what), final_objective_(final_objective) {}

  double final_objective() const noexcept { return final_objective_; }

 private:
  double final_objective_;
};

}  // namespace emtk

#endif  // EMTK_ERROR_HPP
