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

#ifndef EMTK_CLI_HPP
#define EMTK_CLI_HPP

#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>

namespace emtk {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Workspace root from EMTK_WORKSPACE, if set.
std::optional<std::filesystem::path> workspace_root();

/// Absolute paths are returned unchanged. Relative paths resolve against
/// `root` (or the current directory when unset); with a root, a path that
/// climbs above it throws ConfigError.
std::filesystem::path resolve_shared_path(const std::filesystem::path& path,
                                          const std::optional<std::filesystem::path>& root);

/// Runs one command; `args` excludes the program name. Returns the exit code.
int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err);

}  // namespace emtk

#endif  // EMTK_CLI_HPP
