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

#ifndef EMTK_IO_HPP
#define EMTK_IO_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace emtk {

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);
// Strict parse of a whole string; throws FormatError.
double parse_double(std::string_view text);
std::uint64_t parse_uint(std::string_view text);

std::vector<std::string_view> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);
std::string to_lower(std::string_view text);

// Non-empty lines with a trailing '\r' removed; 1-based line numbers kept.
struct NumberedLine {
  std::size_t number;
  std::string_view text;
};
std::vector<NumberedLine> lines_of(std::string_view text);

// 64-bit FNV-1a; stable across platforms, used for fingerprints and seeds.
std::uint64_t fnv1a(std::string_view bytes, std::uint64_t state = 0xcbf29ce484222325ULL);
std::string hex64(std::uint64_t value);

}  // namespace emtk

#endif  // EMTK_IO_HPP
