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

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

#include <fmt/format.h>

#include "emtk/error.hpp"
#include "emtk/features.hpp"
#include "emtk/io.hpp"

namespace emtk {

namespace {

constexpr std::string_view kMagic = "EMTK-DSM1";

struct SparseIndex {
  std::vector<std::uint32_t> positions;
  std::vector<double> signs;
};

SparseIndex sparse_index(std::string_view word, std::size_t dim, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(fnv1a(word)), static_cast<std::uint32_t>(fnv1a(word) >> 32),
                    static_cast<std::uint32_t>(dim)};
  std::mt19937_64 rng(seq);
  const std::size_t nnz = std::min(dim, kIndexNonZeros);
  SparseIndex index;
  while (index.positions.size() < nnz) {
    auto pos = static_cast<std::uint32_t>(rng() % dim);
    if (std::find(index.positions.begin(), index.positions.end(), pos) != index.positions.end()) continue;
    index.positions.push_back(pos);
    index.signs.push_back(index.positions.size() <= (nnz + 1) / 2 ? 1.0 : -1.0);
  }
  return index;
}

}  // namespace

WordSpace::WordSpace(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw std::invalid_argument("word space dimension must be positive");
}

void WordSpace::add(std::string word, std::span<const double> vector) {
  if (vector.size() != dim_) {
    throw std::invalid_argument(fmt::format("vector for '{}' has {} values, expected {}", word,
                                            vector.size(), dim_));
  }
  if (word.empty() || word.find_first_of("\t\n\r ") != std::string::npos) {
    throw std::invalid_argument("word space entries must be non-empty and whitespace-free");
  }
  if (!index_.emplace(word, words_.size()).second) {
    throw std::invalid_argument("duplicate word in word space: " + word);
  }
  words_.push_back(std::move(word));
  data_.insert(data_.end(), vector.begin(), vector.end());
}

std::optional<std::span<const double>> WordSpace::find(std::string_view word) const {
  auto it = index_.find(std::string(word));
  if (it == index_.end()) return std::nullopt;
  return vector_at(it->second);
}

std::string save_wordspace(const WordSpace& space) {
  std::string out = fmt::format("{} {} {}\n", kMagic, space.size(), space.dim());
  for (std::size_t i = 0; i < space.size(); ++i) {
    out += space.words()[i];
    for (double v : space.vector_at(i)) {
      out.push_back('\t');
      out += format_double(v);
    }
    out.push_back('\n');
  }
  return out;
}

WordSpace load_wordspace(std::string_view bytes) {
  std::vector<NumberedLine> lines = lines_of(bytes);
  if (lines.empty()) throw FormatError("empty word space file");
  auto header = split(lines.front().text, ' ');
  if (header.size() != 3 || header[0] != kMagic) {
    throw FormatError(fmt::format("bad word space header; expected '{} <count> <dim>'", kMagic), 1);
  }
  const std::uint64_t count = parse_uint(header[1]);
  const std::uint64_t dim = parse_uint(header[2]);
  if (dim == 0) throw FormatError("word space dimension must be positive", 1);
  if (lines.size() - 1 < count) {
    throw FormatError(fmt::format("truncated word space: header declares {} words, found {}", count,
                                  lines.size() - 1));
  }
  if (lines.size() - 1 > count) {
    throw FormatError(fmt::format("header declares {} words but more records follow", count),
                      lines[count + 1].number);
  }
  WordSpace space(dim);
  std::vector<double> values;
  for (std::size_t r = 1; r < lines.size(); ++r) {
    auto fields = split(lines[r].text, '\t');
    if (fields.size() - 1 != dim) {
      throw FormatError(fmt::format("record has {} values, expected {}", fields.size() - 1, dim),
                        lines[r].number);
    }
    values.clear();
    for (std::size_t k = 1; k < fields.size(); ++k) values.push_back(parse_double(fields[k]));
    try {
      space.add(std::string(fields[0]), values);
    } catch (const std::invalid_argument& e) {
      throw FormatError(e.what(), lines[r].number);
    }
  }
  return space;
}

std::vector<double> index_vector(std::string_view word, std::size_t dim, std::uint64_t seed) {
  if (dim == 0) throw std::invalid_argument("dimension must be positive");
  SparseIndex index = sparse_index(word, dim, seed);
  std::vector<double> dense(dim, 0.0);
  for (std::size_t k = 0; k < index.positions.size(); ++k) dense[index.positions[k]] = index.signs[k];
  return dense;
}

WordSpace build_wordspace(std::span<const Document> corpus, std::size_t dim, std::size_t window,
                          std::uint64_t seed) {
  if (corpus.empty()) throw DataError("cannot build a word space from an empty corpus");
  if (dim == 0) throw std::invalid_argument("dimension must be positive");

  std::vector<std::vector<std::string>> docs;
  docs.reserve(corpus.size());
  std::map<std::string, std::size_t> vocab;
  for (const Document& doc : corpus) {
    std::vector<std::string> words;
    for (Token& t : tokenize(doc.text)) words.push_back(std::move(t.surface));
    for (const auto& w : words) vocab.emplace(w, 0);
    docs.push_back(std::move(words));
  }
  std::vector<SparseIndex> indices;
  indices.reserve(vocab.size());
  std::size_t next = 0;
  for (auto& [word, id] : vocab) {
    id = next++;
    indices.push_back(sparse_index(word, dim, seed));
  }

  std::vector<double> sums(vocab.size() * dim, 0.0);
  for (const auto& words : docs) {
    std::vector<std::size_t> ids;
    ids.reserve(words.size());
    for (const auto& w : words) ids.push_back(vocab.at(w));
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const std::size_t lo = i >= window ? i - window : 0;
      const std::size_t hi = std::min(ids.size() - 1, i + window);
      double* target = sums.data() + ids[i] * dim;
      for (std::size_t j = lo; j <= hi; ++j) {
        if (j == i) continue;
        const SparseIndex& neighbor = indices[ids[j]];
        for (std::size_t k = 0; k < neighbor.positions.size(); ++k) {
          target[neighbor.positions[k]] += neighbor.signs[k];
        }
      }
    }
  }

  WordSpace space(dim);
  for (const auto& [word, id] : vocab) {
    space.add(word, std::span<const double>(sums.data() + id * dim, dim));
  }
  return space;
}

std::vector<double> document_vector(std::span<const Token> tokens, const WordSpace& space) {
  std::vector<double> mean(space.dim(), 0.0);
  std::size_t hits = 0;
  for (const Token& t : tokens) {
    auto v = space.find(t.surface);
    if (!v) continue;
    ++hits;
    for (std::size_t i = 0; i < mean.size(); ++i) mean[i] += (*v)[i];
  }
  if (hits > 0) {
    for (double& x : mean) x /= static_cast<double>(hits);
  }
  return mean;
}

FeatureVector semantic_features(std::span<const Token> tokens, const WordSpace& space) {
  std::vector<double> v = document_vector(tokens, space);
  FeatureVector out;
  for (std::size_t i = 0; i < v.size(); ++i) out.set(fmt::format("sem:{}", i), v[i]);
  return out;
}

}  // namespace emtk
