// Copyright 2026 The Flaky Lens Authors
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

// Embedding files: one vector per test id.
//
// Binary layout: the ASCII header "dim=<d>\n", then per row the test id,
// a '\n', and d little-endian IEEE-754 float32 values. The CSV variant
// (chosen by a ".csv" extension) has a "dim=<d>" first line and then
// "test_id,v1,...,vd" rows.

#ifndef FLAKYLENS_EMBEDDINGS_HPP_
#define FLAKYLENS_EMBEDDINGS_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace flakylens {

struct EmbeddingTable {
  int dim = 0;
  std::vector<std::string> ids;
  std::vector<std::vector<float>> rows;

  // Row index per id.
  std::map<std::string, std::size_t> Index() const;
};

// Throws FormatError on a bad header, short row, duplicate id or
// non-finite value, and DimensionMismatchError when `expected_dim` > 0 and
// differs from the header.
EmbeddingTable ReadEmbeddings(const std::filesystem::path& path,
                              int expected_dim = 0);
EmbeddingTable ParseBinaryEmbeddings(std::string_view data,
                                     int expected_dim = 0);
EmbeddingTable ParseCsvEmbeddings(std::string_view text, int expected_dim = 0);

std::string SerializeBinaryEmbeddings(const EmbeddingTable& table);
std::string SerializeCsvEmbeddings(const EmbeddingTable& table);
void WriteEmbeddings(const std::filesystem::path& path,
                     const EmbeddingTable& table);

}  // namespace flakylens

#endif  // FLAKYLENS_EMBEDDINGS_HPP_
