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

#include "flakylens/embeddings.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <gtest/gtest.h>

#include "flakylens/errors.hpp"
#include "flakylens/io.hpp"
#include "test_support.hpp"

namespace flakylens {
namespace {

EmbeddingTable SampleTable(int dim) {
  EmbeddingTable t;
  t.dim = dim;
  for (int r = 0; r < 3; ++r) {
    t.ids.push_back("p.C#test" + std::to_string(r));
    std::vector<float> row;
    for (int i = 0; i < dim; ++i) row.push_back(static_cast<float>(r) - 0.125f * i);
    t.rows.push_back(std::move(row));
  }
  return t;
}

void ExpectSame(const EmbeddingTable& a, const EmbeddingTable& b) {
  EXPECT_EQ(a.dim, b.dim);
  EXPECT_EQ(a.ids, b.ids);
  EXPECT_EQ(a.rows, b.rows);
}

TEST(EmbeddingsTest, BinaryRoundTripAtEncoderWidth) {
  const EmbeddingTable t = SampleTable(768);
  const std::string bytes = SerializeBinaryEmbeddings(t);
  EXPECT_TRUE(bytes.starts_with("dim=768\n"));
  ExpectSame(ParseBinaryEmbeddings(bytes, 768), t);
}

TEST(EmbeddingsTest, CsvRoundTrip) {
  const EmbeddingTable t = SampleTable(5);
  const std::string text = SerializeCsvEmbeddings(t);
  EXPECT_TRUE(text.starts_with("dim=5\n"));
  ExpectSame(ParseCsvEmbeddings(text), t);
}

TEST(EmbeddingsTest, FileFormatFollowsExtension) {
  testing::TempDir dir;
  const EmbeddingTable t = SampleTable(4);
  WriteEmbeddings(dir / "e.bin", t);
  WriteEmbeddings(dir / "e.csv", t);
  ExpectSame(ReadEmbeddings(dir / "e.bin"), t);
  ExpectSame(ReadEmbeddings(dir / "e.csv", 4), t);
  EXPECT_TRUE(ReadFile(dir / "e.csv").starts_with("dim=4\np.C#test0,"));
  EXPECT_EQ(t.Index().at("p.C#test2"), 2u);
}

TEST(EmbeddingsTest, RejectsMalformedInput) {
  EXPECT_THROW(ParseBinaryEmbeddings("dims=3\n"), FormatError);
  EXPECT_THROW(ParseBinaryEmbeddings("dim=0\n"), FormatError);
  EXPECT_THROW(ParseCsvEmbeddings("dim=2\na,1\n"), MalformedCsvError);
  EXPECT_THROW(ParseCsvEmbeddings("dim=2\na,1,2\na,3,4\n"), FormatError);
  EXPECT_THROW(ParseCsvEmbeddings("dim=2\na,1,nan\n"), Error);
  EXPECT_THROW(ParseCsvEmbeddings("dim=2\na,1,2\n", 768), DimensionMismatchError);

  std::string bytes = SerializeBinaryEmbeddings(SampleTable(3));
  EXPECT_THROW(ParseBinaryEmbeddings(bytes.substr(0, bytes.size() - 2)), FormatError);
  EmbeddingTable inf = SampleTable(2);
  inf.rows[1][0] = std::numeric_limits<float>::infinity();
  EXPECT_THROW(ParseBinaryEmbeddings(SerializeBinaryEmbeddings(inf)), FormatError);
  testing::TempDir dir;
  EXPECT_THROW(ReadEmbeddings(dir / "missing.bin"), IoError);
}

TEST(EmbeddingsTest, EmptyTableKeepsHeader) {
  EmbeddingTable t;
  t.dim = 768;
  EXPECT_EQ(SerializeBinaryEmbeddings(t), "dim=768\n");
  const EmbeddingTable back = ParseBinaryEmbeddings("dim=768\n", 768);
  EXPECT_EQ(back.dim, 768);
  EXPECT_TRUE(back.ids.empty());
}

}  // namespace
}  // namespace flakylens
