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

#include "flakylens/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "flakylens/csv.hpp"
#include "flakylens/embeddings.hpp"
#include "flakylens/errors.hpp"
#include "flakylens/ingestion.hpp"
#include "flakylens/io.hpp"
#include "test_support.hpp"

namespace flakylens {
namespace {

LoadResult Synthetic() {
  return LoadCorpus(testing::DataPath("synthetic/index.csv"), testing::DataPath("synthetic"),
                    CorpusFormat::kFlakeFlagger);
}

std::size_t CountLines(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  std::string line;
  while (std::getline(in, line)) ++n;
  return n;
}

TEST(PipelineTest, ProcessRecordMatchesStages) {
  const LoadResult corpus = Synthetic();
  PipelineOptions options;
  options.mode = PreprocessMode::kAll;
  const CorpusRecord& rec = corpus.records.front();
  const ProcessedTest p = ProcessRecord(rec, testing::TestVocab(), options);
  EXPECT_TRUE(p.preprocessed.reduced);
  EXPECT_EQ(p.preprocessed.test_id, rec.test_id);
  EXPECT_EQ(p.encoded.input_ids.size(), static_cast<std::size_t>(kDefaultMaxLen));
  const auto expected = Encode(Tokenize(p.preprocessed.text, testing::TestVocab()),
                               testing::TestVocab());
  EXPECT_EQ(p.encoded.input_ids, expected.input_ids);
  EXPECT_EQ(p.stats.original_tokens,
            static_cast<int>(CountTokens(rec.source_text, testing::TestVocab())));
  for (const auto& a : p.smells) {
    EXPECT_TRUE(p.features.smell_flags[static_cast<std::size_t>(a.kind)]);
  }
  CorpusRecord broken = rec;
  broken.unit.reset();
  EXPECT_THROW(ContextFor(broken), InvalidArgumentError);
}

TEST(PipelineTest, ParallelProcessingIsOrderStable) {
  const LoadResult corpus = Synthetic();
  PipelineOptions serial;
  PipelineOptions parallel;
  parallel.jobs = 4;
  const auto a = ProcessCorpus(corpus.records, testing::TestVocab(), serial);
  const auto b = ProcessCorpus(corpus.records, testing::TestVocab(), parallel);
  ASSERT_EQ(a.size(), corpus.records.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].preprocessed.text, b[i].preprocessed.text);
    EXPECT_EQ(a[i].encoded.input_ids, b[i].encoded.input_ids);
    EXPECT_EQ(a[i].smells, b[i].smells);
  }
}

TEST(PipelineTest, EmbeddingSources) {
  EXPECT_FALSE(ParseEmbeddingSource("fallback")->file.has_value());
  EXPECT_EQ(ParseEmbeddingSource("file:/tmp/e.bin")->file, "/tmp/e.bin");
  EXPECT_FALSE(ParseEmbeddingSource("file:").has_value());
  EXPECT_FALSE(ParseEmbeddingSource("bert").has_value());

  const LoadResult corpus = Synthetic();
  std::vector<CorpusRecord> records(corpus.records.begin(), corpus.records.begin() + 3);
  const auto processed = ProcessCorpus(records, testing::TestVocab(), {});
  const auto fallback = BuildInputs(records, processed, EmbeddingSource{});
  ASSERT_EQ(fallback.size(), 3u);
  EXPECT_EQ(fallback[0].size(), kEmbeddingDim);

  testing::TempDir dir;
  EmbeddingTable table;
  table.dim = 4;
  for (int i = 0; i < 2; ++i) {
    table.ids.push_back(records[i].test_id);
    table.rows.push_back({1.0f * i, 2, 3, 4});
  }
  WriteEmbeddings(dir / "e.bin", table);
  EXPECT_THROW(BuildInputs(records, processed, EmbeddingSource{dir / "e.bin"}, 4),
               FormatError);
  records[2].embedding = std::vector<float>{9, 9, 9, 9};
  const auto from_file = BuildInputs(records, processed, EmbeddingSource{dir / "e.bin"}, 4);
  EXPECT_EQ(from_file[1][0], 1.0);
  EXPECT_EQ(from_file[2][0], 9.0);
  EXPECT_THROW(BuildInputs(records, processed, EmbeddingSource{dir / "e.bin"}, 768),
               DimensionMismatchError);
}

TEST(PipelineTest, SafeFileStems) {
  EXPECT_EQ(SafeFileStem("p::a.B#test"), SafeFileStem("p::a.B#test"));
  for (const std::string id : {"p::a.B#test", "x/y\\z:*?", "..", ""}) {
    const std::string stem = SafeFileStem(id);
    EXPECT_FALSE(stem.empty());
    EXPECT_EQ(stem.find('/'), std::string::npos);
    EXPECT_EQ(stem.find('\\'), std::string::npos);
    EXPECT_NE(stem, "..");
  }
}

TEST(PipelineTest, EmptyCorpusExportsHeadersOnly) {
  testing::TempDir dir;
  const ExportManifest m = ExportArtifacts({}, {}, dir.path());
  EXPECT_TRUE(m.entries.empty());
  EXPECT_EQ(CountLines(dir / "features.csv"), 1u);
  EXPECT_EQ(CountLines(dir / "preprocess_manifest.csv"), 1u);
  EXPECT_EQ(CountLines(dir / "manifest.jsonl"), 0u);
}

TEST(PipelineTest, ExportWritesOneRowPerTestAndIsReproducible) {
  const LoadResult corpus = Synthetic();
  std::vector<CorpusRecord> records(corpus.records.begin(), corpus.records.begin() + 10);
  PipelineOptions options;
  options.mode = PreprocessMode::kAll;
  options.max_len = 64;
  const auto processed = ProcessCorpus(records, testing::TestVocab(), options);
  testing::TempDir dir;
  const ExportManifest first = ExportArtifacts(records, processed, dir / "a");
  const ExportManifest second = ExportArtifacts(records, processed, dir / "b");
  ASSERT_EQ(first.entries.size(), 10u);
  for (const char* f : {"features.csv", "preprocess_manifest.csv", "encoded.csv"}) {
    EXPECT_EQ(CountLines(dir / "a" / f), 11u) << f;
    EXPECT_EQ(ReadFile(dir / "a" / f), ReadFile(dir / "b" / f)) << f;
  }
  EXPECT_EQ(CountLines(dir / "a/manifest.jsonl"), 10u);
  EXPECT_EQ(ReadFile(dir / "a/manifest.jsonl"), ReadFile(dir / "b/manifest.jsonl"));
  const auto header = ParseCsv(ReadFile(dir / "a/encoded.csv")).front().fields;
  EXPECT_EQ(header.size(), 1u + 2 * 64);
  EXPECT_EQ(header[1], "id0");
  EXPECT_EQ(header[65], "mask0");
  for (std::size_t i = 0; i < first.entries.size(); ++i) {
    const ManifestEntry& e = first.entries[i];
    EXPECT_EQ(e.test_id, records[i].test_id);
    const std::string text = ReadFile(dir / "a" / e.text_file);
    EXPECT_EQ(text, processed[i].preprocessed.text);
    EXPECT_EQ(e.text_sha256, Sha256Hex(text));
    EXPECT_EQ(e.text_sha256, second.entries[i].text_sha256);
    EXPECT_EQ(e.encoded_sha256, second.entries[i].encoded_sha256);
    EXPECT_EQ(e.features_sha256, second.entries[i].features_sha256);
    EXPECT_TRUE(e.text_file.ends_with(".java.txt"));
    EXPECT_TRUE(e.reduced);
  }
  EXPECT_EQ(ManifestJsonLine(first.entries[0]).find('\n'), std::string::npos);
  EXPECT_TRUE(EncodedCsvRow("t", processed[0].encoded).starts_with("t,"));
}

TEST(PipelineTest, CollidingStemsGetDistinctFiles) {
  testing::TempDir dir;
  dir.Write("A.java",
            "class A { @org.junit.Test void test_x() {} @org.junit.Test void test() {} }");
  const LoadResult corpus = LoadCorpusFromText(
      "project,test_class,test_method,label,source_path\n"
      "p,A,test_x,Flaky,A.java\n"
      "p,A,test,NonFlaky,A.java\n",
      dir.path(), CorpusFormat::kFlakeFlagger);
  ASSERT_EQ(corpus.records.size(), 2u);
  std::vector<CorpusRecord> records = corpus.records;
  records[1].test_id = records[0].test_id;
  records[1].test_id.back() = '?';
  records[0].test_id.back() = '*';
  const auto processed = ProcessCorpus(records, testing::TestVocab(), {});
  const ExportManifest m = ExportArtifacts(records, processed, dir / "out");
  ASSERT_EQ(m.entries.size(), 2u);
  EXPECT_NE(m.entries[0].text_file, m.entries[1].text_file);
}

}  // namespace
}  // namespace flakylens
