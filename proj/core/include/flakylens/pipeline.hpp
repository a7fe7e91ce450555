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

// Per-record processing (smells, preprocessing, encoding, features),
// model inputs and on-disk artifacts.

#ifndef FLAKYLENS_PIPELINE_HPP_
#define FLAKYLENS_PIPELINE_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "flakylens/classifier.hpp"
#include "flakylens/features.hpp"
#include "flakylens/ingestion.hpp"
#include "flakylens/java_parser.hpp"
#include "flakylens/preprocessor.hpp"
#include "flakylens/smells.hpp"
#include "flakylens/tokenizer.hpp"

namespace flakylens {

// Reads FLAKY_LENS_LOG (trace, debug, info, warn, error, critical, off);
// warn when unset or unrecognized.
void ConfigureLogging();

struct PipelineOptions {
  PreprocessMode mode = PreprocessMode::kOverBudget;
  int max_len = kDefaultMaxLen;
  SmellOptions smells;
  java::TestConventions conventions;
  int jobs = 1;
};

struct ProcessedTest {
  std::vector<SmellAnnotation> smells;
  PreprocessedTest preprocessed;
  ReductionStats stats;
  EncodedInput encoded;
  FeatureVector features;
};

ClassContext ContextFor(const CorpusRecord& record,
                        const java::TestConventions& conventions = {});

ProcessedTest ProcessRecord(const CorpusRecord& record, const Vocabulary& vocab,
                            const PipelineOptions& options);

// Result order matches `records`; records are processed on up to
// options.jobs threads.
std::vector<ProcessedTest> ProcessCorpus(
    const std::vector<CorpusRecord>& records, const Vocabulary& vocab,
    const PipelineOptions& options);

struct EmbeddingSource {
  // Empty for the hashed fallback.
  std::optional<std::filesystem::path> file;
};

// "fallback" or "file:PATH".
std::optional<EmbeddingSource> ParseEmbeddingSource(std::string_view text);

// One input vector per record: the record's own embedding if present, else
// the file row for its test id, else (fallback only) EmbedFallback of its
// encoding. Throws FormatError when a file lacks a row for some record.
std::vector<Eigen::VectorXd> BuildInputs(
    const std::vector<CorpusRecord>& records,
    const std::vector<ProcessedTest>& processed, const EmbeddingSource& source,
    int dim = kEmbeddingDim);

struct ManifestEntry {
  std::string test_id;
  std::string project;
  Label label = Label::kNonFlaky;
  Origin origin = Origin::kMeasured;
  // Relative to the export directory.
  std::string text_file;
  std::string text_sha256;
  std::string encoded_sha256;
  std::string features_sha256;
  int original_tokens = 0;
  int reduced_tokens = 0;
  bool reduced = false;
};

struct ExportManifest {
  std::vector<ManifestEntry> entries;
};

// File-name-safe stem for a test id.
std::string SafeFileStem(std::string_view test_id);

// Writes under `out_dir`:
//   preprocessed/<test_id>.java.txt   one text per test
//   preprocess_manifest.csv           test_id,original_tokens,reduced_tokens,
//                                     retained,original_count
//   encoded.csv                       test_id,input_ids...,attention_mask...
//   features.csv
//   manifest.jsonl                    one line per test with content hashes
// Throws IoError.
ExportManifest ExportArtifacts(const std::vector<CorpusRecord>& records,
                               const std::vector<ProcessedTest>& processed,
                               const std::filesystem::path& out_dir);

std::string ManifestJsonLine(const ManifestEntry& entry);

// One encoded CSV row, no trailing newline.
std::string EncodedCsvRow(std::string_view test_id, const EncodedInput& input);

}  // namespace flakylens

#endif  // FLAKYLENS_PIPELINE_HPP_
