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

// Loading labeled corpora from an index CSV plus a tree of test sources.
//
// Index columns (any order, header required):
//   flakeflagger: project,test_class,test_method,label,source_path
//   idoft:        the same plus origin (Measured | FixedVersion)
// An optional exec_time column (seconds) is carried through.
//
// source_path is relative to the sources root and names either a whole
// ".java" file, searched for test_class#test_method, or a file holding just
// the method.

#ifndef FLAKYLENS_INGESTION_HPP_
#define FLAKYLENS_INGESTION_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flakylens/java_ast.hpp"
#include "flakylens/java_parser.hpp"
#include "flakylens/types.hpp"

namespace flakylens {

enum class CorpusFormat { kFlakeFlagger, kIdoft };
enum class Origin { kMeasured, kFixedVersion };

std::string_view ToString(CorpusFormat format);
std::optional<CorpusFormat> ParseCorpusFormat(std::string_view text);
std::string_view ToString(Origin origin);
std::optional<Origin> ParseOrigin(std::string_view text);

struct CorpusRecord {
  // project::Class#method
  std::string test_id;
  std::string project;
  std::string test_class;
  std::string test_method;
  // The method's source, Javadoc through closing brace.
  std::string source_text;
  Label label = Label::kNonFlaky;
  Origin origin = Origin::kMeasured;
  std::optional<std::vector<float>> embedding;
  std::optional<double> execution_time;

  // Parse of the file the method came from; `method` and `owner` point
  // into it.
  std::shared_ptr<const java::CompilationUnit> unit;
  const java::MethodDecl* method = nullptr;
  const java::ClassDecl* owner = nullptr;
  // The owner's setUp / @Before method, if any.
  const java::MethodDecl* init_method = nullptr;
};

enum class DropReason {
  kMissing,
  kEmpty,
  kNonJava,
  kMethodNotFound,
  kDuplicateId,
};

std::string_view ToString(DropReason reason);

struct DroppedRow {
  std::size_t line = 0;
  std::string test_id;
  DropReason reason = DropReason::kMissing;
};

struct LoadResult {
  std::vector<CorpusRecord> records;
  std::vector<DroppedRow> dropped;
  std::size_t input_rows = 0;

  std::map<DropReason, std::size_t> DropCounts() const;
};

// "testFoo[3]" -> "testFoo".
std::string NormalizeMethodName(std::string_view method);

std::string MakeTestId(std::string_view project, std::string_view test_class,
                       std::string_view method);

// Cheap check that a file is Java source: it contains a class, interface,
// enum or record keyword token.
bool LooksLikeJava(std::string_view source);

// Throws MalformedCsvError (including InvalidLabelError) on bad rows and
// SourcesRootMissingError when the root is not a directory. Rows whose
// source cannot be used are dropped with a reason.
LoadResult LoadCorpus(const std::filesystem::path& index_csv,
                      const std::filesystem::path& sources_root,
                      CorpusFormat format,
                      const java::TestConventions& conventions = {});

// Same, from an in-memory index.
LoadResult LoadCorpusFromText(std::string_view index_text,
                              const std::filesystem::path& sources_root,
                              CorpusFormat format,
                              const java::TestConventions& conventions = {});

// Best-effort converter for a published single-file layout with columns
// project, test_name (Class.method), flaky (0/1) and a column holding the
// method source. Writes one snippet per test under `out_dir`/sources and an
// index.csv in the flakeflagger format. Returns the number of rows written.
std::size_t ConvertPublishedLayout(const std::filesystem::path& input_csv,
                                   const std::filesystem::path& out_dir,
                                   std::string_view code_column = "full_code");

}  // namespace flakylens

#endif  // FLAKYLENS_INGESTION_HPP_
