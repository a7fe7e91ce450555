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

// Reduces a test method to its Javadoc, declaration and the statements
// that match at least one smell, so it fits the encoder's token budget.

#ifndef FLAKYLENS_PREPROCESSOR_HPP_
#define FLAKYLENS_PREPROCESSOR_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flakylens/java_ast.hpp"
#include "flakylens/smells.hpp"
#include "flakylens/tokenizer.hpp"

namespace flakylens {

enum class PreprocessMode {
  // Reduce only methods whose full encoding exceeds max_len.
  kOverBudget,
  // Reduce every method.
  kAll,
  // Never reduce.
  kOff,
};

std::string_view ToString(PreprocessMode mode);
std::optional<PreprocessMode> ParsePreprocessMode(std::string_view text);

struct PreprocessPolicy {
  PreprocessMode mode = PreprocessMode::kOverBudget;
  // Required for kOverBudget.
  const Vocabulary* vocab = nullptr;
  int max_len = kDefaultMaxLen;
};

struct PreprocessedTest {
  std::string test_id;
  std::string text;
  // Source lines of every retained statement, nested ones included.
  std::vector<int> retained_statement_lines;
  std::vector<std::string> flags_appended;
  // Top-level statements of the method, and how many of them were kept.
  int original_statement_count = 0;
  int retained_statement_count = 0;
  bool reduced = false;
};

// Statements are kept when annotated. Block statements (if, loops, try,
// ...) are also kept, as headers, when any statement nested in them is
// kept; if headers are always kept. Dropped nested statements are cut out
// of their parent's text, and a dropped unbraced branch becomes ";".
PreprocessedTest Preprocess(const java::CompilationUnit& unit,
                            const java::MethodDecl& method,
                            const std::vector<SmellAnnotation>& annotations,
                            const PreprocessPolicy& policy,
                            std::string test_id = {});

struct ReductionStats {
  int original_tokens = 0;
  int reduced_tokens = 0;
  double reduction_rate = 0.0;
};

// Token counts exclude special tokens. Throws ZeroLengthError when the
// original text has no tokens.
ReductionStats ComputeReductionStats(std::string_view original_text,
                                     std::string_view reduced_text,
                                     const Vocabulary& vocab);

}  // namespace flakylens

#endif  // FLAKYLENS_PREPROCESSOR_HPP_
