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

// Black-box per-test features: smell flags, size, assertions, libraries.

#ifndef FLAKYLENS_FEATURES_HPP_
#define FLAKYLENS_FEATURES_HPP_

#include <array>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "flakylens/java_ast.hpp"
#include "flakylens/smells.hpp"

namespace flakylens {

struct FeatureVector {
  // Indexed like kAllSmells.
  std::array<bool, 8> smell_flags{};
  int test_loc = 0;
  int assertion_count = 0;
  int library_count = 0;
  // Ingested, never measured.
  std::optional<double> execution_time;

  // Flags, loc, assertions, libraries, execution time (0 when absent) and
  // a 0/1 indicator that execution time was absent.
  std::vector<double> ToNumeric() const;
};

// test_loc is the line span from the first statement to the end of the
// last one. library_count counts explicit, non-java.lang imports whose
// simple name occurs as an identifier in the method.
FeatureVector ExtractFeatures(const java::CompilationUnit& unit,
                              const java::MethodDecl& method,
                              const std::vector<SmellAnnotation>& annotations);

inline constexpr std::string_view kFeatureCsvHeader =
    "test_id,IT,ET,RW,CL,FF,MG,AR,RO,loc,assertions,libraries,exec_time";

// One CSV row, no trailing newline. An absent execution time is written
// as an empty field.
std::string FeatureCsvRow(std::string_view test_id, const FeatureVector& f);

}  // namespace flakylens

#endif  // FLAKYLENS_FEATURES_HPP_
