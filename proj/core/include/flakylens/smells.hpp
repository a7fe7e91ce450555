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

// Static detection of the eight flakiness-related test smells.
//
// Everything here works from test code alone. Receivers are resolved to
// classes through the enclosing file's imports, local variable and field
// declarations, and a table of well-known JDK types; anything that cannot
// be resolved simply fails to match the resolution-dependent smells.

#ifndef FLAKYLENS_SMELLS_HPP_
#define FLAKYLENS_SMELLS_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "flakylens/java_ast.hpp"
#include "flakylens/java_parser.hpp"

namespace flakylens {

enum class SmellKind {
  kIndirectTesting,
  kEagerTesting,
  kTestRunWar,
  kConditionalLogic,
  kFireAndForget,
  kMysteryGuest,
  kAssertionRoulette,
  kResourceOptimism,
};

inline constexpr std::array<SmellKind, 8> kAllSmells = {
    SmellKind::kIndirectTesting,   SmellKind::kEagerTesting,
    SmellKind::kTestRunWar,        SmellKind::kConditionalLogic,
    SmellKind::kFireAndForget,     SmellKind::kMysteryGuest,
    SmellKind::kAssertionRoulette, SmellKind::kResourceOptimism,
};

std::string_view ToString(SmellKind kind);
// Two-letter code: IT, ET, RW, CL, FF, MG, AR, RO.
std::string_view ShortCode(SmellKind kind);
std::optional<SmellKind> ParseSmellKind(std::string_view text);

// The line-comment flag appended to retained statements, for the four
// smells that carry one.
std::optional<std::string_view> FlagFor(SmellKind kind);

// Assertion mechanisms counted for Assertion Roulette.
bool IsAssertionName(std::string_view method_name);

struct SmellAnnotation {
  // Path of child indices from the method's top-level statement list.
  std::vector<std::size_t> statement_path;
  int line = 0;
  SmellKind kind;
  std::optional<std::string> flag;

  friend bool operator==(const SmellAnnotation&,
                         const SmellAnnotation&) = default;
};

struct SmellOptions {
  // Strict mode follows the published heuristics literally: Resource
  // Optimism only looks for path checks in the initialization method, and
  // exists() does not count as a check.
  bool strict = false;
  // Receivers in these packages are library code, not "another class" for
  // Indirect Testing.
  std::vector<std::string> library_prefixes = {
      "java.",       "javax.",       "jdk.",        "sun.",
      "org.junit.",  "junit.",       "org.hamcrest.", "org.assertj.",
      "org.mockito.", "org.testng.", "org.easymock.", "org.powermock.",
  };
};

struct ClassContext {
  std::string class_name;
  std::string production_class_name;
  bool production_confident = true;
  std::vector<std::string> imports;
  std::vector<std::string> static_imports;
  std::set<std::string> static_nonfinal_fields;
  // Every field of the class, name -> declared type text.
  std::map<std::string, std::string> field_types;
  const java::MethodDecl* init_method = nullptr;
};

ClassContext BuildClassContext(const java::CompilationUnit& unit,
                               const java::ClassDecl& cls,
                               const java::MethodDecl* init_method,
                               const java::TestConventions& conventions = {});

// What a statement needs to know about the rest of its method.
struct MethodScope {
  // Local variables declared anywhere in the method, name -> type text.
  std::map<std::string, std::string> local_types;
  // Production-class methods invoked by the method, name -> call count.
  std::map<std::string, int> production_invocations;
  // A path-existence check is visible before the statement being classified.
  bool path_checked = false;
};

MethodScope BuildMethodScope(const java::MethodDecl& method,
                             const ClassContext& ctx);

// Predicates for one statement. For block-bearing statements only the
// header (condition, loop header, resources) is examined.
std::set<SmellKind> ClassifyStatement(const java::Statement& stmt,
                                      const ClassContext& ctx,
                                      const MethodScope& scope,
                                      const SmellOptions& options = {});

// One annotation per (statement, smell), statements visited depth-first in
// source order, smells in enum order within a statement.
std::vector<SmellAnnotation> DetectSmells(const java::MethodDecl& method,
                                          const ClassContext& ctx,
                                          const SmellOptions& options = {});

// Resolution helpers, exposed for the feature extractor and tests.
struct ResolvedClass {
  std::string simple_name;
  std::optional<std::string> qualified_name;
};

std::optional<std::string> QualifyTypeName(std::string_view type_text,
                                           const ClassContext& ctx);

std::optional<ResolvedClass> ResolveInvocationClass(
    const java::Invocation& invocation, const ClassContext& ctx,
    const MethodScope& scope);

}  // namespace flakylens

#endif  // FLAKYLENS_SMELLS_HPP_
