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

#include "flakylens/features.hpp"

#include <algorithm>
#include <set>

#include "flakylens/csv.hpp"
#include "flakylens/java_lexer.hpp"

namespace flakylens {

std::vector<double> FeatureVector::ToNumeric() const {
  std::vector<double> out;
  out.reserve(smell_flags.size() + 5);
  for (bool f : smell_flags) out.push_back(f ? 1.0 : 0.0);
  out.push_back(test_loc);
  out.push_back(assertion_count);
  out.push_back(library_count);
  out.push_back(execution_time.value_or(0.0));
  out.push_back(execution_time ? 0.0 : 1.0);
  return out;
}

FeatureVector ExtractFeatures(const java::CompilationUnit& unit,
                              const java::MethodDecl& method,
                              const std::vector<SmellAnnotation>& annotations) {
  FeatureVector f;
  for (const SmellAnnotation& a : annotations) {
    const auto it = std::find(kAllSmells.begin(), kAllSmells.end(), a.kind);
    f.smell_flags[it - kAllSmells.begin()] = true;
  }

  if (!method.statements.empty()) {
    f.test_loc = method.statements.back().end_line -
                 method.statements.front().line + 1;
  }

  java::ForEachStatement(method.statements, [&](const java::Statement& s) {
    for (const java::Invocation& inv : s.invocations) {
      if (!inv.is_constructor && IsAssertionName(inv.method_name)) {
        ++f.assertion_count;
      }
    }
  });

  std::set<std::string_view> identifiers;
  std::vector<java::Token> tokens;
  if (method.has_body) {
    tokens = java::Lex(unit.Slice(method.body_begin, method.body_end));
  }
  for (const java::Token& t : tokens) {
    if (t.kind == java::TokenKind::kIdentifier) identifiers.insert(t.text);
  }
  std::set<std::string> used;
  for (const std::string& imp : unit.imports) {
    if (imp.ends_with(".*") || imp.starts_with("java.lang.")) continue;
    const auto dot = imp.rfind('.');
    const std::string_view simple =
        dot == std::string::npos ? std::string_view(imp)
                                 : std::string_view(imp).substr(dot + 1);
    if (identifiers.contains(simple)) used.insert(imp);
  }
  f.library_count = static_cast<int>(used.size());
  return f;
}

std::string FeatureCsvRow(std::string_view test_id, const FeatureVector& f) {
  std::vector<std::string> fields;
  fields.emplace_back(test_id);
  for (bool flag : f.smell_flags) fields.emplace_back(flag ? "1" : "0");
  fields.push_back(std::to_string(f.test_loc));
  fields.push_back(std::to_string(f.assertion_count));
  fields.push_back(std::to_string(f.library_count));
  fields.push_back(f.execution_time ? FormatDouble(*f.execution_time) : "");
  return CsvJoin(fields);
}

}  // namespace flakylens
