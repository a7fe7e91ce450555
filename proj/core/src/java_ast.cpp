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

#include "flakylens/java_ast.hpp"

#include <algorithm>

namespace flakylens::java {

std::string_view ToString(StatementKind kind) {
  switch (kind) {
    case StatementKind::kExprStatement:
      return "ExprStatement";
    case StatementKind::kIfStatement:
      return "IfStatement";
    case StatementKind::kLocalVarDecl:
      return "LocalVarDecl";
    case StatementKind::kReturn:
      return "Return";
    case StatementKind::kThrow:
      return "Throw";
    case StatementKind::kTryBlock:
      return "TryBlock";
    case StatementKind::kLoop:
      return "Loop";
    case StatementKind::kOther:
      return "Other";
  }
  return "Other";
}

bool MethodDecl::HasAnnotation(std::string_view simple_name) const {
  return std::find(annotations.begin(), annotations.end(), simple_name) !=
         annotations.end();
}

std::size_t CountStatements(const std::vector<Statement>& statements) {
  std::size_t count = 0;
  ForEachStatement(statements, [&](const Statement&) { ++count; });
  return count;
}

}  // namespace flakylens::java
