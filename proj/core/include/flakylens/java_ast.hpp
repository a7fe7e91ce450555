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

#ifndef FLAKYLENS_JAVA_AST_HPP_
#define FLAKYLENS_JAVA_AST_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace flakylens::java {

enum class StatementKind {
  kExprStatement,
  kIfStatement,
  kLocalVarDecl,
  kReturn,
  kThrow,
  kTryBlock,
  kLoop,
  kOther,
};

std::string_view ToString(StatementKind kind);

struct Invocation {
  // Verbatim receiver expression ("foo", "new Thread(r)", "a.b()").
  // Absent for unqualified calls and for constructor invocations.
  std::optional<std::string> receiver_text;
  // For constructor invocations this is the instantiated type's name,
  // generic arguments removed.
  std::string method_name;
  // Fully qualified class the receiver (or constructed type) names,
  // when an import or an explicit qualification settles it.
  std::optional<std::string> qualified_hint;
  bool is_constructor = false;
};

struct Statement {
  StatementKind kind = StatementKind::kOther;
  // Verbatim slice [begin, end) of the unit source. Comments following the
  // statement (and, for the first statement of a block, comments preceding
  // it) are part of the slice.
  std::string source_text;
  std::size_t begin = 0;
  std::size_t end = 0;
  // Offsets of the first and last code token.
  std::size_t code_begin = 0;
  std::size_t code_end = 0;
  int line = 0;
  int end_line = 0;

  // For block-bearing kinds these come from the header only (condition,
  // loop header, try resources); the nested statements carry their own.
  std::vector<Invocation> invocations;
  std::vector<std::string> referenced_names;

  // Set for local variable declarations, including loop-header and
  // try-resource declarations.
  std::optional<std::string> declared_type;
  std::vector<std::string> declared_names;

  std::vector<Statement> children;
  // True when this statement is the unbraced body of an if/else/loop.
  bool is_bare_branch = false;
};

struct SourceSpan {
  int start_line = 0;
  int end_line = 0;
};

struct MethodDecl {
  std::string name;
  std::optional<std::string> javadoc;
  std::vector<std::string> annotations;  // simple names, without '@'
  // Annotations, modifiers, type parameters, return type, name, parameters
  // and throws clause, verbatim.
  std::string signature_text;
  // Text between the parameter list's parentheses.
  std::string parameters_text;
  std::vector<Statement> statements;
  // Covers the Javadoc (if any) through the closing brace.
  SourceSpan source_span;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t decl_begin = 0;  // first annotation/modifier
  std::size_t body_begin = 0;  // offset of '{'
  std::size_t body_end = 0;    // one past '}'
  int body_start_line = 0;
  int body_end_line = 0;
  bool has_body = false;

  bool HasAnnotation(std::string_view simple_name) const;
};

struct FieldDecl {
  std::string name;
  bool is_static = false;
  bool is_final = false;
  std::string declared_type_text;
};

enum class TypeKind { kClass, kInterface, kEnum, kRecord, kAnnotation };

struct ClassDecl {
  std::string name;
  TypeKind kind = TypeKind::kClass;
  std::vector<FieldDecl> fields_;
  std::vector<MethodDecl> methods;
  std::vector<ClassDecl> nested;
  int line = 0;
};

struct CompilationUnit {
  std::optional<std::string> package_name;
  // Dotted paths; on-demand imports keep their ".*" suffix.
  std::vector<std::string> imports;
  // Static imports, same form ("org.junit.Assert.assertEquals",
  // "org.junit.Assert.*").
  std::vector<std::string> static_imports;
  std::vector<ClassDecl> type_decls;
  std::string source;

  std::string_view Slice(std::size_t begin, std::size_t end) const {
    return std::string_view(source).substr(begin, end - begin);
  }
  std::string_view MethodText(const MethodDecl& method) const {
    return Slice(method.begin, method.end);
  }
};

// Visits every statement depth-first in source order, parents first.
template <typename Fn>
void ForEachStatement(const std::vector<Statement>& statements, Fn&& fn) {
  for (const Statement& s : statements) {
    fn(s);
    ForEachStatement(s.children, fn);
  }
}

std::size_t CountStatements(const std::vector<Statement>& statements);

}  // namespace flakylens::java

#endif  // FLAKYLENS_JAVA_AST_HPP_
