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

#ifndef FLAKYLENS_JAVA_PARSER_HPP_
#define FLAKYLENS_JAVA_PARSER_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "flakylens/java_ast.hpp"

namespace flakylens::java {

// Tolerant parse of a Java source file into the subset of the AST the smell
// heuristics need. Generics, lambdas and annotations are carried as text.
// Malformed regions inside method bodies come back as kOther statements
// holding their verbatim text; structure problems never throw.
//
// Throws LexError if `source` is not text.
CompilationUnit ParseCompilationUnit(std::string source);

// Parses a bare method (as found in per-test snippet files) by wrapping it
// in a stub class named `class_name`.
CompilationUnit ParseMethodSnippet(std::string_view method_source,
                                   std::string_view class_name);

struct TestConventions {
  std::vector<std::string> test_annotations = {"Test", "ParameterizedTest",
                                               "RepeatedTest"};
  std::vector<std::string> init_annotations = {"Before", "BeforeEach"};
  std::vector<std::string> init_method_names = {"setUp"};
  // JUnit 3 style: "test" prefixed methods in classes named *Test / Test*.
  bool name_prefix_convention = true;
  // Order in which "Test" is stripped to name the production class.
  bool strip_trailing_first = true;
};

struct TestMethodRef {
  const ClassDecl* owner = nullptr;
  const MethodDecl* method = nullptr;
};

struct TestExtraction {
  std::vector<TestMethodRef> tests;
  // setUp / @Before methods, one per class that declares one.
  std::vector<TestMethodRef> init_methods;

  const MethodDecl* InitMethodFor(const ClassDecl& owner) const;
};

// References point into `unit`, which must outlive the result.
TestExtraction ExtractTestMethods(const CompilationUnit& unit,
                                  const TestConventions& conventions = {});

bool IsTestMethod(const ClassDecl& owner, const MethodDecl& method,
                  const TestConventions& conventions = {});

// Locates `Class#method` (simple class name, nested classes included).
const MethodDecl* FindMethod(const CompilationUnit& unit,
                             std::string_view class_name,
                             std::string_view method_name,
                             const ClassDecl** owner = nullptr);

struct ProductionClassName {
  std::string name;
  // False when no "Test" token could be stripped and `name` is the test
  // class name unchanged.
  bool confident = true;
};

ProductionClassName InferProductionClassName(
    std::string_view test_class_name, const TestConventions& conventions = {});

}  // namespace flakylens::java

#endif  // FLAKYLENS_JAVA_PARSER_HPP_
