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

#include "flakylens/preprocessor.hpp"

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "flakylens/errors.hpp"
#include "flakylens/io.hpp"
#include "flakylens/java_parser.hpp"
#include "flakylens/smells.hpp"
#include "test_support.hpp"

namespace flakylens {
namespace {

using testing::TestVocab;

struct Case {
  java::CompilationUnit unit;
  const java::MethodDecl* method = nullptr;
  std::vector<SmellAnnotation> annotations;
};

// Parses every test of `source`, annotating each with strict detection.
std::vector<Case> AnalyzeAll(const std::string& source) {
  auto unit = std::make_shared<java::CompilationUnit>(java::ParseCompilationUnit(source));
  std::vector<Case> out;
  const auto found = java::ExtractTestMethods(*unit);
  for (const auto& ref : found.tests) {
    Case c;
    c.unit = *unit;
    const java::ClassDecl* owner = nullptr;
    c.method = java::FindMethod(c.unit, ref.owner->name, ref.method->name, &owner);
    const ClassContext ctx = BuildClassContext(c.unit, *owner, found.InitMethodFor(*ref.owner));
    SmellOptions options;
    options.strict = true;
    c.annotations = DetectSmells(*c.method, ctx, options);
    out.push_back(std::move(c));
  }
  return out;
}

Case AnalyzeOne(const std::string& source) {
  auto all = AnalyzeAll(source);
  EXPECT_EQ(all.size(), 1u);
  return std::move(all.front());
}

using PathMap = std::map<std::vector<std::size_t>, std::vector<std::size_t>>;

bool Kept(const java::Statement& s, std::vector<std::size_t>& path,
          const std::set<std::vector<std::size_t>>& annotated) {
  if (annotated.contains(path) || s.kind == java::StatementKind::kIfStatement) return true;
  for (std::size_t i = 0; i < s.children.size(); ++i) {
    path.push_back(i);
    const bool kept = Kept(s.children[i], path, annotated);
    path.pop_back();
    if (kept) return true;
  }
  return false;
}

// Pairs every retained original statement path with its path in the
// reduced method. Dropped bare branches leave a ';' placeholder behind.
void MapLevel(const std::vector<java::Statement>& original,
              const std::vector<java::Statement>& reduced, std::vector<std::size_t>& from,
              std::vector<std::size_t>& to, const std::set<std::vector<std::size_t>>& annotated,
              PathMap& out) {
  std::size_t j = 0;
  for (std::size_t i = 0; i < original.size(); ++i) {
    from.push_back(i);
    if (Kept(original[i], from, annotated)) {
      if (j < reduced.size()) {
        to.push_back(j);
        out[from] = to;
        MapLevel(original[i].children, reduced[j].children, from, to, annotated, out);
        to.pop_back();
      }
      ++j;
    } else if (original[i].is_bare_branch) {
      ++j;
    }
    from.pop_back();
  }
}

PathMap MapRetainedPaths(const std::vector<java::Statement>& original,
                         const std::vector<java::Statement>& reduced,
                         const std::vector<SmellAnnotation>& annotations) {
  std::set<std::vector<std::size_t>> annotated;
  for (const auto& a : annotations) annotated.insert(a.statement_path);
  PathMap out;
  std::vector<std::size_t> from, to;
  MapLevel(original, reduced, from, to, annotated, out);
  return out;
}

PreprocessPolicy AllPolicy() {
  PreprocessPolicy p;
  p.mode = PreprocessMode::kAll;
  return p;
}

std::string Fig3Source() { return ReadFile(testing::DataPath("fig3/ExampleTest.java")); }

TEST(PreprocessorTest, Fig3RetainsFourOfSevenStatements) {
  const Case c = AnalyzeOne(Fig3Source());
  const PreprocessedTest out = Preprocess(c.unit, *c.method, c.annotations, AllPolicy(),
                                          "org.example.ExampleTest#test_example");
  EXPECT_TRUE(out.reduced);
  EXPECT_EQ(out.original_statement_count, 7);
  EXPECT_EQ(out.retained_statement_count, 4);
  EXPECT_EQ(out.retained_statement_lines, (std::vector<int>{15, 17, 18, 20}));
  EXPECT_TRUE(out.flags_appended.empty());
  EXPECT_EQ(out.text,
            "/** Checks that the worker thread leaves the counter consistent. */\n"
            "  @Test\n"
            "  public void test_example() {\n"
            "    new Thread(worker).start();\n"
            "    if (actual > expected) ;\n"
            "    assertEquals(expected, actual);\n"
            "    assertTrue(label.length() > 0);\n"
            "  }");
}

TEST(PreprocessorTest, Fig3ReductionStats) {
  const Case c = AnalyzeOne(Fig3Source());
  const PreprocessedTest out = Preprocess(c.unit, *c.method, c.annotations, AllPolicy());
  const ReductionStats stats =
      ComputeReductionStats(c.unit.MethodText(*c.method), out.text, TestVocab());
  EXPECT_GT(stats.original_tokens, stats.reduced_tokens);
  EXPECT_DOUBLE_EQ(stats.reduction_rate,
                   1.0 - static_cast<double>(stats.reduced_tokens) / stats.original_tokens);
}

TEST(PreprocessorTest, ReductionStatsEdges) {
  const ReductionStats same = ComputeReductionStats("int x = 1;", "int x = 1;", TestVocab());
  EXPECT_EQ(same.reduction_rate, 0.0);
  EXPECT_THROW(ComputeReductionStats("  ", "x", TestVocab()), ZeroLengthError);
  const ReductionStats longer = ComputeReductionStats("x", "x y z", TestVocab());
  EXPECT_EQ(longer.reduction_rate, 0.0);
}

TEST(PreprocessorTest, NoAnnotationsKeepsDeclarationOnly) {
  const Case c = AnalyzeOne(
      "import org.junit.Test;\nclass PlainTest {\n  @Test\n  public void testPlain() {\n"
      "    int a = 1;\n    int b = a + 1;\n  }\n}\n");
  ASSERT_TRUE(c.annotations.empty());
  const PreprocessedTest out = Preprocess(c.unit, *c.method, c.annotations, AllPolicy());
  EXPECT_EQ(out.retained_statement_count, 0);
  EXPECT_TRUE(out.retained_statement_lines.empty());
  EXPECT_EQ(out.text, "@Test\n  public void testPlain() {\n  }");
}

TEST(PreprocessorTest, FlagsAreAppendedAsLineComments) {
  const Case c = AnalyzeOne(
      "import org.junit.Test;\nclass CounterTest {\n  static int hits;\n"
      "  @Test\n  public void testHits() {\n    hits++;\n    int local = 2;\n  }\n}\n");
  const PreprocessedTest out = Preprocess(c.unit, *c.method, c.annotations, AllPolicy());
  EXPECT_EQ(out.flags_appended, (std::vector<std::string>{"//RW"}));
  EXPECT_NE(out.text.find("hits++; //RW\n"), std::string::npos);
  EXPECT_EQ(out.text.find("local"), std::string::npos);
}

TEST(PreprocessorTest, IfHeaderKeptWhileChildrenAreFiltered) {
  const Case c = AnalyzeOne(
      "import org.junit.Test;\nimport static org.junit.Assert.assertTrue;\n"
      "class BranchTest {\n  @Test\n  public void testBranch() {\n"
      "    int v = 3;\n    if (v > 1) {\n      int w = v;\n      assertTrue(w > 0);\n    }\n  }\n}\n");
  const PreprocessedTest out = Preprocess(c.unit, *c.method, c.annotations, AllPolicy());
  EXPECT_EQ(out.retained_statement_count, 1);
  EXPECT_EQ(out.retained_statement_lines, (std::vector<int>{7, 9}));
  EXPECT_NE(out.text.find("if (v > 1) {"), std::string::npos);
  EXPECT_NE(out.text.find("assertTrue(w > 0);"), std::string::npos);
  EXPECT_EQ(out.text.find("int w"), std::string::npos);
}

TEST(PreprocessorTest, OverBudgetOnlyReducesLongMethods) {
  const Case c = AnalyzeOne(Fig3Source());
  PreprocessPolicy policy;
  policy.vocab = &TestVocab();
  const PreprocessedTest small = Preprocess(c.unit, *c.method, c.annotations, policy);
  EXPECT_FALSE(small.reduced);
  EXPECT_EQ(small.text, c.unit.MethodText(*c.method));
  EXPECT_EQ(small.retained_statement_count, 7);

  policy.max_len = 16;
  const PreprocessedTest tight = Preprocess(c.unit, *c.method, c.annotations, policy);
  EXPECT_TRUE(tight.reduced);
  EXPECT_EQ(tight.retained_statement_count, 4);

  policy.vocab = nullptr;
  EXPECT_THROW(Preprocess(c.unit, *c.method, c.annotations, policy), InvalidArgumentError);
}

TEST(PreprocessorTest, OffModeNeverReduces) {
  const Case c = AnalyzeOne(Fig3Source());
  PreprocessPolicy policy;
  policy.mode = PreprocessMode::kOff;
  policy.max_len = 2;
  const PreprocessedTest out = Preprocess(c.unit, *c.method, c.annotations, policy);
  EXPECT_FALSE(out.reduced);
  EXPECT_EQ(out.text, c.unit.MethodText(*c.method));
}

TEST(PreprocessorTest, ModeNames) {
  for (PreprocessMode m : {PreprocessMode::kOverBudget, PreprocessMode::kAll,
                           PreprocessMode::kOff}) {
    EXPECT_EQ(ParsePreprocessMode(ToString(m)), m);
  }
  EXPECT_FALSE(ParsePreprocessMode("sometimes").has_value());
}

// Subset, order, completeness and idempotence over every synthetic and
// oracle test method.
TEST(PreprocessorTest, PropertiesOverCorpora) {
  std::vector<std::filesystem::path> files;
  for (const char* dir : {"synthetic", "smell_oracle", "fig3"}) {
    for (const auto& e :
         std::filesystem::recursive_directory_iterator(testing::DataPath(dir))) {
      if (e.path().extension() == ".java") files.push_back(e.path());
    }
  }
  ASSERT_GT(files.size(), 40u);
  int checked = 0;
  for (const auto& file : files) {
    const std::string source = ReadFile(file);
    for (const Case& c : AnalyzeAll(source)) {
      SCOPED_TRACE(file.string() + " " + c.method->name);
      const PreprocessedTest out = Preprocess(c.unit, *c.method, c.annotations, AllPolicy());
      const std::string_view original = c.unit.MethodText(*c.method);
      ASSERT_LE(out.retained_statement_count, out.original_statement_count);
      for (std::size_t i = 1; i < out.retained_statement_lines.size(); ++i) {
        ASSERT_LT(out.retained_statement_lines[i - 1], out.retained_statement_lines[i]);
      }
      std::set<std::size_t> annotated;
      for (const auto& a : c.annotations) annotated.insert(a.statement_path.front());
      std::size_t cursor = 0;
      int retained = 0;
      for (std::size_t i = 0; i < c.method->statements.size(); ++i) {
        const auto& s = c.method->statements[i];
        const std::string code(c.unit.Slice(s.code_begin, s.code_end));
        const bool is_if = s.kind == java::StatementKind::kIfStatement;
        if (annotated.contains(i) || is_if) {
          ++retained;
          if (s.children.empty()) {
            const auto pos = out.text.find(code, cursor);
            ASSERT_NE(pos, std::string::npos) << code;
            ASSERT_NE(original.find(code), std::string::npos);
            cursor = pos + code.size();
          }
        }
      }
      ASSERT_EQ(retained, out.retained_statement_count);

      // Re-run on the reduced method spliced back into its file.
      std::string spliced = source;
      spliced.replace(c.method->begin, c.method->end - c.method->begin, out.text);
      std::vector<Case> again = AnalyzeAll(spliced);
      const Case* twin = nullptr;
      for (const Case& a : again) {
        if (a.method->name == c.method->name) twin = &a;
      }
      ASSERT_NE(twin, nullptr);
      const PathMap paths = MapRetainedPaths(c.method->statements, twin->method->statements,
                                             c.annotations);
      std::vector<SmellAnnotation> carried;
      for (SmellAnnotation a : c.annotations) {
        ASSERT_TRUE(paths.contains(a.statement_path));
        a.statement_path = paths.at(a.statement_path);
        carried.push_back(std::move(a));
      }
      const PreprocessedTest second =
          Preprocess(twin->unit, *twin->method, carried, AllPolicy());
      ASSERT_EQ(second.retained_statement_count, out.retained_statement_count);
      ASSERT_EQ(second.original_statement_count, out.retained_statement_count);
      ASSERT_EQ(second.retained_statement_lines.size(), out.retained_statement_lines.size());
      // Smells that do not depend on local declarations are found again.
      auto context_free = [](const std::vector<SmellAnnotation>& anns) {
        std::vector<std::pair<int, SmellKind>> out;
        int first_line = anns.empty() ? 0 : anns.front().line;
        for (const auto& a : anns) {
          if (a.kind == SmellKind::kConditionalLogic || a.kind == SmellKind::kAssertionRoulette) {
            out.emplace_back(a.line - first_line, a.kind);
          }
        }
        return out;
      };
      ASSERT_EQ(context_free(twin->annotations).size(), context_free(c.annotations).size());
      ++checked;
    }
  }
  EXPECT_GE(checked, 100);
}

}  // namespace
}  // namespace flakylens
