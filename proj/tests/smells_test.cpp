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

#include "flakylens/smells.hpp"

#include <algorithm>
#include <filesystem>
#include <iterator>
#include <memory>
#include <regex>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "flakylens/io.hpp"
#include "flakylens/java_parser.hpp"
#include "test_support.hpp"

namespace flakylens {
namespace {

using java::CompilationUnit;

struct Parsed {
  std::unique_ptr<CompilationUnit> unit;
  const java::MethodDecl* method = nullptr;
  ClassContext ctx;
};

Parsed ParseTest(const std::string& source, const std::string& cls,
                 const std::string& method) {
  Parsed p;
  p.unit = std::make_unique<CompilationUnit>(java::ParseCompilationUnit(source));
  const java::ClassDecl* owner = nullptr;
  p.method = java::FindMethod(*p.unit, cls, method, &owner);
  EXPECT_NE(p.method, nullptr);
  const auto found = java::ExtractTestMethods(*p.unit);
  p.ctx = BuildClassContext(*p.unit, *owner, found.InitMethodFor(*owner));
  return p;
}

// Wraps `body` as the single test of class `cls` with common imports.
std::string Wrap(const std::string& cls, const std::string& body,
                 const std::string& members = "") {
  return "import static org.junit.Assert.assertEquals;\n"
         "import java.io.File;\n"
         "import java.util.*;\n"
         "import org.junit.Test;\n"
         "public class " + cls + " {\n" + members +
         "\n  @Test\n  public void testIt() throws Exception {\n" + body +
         "\n  }\n}\n";
}

std::vector<SmellKind> Kinds(const std::vector<SmellAnnotation>& anns) {
  std::vector<SmellKind> out;
  for (const auto& a : anns) out.push_back(a.kind);
  return out;
}

bool Has(const std::vector<SmellAnnotation>& anns, SmellKind k) {
  for (const auto& a : anns) {
    if (a.kind == k) return true;
  }
  return false;
}

TEST(SmellsTest, Fig3GoldenCase) {
  const Parsed p = ParseTest(ReadFile(testing::DataPath("fig3/ExampleTest.java")),
                             "ExampleTest", "test_example");
  const auto anns = DetectSmells(*p.method, p.ctx);
  ASSERT_EQ(anns.size(), 4u);
  EXPECT_EQ(Kinds(anns),
            (std::vector<SmellKind>{SmellKind::kFireAndForget,
                                    SmellKind::kConditionalLogic,
                                    SmellKind::kAssertionRoulette,
                                    SmellKind::kAssertionRoulette}));
  const int start = p.method->source_span.start_line;
  std::vector<int> relative;
  for (const auto& a : anns) relative.push_back(a.line - start + 1);
  EXPECT_EQ(relative, (std::vector<int>{5, 7, 8, 10}));
  for (const auto& a : anns) EXPECT_FALSE(a.flag.has_value());
}

TEST(SmellsTest, NamesCodesAndFlags) {
  for (SmellKind k : kAllSmells) {
    EXPECT_EQ(ParseSmellKind(ToString(k)), k);
    EXPECT_EQ(ParseSmellKind(ShortCode(k)), k);
  }
  EXPECT_FALSE(ParseSmellKind("Nope").has_value());
  EXPECT_EQ(FlagFor(SmellKind::kIndirectTesting), "//IT");
  EXPECT_EQ(FlagFor(SmellKind::kEagerTesting), "//ET");
  EXPECT_EQ(FlagFor(SmellKind::kTestRunWar), "//RW");
  EXPECT_EQ(FlagFor(SmellKind::kResourceOptimism), "//RO");
  EXPECT_FALSE(FlagFor(SmellKind::kConditionalLogic).has_value());
  EXPECT_FALSE(FlagFor(SmellKind::kFireAndForget).has_value());
  EXPECT_FALSE(FlagFor(SmellKind::kMysteryGuest).has_value());
  EXPECT_FALSE(FlagFor(SmellKind::kAssertionRoulette).has_value());
}

TEST(SmellsTest, AssertionNames) {
  EXPECT_TRUE(IsAssertionName("assertEquals"));
  EXPECT_TRUE(IsAssertionName("assertThat"));
  EXPECT_TRUE(IsAssertionName("fail"));
  EXPECT_FALSE(IsAssertionName("assertion"));
  EXPECT_FALSE(IsAssertionName("verify"));
}

TEST(SmellsTest, IndirectTestingSkipsLibrariesAndProduction) {
  const Parsed p = ParseTest(
      Wrap("AccountTest",
           "    Account a = new Account();\n"
           "    List<String> xs = new ArrayList<>();\n"
           "    Helper h = new Helper();\n"
           "    h.run();"),
      "AccountTest", "testIt");
  const auto anns = DetectSmells(*p.method, p.ctx);
  std::vector<std::size_t> it_statements;
  for (const auto& a : anns) {
    if (a.kind == SmellKind::kIndirectTesting) it_statements.push_back(a.statement_path[0]);
  }
  EXPECT_EQ(it_statements, (std::vector<std::size_t>{2, 3}));
}

TEST(SmellsTest, CustomLibraryPrefixes) {
  const std::string src =
      "import com.acme.Helper;\nimport org.junit.Test;\n"
      "class FooTest { @Test void testX() { Helper.go(); } }";
  const Parsed p = ParseTest(src, "FooTest", "testX");
  EXPECT_TRUE(Has(DetectSmells(*p.method, p.ctx), SmellKind::kIndirectTesting));
  SmellOptions options;
  options.library_prefixes.push_back("com.acme.");
  EXPECT_FALSE(Has(DetectSmells(*p.method, p.ctx, options),
                   SmellKind::kIndirectTesting));
}

TEST(SmellsTest, EagerTestingNeedsTwoDistinctProductionMethods) {
  const Parsed one = ParseTest(
      Wrap("CartTest", "    Cart c = new Cart();\n    c.add(1);\n    c.add(2);"),
      "CartTest", "testIt");
  EXPECT_FALSE(Has(DetectSmells(*one.method, one.ctx), SmellKind::kEagerTesting));
  const Parsed two = ParseTest(
      Wrap("CartTest", "    Cart c = new Cart();\n    c.add(1);\n    c.remove(1);"),
      "CartTest", "testIt");
  const auto anns = DetectSmells(*two.method, two.ctx);
  int eager = 0;
  for (const auto& a : anns) {
    if (a.kind == SmellKind::kEagerTesting) {
      ++eager;
      EXPECT_EQ(a.flag, "//ET");
    }
  }
  EXPECT_EQ(eager, 2);
}

TEST(SmellsTest, EagerTestingOffWithoutConfidentProductionName) {
  const Parsed p = ParseTest(
      Wrap("CartChecks", "    Cart c = new Cart();\n    c.add(1);\n    c.remove(1);"),
      "CartChecks", "testIt");
  EXPECT_FALSE(p.ctx.production_confident);
  EXPECT_FALSE(Has(DetectSmells(*p.method, p.ctx), SmellKind::kEagerTesting));
}

TEST(SmellsTest, TestRunWarOnStaticMutableFields) {
  const std::string members =
      "  static int shared;\n  static final int LIMIT = 1;\n  int own;\n";
  auto detect = [&](const std::string& body) {
    const Parsed p = ParseTest(Wrap("StateTest", body, members), "StateTest", "testIt");
    return Has(DetectSmells(*p.method, p.ctx), SmellKind::kTestRunWar);
  };
  EXPECT_TRUE(detect("    shared = 2;"));
  EXPECT_TRUE(detect("    StateTest.shared++;"));
  EXPECT_FALSE(detect("    int x = LIMIT;"));
  EXPECT_FALSE(detect("    own = 3;"));
  EXPECT_FALSE(detect("    int shared = 1;\n    shared++;"));
}

TEST(SmellsTest, ConditionalLogicOnlyForIf) {
  const Parsed p = ParseTest(
      Wrap("LoopTest",
           "    for (int i = 0; i < 2; i++) {\n      if (i > 0) {\n        i++;\n      }\n    }\n"
           "    while (false) {}"),
      "LoopTest", "testIt");
  const auto anns = DetectSmells(*p.method, p.ctx);
  ASSERT_EQ(anns.size(), 1u);
  EXPECT_EQ(anns[0].kind, SmellKind::kConditionalLogic);
  EXPECT_EQ(anns[0].statement_path, (std::vector<std::size_t>{0, 0}));
}

TEST(SmellsTest, ResourceOptimismStrictAndLenient) {
  const std::string body =
      "    File f = new File(\"a.txt\");\n"
      "    if (f.exists()) {\n"
      "      f.delete();\n"
      "    }";
  const Parsed p = ParseTest(Wrap("FilesTest", body), "FilesTest", "testIt");
  SmellOptions strict;
  strict.strict = true;
  int strict_ro = 0;
  for (const auto& a : DetectSmells(*p.method, p.ctx, strict)) {
    if (a.kind == SmellKind::kResourceOptimism) ++strict_ro;
  }
  EXPECT_EQ(strict_ro, 3);
  // Lenient: the first use precedes any check; after exists() it is fine.
  std::vector<std::size_t> lenient;
  for (const auto& a : DetectSmells(*p.method, p.ctx)) {
    if (a.kind == SmellKind::kResourceOptimism) lenient.push_back(a.statement_path.size());
  }
  EXPECT_EQ(lenient, (std::vector<std::size_t>{1}));
}

TEST(SmellsTest, PathCheckInInitMethodClearsResourceOptimism) {
  const std::string members =
      "  private File f = new File(\"x\");\n"
      "  @org.junit.Before public void setUp() { f.getPath(); }\n";
  const Parsed p = ParseTest(Wrap("CheckedTest", "    f.delete();", members),
                             "CheckedTest", "testIt");
  SmellOptions strict;
  strict.strict = true;
  const auto anns = DetectSmells(*p.method, p.ctx, strict);
  EXPECT_FALSE(Has(anns, SmellKind::kResourceOptimism));
  EXPECT_TRUE(Has(anns, SmellKind::kMysteryGuest));
}

TEST(SmellsTest, PathCheckOnNonFileReceiverDoesNotCount) {
  const std::string members = "  private Config cfg;\n";
  const Parsed p = ParseTest(
      Wrap("OtherTest", "    cfg.getPath();\n    new File(\"x\").delete();", members),
      "OtherTest", "testIt");
  EXPECT_TRUE(Has(DetectSmells(*p.method, p.ctx), SmellKind::kResourceOptimism));
}

TEST(SmellsTest, MysteryGuestAndFireAndForgetViaWildcards) {
  const std::string src =
      "import java.sql.*;\nimport java.util.concurrent.*;\nimport org.junit.Test;\n"
      "class DbTest { @Test void testX() {\n"
      "  Connection c = DriverManager.getConnection(\"u\");\n"
      "  CountDownLatch latch = new CountDownLatch(1);\n"
      "} }";
  const Parsed p = ParseTest(src, "DbTest", "testX");
  const auto anns = DetectSmells(*p.method, p.ctx);
  ASSERT_EQ(anns.size(), 2u);
  EXPECT_EQ(anns[0].kind, SmellKind::kMysteryGuest);
  EXPECT_EQ(anns[1].kind, SmellKind::kFireAndForget);
}

TEST(SmellsTest, SmellsWithinAStatementFollowEnumOrder) {
  const std::string members = "  static int n;\n";
  const Parsed p = ParseTest(
      Wrap("MixTest", "    if (n > new Helper().size()) {}", members), "MixTest",
      "testIt");
  EXPECT_EQ(Kinds(DetectSmells(*p.method, p.ctx)),
            (std::vector<SmellKind>{SmellKind::kIndirectTesting,
                                    SmellKind::kTestRunWar,
                                    SmellKind::kConditionalLogic}));
}

TEST(SmellsTest, ResolutionHelpers) {
  const Parsed p = ParseTest(Wrap("ResTest", "    int x = 1;"), "ResTest", "testIt");
  EXPECT_EQ(QualifyTypeName("File", p.ctx), "java.io.File");
  EXPECT_EQ(QualifyTypeName("List<String>", p.ctx), "java.util.List");
  EXPECT_EQ(QualifyTypeName("Thread", p.ctx), "java.lang.Thread");
  EXPECT_EQ(QualifyTypeName("final File[]", p.ctx), "java.io.File");
  EXPECT_FALSE(QualifyTypeName("Unknown", p.ctx).has_value());
  EXPECT_EQ(QualifyTypeName("com.x.Y", p.ctx), "com.x.Y");
}

TEST(SmellsTest, DetectionIsDeterministicAndStructural) {
  const Parsed p = ParseTest(ReadFile(testing::DataPath("fig3/ExampleTest.java")),
                             "ExampleTest", "test_example");
  const auto a = DetectSmells(*p.method, p.ctx);
  const auto b = DetectSmells(*p.method, p.ctx);
  EXPECT_EQ(a, b);
  for (const auto& ann : a) {
    const java::Statement* s = nullptr;
    const std::vector<java::Statement>* level = &p.method->statements;
    for (std::size_t idx : ann.statement_path) {
      ASSERT_LT(idx, level->size());
      s = &(*level)[idx];
      level = &s->children;
    }
    ASSERT_NE(s, nullptr);
    EXPECT_EQ(s->line, ann.line);
  }
}

std::vector<std::filesystem::path> OracleFiles() {
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(testing::DataPath("smell_oracle"))) {
    if (e.path().extension() == ".java") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<std::pair<std::vector<std::size_t>, SmellKind>> PathKinds(
    const std::vector<SmellAnnotation>& anns) {
  std::vector<std::pair<std::vector<std::size_t>, SmellKind>> out;
  for (const auto& a : anns) out.emplace_back(a.statement_path, a.kind);
  return out;
}

TEST(SmellsTest, TrailingLineCommentsDoNotChangeClassification) {
  const char* flags[] = {" //IT", " //ET", " //RW", " //RO", " // note"};
  int checked = 0;
  for (const auto& file : OracleFiles()) {
    const std::string source = ReadFile(file);
    const java::CompilationUnit unit = java::ParseCompilationUnit(source);
    const auto found = java::ExtractTestMethods(unit);
    for (const auto& ref : found.tests) {
      const ClassContext ctx = BuildClassContext(unit, *ref.owner, found.InitMethodFor(*ref.owner));
      const auto before = DetectSmells(*ref.method, ctx);
      // Comment every statement that ends its line, back to front so
      // offsets stay valid.
      std::vector<std::size_t> ends;
      java::ForEachStatement(ref.method->statements, [&](const java::Statement& st) {
        std::size_t i = st.code_end;
        while (i < source.size() && (source[i] == ' ' || source[i] == '\t')) ++i;
        if (i < source.size() && source[i] == '\n') ends.push_back(st.code_end);
      });
      std::sort(ends.rbegin(), ends.rend());
      ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
      std::string commented = source;
      for (std::size_t k = 0; k < ends.size(); ++k) {
        commented.insert(ends[k], flags[k % std::size(flags)]);
      }
      const java::CompilationUnit unit2 = java::ParseCompilationUnit(commented);
      const auto found2 = java::ExtractTestMethods(unit2);
      const java::ClassDecl* owner2 = nullptr;
      const java::MethodDecl* m2 =
          java::FindMethod(unit2, ref.owner->name, ref.method->name, &owner2);
      ASSERT_NE(m2, nullptr);
      const auto after =
          DetectSmells(*m2, BuildClassContext(unit2, *owner2, found2.InitMethodFor(*owner2)));
      EXPECT_EQ(PathKinds(before), PathKinds(after)) << file;
      ++checked;
    }
  }
  EXPECT_GE(checked, 40);
}

TEST(SmellsTest, RemovingStaticFieldsOnlyRemovesTestRunWar) {
  for (const auto& file : OracleFiles()) {
    const java::CompilationUnit unit = java::ParseCompilationUnit(ReadFile(file));
    const auto found = java::ExtractTestMethods(unit);
    for (const auto& ref : found.tests) {
      const ClassContext ctx = BuildClassContext(unit, *ref.owner, found.InitMethodFor(*ref.owner));
      const auto full = DetectSmells(*ref.method, ctx);
      for (const std::string& field : ctx.static_nonfinal_fields) {
        ClassContext reduced = ctx;
        reduced.static_nonfinal_fields.erase(field);
        const auto fewer = DetectSmells(*ref.method, reduced);
        std::vector<SmellAnnotation> full_other, fewer_other;
        std::set<std::vector<std::size_t>> full_rw;
        for (const auto& a : full) {
          if (a.kind == SmellKind::kTestRunWar) full_rw.insert(a.statement_path);
          else full_other.push_back(a);
        }
        for (const auto& a : fewer) {
          if (a.kind == SmellKind::kTestRunWar) EXPECT_TRUE(full_rw.contains(a.statement_path));
          else fewer_other.push_back(a);
        }
        EXPECT_EQ(full_other, fewer_other) << file << " " << field;
      }
    }
  }
}

// Each annotation is re-checked against the raw text of its statement.
TEST(SmellsTest, AnnotationsAreSoundAgainstStatementText) {
  const std::regex assertion(
      R"(\b(assertArrayEquals|assertEquals|assertFalse|assertNotNull|assertNotSame|assertNull|assertSame|assertThat|assertTrue|fail)\s*\()");
  for (const auto& file : OracleFiles()) {
    const java::CompilationUnit unit = java::ParseCompilationUnit(ReadFile(file));
    const auto found = java::ExtractTestMethods(unit);
    for (const auto& ref : found.tests) {
      const ClassContext ctx = BuildClassContext(unit, *ref.owner, found.InitMethodFor(*ref.owner));
      for (const auto& a : DetectSmells(*ref.method, ctx)) {
        const java::Statement* st = nullptr;
        const std::vector<java::Statement>* level = &ref.method->statements;
        for (std::size_t idx : a.statement_path) {
          st = &(*level)[idx];
          level = &st->children;
        }
        const std::string text(unit.Slice(st->code_begin, st->code_end));
        switch (a.kind) {
          case SmellKind::kConditionalLogic:
            EXPECT_TRUE(text.starts_with("if")) << file << ": " << text;
            break;
          case SmellKind::kAssertionRoulette:
            EXPECT_TRUE(std::regex_search(text, assertion)) << file << ": " << text;
            break;
          case SmellKind::kTestRunWar: {
            bool mentions = false;
            for (const std::string& f : ctx.static_nonfinal_fields) {
              mentions = mentions || std::regex_search(text, std::regex("\\b" + f + "\\b"));
            }
            EXPECT_TRUE(mentions) << file << ": " << text;
            break;
          }
          default:
            EXPECT_TRUE(a.flag.has_value() == FlagFor(a.kind).has_value());
        }
      }
    }
  }
}

}  // namespace
}  // namespace flakylens
