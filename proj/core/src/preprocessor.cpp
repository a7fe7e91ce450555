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

#include <algorithm>
#include <cctype>
#include <map>

#include "flakylens/errors.hpp"

namespace flakylens {
namespace {

using java::CompilationUnit;
using java::MethodDecl;
using java::Statement;
using java::StatementKind;

using Path = std::vector<std::size_t>;

struct Edit {
  std::size_t begin;
  std::size_t end;
  std::string replacement;
};

bool AllSpace(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\f';
  });
}

std::size_t LineStart(std::string_view src, std::size_t pos) {
  const auto nl = src.rfind('\n', pos == 0 ? 0 : pos - 1);
  if (pos == 0 || nl == std::string_view::npos) return 0;
  return nl + 1;
}

std::size_t LineEnd(std::string_view src, std::size_t pos) {
  const auto nl = src.find('\n', pos);
  return nl == std::string_view::npos ? src.size() : nl;
}

std::string_view LeadingSpace(std::string_view src, std::size_t pos) {
  const std::size_t start = LineStart(src, pos);
  std::size_t i = start;
  while (i < src.size() && (src[i] == ' ' || src[i] == '\t')) ++i;
  return src.substr(start, i - start);
}

class Reducer {
 public:
  Reducer(const CompilationUnit& unit,
          const std::vector<SmellAnnotation>& annotations)
      : src_(unit.source) {
    for (const SmellAnnotation& a : annotations) {
      auto& flags = flags_[a.statement_path];
      if (a.flag) flags.push_back(*a.flag);
    }
  }

  bool Keep(const Statement& s, Path& path) {
    if (flags_.contains(path) || s.kind == StatementKind::kIfStatement) {
      return true;
    }
    for (std::size_t i = 0; i < s.children.size(); ++i) {
      path.push_back(i);
      const bool kept = Keep(s.children[i], path);
      path.pop_back();
      if (kept) return true;
    }
    return false;
  }

  // Text of a kept statement with its dropped descendants removed and its
  // flags appended.
  std::string Render(const Statement& s, Path& path) {
    std::vector<Edit> edits;
    CollectEdits(s, path, s.begin, s.end, edits);
    std::sort(edits.begin(), edits.end(),
              [](const Edit& a, const Edit& b) { return a.begin < b.begin; });
    std::string out;
    std::size_t pos = s.begin;
    for (const Edit& e : edits) {
      out.append(src_.substr(pos, e.begin - pos));
      out.append(e.replacement);
      pos = e.end;
    }
    out.append(src_.substr(pos, s.end - pos));
    return out;
  }

  const std::vector<int>& lines() const { return lines_; }
  const std::vector<std::string>& flags() const { return emitted_flags_; }

 private:
  void CollectEdits(const Statement& s, Path& path, std::size_t range_begin,
                    std::size_t range_end, std::vector<Edit>& edits) {
    lines_.push_back(s.line);
    if (auto it = flags_.find(path); it != flags_.end() && !it->second.empty()) {
      std::string text;
      for (const std::string& f : it->second) {
        text += ' ';
        text += f;
        emitted_flags_.push_back(f);
      }
      edits.push_back({FlagPosition(s), FlagPosition(s), std::move(text)});
    }
    for (std::size_t i = 0; i < s.children.size(); ++i) {
      const Statement& c = s.children[i];
      path.push_back(i);
      if (Keep(c, path)) {
        CollectEdits(c, path, s.begin, s.end, edits);
      } else if (c.is_bare_branch) {
        edits.push_back({c.begin, c.end, ";"});
      } else {
        edits.push_back(Deletion(c, range_begin, range_end));
      }
      path.pop_back();
    }
  }

  std::size_t FlagPosition(const Statement& s) const {
    if (s.children.empty()) return s.code_end;
    const std::size_t eol = LineEnd(src_, s.code_begin);
    return eol < s.children.front().begin ? eol : s.code_end;
  }

  // Removes the statement, and its whole line when nothing else is on it.
  Edit Deletion(const Statement& c, std::size_t range_begin,
                std::size_t range_end) const {
    const std::size_t ls = LineStart(src_, c.begin);
    const std::size_t le = LineEnd(src_, c.end);
    if (ls >= range_begin && le < range_end &&
        AllSpace(src_.substr(ls, c.begin - ls)) &&
        AllSpace(src_.substr(c.end, le - c.end))) {
      return {ls, le + 1, ""};
    }
    return {c.begin, c.end, ""};
  }

  std::string_view src_;
  std::map<Path, std::vector<std::string>> flags_;
  std::vector<int> lines_;
  std::vector<std::string> emitted_flags_;
};

void CollectLines(const std::vector<Statement>& statements,
                  std::vector<int>& out) {
  java::ForEachStatement(statements,
                         [&](const Statement& s) { out.push_back(s.line); });
}

void SortUnique(std::vector<int>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::string_view ToString(PreprocessMode mode) {
  switch (mode) {
    case PreprocessMode::kOverBudget:
      return "over-budget";
    case PreprocessMode::kAll:
      return "all";
    case PreprocessMode::kOff:
      return "off";
  }
  return "";
}

std::optional<PreprocessMode> ParsePreprocessMode(std::string_view text) {
  for (PreprocessMode m : {PreprocessMode::kOverBudget, PreprocessMode::kAll,
                           PreprocessMode::kOff}) {
    if (text == ToString(m)) return m;
  }
  return std::nullopt;
}

PreprocessedTest Preprocess(const CompilationUnit& unit,
                            const MethodDecl& method,
                            const std::vector<SmellAnnotation>& annotations,
                            const PreprocessPolicy& policy,
                            std::string test_id) {
  PreprocessedTest out;
  out.test_id = std::move(test_id);
  out.original_statement_count = static_cast<int>(method.statements.size());

  const std::string_view full = unit.MethodText(method);
  bool reduce = policy.mode == PreprocessMode::kAll;
  if (policy.mode == PreprocessMode::kOverBudget) {
    if (policy.vocab == nullptr) {
      throw InvalidArgumentError("over-budget preprocessing needs a vocabulary");
    }
    reduce = CountTokens(full, *policy.vocab) + 2 >
             static_cast<std::size_t>(policy.max_len);
  }
  if (!reduce) {
    out.text = std::string(full);
    CollectLines(method.statements, out.retained_statement_lines);
    SortUnique(out.retained_statement_lines);
    out.retained_statement_count = out.original_statement_count;
    return out;
  }

  const std::string_view src = unit.source;
  const std::string_view indent = LeadingSpace(src, method.decl_begin);
  if (method.javadoc) {
    out.text += *method.javadoc;
    out.text += '\n';
    out.text += indent;
  }
  out.text += method.signature_text;
  out.text += " {\n";

  Reducer reducer(unit, annotations);
  Path path;
  for (std::size_t i = 0; i < method.statements.size(); ++i) {
    const Statement& s = method.statements[i];
    path.assign(1, i);
    if (!reducer.Keep(s, path)) continue;
    out.text += LeadingSpace(src, s.begin);
    out.text += reducer.Render(s, path);
    out.text += '\n';
    ++out.retained_statement_count;
  }
  out.text += indent;
  out.text += '}';

  out.retained_statement_lines = reducer.lines();
  SortUnique(out.retained_statement_lines);
  out.flags_appended = reducer.flags();
  out.reduced = true;
  return out;
}

ReductionStats ComputeReductionStats(std::string_view original_text,
                                     std::string_view reduced_text,
                                     const Vocabulary& vocab) {
  ReductionStats stats;
  stats.original_tokens = static_cast<int>(CountTokens(original_text, vocab));
  stats.reduced_tokens = static_cast<int>(CountTokens(reduced_text, vocab));
  if (stats.original_tokens == 0) {
    throw ZeroLengthError("original text has no tokens");
  }
  // Flags can make a barely reduced text longer; that is no reduction.
  stats.reduction_rate = std::max(
      0.0, 1.0 - static_cast<double>(stats.reduced_tokens) /
                     stats.original_tokens);
  return stats;
}

}  // namespace flakylens
