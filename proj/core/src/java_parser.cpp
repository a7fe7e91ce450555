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

#include "flakylens/java_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <string>
#include <utility>

#include "flakylens/java_lexer.hpp"

namespace flakylens::java {
namespace {

constexpr std::array<std::string_view, 14> kModifiers = {
    "public",    "private",  "protected",    "static",   "final",
    "abstract",  "native",   "synchronized", "transient", "volatile",
    "strictfp",  "default",  "sealed",       "non-sealed",
};

constexpr std::array<std::string_view, 9> kPrimitiveTypes = {
    "boolean", "byte", "char", "short", "int",
    "long",    "float", "double", "void",
};

bool IsModifier(std::string_view word) {
  return std::find(kModifiers.begin(), kModifiers.end(), word) !=
         kModifiers.end();
}

bool IsPrimitive(std::string_view word) {
  return std::find(kPrimitiveTypes.begin(), kPrimitiveTypes.end(), word) !=
         kPrimitiveTypes.end();
}

bool IsOpener(const Token& t) {
  return t.kind == TokenKind::kSeparator &&
         (t.text == "(" || t.text == "[" || t.text == "{");
}

bool IsCloser(const Token& t) {
  return t.kind == TokenKind::kSeparator &&
         (t.text == ")" || t.text == "]" || t.text == "}");
}

bool IsCapitalized(std::string_view word) {
  return !word.empty() && std::isupper(static_cast<unsigned char>(word[0]));
}

std::string_view LastSegment(std::string_view dotted) {
  const auto pos = dotted.rfind('.');
  return pos == std::string_view::npos ? dotted : dotted.substr(pos + 1);
}

std::string StripWhitespace(std::string_view text) {
  std::string out;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

class Parser {
 public:
  explicit Parser(CompilationUnit& unit) : unit_(unit), src_(unit.source) {
    for (const Token& t : Lex(src_)) {
      if (t.IsComment()) {
        comments_.push_back(t);
      } else {
        toks_.push_back(t);
      }
    }
    n_ = toks_.size();
  }

  void Run() {
    std::size_t i = 0;
    while (i < n_) {
      if (At(i, "package")) {
        auto [name, next] = QualifiedUntilSemicolon(i + 1);
        unit_.package_name = std::move(name);
        i = next;
      } else if (At(i, "import")) {
        const bool is_static = At(i + 1, "static");
        auto [path, next] = QualifiedUntilSemicolon(is_static ? i + 2 : i + 1);
        (is_static ? unit_.static_imports : unit_.imports)
            .push_back(std::move(path));
        i = next;
      } else if (At(i, "@") && At(i + 1, "interface")) {
        i = ParseType(i + 1, n_, unit_.type_decls);
      } else if (At(i, "@")) {
        i = SkipAnnotation(i, n_, nullptr);
      } else if (IsTypeKeyword(i)) {
        i = ParseType(i, n_, unit_.type_decls);
      } else {
        ++i;
      }
    }
  }

 private:
  // ---------------------------------------------------------------------
  // Token helpers

  bool At(std::size_t i, std::string_view s) const {
    return i < n_ && toks_[i].Is(s);
  }

  bool IsIdent(std::size_t i) const {
    return i < n_ && toks_[i].kind == TokenKind::kIdentifier;
  }

  bool IsTypeKeyword(std::size_t i) const {
    if (At(i, "class") || At(i, "interface") || At(i, "enum")) {
      return IsIdent(i + 1);
    }
    // 'record' is contextual.
    return At(i, "record") && IsIdent(i + 1) &&
           (At(i + 2, "(") || At(i + 2, "<"));
  }

  // Index of the closer matching the opener at `open`, or `limit` if the
  // group is unterminated before `limit`.
  std::size_t Match(std::size_t open, std::size_t limit) const {
    int depth = 0;
    for (std::size_t i = open; i < limit; ++i) {
      if (IsOpener(toks_[i])) {
        ++depth;
      } else if (IsCloser(toks_[i])) {
        if (--depth == 0) return i;
      }
    }
    return limit;
  }

  // Index of the opener matching the closer at `close`, never below `lo`.
  std::size_t MatchBackward(std::size_t close, std::size_t lo) const {
    int depth = 0;
    for (std::size_t i = close + 1; i-- > lo;) {
      if (IsCloser(toks_[i])) {
        ++depth;
      } else if (IsOpener(toks_[i])) {
        if (--depth == 0) return i;
      }
    }
    return lo;
  }

  // Matches a generic argument list starting at '<'. Returns the index of
  // the closing '>' or nullopt if the tokens do not look like type args.
  std::optional<std::size_t> MatchAngle(std::size_t open,
                                        std::size_t limit) const {
    int depth = 0;
    for (std::size_t i = open; i < limit; ++i) {
      const Token& t = toks_[i];
      if (t.Is("<")) {
        ++depth;
      } else if (t.Is(">")) {
        if (--depth == 0) return i;
      } else if (t.kind == TokenKind::kIdentifier || t.Is(",") ||
                 t.Is(".") || t.Is("?") || t.Is("extends") ||
                 t.Is("super") || t.Is("&") || t.Is("[") || t.Is("]") ||
                 t.Is("@") || IsPrimitive(t.text)) {
        continue;
      } else {
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::optional<std::size_t> MatchAngleBackward(std::size_t close,
                                                std::size_t lo) const {
    int depth = 0;
    for (std::size_t i = close + 1; i-- > lo;) {
      const Token& t = toks_[i];
      if (t.Is(">")) {
        ++depth;
      } else if (t.Is("<")) {
        if (--depth == 0) return i;
      } else if (!(t.kind == TokenKind::kIdentifier || t.Is(",") ||
                   t.Is(".") || t.Is("?") || t.Is("extends") ||
                   t.Is("super") || t.Is("&") || t.Is("[") || t.Is("]") ||
                   IsPrimitive(t.text))) {
        return std::nullopt;
      }
    }
    return std::nullopt;
  }

  std::string Text(std::size_t first, std::size_t last) const {
    return src_.substr(toks_[first].begin,
                       toks_[last].end - toks_[first].begin);
  }

  std::pair<std::string, std::size_t> QualifiedUntilSemicolon(
      std::size_t i) const {
    std::string name;
    while (i < n_ && !At(i, ";")) {
      // Stop at anything that cannot appear in a dotted path so a missing
      // semicolon does not swallow the next declaration.
      if (toks_[i].kind != TokenKind::kIdentifier && !At(i, ".") &&
          !At(i, "*") && toks_[i].kind != TokenKind::kKeyword) {
        break;
      }
      if (!name.empty() && toks_[i].kind != TokenKind::kSeparator &&
          name.back() != '.' && !At(i, "*")) {
        break;
      }
      name += toks_[i].text;
      ++i;
    }
    if (At(i, ";")) ++i;
    return {name, i};
  }

  // Skips '@Name(args)'. Appends the simple name to `names` if given.
  std::size_t SkipAnnotation(std::size_t i, std::size_t limit,
                             std::vector<std::string>* names) const {
    std::size_t j = i + 1;
    std::string_view last;
    while (j < limit && IsIdent(j)) {
      last = toks_[j].text;
      if (At(j + 1, ".") && IsIdent(j + 2)) {
        j += 2;
      } else {
        ++j;
        break;
      }
    }
    if (names != nullptr && !last.empty()) names->emplace_back(last);
    if (j < limit && At(j, "(")) j = std::min(Match(j, limit) + 1, limit);
    return j;
  }

  // ---------------------------------------------------------------------
  // Types and members

  std::size_t ParseType(std::size_t i, std::size_t limit,
                        std::vector<ClassDecl>& out) {
    ClassDecl cls;
    const std::string_view keyword = toks_[i].text;
    if (keyword == "interface") {
      cls.kind = (i > 0 && At(i - 1, "@")) ? TypeKind::kAnnotation
                                           : TypeKind::kInterface;
    } else if (keyword == "enum") {
      cls.kind = TypeKind::kEnum;
    } else if (keyword == "record") {
      cls.kind = TypeKind::kRecord;
    }
    cls.line = toks_[i].line;
    std::size_t j = i + 1;
    if (IsIdent(j)) {
      cls.name = std::string(toks_[j].text);
      ++j;
    }
    while (j < limit && !At(j, "{") && !At(j, ";")) {
      if (At(j, "(")) {
        j = Match(j, limit);
      }
      ++j;
    }
    if (j >= limit || At(j, ";")) {
      if (!cls.name.empty()) out.push_back(std::move(cls));
      return std::min(j + 1, limit);
    }
    const std::size_t close = Match(j, limit);
    ParseClassBody(cls, j + 1, close);
    if (!cls.name.empty()) out.push_back(std::move(cls));
    return std::min(close + 1, limit);
  }

  std::optional<Token> JavadocBetween(std::size_t from_offset,
                                      std::size_t to_offset) const {
    std::optional<Token> found;
    for (const Token& c : comments_) {
      if (c.begin >= to_offset) break;
      if (c.kind == TokenKind::kJavadoc && c.begin >= from_offset &&
          c.end <= to_offset) {
        found = c;
      }
    }
    return found;
  }

  void ParseClassBody(ClassDecl& cls, std::size_t begin, std::size_t end) {
    std::size_t i = begin;
    std::size_t prev_end_offset = begin > 0 ? toks_[begin - 1].end : 0;
    if (cls.kind == TypeKind::kEnum) {
      // Enum constants run up to the first top-level ';'.
      std::size_t j = i;
      while (j < end && !At(j, ";")) {
        j = IsOpener(toks_[j]) ? Match(j, end) + 1 : j + 1;
      }
      if (j >= end) return;
      i = j + 1;
      prev_end_offset = toks_[j].end;
    }
    while (i < end) {
      if (At(i, ";")) {
        prev_end_offset = toks_[i].end;
        ++i;
        continue;
      }
      const std::size_t member_start = i;
      std::vector<std::string> annotations;
      bool is_static = false;
      bool is_final = false;
      bool nested_done = false;
      while (i < end) {
        if (At(i, "@") && At(i + 1, "interface")) {
          i = ParseType(i + 1, end, cls.nested);
          nested_done = true;
          break;
        }
        if (At(i, "@")) {
          i = SkipAnnotation(i, end, &annotations);
        } else if (At(i, "non") && At(i + 1, "-") && At(i + 2, "sealed")) {
          i += 3;
        } else if (IsModifier(toks_[i].text) &&
                   (toks_[i].kind == TokenKind::kKeyword ||
                    toks_[i].text == "sealed")) {
          is_static |= toks_[i].text == "static";
          is_final |= toks_[i].text == "final";
          ++i;
        } else {
          break;
        }
      }
      if (nested_done) {
        prev_end_offset = toks_[std::min(i, end) - 1].end;
        continue;
      }
      if (i >= end) break;
      if (IsTypeKeyword(i)) {
        i = ParseType(i, end, cls.nested);
        prev_end_offset = toks_[i - 1].end;
        continue;
      }
      if (At(i, "{")) {
        i = std::min(Match(i, end) + 1, end);
        prev_end_offset = toks_[i - 1].end;
        continue;
      }
      std::size_t j = i;
      while (j < end && !At(j, "(") && !At(j, "=") && !At(j, ";") &&
             !At(j, "{") && !At(j, "}")) {
        j = At(j, "[") ? Match(j, end) + 1 : j + 1;
      }
      if (j >= end) break;
      if (At(j, "(")) {
        i = ParseMethod(cls, member_start, i, j, end, std::move(annotations),
                        prev_end_offset);
      } else if (At(j, "=") || At(j, ";")) {
        const std::size_t stop = ScanToSemicolon(i, end).first;
        ParseFields(cls, i, stop, is_static, is_final);
        i = std::min(stop + 1, end);
      } else if (At(j, "{")) {
        i = std::min(Match(j, end) + 1, end);
      } else {
        i = j + 1;
      }
      prev_end_offset = toks_[std::min(i, end) - 1].end;
    }
  }

  std::size_t ParseMethod(ClassDecl& cls, std::size_t member_start,
                          std::size_t type_start, std::size_t open_paren,
                          std::size_t end,
                          std::vector<std::string> annotations,
                          std::size_t prev_end_offset) {
    const std::size_t close_paren = Match(open_paren, end);
    std::size_t k = std::min(close_paren + 1, end);
    while (k < end && !At(k, "{") && !At(k, ";") && !At(k, "}")) {
      k = At(k, "(") ? Match(k, end) + 1 : k + 1;
    }
    const bool has_body = k < end && At(k, "{");
    const std::size_t body_close = has_body ? Match(k, end) : k;
    const std::size_t next = std::min(
        (has_body || (k < end && At(k, ";"))) ? body_close + 1 : k, end);

    if (open_paren == 0 || !IsIdent(open_paren - 1)) return next;
    const std::size_t name_idx = open_paren - 1;
    // Constructors have no return type.
    if (name_idx == type_start && toks_[name_idx].text == cls.name) {
      return next;
    }

    MethodDecl m;
    m.name = std::string(toks_[name_idx].text);
    m.annotations = std::move(annotations);
    m.decl_begin = toks_[member_start].begin;
    if (auto doc = JavadocBetween(prev_end_offset, m.decl_begin)) {
      m.javadoc = std::string(doc->text);
      m.begin = doc->begin;
      m.source_span.start_line = doc->line;
    } else {
      m.begin = m.decl_begin;
      m.source_span.start_line = toks_[member_start].line;
    }
    if (close_paren < end && close_paren > open_paren + 1) {
      m.parameters_text = Text(open_paren + 1, close_paren - 1);
    }
    const std::size_t sig_last = k > member_start ? k - 1 : member_start;
    m.signature_text = Text(member_start, std::min(sig_last, n_ - 1));
    m.has_body = has_body;
    if (has_body) {
      m.body_begin = toks_[k].begin;
      m.body_start_line = toks_[k].line;
      const std::size_t last = body_close < end ? body_close : end - 1;
      m.body_end = toks_[last].end;
      m.body_end_line = toks_[last].line;
      m.end = m.body_end;
      m.statements = ParseBlock(k + 1, body_close);
    } else {
      const std::size_t last = std::min(k, end - 1);
      m.end = toks_[last].end;
      m.body_end_line = toks_[last].line;
    }
    m.source_span.end_line = has_body ? m.body_end_line : toks_[sig_last].line;
    cls.methods.push_back(std::move(m));
    return next;
  }

  void ParseFields(ClassDecl& cls, std::size_t first, std::size_t stop,
                   bool is_static, bool is_final) {
    // The first declarator name is the first identifier at angle depth 0
    // followed by '=', ',', ';' or '['.
    int angle = 0;
    std::size_t name_idx = stop;
    for (std::size_t i = first; i < stop; ++i) {
      if (At(i, "<")) ++angle;
      if (At(i, ">")) --angle;
      if (angle == 0 && IsIdent(i) &&
          (i + 1 >= stop || At(i + 1, "=") || At(i + 1, ",") ||
           At(i + 1, ";") || At(i + 1, "["))) {
        name_idx = i;
        break;
      }
    }
    if (name_idx == stop || name_idx == first) return;
    const std::string type_text = Text(first, name_idx - 1);
    auto add = [&](std::size_t idx) {
      cls.fields_.push_back(FieldDecl{std::string(toks_[idx].text), is_static,
                                      is_final, type_text});
    };
    add(name_idx);
    for (std::size_t i = name_idx + 1; i < stop; ++i) {
      if (IsOpener(toks_[i])) {
        i = Match(i, stop);
      } else if (At(i, ",") && IsIdent(i + 1)) {
        add(i + 1);
      }
    }
  }

  // ---------------------------------------------------------------------
  // Statements

  // Index of the ';' ending a simple statement at `i`, with a flag telling
  // whether one was found. Without one the statement stops before the
  // enclosing block's '}' (or at `end`).
  std::pair<std::size_t, bool> ScanToSemicolon(std::size_t i,
                                               std::size_t end) const {
    int depth = 0;
    for (std::size_t j = i; j < end; ++j) {
      if (IsOpener(toks_[j])) {
        ++depth;
      } else if (IsCloser(toks_[j])) {
        if (depth == 0) return {j > i ? j - 1 : i, false};
        --depth;
      } else if (depth == 0 && At(j, ";")) {
        return {j, true};
      }
    }
    return {end > i ? end - 1 : i, false};
  }

  std::vector<Statement> ParseBlock(std::size_t begin, std::size_t end) {
    std::vector<Statement> out;
    std::size_t i = begin;
    while (i < end) {
      Statement s;
      const std::size_t next = ParseStatement(i, end, s);
      out.push_back(std::move(s));
      i = std::max(next, i + 1);
    }
    const std::size_t open_offset = begin > 0 ? toks_[begin - 1].end : 0;
    const std::size_t close_offset = end < n_ ? toks_[end].begin : src_.size();
    AttachComments(out, open_offset, close_offset);
    return out;
  }

  void AttachComments(std::vector<Statement>& block, std::size_t open_offset,
                      std::size_t close_offset) const {
    for (std::size_t k = 0; k < block.size(); ++k) {
      Statement& s = block[k];
      if (k == 0) {
        for (const Token& c : comments_) {
          if (c.begin >= open_offset && c.end <= s.code_begin) {
            s.begin = std::min(s.begin, c.begin);
          }
        }
      }
      const std::size_t limit =
          k + 1 < block.size() ? block[k + 1].code_begin : close_offset;
      for (const Token& c : comments_) {
        if (c.begin >= s.code_end && c.end <= limit) {
          s.end = std::max(s.end, c.end);
        }
      }
      s.source_text = src_.substr(s.begin, s.end - s.begin);
    }
  }

  void SetRange(Statement& s, std::size_t first, std::size_t last) const {
    s.code_begin = toks_[first].begin;
    s.code_end = toks_[last].end;
    s.begin = s.code_begin;
    s.end = s.code_end;
    s.line = toks_[first].line;
    s.end_line = toks_[last].line;
    s.source_text = src_.substr(s.begin, s.end - s.begin);
  }

  // Parses an if/else/loop body. Braced bodies contribute their statements;
  // an unbraced body is a single child marked as a bare branch.
  std::size_t ParseBranch(std::size_t i, std::size_t end, Statement& parent) {
    if (i >= end) return end;
    if (At(i, "{")) {
      const std::size_t close = Match(i, end);
      for (Statement& child : ParseBlock(i + 1, close)) {
        parent.children.push_back(std::move(child));
      }
      return std::min(close + 1, end);
    }
    Statement child;
    const std::size_t next = ParseStatement(i, end, child);
    child.is_bare_branch = true;
    parent.children.push_back(std::move(child));
    return next;
  }

  // Parses the paren group at `i` as a block-statement header.
  std::size_t ParseHeader(std::size_t i, std::size_t end, Statement& s) {
    if (!At(i, "(")) return i;
    const std::size_t close = Match(i, end);
    if (close > i + 1 && close < end) {
      CollectFacts(s, i + 1, close - 1);
    }
    return std::min(close + 1, end);
  }

  std::size_t ParseStatement(std::size_t i, std::size_t end, Statement& s) {
    const Token& t = toks_[i];
    std::size_t next = i + 1;

    if (t.Is("if") && At(i + 1, "(")) {
      s.kind = StatementKind::kIfStatement;
      next = ParseHeader(i + 1, end, s);
      next = ParseBranch(next, end, s);
      if (At(next, "else")) {
        next = ParseBranch(next + 1, end, s);
      }
    } else if ((t.Is("for") || t.Is("while")) && At(i + 1, "(")) {
      s.kind = StatementKind::kLoop;
      const std::size_t close = Match(i + 1, end);
      if (t.Is("for") && close < end) {
        // The declaration ends at the first ';' (classic) or ':' (enhanced).
        std::size_t stop = i + 2;
        while (stop < close && !At(stop, ";") && !At(stop, ":")) {
          stop = IsOpener(toks_[stop]) ? Match(stop, close) + 1 : stop + 1;
        }
        if (stop > i + 2) DetectDeclaration(s, i + 2, stop - 1, true);
      }
      next = ParseHeader(i + 1, end, s);
      next = ParseBranch(next, end, s);
    } else if (t.Is("do")) {
      s.kind = StatementKind::kLoop;
      next = ParseBranch(i + 1, end, s);
      if (At(next, "while")) {
        next = ParseHeader(next + 1, end, s);
        if (At(next, ";")) ++next;
      }
    } else if (t.Is("try")) {
      s.kind = StatementKind::kTryBlock;
      next = i + 1;
      if (At(next, "(")) {
        const std::size_t close = Match(next, end);
        if (close < end && close > next + 1) {
          std::size_t stop = next + 1;
          while (stop < close && !At(stop, ";")) {
            stop = IsOpener(toks_[stop]) ? Match(stop, close) + 1 : stop + 1;
          }
          DetectDeclaration(s, next + 1, stop - 1, false);
        }
        next = ParseHeader(next, end, s);
      }
      if (At(next, "{")) next = ParseBranch(next, end, s);
      while (At(next, "catch") || At(next, "finally")) {
        next = At(next, "catch") && At(next + 1, "(")
                   ? std::min(Match(next + 1, end) + 1, end)
                   : next + 1;
        if (At(next, "{")) next = ParseBranch(next, end, s);
      }
    } else if (t.Is("synchronized") && At(i + 1, "(")) {
      s.kind = StatementKind::kOther;
      next = ParseHeader(i + 1, end, s);
      if (At(next, "{")) next = ParseBranch(next, end, s);
    } else if (t.Is("{")) {
      s.kind = StatementKind::kOther;
      next = ParseBranch(i, end, s);
    } else if (t.Is("switch") && At(i + 1, "(")) {
      s.kind = StatementKind::kOther;
      std::size_t close = Match(i + 1, end);
      std::size_t last = close;
      if (close + 1 < end && At(close + 1, "{")) last = Match(close + 1, end);
      last = std::min(last, end - 1);
      CollectFacts(s, i, last);
      next = last + 1;
    } else if (t.Is(";")) {
      s.kind = StatementKind::kOther;
      next = i + 1;
    } else if (IsIdent(i) && At(i + 1, ":")) {
      // Labeled statement: the label becomes part of the inner one.
      next = i + 2 < end ? ParseStatement(i + 2, end, s) : i + 2;
      SetRange(s, i, std::min(next, end) - 1);
      return next;
    } else if (IsLocalTypeDecl(i)) {
      s.kind = StatementKind::kOther;
      std::size_t j = i;
      while (j < end && !At(j, "{")) ++j;
      const std::size_t last = j < end ? std::min(Match(j, end), end - 1) : end - 1;
      next = last + 1;
    } else {
      auto [last, terminated] = ScanToSemicolon(i, end);
      const std::size_t content_last = terminated && last > i ? last - 1 : last;
      if (t.Is("return")) {
        s.kind = StatementKind::kReturn;
      } else if (t.Is("throw")) {
        s.kind = StatementKind::kThrow;
      } else if (!terminated) {
        s.kind = StatementKind::kOther;
      } else if (DetectDeclaration(s, i, content_last, false)) {
        s.kind = StatementKind::kLocalVarDecl;
      } else if (LooksLikeExpressionStart(i)) {
        s.kind = StatementKind::kExprStatement;
      } else {
        s.kind = StatementKind::kOther;
      }
      CollectFacts(s, i, last);
      next = last + 1;
    }
    SetRange(s, i, std::min(next, end) - 1);
    return next;
  }

  bool IsLocalTypeDecl(std::size_t i) const {
    std::size_t j = i;
    while (j < n_ && (At(j, "final") || At(j, "abstract") || At(j, "static"))) {
      ++j;
    }
    return IsTypeKeyword(j);
  }

  bool LooksLikeExpressionStart(std::size_t i) const {
    const Token& t = toks_[i];
    if (t.kind == TokenKind::kIdentifier || t.kind == TokenKind::kString ||
        t.kind == TokenKind::kNumber) {
      return true;
    }
    return t.Is("this") || t.Is("super") || t.Is("new") || t.Is("(") ||
           t.Is("++") || t.Is("--") || t.Is("assert") || t.Is("break") ||
           t.Is("continue") || t.Is("yield") || t.Is("-") || t.Is("!");
  }

  // Recognizes `[final] [@Ann] Type name [= ...][, name2 ...]` in
  // [first, last]. When `allow_colon` is set an enhanced-for ':' may follow
  // the name.
  bool DetectDeclaration(Statement& s, std::size_t first, std::size_t last,
                         bool allow_colon) const {
    if (first > last || last >= n_) return false;
    std::size_t k = first;
    while (k <= last) {
      if (At(k, "final")) {
        ++k;
      } else if (At(k, "@")) {
        k = SkipAnnotation(k, last + 1, nullptr);
      } else {
        break;
      }
    }
    if (k > last) return false;
    const std::size_t type_first = k;
    if (!(IsIdent(k) || IsPrimitive(toks_[k].text)) || At(k, "void")) {
      return false;
    }
    ++k;
    while (k <= last) {
      if (At(k, ".") && IsIdent(k + 1)) {
        k += 2;
      } else if (At(k, "<")) {
        auto close = MatchAngle(k, last + 1);
        if (!close) return false;
        k = *close + 1;
      } else if (At(k, "[") && At(k + 1, "]")) {
        k += 2;
      } else {
        break;
      }
    }
    const std::size_t type_last = k - 1;
    if (k > last || !IsIdent(k)) return false;
    const bool follow_ok =
        k == last || At(k + 1, "=") || At(k + 1, ",") || At(k + 1, ";") ||
        At(k + 1, "[") || (allow_colon && At(k + 1, ":"));
    if (!follow_ok) return false;
    s.declared_type = Text(type_first, type_last);
    s.declared_names.clear();
    s.declared_names.emplace_back(toks_[k].text);
    for (std::size_t j = k + 1; j <= last; ++j) {
      if (IsOpener(toks_[j])) {
        j = Match(j, last + 1);
      } else if (At(j, ",") && IsIdent(j + 1)) {
        s.declared_names.emplace_back(toks_[j + 1].text);
      }
    }
    return true;
  }

  // Invocations and referenced names from [first, last]; lambda block bodies
  // become children and are excluded.
  void CollectFacts(Statement& s, std::size_t first, std::size_t last) {
    std::vector<std::pair<std::size_t, std::size_t>> excluded;
    for (std::size_t k = first; k + 1 <= last; ++k) {
      if (At(k, "->") && At(k + 1, "{")) {
        const std::size_t close = Match(k + 1, last + 1);
        for (Statement& child : ParseBlock(k + 2, close)) {
          s.children.push_back(std::move(child));
        }
        excluded.emplace_back(k + 1, close);
        k = close;
      }
    }
    auto is_excluded = [&](std::size_t k) {
      for (auto [a, b] : excluded) {
        if (k >= a && k <= b) return true;
      }
      return false;
    };

    for (std::size_t k = first; k <= last && k < n_; ++k) {
      if (is_excluded(k)) continue;
      const Token& t = toks_[k];
      if (t.Is("new")) {
        if (auto inv = ConstructorAt(k, last)) s.invocations.push_back(*inv);
        continue;
      }
      if (t.kind != TokenKind::kIdentifier) continue;
      const bool called = k + 1 <= last && At(k + 1, "(");
      const bool after_dot = k > first && At(k - 1, ".");
      const bool after_new = k > first && At(k - 1, "new");
      if (called) {
        if (after_new || IsConstructorName(k, first)) continue;
        s.invocations.push_back(MethodCallAt(k, first));
        continue;
      }
      if (k > first && At(k - 1, "@")) continue;
      if (after_dot) {
        // Only `this.field` is a plain reference; other member selections
        // belong to whatever the receiver is.
        if (k >= first + 2 && At(k - 2, "this")) {
          AddName(s, std::string(t.text));
        }
        continue;
      }
      if (after_new) continue;
      AddName(s, std::string(t.text));
      if (IsCapitalized(t.text) && At(k + 1, ".") && IsIdent(k + 2) &&
          !At(k + 3, "(")) {
        AddName(s, std::string(t.text) + "." + std::string(toks_[k + 2].text));
      }
    }
  }

  static void AddName(Statement& s, std::string name) {
    if (std::find(s.referenced_names.begin(), s.referenced_names.end(),
                  name) == s.referenced_names.end()) {
      s.referenced_names.push_back(std::move(name));
    }
  }

  // True if the identifier at k is the type in `new a.b.Type(`.
  bool IsConstructorName(std::size_t k, std::size_t first) const {
    std::size_t j = k;
    while (j >= first + 2 && At(j - 1, ".") && IsIdent(j - 2)) j -= 2;
    return j > first && At(j - 1, "new");
  }

  std::optional<Invocation> ConstructorAt(std::size_t k,
                                          std::size_t last) const {
    std::size_t j = k + 1;
    if (j <= last && At(j, "@")) j = SkipAnnotation(j, last + 1, nullptr);
    if (j > last || !IsIdent(j)) return std::nullopt;
    std::string dotted(toks_[j].text);
    while (j + 2 <= last && At(j + 1, ".") && IsIdent(j + 2)) {
      j += 2;
      dotted += ".";
      dotted += toks_[j].text;
    }
    ++j;
    if (j <= last && At(j, "<")) {
      auto close = MatchAngle(j, last + 1);
      if (!close) return std::nullopt;
      j = *close + 1;
    }
    if (j > last || !At(j, "(")) return std::nullopt;  // arrays, garbage
    Invocation inv;
    inv.is_constructor = true;
    inv.method_name = std::string(LastSegment(dotted));
    inv.qualified_hint = QualifyType(dotted);
    return inv;
  }

  Invocation MethodCallAt(std::size_t k, std::size_t first) const {
    Invocation inv;
    inv.method_name = std::string(toks_[k].text);
    std::size_t dot = k;
    // Explicit generic method call: recv.<T>name(
    if (k > first && At(k - 1, ">")) {
      if (auto open = MatchAngleBackward(k - 1, first)) dot = *open;
    }
    if (dot > first && At(dot - 1, ".") && dot >= first + 2) {
      const std::size_t recv_last = dot - 2;
      const std::size_t recv_first = ReceiverStart(recv_last, first);
      inv.receiver_text = Text(recv_first, recv_last);
      inv.qualified_hint = QualifyReceiver(recv_first, recv_last);
    } else if (dot == k) {
      inv.qualified_hint = StaticImportOwner(inv.method_name);
    }
    return inv;
  }

  // Walks back over a postfix chain: names, calls, indexing, '.', 'new'.
  std::size_t ReceiverStart(std::size_t r, std::size_t lo) const {
    std::size_t s = r;
    while (true) {
      const Token& t = toks_[s];
      if (t.Is(")") || t.Is("]")) {
        const std::size_t open = MatchBackward(s, lo);
        if (open > lo &&
            (IsIdent(open - 1) || At(open - 1, ")") || At(open - 1, "]") ||
             At(open - 1, ">") || At(open - 1, "this") ||
             At(open - 1, "super"))) {
          s = open - 1;
          continue;
        }
        return open;
      }
      if (t.Is(">")) {
        auto open = MatchAngleBackward(s, lo);
        if (!open || *open == lo) return s;
        s = *open - 1;
        continue;
      }
      if (t.kind == TokenKind::kIdentifier || t.Is("this") ||
          t.Is("super") || t.Is("class") || t.kind == TokenKind::kString ||
          t.kind == TokenKind::kNumber) {
        if (s >= lo + 2 && At(s - 1, ".")) {
          s -= 2;
          continue;
        }
        if (s >= lo + 1 && At(s - 1, "new")) return s - 1;
        return s;
      }
      return s;
    }
  }

  std::optional<std::string> QualifyType(std::string_view dotted) const {
    if (dotted.find('.') != std::string_view::npos &&
        !IsCapitalized(dotted)) {
      // Package-qualified: keep through the first capitalized segment.
      std::string out;
      std::size_t pos = 0;
      while (pos <= dotted.size()) {
        const std::size_t dot = dotted.find('.', pos);
        const std::string_view seg = dotted.substr(
            pos, dot == std::string_view::npos ? std::string_view::npos
                                               : dot - pos);
        if (!out.empty()) out += ".";
        out += seg;
        if (IsCapitalized(seg) || dot == std::string_view::npos) break;
        pos = dot + 1;
      }
      return out;
    }
    const std::string_view head = dotted.substr(0, dotted.find('.'));
    for (const std::string& imp : unit_.imports) {
      if (LastSegment(imp) == head) {
        if (head.size() == dotted.size()) return imp;
        return imp + std::string(dotted.substr(head.size()));
      }
    }
    return std::nullopt;
  }

  std::optional<std::string> QualifyReceiver(std::size_t first,
                                             std::size_t last) const {
    if (At(first, "new")) {
      std::size_t j = first + 1;
      std::string dotted;
      while (j <= last && (IsIdent(j) || At(j, "."))) {
        dotted += toks_[j].text;
        ++j;
      }
      return dotted.empty() ? std::nullopt : QualifyType(dotted);
    }
    // Plain dotted names only: a.b.C or C.
    std::string dotted;
    for (std::size_t j = first; j <= last; ++j) {
      if (!(IsIdent(j) || At(j, "."))) return std::nullopt;
      dotted += toks_[j].text;
    }
    const std::string_view head = std::string_view(dotted).substr(
        0, dotted.find('.'));
    if (!IsCapitalized(head) && dotted.find('.') != std::string::npos) {
      // Only a package path if some later segment is a type name.
      auto q = QualifyType(dotted);
      if (q && IsCapitalized(LastSegment(*q)) && *q == dotted) return q;
      return std::nullopt;
    }
    if (IsCapitalized(head) && head.size() == dotted.size()) {
      return QualifyType(dotted);
    }
    return std::nullopt;
  }

  std::optional<std::string> StaticImportOwner(std::string_view name) const {
    for (const std::string& imp : unit_.static_imports) {
      if (LastSegment(imp) == name) {
        return imp.substr(0, imp.rfind('.'));
      }
    }
    return std::nullopt;
  }

  CompilationUnit& unit_;
  const std::string& src_;
  std::vector<Token> toks_;
  std::vector<Token> comments_;
  std::size_t n_ = 0;
};

void CollectClasses(const std::vector<ClassDecl>& classes,
                    std::vector<const ClassDecl*>& out) {
  for (const ClassDecl& c : classes) {
    out.push_back(&c);
    CollectClasses(c.nested, out);
  }
}

bool Contains(const std::vector<std::string>& values, std::string_view v) {
  return std::find(values.begin(), values.end(), v) != values.end();
}

}  // namespace

CompilationUnit ParseCompilationUnit(std::string source) {
  CompilationUnit unit;
  unit.source = std::move(source);
  Parser(unit).Run();
  return unit;
}

CompilationUnit ParseMethodSnippet(std::string_view method_source,
                                   std::string_view class_name) {
  std::string wrapped = "class ";
  wrapped += class_name;
  wrapped += " { ";
  wrapped += method_source;
  wrapped += "\n}\n";
  return ParseCompilationUnit(std::move(wrapped));
}

bool IsTestMethod(const ClassDecl& owner, const MethodDecl& method,
                  const TestConventions& conventions) {
  for (const std::string& a : conventions.test_annotations) {
    if (method.HasAnnotation(a)) return true;
  }
  if (!conventions.name_prefix_convention || !method.has_body) return false;
  const bool test_class =
      (owner.name.size() > 4 && owner.name.ends_with("Test")) ||
      (owner.name.size() > 4 && owner.name.starts_with("Test"));
  return test_class && method.name.starts_with("test") &&
         StripWhitespace(method.parameters_text).empty();
}

const MethodDecl* TestExtraction::InitMethodFor(const ClassDecl& owner) const {
  for (const TestMethodRef& ref : init_methods) {
    if (ref.owner == &owner) return ref.method;
  }
  return nullptr;
}

TestExtraction ExtractTestMethods(const CompilationUnit& unit,
                                  const TestConventions& conventions) {
  TestExtraction out;
  std::vector<const ClassDecl*> classes;
  CollectClasses(unit.type_decls, classes);
  for (const ClassDecl* cls : classes) {
    bool have_init = false;
    for (const MethodDecl& m : cls->methods) {
      if (IsTestMethod(*cls, m, conventions)) {
        out.tests.push_back({cls, &m});
        continue;
      }
      bool init = Contains(conventions.init_method_names, m.name);
      for (const std::string& a : conventions.init_annotations) {
        init = init || m.HasAnnotation(a);
      }
      if (init && !have_init) {
        out.init_methods.push_back({cls, &m});
        have_init = true;
      }
    }
  }
  return out;
}

const MethodDecl* FindMethod(const CompilationUnit& unit,
                             std::string_view class_name,
                             std::string_view method_name,
                             const ClassDecl** owner) {
  std::string_view simple = class_name;
  if (auto pos = simple.find_last_of(".$"); pos != std::string_view::npos) {
    simple = simple.substr(pos + 1);
  }
  std::vector<const ClassDecl*> classes;
  CollectClasses(unit.type_decls, classes);
  for (const ClassDecl* cls : classes) {
    if (!simple.empty() && cls->name != simple) continue;
    for (const MethodDecl& m : cls->methods) {
      if (m.name == method_name) {
        if (owner != nullptr) *owner = cls;
        return &m;
      }
    }
  }
  return nullptr;
}

ProductionClassName InferProductionClassName(
    std::string_view test_class_name, const TestConventions& conventions) {
  constexpr std::string_view kMarker = "Test";
  const bool trailing = test_class_name.size() > kMarker.size() &&
                        test_class_name.ends_with(kMarker);
  const bool leading = test_class_name.size() > kMarker.size() &&
                       test_class_name.starts_with(kMarker);
  auto strip_trailing = [&] {
    return std::string(
        test_class_name.substr(0, test_class_name.size() - kMarker.size()));
  };
  auto strip_leading = [&] {
    return std::string(test_class_name.substr(kMarker.size()));
  };
  if (conventions.strip_trailing_first) {
    if (trailing) return {strip_trailing(), true};
    if (leading) return {strip_leading(), true};
  } else {
    if (leading) return {strip_leading(), true};
    if (trailing) return {strip_trailing(), true};
  }
  return {std::string(test_class_name), false};
}

}  // namespace flakylens::java
