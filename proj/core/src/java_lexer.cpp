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

#include "flakylens/java_lexer.hpp"

#include <array>
#include <string>

#include "flakylens/errors.hpp"

namespace flakylens::java {
namespace {

constexpr std::array<std::string_view, 53> kKeywords = {
    "abstract",   "assert",       "boolean",   "break",      "byte",
    "case",       "catch",        "char",      "class",      "const",
    "continue",   "default",      "do",        "double",     "else",
    "enum",       "extends",      "final",     "finally",    "float",
    "for",        "goto",         "if",        "implements", "import",
    "instanceof", "int",          "interface", "long",       "native",
    "new",        "package",      "private",   "protected",  "public",
    "return",     "short",        "static",    "strictfp",   "super",
    "switch",     "synchronized", "this",      "throw",      "throws",
    "transient",  "try",          "void",      "volatile",   "while",
    "true",       "false",        "null",
};

// Longest first so a greedy scan picks "<<=" over "<<" over "<".
constexpr std::array<std::string_view, 30> kOperators = {
    "<<=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=",
    "<=",  "+=",  "-=", "*=", "/=", "&=", "|=", "^=", "%=", "<<",
    "=",   "<",   "!",  "~",  "?",  ":",  "+",  "-",  "*",  "/",
};

bool IsIdentStart(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
         c == '$' || c >= 0x80;
}

bool IsIdentPart(unsigned char c) {
  return IsIdentStart(c) || (c >= '0' && c <= '9');
}

bool IsDigit(unsigned char c) { return c >= '0' && c <= '9'; }

// Returns the length of a well-formed UTF-8 sequence at pos, or 0.
std::size_t Utf8SequenceLength(std::string_view s, std::size_t pos) {
  const auto c = static_cast<unsigned char>(s[pos]);
  std::size_t len = 0;
  if (c < 0x80) return 1;
  if ((c & 0xE0) == 0xC0 && c >= 0xC2) {
    len = 2;
  } else if ((c & 0xF0) == 0xE0) {
    len = 3;
  } else if ((c & 0xF8) == 0xF0 && c <= 0xF4) {
    len = 4;
  } else {
    return 0;
  }
  if (pos + len > s.size()) return 0;
  for (std::size_t i = 1; i < len; ++i) {
    if ((static_cast<unsigned char>(s[pos + i]) & 0xC0) != 0x80) return 0;
  }
  return len;
}

void ValidateText(std::string_view source) {
  std::size_t pos = 0;
  while (pos < source.size()) {
    if (source[pos] == '\0') throw LexError("NUL byte in source", pos);
    const std::size_t len = Utf8SequenceLength(source, pos);
    if (len == 0) throw LexError("malformed UTF-8 in source", pos);
    pos += len;
  }
}

class Lexer {
 public:
  explicit Lexer(std::string_view source) : src_(source) {}

  std::vector<Token> Run() {
    // Byte order mark.
    if (src_.substr(0, 3) == "\xEF\xBB\xBF") pos_ = 3;
    while (pos_ < src_.size()) {
      const auto c = static_cast<unsigned char>(src_[pos_]);
      if (c == '\n') {
        ++line_;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\f' ||
                 c == '\v') {
        ++pos_;
      } else if (src_.compare(pos_, 2, "//") == 0) {
        LexLineComment();
      } else if (src_.compare(pos_, 2, "/*") == 0) {
        LexBlockComment();
      } else if (src_.compare(pos_, 3, "\"\"\"") == 0) {
        LexTextBlock();
      } else if (c == '"' || c == '\'') {
        LexQuoted(static_cast<char>(c));
      } else if (IsDigit(c) ||
                 (c == '.' && pos_ + 1 < src_.size() &&
                  IsDigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        LexNumber();
      } else if (IsIdentStart(c)) {
        LexWord();
      } else {
        LexPunct();
      }
    }
    return std::move(tokens_);
  }

 private:
  void Emit(TokenKind kind, std::size_t begin, int line) {
    tokens_.push_back(
        Token{kind, src_.substr(begin, pos_ - begin), begin, pos_, line});
  }

  void LexLineComment() {
    const std::size_t begin = pos_;
    while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
    Emit(TokenKind::kLineComment, begin, line_);
  }

  void LexBlockComment() {
    const std::size_t begin = pos_;
    const int line = line_;
    const bool javadoc = src_.compare(pos_, 3, "/**") == 0 &&
                         src_.compare(pos_, 4, "/**/") != 0;
    pos_ += 2;
    while (pos_ < src_.size() && src_.compare(pos_, 2, "*/") != 0) {
      if (src_[pos_] == '\n') ++line_;
      ++pos_;
    }
    pos_ = pos_ < src_.size() ? pos_ + 2 : src_.size();
    Emit(javadoc ? TokenKind::kJavadoc : TokenKind::kBlockComment, begin,
         line);
  }

  void LexTextBlock() {
    const std::size_t begin = pos_;
    const int line = line_;
    pos_ += 3;
    while (pos_ < src_.size() && src_.compare(pos_, 3, "\"\"\"") != 0) {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) {
        if (src_[pos_ + 1] == '\n') ++line_;
        pos_ += 2;
        continue;
      }
      if (src_[pos_] == '\n') ++line_;
      ++pos_;
    }
    pos_ = pos_ < src_.size() ? pos_ + 3 : src_.size();
    Emit(TokenKind::kString, begin, line);
  }

  void LexQuoted(char quote) {
    const std::size_t begin = pos_;
    ++pos_;
    while (pos_ < src_.size() && src_[pos_] != quote && src_[pos_] != '\n') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size() &&
          src_[pos_ + 1] != '\n') {
        ++pos_;
      }
      ++pos_;
    }
    if (pos_ < src_.size() && src_[pos_] == quote) ++pos_;
    Emit(TokenKind::kString, begin, line_);
  }

  void LexNumber() {
    const std::size_t begin = pos_;
    while (pos_ < src_.size()) {
      const auto c = static_cast<unsigned char>(src_[pos_]);
      if (IsIdentPart(c) || c == '.') {
        ++pos_;
      } else if ((c == '+' || c == '-') && pos_ > begin) {
        const char prev = src_[pos_ - 1];
        // Exponent sign, but not in hex literals where 'e' is a digit.
        const bool hex = src_.size() > begin + 1 &&
                         (src_[begin + 1] == 'x' || src_[begin + 1] == 'X');
        if ((!hex && (prev == 'e' || prev == 'E')) || prev == 'p' ||
            prev == 'P') {
          ++pos_;
        } else {
          break;
        }
      } else {
        break;
      }
    }
    Emit(TokenKind::kNumber, begin, line_);
  }

  void LexWord() {
    const std::size_t begin = pos_;
    while (pos_ < src_.size() &&
           IsIdentPart(static_cast<unsigned char>(src_[pos_]))) {
      ++pos_;
    }
    const std::string_view word = src_.substr(begin, pos_ - begin);
    Emit(IsJavaKeyword(word) ? TokenKind::kKeyword : TokenKind::kIdentifier,
         begin, line_);
  }

  void LexPunct() {
    const std::size_t begin = pos_;
    const char c = src_[pos_];
    switch (c) {
      case '(':
      case ')':
      case '{':
      case '}':
      case '[':
      case ']':
      case ';':
      case ',':
      case '@':
      case '.':
        if (src_.compare(pos_, 3, "...") == 0) {
          pos_ += 3;
        } else {
          ++pos_;
        }
        Emit(TokenKind::kSeparator, begin, line_);
        return;
      case '>':
        ++pos_;
        Emit(TokenKind::kOperator, begin, line_);
        return;
      default:
        break;
    }
    for (std::string_view op : kOperators) {
      if (src_.compare(pos_, op.size(), op) == 0) {
        pos_ += op.size();
        Emit(TokenKind::kOperator, begin, line_);
        return;
      }
    }
    // Anything else (stray '#', '`', '\\') becomes a one-byte operator so
    // the parser can carry it as text.
    ++pos_;
    Emit(TokenKind::kOperator, begin, line_);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::vector<Token> tokens_;
};

}  // namespace

bool IsJavaKeyword(std::string_view word) {
  for (std::string_view k : kKeywords) {
    if (k == word) return true;
  }
  return false;
}

std::vector<Token> Lex(std::string_view source) {
  ValidateText(source);
  return Lexer(source).Run();
}

}  // namespace flakylens::java
