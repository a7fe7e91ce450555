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

#ifndef FLAKYLENS_JAVA_LEXER_HPP_
#define FLAKYLENS_JAVA_LEXER_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

namespace flakylens::java {

enum class TokenKind {
  kIdentifier,
  kKeyword,
  kNumber,
  kString,  // includes char literals and text blocks
  kOperator,
  kSeparator,  // ( ) { } [ ] ; , . @ ...
  kLineComment,
  kBlockComment,
  kJavadoc,
};

struct Token {
  TokenKind kind;
  std::string_view text;  // view into the lexed source
  std::size_t begin;
  std::size_t end;
  int line;  // 1-based

  bool IsComment() const {
    return kind == TokenKind::kLineComment ||
           kind == TokenKind::kBlockComment || kind == TokenKind::kJavadoc;
  }
  bool Is(std::string_view s) const {
    return text == s && kind != TokenKind::kString && !IsComment();
  }
};

bool IsJavaKeyword(std::string_view word);

// Lexes Java source into tokens, comments included. Unterminated strings
// and comments run to end of line / end of input instead of failing.
// A '>' is always emitted alone so nested generic closers stay balanced.
//
// Throws LexError when the input is not text: NUL bytes or malformed UTF-8.
std::vector<Token> Lex(std::string_view source);

}  // namespace flakylens::java

#endif  // FLAKYLENS_JAVA_LEXER_HPP_
