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

// WordPiece-style subword tokenization and fixed-length encoding.
//
// Pieces that continue a word carry the "##" prefix; the first piece of a
// word preceded by whitespace carries the "Ġ" (U+0120) prefix. Lookups fall
// back to the lowercased piece and then to the unmarked piece, so the same
// code works with WordPiece and byte-level BPE style vocabularies.

#ifndef FLAKYLENS_TOKENIZER_HPP_
#define FLAKYLENS_TOKENIZER_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace flakylens {

inline constexpr std::string_view kContinuationMarker = "##";
inline constexpr std::string_view kSpaceMarker = "\xC4\xA0";  // U+0120
inline constexpr std::size_t kMaxWordChars = 100;
inline constexpr int kDefaultMaxLen = 512;

struct SpecialIds {
  int cls = -1;
  int sep = -1;
  int unk = -1;
  int pad = -1;
};

class Vocabulary {
 public:
  // Token i gets id i. Throws DuplicateTokenError (1-based line) or
  // MissingSpecialError.
  static Vocabulary FromTokens(std::vector<std::string> tokens);

  std::optional<int> Find(std::string_view token) const;
  const std::string& TokenAt(int id) const { return id_to_token_.at(id); }
  std::size_t size() const { return id_to_token_.size(); }
  const SpecialIds& specials() const { return specials_; }
  bool IsSpecial(int id) const;

 private:
  std::unordered_map<std::string, int> token_to_id_;
  std::vector<std::string> id_to_token_;
  SpecialIds specials_;
};

// Plain text, one token per line, id = zero-based line number. A ".json"
// file is read as a {token: id} object instead, which is how published
// byte-level BPE vocabularies ship.
Vocabulary LoadVocabulary(const std::filesystem::path& path);

struct TokenSequence {
  std::vector<std::string> tokens;
  // Set once [CLS] / [SEP] have been added.
  bool finalized = false;
};

// Splits on whitespace and punctuation (each punctuation mark is its own
// word), then greedily decomposes each word longest-match-first. A word
// with no decomposition, or longer than kMaxWordChars, becomes the unknown
// token.
TokenSequence Tokenize(std::string_view text, const Vocabulary& vocab);

// Number of content tokens in `text`, specials excluded.
std::size_t CountTokens(std::string_view text, const Vocabulary& vocab);

// Wraps the content in the classification and separator tokens.
TokenSequence Finalize(TokenSequence seq, const Vocabulary& vocab);

struct EncodedInput {
  std::vector<std::int32_t> input_ids;
  std::vector<std::uint8_t> attention_mask;
  bool truncated = false;

  std::size_t AttendedLength() const;
};

// Finalizes `seq` first if needed. Overlong sequences keep their head, with
// the separator forced into the last kept position. Throws
// InvalidArgumentError if max_len < 2.
EncodedInput Encode(const TokenSequence& seq, const Vocabulary& vocab,
                    int max_len = kDefaultMaxLen);

// Token strings of the attended positions, specials included.
std::vector<std::string> Decode(const EncodedInput& input,
                                const Vocabulary& vocab);

// Reassembles surface text from pieces: "Ġ" becomes a space, "##" is
// dropped, special tokens are skipped.
std::string Detokenize(const std::vector<std::string>& tokens,
                       const Vocabulary& vocab);

// The piece with any leading marker removed.
std::string_view StripMarker(std::string_view token);

}  // namespace flakylens

#endif  // FLAKYLENS_TOKENIZER_HPP_
