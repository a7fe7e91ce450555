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

#include "flakylens/tokenizer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "flakylens/errors.hpp"
#include "json.hpp"

namespace flakylens {
namespace {

int ResolveSpecial(const std::unordered_map<std::string, int>& map,
                   std::initializer_list<const char*> spellings) {
  for (const char* s : spellings) {
    auto it = map.find(s);
    if (it != map.end()) return it->second;
  }
  throw MissingSpecialError(*spellings.begin());
}

bool IsWordByte(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

bool IsSpaceByte(unsigned char c) {
  return std::isspace(c) || (c < 0x20 && c != 0) || c == 0x7F;
}

bool IsContinuationByte(unsigned char c) { return (c & 0xC0) == 0x80; }

std::string Lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// The vocabulary entry for one piece, trying the marked form before the
// unmarked one and the exact case before lowercase.
std::optional<std::string> LookupPiece(std::string_view piece,
                                       std::string_view marker,
                                       const Vocabulary& vocab) {
  const std::string lower = Lower(piece);
  const bool has_upper = lower != piece;
  std::array<std::string, 4> candidates;
  std::size_t n = 0;
  if (!marker.empty()) {
    candidates[n++] = std::string(marker).append(piece);
    if (has_upper) candidates[n++] = std::string(marker).append(lower);
  }
  candidates[n++] = std::string(piece);
  if (has_upper) candidates[n++] = lower;
  for (std::size_t i = 0; i < n; ++i) {
    if (vocab.Find(candidates[i])) return std::move(candidates[i]);
  }
  return std::nullopt;
}

void AppendWord(std::string_view word, bool after_space,
                const Vocabulary& vocab, std::vector<std::string>& out) {
  const std::string& unk = vocab.TokenAt(vocab.specials().unk);
  if (word.size() > kMaxWordChars) {
    out.push_back(unk);
    return;
  }
  std::vector<std::string> pieces;
  std::size_t start = 0;
  while (start < word.size()) {
    std::optional<std::string> match;
    std::size_t end = word.size();
    for (; end > start; --end) {
      if (end < word.size() &&
          IsContinuationByte(static_cast<unsigned char>(word[end]))) {
        continue;
      }
      const std::string_view marker =
          start > 0 ? kContinuationMarker
                    : (after_space ? kSpaceMarker : std::string_view());
      match = LookupPiece(word.substr(start, end - start), marker, vocab);
      if (match) break;
    }
    if (!match) {
      out.push_back(unk);
      return;
    }
    pieces.push_back(std::move(*match));
    start = end;
  }
  for (std::string& p : pieces) out.push_back(std::move(p));
}

}  // namespace

Vocabulary Vocabulary::FromTokens(std::vector<std::string> tokens) {
  Vocabulary vocab;
  vocab.token_to_id_.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (!vocab.token_to_id_.emplace(tokens[i], static_cast<int>(i)).second) {
      throw DuplicateTokenError(tokens[i], i + 1);
    }
  }
  vocab.id_to_token_ = std::move(tokens);
  const auto& map = vocab.token_to_id_;
  vocab.specials_.cls = ResolveSpecial(map, {"[CLS]", "<s>"});
  vocab.specials_.sep = ResolveSpecial(map, {"[SEP]", "</s>"});
  vocab.specials_.unk = ResolveSpecial(map, {"[UNK]", "<UNK>", "<unk>"});
  vocab.specials_.pad = ResolveSpecial(map, {"[PAD]", "<pad>"});
  return vocab;
}

std::optional<int> Vocabulary::Find(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  if (it == token_to_id_.end()) return std::nullopt;
  return it->second;
}

bool Vocabulary::IsSpecial(int id) const {
  return id == specials_.cls || id == specials_.sep || id == specials_.unk ||
         id == specials_.pad;
}

Vocabulary LoadVocabulary(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open vocabulary " + path.string());
  if (path.extension() == ".json") {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("vocabulary " + path.string() + ": " + e.what());
    }
    if (!doc.is_object()) {
      throw FormatError("vocabulary " + path.string() + " is not an object");
    }
    std::vector<std::string> tokens(doc.size());
    std::vector<bool> seen(doc.size(), false);
    for (const auto& [token, id_value] : doc.items()) {
      if (!id_value.is_number_integer()) {
        throw FormatError("vocabulary id for '" + token + "' is not an integer");
      }
      const auto id = id_value.get<long long>();
      if (id < 0 || static_cast<std::size_t>(id) >= tokens.size()) {
        throw FormatError("vocabulary ids are not dense: " + std::to_string(id));
      }
      if (seen[id]) throw DuplicateTokenError(token, static_cast<std::size_t>(id) + 1);
      seen[id] = true;
      tokens[id] = token;
    }
    return Vocabulary::FromTokens(std::move(tokens));
  }
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      throw FormatError("empty vocabulary entry on line " +
                        std::to_string(tokens.size() + 1));
    }
    tokens.push_back(std::move(line));
  }
  return Vocabulary::FromTokens(std::move(tokens));
}

TokenSequence Tokenize(std::string_view text, const Vocabulary& vocab) {
  TokenSequence seq;
  bool after_space = false;
  std::size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (IsSpaceByte(c)) {
      after_space = true;
      ++i;
      continue;
    }
    std::size_t end = i + 1;
    if (IsWordByte(c)) {
      while (end < text.size() &&
             IsWordByte(static_cast<unsigned char>(text[end]))) {
        ++end;
      }
    }
    AppendWord(text.substr(i, end - i), after_space, vocab, seq.tokens);
    after_space = false;
    i = end;
  }
  return seq;
}

std::size_t CountTokens(std::string_view text, const Vocabulary& vocab) {
  return Tokenize(text, vocab).tokens.size();
}

TokenSequence Finalize(TokenSequence seq, const Vocabulary& vocab) {
  if (seq.finalized) return seq;
  seq.tokens.insert(seq.tokens.begin(), vocab.TokenAt(vocab.specials().cls));
  seq.tokens.push_back(vocab.TokenAt(vocab.specials().sep));
  seq.finalized = true;
  return seq;
}

std::size_t EncodedInput::AttendedLength() const {
  return static_cast<std::size_t>(
      std::count(attention_mask.begin(), attention_mask.end(), 1));
}

EncodedInput Encode(const TokenSequence& seq, const Vocabulary& vocab,
                    int max_len) {
  if (max_len < 2) {
    throw InvalidArgumentError("max_len must be at least 2, got " +
                               std::to_string(max_len));
  }
  const SpecialIds& sp = vocab.specials();
  const std::size_t limit = static_cast<std::size_t>(max_len);
  EncodedInput out;
  out.input_ids.assign(limit, sp.pad);
  out.attention_mask.assign(limit, 0);

  auto id_of = [&](const std::string& token) {
    return vocab.Find(token).value_or(sp.unk);
  };
  std::vector<std::int32_t> ids;
  if (seq.finalized) {
    ids.reserve(seq.tokens.size());
    for (const std::string& t : seq.tokens) ids.push_back(id_of(t));
  } else {
    ids.reserve(seq.tokens.size() + 2);
    ids.push_back(sp.cls);
    for (const std::string& t : seq.tokens) ids.push_back(id_of(t));
    ids.push_back(sp.sep);
  }
  if (ids.size() > limit) {
    ids.resize(limit);
    ids.back() = sp.sep;
    out.truncated = true;
  }
  std::copy(ids.begin(), ids.end(), out.input_ids.begin());
  std::fill_n(out.attention_mask.begin(), ids.size(), 1);
  return out;
}

std::vector<std::string> Decode(const EncodedInput& input,
                                const Vocabulary& vocab) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < input.input_ids.size(); ++i) {
    if (i < input.attention_mask.size() && input.attention_mask[i] == 0) break;
    out.push_back(vocab.TokenAt(input.input_ids[i]));
  }
  return out;
}

std::string_view StripMarker(std::string_view token) {
  if (token.starts_with(kContinuationMarker)) {
    return token.substr(kContinuationMarker.size());
  }
  if (token.starts_with(kSpaceMarker)) return token.substr(kSpaceMarker.size());
  return token;
}

std::string Detokenize(const std::vector<std::string>& tokens,
                       const Vocabulary& vocab) {
  std::string out;
  for (const std::string& t : tokens) {
    if (auto id = vocab.Find(t); id && vocab.IsSpecial(*id)) continue;
    if (std::string_view(t).starts_with(kSpaceMarker)) out.push_back(' ');
    out.append(StripMarker(t));
  }
  return out;
}

}  // namespace flakylens
