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
#include <cctype>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "flakylens/errors.hpp"
#include "test_support.hpp"

namespace flakylens {
namespace {

using testing::TestVocab;

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

Vocabulary ToyVocab() {
  return Vocabulary::FromTokens({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "test"});
}

TEST(TokenizerTest, AssertThatSplitsIntoPieces) {
  EXPECT_EQ(Tokenize("assertThat", TestVocab()).tokens,
            (std::vector<std::string>{"assert", "##that"}));
}

TEST(TokenizerTest, EmptyTextHasNoTokens) {
  EXPECT_TRUE(Tokenize("", TestVocab()).tokens.empty());
  EXPECT_TRUE(Tokenize(" \t\n", TestVocab()).tokens.empty());
}

TEST(TokenizerTest, SpaceMarkerAndPunctuation) {
  EXPECT_EQ(Tokenize("new Thread(worker).start();", TestVocab()).tokens,
            (std::vector<std::string>{"new", "\xC4\xA0Thread", "(", "worker", ")",
                                      ".", "start", "(", ")", ";"}));
}

TEST(TokenizerTest, UndecomposableWordIsUnknown) {
  EXPECT_EQ(Tokenize("#", TestVocab()).tokens, (std::vector<std::string>{"[UNK]"}));
  const std::string long_word(kMaxWordChars + 1, 'a');
  EXPECT_EQ(Tokenize(long_word, TestVocab()).tokens,
            (std::vector<std::string>{"[UNK]"}));
}

TEST(TokenizerTest, ToyVocabularySize) {
  const Vocabulary v = ToyVocab();
  EXPECT_EQ(v.size(), 5u);
  EXPECT_EQ(v.Find("test"), 4);
  EXPECT_EQ(v.specials().cls, 2);
  EXPECT_EQ(v.specials().pad, 0);
  EXPECT_TRUE(v.IsSpecial(1));
  EXPECT_FALSE(v.IsSpecial(4));
}

TEST(TokenizerTest, VocabularyErrors) {
  EXPECT_THROW(Vocabulary::FromTokens({"[PAD]", "[UNK]", "[SEP]"}), MissingSpecialError);
  EXPECT_THROW(Vocabulary::FromTokens({"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[PAD]"}),
               DuplicateTokenError);
  testing::TempDir dir;
  dir.Write("bad.txt", "[PAD]\n\n[UNK]\n");
  EXPECT_THROW(LoadVocabulary(dir / "bad.txt"), FormatError);
  EXPECT_THROW(LoadVocabulary(dir / "missing.txt"), IoError);
  dir.Write("sparse.json", R"({"[PAD]":0,"[UNK]":1,"[CLS]":2,"[SEP]":9})");
  EXPECT_THROW(LoadVocabulary(dir / "sparse.json"), FormatError);
}

TEST(TokenizerTest, JsonVocabularyMatchesLineVocabulary) {
  testing::TempDir dir;
  dir.Write("v.json", R"({"<s>":0,"</s>":1,"<unk>":2,"<pad>":3,"assert":4,"##that":5})");
  const Vocabulary v = LoadVocabulary(dir / "v.json");
  EXPECT_EQ(v.size(), 6u);
  EXPECT_EQ(v.specials().cls, 0);
  EXPECT_EQ(v.specials().pad, 3);
  EXPECT_EQ(Tokenize("assertThat", v).tokens,
            (std::vector<std::string>{"assert", "##that"}));
}

TEST(TokenizerTest, EncodeEmptyAndTruncated) {
  const Vocabulary& v = TestVocab();
  const EncodedInput empty = Encode(TokenSequence{}, v, 8);
  EXPECT_EQ(empty.input_ids,
            (std::vector<std::int32_t>{v.specials().cls, v.specials().sep, 0, 0, 0, 0, 0, 0}));
  EXPECT_EQ(empty.AttendedLength(), 2u);
  EXPECT_FALSE(empty.truncated);

  TokenSequence long_seq;
  long_seq.tokens.assign(600, "test");
  const EncodedInput enc = Encode(long_seq, v, 512);
  EXPECT_TRUE(enc.truncated);
  EXPECT_EQ(enc.AttendedLength(), 512u);
  EXPECT_EQ(enc.input_ids.front(), v.specials().cls);
  EXPECT_EQ(enc.input_ids.back(), v.specials().sep);
  EXPECT_THROW(Encode(long_seq, v, 1), InvalidArgumentError);
}

TEST(TokenizerTest, FinalizeIsIdempotent) {
  const Vocabulary& v = TestVocab();
  TokenSequence seq = Tokenize("test", v);
  const TokenSequence once = Finalize(seq, v);
  const TokenSequence twice = Finalize(once, v);
  EXPECT_EQ(once.tokens, twice.tokens);
  EXPECT_EQ(once.tokens, (std::vector<std::string>{"[CLS]", "test", "[SEP]"}));
  EXPECT_EQ(Encode(once, v, 6).input_ids, Encode(seq, v, 6).input_ids);
}

TEST(TokenizerTest, EncodeLengthLawOnRandomSequences) {
  const Vocabulary& v = TestVocab();
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> len_dist(0, 700);
  std::uniform_int_distribution<int> max_dist(2, 600);
  std::uniform_int_distribution<int> tok_dist(0, static_cast<int>(v.size()) - 1);
  for (int trial = 0; trial < 1000; ++trial) {
    TokenSequence seq;
    const int len = len_dist(rng);
    for (int i = 0; i < len; ++i) seq.tokens.push_back(v.TokenAt(tok_dist(rng)));
    const bool finalized = trial % 2 == 0;
    if (finalized) seq = Finalize(std::move(seq), v);
    const int max_len = max_dist(rng);
    const EncodedInput enc = Encode(seq, v, max_len);
    const std::size_t full = seq.tokens.size() + (finalized ? 0 : 2);
    ASSERT_EQ(enc.input_ids.size(), static_cast<std::size_t>(max_len));
    ASSERT_EQ(enc.attention_mask.size(), static_cast<std::size_t>(max_len));
    ASSERT_EQ(enc.AttendedLength(), std::min<std::size_t>(full, max_len));
    ASSERT_EQ(enc.truncated, full > static_cast<std::size_t>(max_len));
    ASSERT_TRUE(std::is_sorted(enc.attention_mask.rbegin(), enc.attention_mask.rend()));
    ASSERT_EQ(enc.input_ids[enc.AttendedLength() - 1], v.specials().sep);
    for (std::size_t i = enc.AttendedLength(); i < enc.input_ids.size(); ++i) {
      ASSERT_EQ(enc.input_ids[i], v.specials().pad);
    }
  }
}

TEST(TokenizerTest, RandomWordsReassembleOrBecomeUnknown) {
  const Vocabulary& v = TestVocab();
  const std::string alphabet =
      "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789_";
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> len_dist(1, 20);
  std::uniform_int_distribution<std::size_t> ch_dist(0, alphabet.size() - 1);
  int reassembled = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::string word;
    const std::size_t len = len_dist(rng);
    for (std::size_t i = 0; i < len; ++i) word.push_back(alphabet[ch_dist(rng)]);
    const auto pieces = Tokenize(word, v).tokens;
    if (pieces == std::vector<std::string>{"[UNK]"}) continue;
    std::string joined;
    for (const auto& p : pieces) {
      ASSERT_FALSE(p.starts_with(kContinuationMarker) && p.find(kSpaceMarker) != std::string::npos);
      joined.append(StripMarker(p));
    }
    // Pieces may match case-insensitively.
    ASSERT_EQ(Lower(joined), Lower(word));
    ++reassembled;
  }
  EXPECT_GT(reassembled, 100);
}

TEST(TokenizerTest, RoundTripForInVocabularyWords) {
  const Vocabulary& v = TestVocab();
  for (std::size_t id = 0; id < v.size(); ++id) {
    const std::string& token = v.TokenAt(static_cast<int>(id));
    if (v.IsSpecial(static_cast<int>(id)) || token.starts_with(kContinuationMarker) ||
        token.starts_with(kSpaceMarker)) {
      continue;
    }
    const EncodedInput enc = Encode(Tokenize(token, v), v, 16);
    std::string joined;
    for (const auto& t : Decode(enc, v)) {
      if (auto tid = v.Find(t); tid && v.IsSpecial(*tid)) continue;
      joined.append(StripMarker(t));
    }
    EXPECT_EQ(joined, token);
  }
}

TEST(TokenizerTest, DetokenizeRestoresSpacing) {
  const Vocabulary& v = TestVocab();
  const std::string text = "public static final int count;";
  EXPECT_EQ(Detokenize(Finalize(Tokenize(text, v), v).tokens, v), text);
  EXPECT_EQ(CountTokens(text, v), Tokenize(text, v).tokens.size());
  // No marked form of "1" exists, so its leading space is not recorded.
  EXPECT_EQ(Detokenize(Tokenize("x = 1;", v).tokens, v), "x =1;");
}

TEST(TokenizerTest, MarkersAreExclusive) {
  const Vocabulary& v = TestVocab();
  const auto tokens =
      Tokenize("public void testSomething() { assertThat(value).isTrue(); }", v).tokens;
  for (const auto& t : tokens) {
    EXPECT_FALSE(t.starts_with(kSpaceMarker) &&
                 StripMarker(t).starts_with(kContinuationMarker));
    EXPECT_FALSE(t.starts_with(kContinuationMarker) &&
                 StripMarker(t).starts_with(kSpaceMarker));
  }
}

}  // namespace
}  // namespace flakylens
