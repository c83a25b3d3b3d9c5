// Copyright 2026 The pieceattack Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PIECEATTACK_TOKENIZED_TEXT_H_
#define PIECEATTACK_TOKENIZED_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pieceattack {

// Reserved IDs shared by every segmenter.
inline constexpr int kPadId = 0;
inline constexpr int kUnkId = 1;
inline constexpr int kClsId = 2;
inline constexpr int kMaskId = 3;
inline constexpr int kNumSpecialPieces = 4;

inline constexpr std::string_view kPadSurface = "[PAD]";
inline constexpr std::string_view kUnkSurface = "[UNK]";
inline constexpr std::string_view kClsSurface = "[CLS]";
inline constexpr std::string_view kMaskSurface = "[MASK]";

bool IsSpecialSurface(std::string_view surface);

// Half-open interval of character (not byte) offsets.
struct CharSpan {
  size_t begin = 0;
  size_t end = 0;

  size_t length() const { return end - begin; }
  bool operator==(const CharSpan&) const = default;
};

// A sentence segmented into pieces. spans[i] is the character range of the
// original text covered by piece_ids[i].
struct TokenizedText {
  std::string original;
  std::vector<int> piece_ids;
  std::vector<CharSpan> spans;
  // Byte offset of every character boundary of `original` (size chars + 1).
  std::vector<size_t> char_offsets;

  size_t size() const { return piece_ids.size(); }
  bool empty() const { return piece_ids.empty(); }
  size_t num_chars() const {
    return char_offsets.empty() ? 0 : char_offsets.size() - 1;
  }

  // Raw source text under spans[i].
  std::string_view SpanText(size_t i) const;
  std::string_view CharRangeText(CharSpan span) const;

  // original with the text under spans[i] replaced.
  std::string ReplaceSpan(size_t i, std::string_view replacement) const;

  // Index of the piece whose span is exactly `span`, or -1.
  int FindSpan(CharSpan span) const;
};

// Throws CorruptTokenization unless spans are contiguous, non-overlapping
// and cover the original exactly.
void ValidateSpans(const TokenizedText& tokens);

class Segmenter {
 public:
  virtual ~Segmenter() = default;

  virtual TokenizedText Encode(std::string_view text) const = 0;

  // Surface of a piece id; special IDs return their bracketed names.
  virtual std::string_view PieceSurface(int id) const = 0;

  virtual size_t size() const = 0;

  static bool IsSpecial(int id) { return id >= 0 && id < kNumSpecialPieces; }
};

// Rebuilds the text from piece surfaces, substituting the spanned source
// characters at UNK positions. Throws CorruptTokenization when spans are
// malformed or a piece surface disagrees with the text it spans.
std::string Decode(const TokenizedText& tokens, const Segmenter& segmenter);

// Punctuation/digit-only pieces, UNK and other specials are never attacked.
bool IsSkipPosition(const TokenizedText& tokens, size_t position);

}  // namespace pieceattack

#endif  // PIECEATTACK_TOKENIZED_TEXT_H_
