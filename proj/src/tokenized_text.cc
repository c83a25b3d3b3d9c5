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

#include "pieceattack/tokenized_text.h"

#include <string>

#include "pieceattack/error.h"
#include "pieceattack/utf8.h"

namespace pieceattack {

bool IsSpecialSurface(std::string_view surface) {
  return surface == kPadSurface || surface == kUnkSurface ||
         surface == kClsSurface || surface == kMaskSurface;
}

std::string_view TokenizedText::CharRangeText(CharSpan span) const {
  const size_t begin = char_offsets.at(span.begin);
  const size_t end = char_offsets.at(span.end);
  return std::string_view(original).substr(begin, end - begin);
}

std::string_view TokenizedText::SpanText(size_t i) const {
  return CharRangeText(spans.at(i));
}

std::string TokenizedText::ReplaceSpan(size_t i,
                                       std::string_view replacement) const {
  const size_t begin = char_offsets.at(spans.at(i).begin);
  const size_t end = char_offsets.at(spans.at(i).end);
  std::string out;
  out.reserve(original.size() + replacement.size());
  out.append(original, 0, begin);
  out.append(replacement);
  out.append(original, end, std::string::npos);
  return out;
}

int TokenizedText::FindSpan(CharSpan span) const {
  // spans are sorted by begin.
  size_t lo = 0;
  size_t hi = spans.size();
  while (lo < hi) {
    const size_t mid = (lo + hi) / 2;
    if (spans[mid].begin < span.begin) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < spans.size() && spans[lo] == span) return static_cast<int>(lo);
  return -1;
}

void ValidateSpans(const TokenizedText& tokens) {
  if (tokens.piece_ids.size() != tokens.spans.size()) {
    throw Error(ErrorCode::kCorruptTokenization,
                "piece_ids and spans differ in length");
  }
  const std::vector<size_t> offsets = utf8::CharOffsets(tokens.original);
  if (tokens.char_offsets != offsets) {
    throw Error(ErrorCode::kCorruptTokenization,
                "character offsets do not match the original text");
  }
  const size_t num_chars = offsets.size() - 1;
  size_t expected_begin = 0;
  for (size_t i = 0; i < tokens.spans.size(); ++i) {
    const CharSpan& span = tokens.spans[i];
    if (span.begin != expected_begin || span.end <= span.begin ||
        span.end > num_chars) {
      throw Error(ErrorCode::kCorruptTokenization,
                  "span " + std::to_string(i) + " [" +
                      std::to_string(span.begin) + ", " +
                      std::to_string(span.end) +
                      ") is not contiguous with its predecessor");
    }
    expected_begin = span.end;
  }
  if (expected_begin != num_chars) {
    throw Error(ErrorCode::kCorruptTokenization,
                "spans do not cover the whole text");
  }
}

std::string Decode(const TokenizedText& tokens, const Segmenter& segmenter) {
  ValidateSpans(tokens);
  std::string out;
  out.reserve(tokens.original.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    const int id = tokens.piece_ids[i];
    if (id < 0 || static_cast<size_t>(id) >= segmenter.size()) {
      throw Error(ErrorCode::kCorruptTokenization,
                  "piece id " + std::to_string(id) + " out of range");
    }
    if (id == kUnkId) {
      out.append(tokens.SpanText(i));
      continue;
    }
    const std::string_view surface = segmenter.PieceSurface(id);
    if (surface != tokens.SpanText(i)) {
      throw Error(ErrorCode::kCorruptTokenization,
                  "piece " + std::to_string(i) +
                      " surface does not match its span");
    }
    out.append(surface);
  }
  return out;
}

bool IsSkipPosition(const TokenizedText& tokens, size_t position) {
  const int id = tokens.piece_ids.at(position);
  if (Segmenter::IsSpecial(id)) return true;
  return utf8::IsPunctuationOrDigitOnly(tokens.SpanText(position));
}

}  // namespace pieceattack
