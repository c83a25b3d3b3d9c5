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

#ifndef PIECEATTACK_UTF8_H_
#define PIECEATTACK_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace pieceattack::utf8 {

// Byte length of the character starting at s[0]. Invalid lead or truncated
// sequences count as a single byte so that splitting never loses data.
size_t CharLength(std::string_view s);

// Splits s into characters. Concatenating the result reproduces s.
std::vector<std::string_view> SplitChars(std::string_view s);

// Byte offsets of every character boundary, including 0 and s.size().
std::vector<size_t> CharOffsets(std::string_view s);

size_t CountChars(std::string_view s);

// Decodes a single character; invalid sequences map to U+FFFD.
char32_t DecodeChar(std::string_view ch);

bool IsWhitespace(char32_t c);
bool IsPunctuation(char32_t c);
bool IsDigit(char32_t c);

// True when every character of s is punctuation or whitespace.
bool IsPunctuationOnly(std::string_view s);

// True when every character of s is punctuation, whitespace or a digit.
bool IsPunctuationOrDigitOnly(std::string_view s);

}  // namespace pieceattack::utf8

#endif  // PIECEATTACK_UTF8_H_
