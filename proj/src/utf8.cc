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

#include "pieceattack/utf8.h"

namespace pieceattack::utf8 {

size_t CharLength(std::string_view s) {
  if (s.empty()) return 0;
  const auto lead = static_cast<unsigned char>(s[0]);
  size_t len = 1;
  if (lead < 0x80) {
    return 1;
  } else if ((lead & 0xE0) == 0xC0) {
    len = 2;
  } else if ((lead & 0xF0) == 0xE0) {
    len = 3;
  } else if ((lead & 0xF8) == 0xF0) {
    len = 4;
  } else {
    return 1;
  }
  if (len > s.size()) return 1;
  for (size_t i = 1; i < len; ++i) {
    if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) return 1;
  }
  return len;
}

std::vector<std::string_view> SplitChars(std::string_view s) {
  std::vector<std::string_view> chars;
  chars.reserve(s.size());
  while (!s.empty()) {
    const size_t len = CharLength(s);
    chars.push_back(s.substr(0, len));
    s.remove_prefix(len);
  }
  return chars;
}

std::vector<size_t> CharOffsets(std::string_view s) {
  std::vector<size_t> offsets;
  offsets.reserve(s.size() + 1);
  size_t pos = 0;
  offsets.push_back(0);
  while (pos < s.size()) {
    pos += CharLength(s.substr(pos));
    offsets.push_back(pos);
  }
  return offsets;
}

size_t CountChars(std::string_view s) {
  size_t n = 0;
  while (!s.empty()) {
    s.remove_prefix(CharLength(s));
    ++n;
  }
  return n;
}

char32_t DecodeChar(std::string_view ch) {
  const size_t len = CharLength(ch);
  if (len == 0) return 0xFFFD;
  const auto b0 = static_cast<unsigned char>(ch[0]);
  if (len == 1) return b0 < 0x80 ? b0 : 0xFFFD;
  char32_t cp = 0;
  if (len == 2) cp = b0 & 0x1F;
  if (len == 3) cp = b0 & 0x0F;
  if (len == 4) cp = b0 & 0x07;
  for (size_t i = 1; i < len; ++i) {
    cp = (cp << 6) | (static_cast<unsigned char>(ch[i]) & 0x3F);
  }
  return cp;
}

bool IsWhitespace(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f' || c == 0x3000 || c == 0x00A0 ||
         (c >= 0x2000 && c <= 0x200B);
}

bool IsPunctuation(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  // Latin-1 punctuation and symbols.
  if (c >= 0xA1 && c <= 0xBF) return true;
  if (c == 0xD7 || c == 0xF7) return true;
  // General punctuation.
  if (c >= 0x2010 && c <= 0x205E) return true;
  // CJK symbols and punctuation.
  if (c >= 0x3001 && c <= 0x3003) return true;
  if (c >= 0x3008 && c <= 0x3011) return true;
  if (c >= 0x3014 && c <= 0x301F) return true;
  if (c == 0x30FB) return true;
  // Fullwidth forms.
  if (c >= 0xFF01 && c <= 0xFF0F) return true;
  if (c >= 0xFF1A && c <= 0xFF20) return true;
  if (c >= 0xFF3B && c <= 0xFF40) return true;
  if (c >= 0xFF5B && c <= 0xFF65) return true;
  // Vertical and small form variants.
  if (c >= 0xFE10 && c <= 0xFE19) return true;
  if (c >= 0xFE30 && c <= 0xFE6B) return true;
  return false;
}

bool IsDigit(char32_t c) {
  return (c >= '0' && c <= '9') || (c >= 0xFF10 && c <= 0xFF19);
}

bool IsPunctuationOnly(std::string_view s) {
  if (s.empty()) return false;
  for (std::string_view ch : SplitChars(s)) {
    const char32_t c = DecodeChar(ch);
    if (!IsPunctuation(c) && !IsWhitespace(c)) return false;
  }
  return true;
}

bool IsPunctuationOrDigitOnly(std::string_view s) {
  if (s.empty()) return false;
  for (std::string_view ch : SplitChars(s)) {
    const char32_t c = DecodeChar(ch);
    if (!IsPunctuation(c) && !IsWhitespace(c) && !IsDigit(c)) return false;
  }
  return true;
}

}  // namespace pieceattack::utf8
