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

#include "pieceattack/embedding.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include "pieceattack/error.h"
#include "pieceattack/utf8.h"

namespace pieceattack {
namespace {

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' ||
                                 line[pos] == '\r')) {
      ++pos;
    }
    if (pos >= line.size()) break;
    size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' &&
           line[end] != '\r') {
      ++end;
    }
    fields.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return fields;
}

bool ParseInt(std::string_view s, long* out) {
  const auto r = std::from_chars(s.data(), s.data() + s.size(), *out);
  return r.ec == std::errc() && r.ptr == s.data() + s.size();
}

}  // namespace

EmbeddingTable EmbeddingTable::Read(std::istream& in, size_t max_words) {
  EmbeddingTable table;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& why) {
    return Error(ErrorCode::kEmbeddingParseError,
                 "line " + std::to_string(line_no) + ": " + why);
  };
  while (table.words_.size() < max_words && std::getline(in, line)) {
    ++line_no;
    const std::vector<std::string_view> fields = SplitFields(line);
    if (fields.empty()) continue;
    if (line_no == 1 && fields.size() == 2) {
      long count = 0;
      long dims = 0;
      if (ParseInt(fields[0], &count) && ParseInt(fields[1], &dims)) continue;
    }
    if (fields.size() < 2) throw fail("expected a word and at least one value");
    const size_t dims = fields.size() - 1;
    if (table.dims_ == 0) {
      table.dims_ = dims;
    } else if (dims != table.dims_) {
      throw fail("expected " + std::to_string(table.dims_) +
                 " dimensions, found " + std::to_string(dims));
    }
    std::vector<double> row(dims);
    double norm = 0.0;
    for (size_t d = 0; d < dims; ++d) {
      const std::string_view f = fields[d + 1];
      const auto r = std::from_chars(f.data(), f.data() + f.size(), row[d]);
      if (r.ec != std::errc() || r.ptr != f.data() + f.size() ||
          !std::isfinite(row[d])) {
        throw fail("bad number '" + std::string(f) + "'");
      }
      norm += row[d] * row[d];
    }
    std::string word(fields[0]);
    if (!table.index_.emplace(word, static_cast<int>(table.words_.size()))
             .second) {
      throw fail("duplicate word '" + word + "'");
    }
    norm = std::sqrt(norm);
    table.zero_.push_back(norm == 0.0);
    for (double v : row) table.unit_.push_back(norm == 0.0 ? 0.0 : v / norm);
    table.words_.push_back(std::move(word));
  }
  return table;
}

EmbeddingTable EmbeddingTable::Load(const std::string& path, size_t max_words) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open embeddings " + path);
  return Read(in, max_words);
}

int EmbeddingTable::WordId(std::string_view word) const {
  const auto it = index_.find(word);
  return it == index_.end() ? -1 : it->second;
}

double EmbeddingTable::Cosine(int a, int b) const {
  if (zero_[a] || zero_[b]) return 0.0;
  const double* va = unit_.data() + static_cast<size_t>(a) * dims_;
  const double* vb = unit_.data() + static_cast<size_t>(b) * dims_;
  double dot = 0.0;
  for (size_t d = 0; d < dims_; ++d) dot += va[d] * vb[d];
  return dot;
}

LongestMatchSegmenter::LongestMatchSegmenter(
    const std::vector<std::string>& words) {
  for (std::string_view s :
       {kPadSurface, kUnkSurface, kClsSurface, kMaskSurface}) {
    index_.emplace(std::string(s), static_cast<int>(surfaces_.size()));
    surfaces_.emplace_back(s);
  }
  for (const std::string& w : words) {
    if (w.empty() || IsSpecialSurface(w)) continue;
    if (index_.emplace(w, static_cast<int>(surfaces_.size())).second) {
      surfaces_.push_back(w);
      max_word_chars_ = std::max(max_word_chars_, utf8::CountChars(w));
    }
  }
}

std::string_view LongestMatchSegmenter::PieceSurface(int id) const {
  return surfaces_.at(id);
}

TokenizedText LongestMatchSegmenter::Encode(std::string_view text) const {
  TokenizedText out;
  out.original = std::string(text);
  out.char_offsets = utf8::CharOffsets(text);
  size_t byte_pos = 0;
  size_t char_pos = 0;
  while (true) {
    const size_t mask = text.find(kMaskSurface, byte_pos);
    const size_t chunk_end = mask == std::string_view::npos ? text.size() : mask;
    const std::string_view chunk = text.substr(byte_pos, chunk_end - byte_pos);
    EncodeChunk(chunk, char_pos, &out);
    char_pos += utf8::CountChars(chunk);
    if (mask == std::string_view::npos) break;
    out.piece_ids.push_back(kMaskId);
    out.spans.push_back({char_pos, char_pos + kMaskSurface.size()});
    char_pos += kMaskSurface.size();
    byte_pos = mask + kMaskSurface.size();
  }
  return out;
}

void LongestMatchSegmenter::EncodeChunk(std::string_view chunk,
                                        size_t char_base,
                                        TokenizedText* out) const {
  const std::vector<size_t> offsets = utf8::CharOffsets(chunk);
  const size_t n = offsets.size() - 1;
  for (size_t i = 0; i < n;) {
    size_t len = std::min(max_word_chars_, n - i);
    int id = -1;
    for (; len >= 1; --len) {
      const auto it =
          index_.find(chunk.substr(offsets[i], offsets[i + len] - offsets[i]));
      if (it != index_.end() && it->second >= kNumSpecialPieces) {
        id = it->second;
        break;
      }
    }
    if (id < 0) {
      len = 1;
      id = kUnkId;
    }
    const CharSpan span{char_base + i, char_base + i + len};
    if (id == kUnkId && !out->piece_ids.empty() &&
        out->piece_ids.back() == kUnkId && out->spans.back().end == span.begin) {
      out->spans.back().end = span.end;
    } else {
      out->piece_ids.push_back(id);
      out->spans.push_back(span);
    }
    i += len;
  }
}

EmbeddingGenerator::EmbeddingGenerator(
    std::shared_ptr<const EmbeddingTable> table, double threshold)
    : table_(std::move(table)), threshold_(threshold) {
  if (table_ == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "embedding generator needs a table");
  }
  if (!(threshold >= -1.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "similarity threshold must lie in [-1, 1]");
  }
}

CandidateList EmbeddingGenerator::Candidates(const TokenizedText& tokens,
                                             size_t position, int k) const {
  CheckCandidateRequest(tokens, position, k);
  const std::string original(tokens.SpanText(position));
  std::vector<Candidate> raw;
  const int source = table_->WordId(original);
  if (source >= 0) {
    for (size_t w = 0; w < table_->size(); ++w) {
      if (static_cast<int>(w) == source) continue;
      const double sim = table_->Cosine(source, static_cast<int>(w));
      if (sim >= threshold_) raw.push_back({table_->words()[w], sim});
    }
  }
  return FinalizeCandidates(position, original, std::move(raw), k);
}

}  // namespace pieceattack
