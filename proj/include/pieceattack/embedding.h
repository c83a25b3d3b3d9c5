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

#ifndef PIECEATTACK_EMBEDDING_H_
#define PIECEATTACK_EMBEDDING_H_

#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "pieceattack/generator.h"
#include "pieceattack/sp_tokenizer.h"

namespace pieceattack {

// Word vectors, one "word dim1 ... dimN" line per word. An optional leading
// "count dim" header line is accepted. Rows are stored L2-normalized.
class EmbeddingTable {
 public:
  static constexpr size_t kDefaultMaxWords = 60000;

  // Reads at most max_words rows (the file is assumed frequency ordered).
  // Throws EmbeddingParseError naming the offending line.
  static EmbeddingTable Read(std::istream& in,
                             size_t max_words = kDefaultMaxWords);
  static EmbeddingTable Load(const std::string& path,
                             size_t max_words = kDefaultMaxWords);

  size_t size() const { return words_.size(); }
  size_t dims() const { return dims_; }
  const std::vector<std::string>& words() const { return words_; }

  // -1 when absent.
  int WordId(std::string_view word) const;

  // Cosine similarity of two rows; 0 when either vector is zero.
  double Cosine(int a, int b) const;

 private:
  std::vector<std::string> words_;
  std::vector<double> unit_;  // size() x dims_, row-major
  std::vector<bool> zero_;
  StringMap<int> index_;
  size_t dims_ = 0;
};

// Greedy longest-match word segmenter over a word list. Characters that
// start no word become UNK (consecutive ones merge); "[MASK]" encodes as the
// MASK piece. Word i has id kNumSpecialPieces + i.
class LongestMatchSegmenter : public Segmenter {
 public:
  explicit LongestMatchSegmenter(const std::vector<std::string>& words);

  TokenizedText Encode(std::string_view text) const override;
  std::string_view PieceSurface(int id) const override;
  size_t size() const override { return surfaces_.size(); }

 private:
  void EncodeChunk(std::string_view chunk, size_t char_base,
                   TokenizedText* out) const;

  std::vector<std::string> surfaces_;
  StringMap<int> index_;
  size_t max_word_chars_ = 1;
};

// Word-replacement baseline: in-table words whose cosine similarity with
// the original is at least `threshold`, most similar first. Words missing
// from the table get an empty list.
class EmbeddingGenerator : public Generator {
 public:
  EmbeddingGenerator(std::shared_ptr<const EmbeddingTable> table,
                     double threshold);

  CandidateList Candidates(const TokenizedText& tokens, size_t position,
                           int k) const override;

  double threshold() const { return threshold_; }

 private:
  std::shared_ptr<const EmbeddingTable> table_;
  double threshold_;
};

}  // namespace pieceattack

#endif  // PIECEATTACK_EMBEDDING_H_
