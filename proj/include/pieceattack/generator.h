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

#ifndef PIECEATTACK_GENERATOR_H_
#define PIECEATTACK_GENERATOR_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pieceattack/sp_tokenizer.h"
#include "pieceattack/tokenized_text.h"

namespace pieceattack {

inline constexpr int kDefaultCandidates = 12;

struct Candidate {
  std::string surface;
  // Generator specific; higher is more likely.
  double score = 0.0;

  bool operator==(const Candidate&) const = default;
};

// Substitutes for one position, best first. Ties in score are ordered by
// surface so that lists for increasing k are prefixes of each other.
struct CandidateList {
  size_t position = 0;
  std::string original;
  std::vector<Candidate> items;
};

// Proposes substitutes for a piece. The generator sees the full, unmasked
// token sequence and never returns the original piece.
class Generator {
 public:
  virtual ~Generator() = default;

  // Requires 0 <= position < tokens.size(), k >= 1 and a non-special piece
  // (UNK, MASK) at the position. Whether punctuation is attacked is the
  // caller's decision.
  virtual CandidateList Candidates(const TokenizedText& tokens,
                                   size_t position, int k) const = 0;
};

// Throws InvalidArgument when the request violates the preconditions above.
void CheckCandidateRequest(const TokenizedText& tokens, size_t position, int k);

// Drops the original surface, specials, empty and pure-punctuation surfaces
// and duplicates (keeping the best score), sorts by (score desc, surface asc)
// and keeps the first k.
CandidateList FinalizeCandidates(size_t position, std::string original,
                                 std::vector<Candidate> raw, int k);

// Desk-scale stand-in for a masked language model: a piece x at position i
// scores log(count(w[i-1], x) + 1) + log(count(x, w[i+1]) + 1), counted over
// the segmented corpus with sentence boundaries as a reserved symbol. Only
// pieces seen in at least one of the two contexts are proposed. A sentence of
// a single piece falls back to log unigram frequency.
class ContextCountGenerator : public Generator {
 public:
  static constexpr int kBoundary = -1;

  ContextCountGenerator(const std::vector<std::string>& corpus,
                        std::shared_ptr<const Segmenter> segmenter);

  CandidateList Candidates(const TokenizedText& tokens, size_t position,
                           int k) const override;

  int64_t LeftCount(int left, int piece) const;
  int64_t RightCount(int piece, int right) const;
  int64_t UnigramCount(int piece) const;

 private:
  static uint64_t Key(int a, int b) {
    return (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
           static_cast<uint32_t>(b);
  }

  std::shared_ptr<const Segmenter> segmenter_;
  std::unordered_map<uint64_t, int64_t> left_counts_;
  std::unordered_map<uint64_t, int64_t> right_counts_;
  // Pieces observed after a left neighbour / before a right neighbour.
  std::unordered_map<int, std::vector<int>> followers_;
  std::unordered_map<int, std::vector<int>> predecessors_;
  std::map<int, int64_t> unigram_;
};

// Per-character confusion counts: original char -> (substitute, count).
using ConfusionTable = std::map<std::string, std::map<std::string, double>>;

// Character-replacement baseline. Operates on character-tokenized input.
// Candidates for a character c come from its confusion-table row when one
// exists, otherwise from every character seen next to the neighbouring
// characters; the score is log(confusion + 1) + log(left + 1) +
// log(right + 1) with character bigram counts from the corpus.
class CharGenerator : public Generator {
 public:
  CharGenerator(const std::vector<std::string>& corpus,
                ConfusionTable confusion = {});

  CandidateList Candidates(const TokenizedText& tokens, size_t position,
                           int k) const override;

 private:
  static constexpr std::string_view kBoundary = "\n";

  double Bigram(const std::string& left, const std::string& right) const;

  ConfusionTable confusion_;
  std::map<std::pair<std::string, std::string>, double> bigrams_;
  std::map<std::string, std::vector<std::string>> followers_;
  std::map<std::string, std::vector<std::string>> predecessors_;
};

}  // namespace pieceattack

#endif  // PIECEATTACK_GENERATOR_H_
