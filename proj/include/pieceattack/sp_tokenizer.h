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

#ifndef PIECEATTACK_SP_TOKENIZER_H_
#define PIECEATTACK_SP_TOKENIZER_H_

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pieceattack/tokenized_text.h"

namespace pieceattack {

struct StringHash {
  using is_transparent = void;
  size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

template <typename V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

struct Piece {
  int id = 0;
  std::string surface;
  double log_prob = 0.0;
  bool is_special = false;
};

// Unigram language model over sentence pieces. Encoding picks the
// segmentation with the highest total log probability; among equal-score
// segmentations the one whose piece sequence is lexicographically smallest
// wins. Occurrences of "[MASK]" in the input always encode as the MASK piece.
//
// Immutable once constructed and safe for concurrent readers.
class Vocabulary : public Segmenter {
 public:
  static constexpr int kDefaultMaxPieceChars = 8;

  Vocabulary() : Vocabulary(std::vector<std::pair<std::string, double>>{}) {}

  // `pieces` excludes the four specials, which are prepended. The training
  // cap defaults to the longest piece.
  explicit Vocabulary(std::vector<std::pair<std::string, double>> pieces,
                      int max_piece_chars = 0);

  // Single-character vocabulary with log relative frequencies.
  static Vocabulary CharacterOnly(const std::vector<std::string>& corpus);

  // surface<TAB>log_prob per line, in ID order, specials first.
  static Vocabulary Read(std::istream& in);
  static Vocabulary Load(const std::string& path);
  void Write(std::ostream& out) const;
  void Save(const std::string& path) const;

  TokenizedText Encode(std::string_view text) const override;
  std::string_view PieceSurface(int id) const override;
  size_t size() const override { return pieces_.size(); }

  const std::vector<Piece>& pieces() const { return pieces_; }
  const Piece& piece(int id) const { return pieces_.at(id); }
  int max_piece_chars() const { return max_piece_chars_; }

  // -1 when absent. Special surfaces are found too.
  int PieceId(std::string_view surface) const;

  // True when `ch` has a single-character piece, so it never encodes to UNK.
  bool Covers(std::string_view ch) const;
  std::vector<std::string> CharCover() const;

  // Score assigned per character of an UNK run.
  double unk_log_prob() const { return unk_log_prob_; }

  // Sum of piece log probabilities, left to right, UNK runs at
  // unk_log_prob() per character.
  double Score(const TokenizedText& tokens) const;

 private:
  void EncodeChunk(std::string_view chunk, size_t char_base,
                   TokenizedText* out) const;

  std::vector<Piece> pieces_;
  StringMap<int> index_;
  int max_piece_chars_ = 1;
  double unk_log_prob_ = -10.0;
};

struct TrainerOptions {
  int target_size = 60000;
  int max_piece_chars = Vocabulary::kDefaultMaxPieceChars;
  int seed_size = 100000;
  int em_rounds_per_stage = 2;
  double prune_fraction = 0.25;
};

// Lattice log-likelihoods recorded during training, one vector per pruning
// stage: the value before each E/M round plus one after the last M step.
struct TrainingTrace {
  std::vector<std::vector<double>> stage_log_likelihoods;
  std::vector<size_t> stage_sizes;
};

// Trains a unigram piece vocabulary of exactly options.target_size pieces
// (specials included) from raw lines. No word segmentation is assumed:
// candidate pieces are substrings that contain no whitespace or
// punctuation, up to max_piece_chars characters.
Vocabulary TrainVocabulary(const std::vector<std::string>& corpus,
                           const TrainerOptions& options,
                           TrainingTrace* trace = nullptr);

// Total log-likelihood of the best segmentation of every line.
double ViterbiLogLikelihood(const Vocabulary& vocab,
                            const std::vector<std::string>& corpus);

// Total marginal log-likelihood (sum over all segmentations) of every line.
double LatticeLogLikelihood(const Vocabulary& vocab,
                            const std::vector<std::string>& corpus);

struct VocabStats {
  static constexpr std::array<const char*, 5> kBucketNames = {"1", "2", "3",
                                                              "4", "5+"};
  std::array<int64_t, 5> counts{};
  std::array<double, 5> percentages{};
  int64_t total = 0;
};

VocabStats ComputeVocabStats(const Vocabulary& vocab);

// Length-bucket table: one "chars<TAB>count<TAB>percent%" row per bucket.
std::string FormatVocabStats(const VocabStats& stats);

}  // namespace pieceattack

#endif  // PIECEATTACK_SP_TOKENIZER_H_
