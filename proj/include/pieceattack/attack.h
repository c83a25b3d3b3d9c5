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

#ifndef PIECEATTACK_ATTACK_H_
#define PIECEATTACK_ATTACK_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pieceattack/generator.h"
#include "pieceattack/tokenized_text.h"
#include "pieceattack/victim.h"

namespace pieceattack {

struct AttackConfig {
  int k = kDefaultCandidates;
  // Maximum committed replacements; nullopt means every eligible position.
  std::optional<int> max_replacements;
  // When false, punctuation and digit pieces become eligible targets too.
  bool skip_punctuation = true;
  uint64_t seed = 0;

  // Throws InvalidArgument on k < 1 or a budget < 1.
  void Validate() const;
};

// Masked score drop per position. Ineligible positions score -infinity.
struct ImportanceRanking {
  std::vector<double> scores;
  // All positions by descending score, ties by lower index.
  std::vector<size_t> order;
};

struct Replacement {
  // Index in the tokenization current when the replacement was committed.
  size_t position = 0;
  std::string original;
  std::string substitute;
  // Drop of the original-label probability caused by this replacement.
  double score_drop = 0.0;
  // Original-label probability after the replacement.
  double label_prob = 0.0;
};

enum class AttackStatus { kSuccess, kFailure, kSkippedOriginallyWrong, kError };

std::string_view AttackStatusName(AttackStatus status);
AttackStatus ParseAttackStatus(std::string_view name);

struct AttackResult {
  AttackStatus status = AttackStatus::kFailure;
  std::string original_text;
  std::string adversarial_text;
  std::vector<Replacement> replacements;
  // Texts scored by the victim for this example.
  int64_t queries = 0;
  // Gold label of the example.
  int original_label = 0;
  // Victim prediction on the original and final adversarial text (-1 when
  // not scored).
  int original_prediction = -1;
  int adversarial_prediction = -1;
  // Pieces in the original tokenization.
  size_t num_tokens = 0;
  std::string error;
};

nlohmann::json AttackResultToJson(const AttackResult& result);
AttackResult AttackResultFromJson(const nlohmann::json& obj);

bool IsAttackTarget(const TokenizedText& tokens, size_t position,
                    bool skip_punctuation);

// Scores the original plus one single-[MASK] variant per eligible position
// in one batch (eligible + 1 victim queries).
ImportanceRanking RankImportance(const TokenizedText& tokens,
                                 const Victim& victim, int label,
                                 bool skip_punctuation = true);

// Greedy piece substitution. Positions are visited once in importance order;
// the first flipping candidate set with the lowest original-label
// probability ends the attack, otherwise the largest strictly positive drop
// is committed. Victim or generator outages yield kError.
AttackResult AttackExample(const LabeledExample& example, const Victim& victim,
                           const Generator& generator,
                           const Segmenter& segmenter,
                           const AttackConfig& config);

// Replacements over pieces of the original tokenization.
double ChangeRate(const AttackResult& result);

}  // namespace pieceattack

#endif  // PIECEATTACK_ATTACK_H_
