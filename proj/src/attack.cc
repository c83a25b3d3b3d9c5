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

#include "pieceattack/attack.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "pieceattack/error.h"
#include "pieceattack/utf8.h"

namespace pieceattack {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

std::vector<size_t> EligiblePositions(const TokenizedText& tokens,
                                      bool skip_punctuation) {
  std::vector<size_t> positions;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (IsAttackTarget(tokens, i, skip_punctuation)) positions.push_back(i);
  }
  return positions;
}

ImportanceRanking MakeRanking(size_t n, const std::vector<size_t>& eligible,
                              const std::vector<double>& drops) {
  ImportanceRanking ranking;
  ranking.scores.assign(n, kNegInf);
  for (size_t e = 0; e < eligible.size(); ++e) {
    ranking.scores[eligible[e]] = drops[e];
  }
  ranking.order.resize(n);
  std::iota(ranking.order.begin(), ranking.order.end(), size_t{0});
  std::stable_sort(ranking.order.begin(), ranking.order.end(),
                   [&](size_t a, size_t b) {
                     return ranking.scores[a] > ranking.scores[b];
                   });
  return ranking;
}

// Masked variants of the eligible positions.
std::vector<std::string> MaskedTexts(const TokenizedText& tokens,
                                     const std::vector<size_t>& eligible) {
  std::vector<std::string> texts;
  texts.reserve(eligible.size());
  for (size_t i : eligible) texts.push_back(tokens.ReplaceSpan(i, kMaskSurface));
  return texts;
}

bool IsOutage(ErrorCode code) {
  return code == ErrorCode::kVictimUnavailable ||
         code == ErrorCode::kGeneratorUnavailable ||
         code == ErrorCode::kMalformedResponse;
}

}  // namespace

void AttackConfig::Validate() const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (max_replacements && *max_replacements < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "max_replacements must be >= 1 or unlimited");
  }
}

std::string_view AttackStatusName(AttackStatus status) {
  switch (status) {
    case AttackStatus::kSuccess:
      return "Success";
    case AttackStatus::kFailure:
      return "Failure";
    case AttackStatus::kSkippedOriginallyWrong:
      return "SkippedOriginallyWrong";
    case AttackStatus::kError:
      return "Error";
  }
  return "Error";
}

AttackStatus ParseAttackStatus(std::string_view name) {
  for (AttackStatus s :
       {AttackStatus::kSuccess, AttackStatus::kFailure,
        AttackStatus::kSkippedOriginallyWrong, AttackStatus::kError}) {
    if (AttackStatusName(s) == name) return s;
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown attack status '" + std::string(name) + "'");
}

nlohmann::json AttackResultToJson(const AttackResult& result) {
  nlohmann::json replacements = nlohmann::json::array();
  for (const Replacement& r : result.replacements) {
    replacements.push_back({{"position", r.position},
                            {"original", r.original},
                            {"substitute", r.substitute},
                            {"score_drop", r.score_drop},
                            {"label_prob", r.label_prob}});
  }
  nlohmann::json obj = {
      {"status", AttackStatusName(result.status)},
      {"original_text", result.original_text},
      {"adversarial_text", result.adversarial_text},
      {"original_label", result.original_label},
      {"original_prediction", result.original_prediction},
      {"adversarial_prediction", result.adversarial_prediction},
      {"num_tokens", result.num_tokens},
      {"queries", result.queries},
      {"replacements", std::move(replacements)},
  };
  if (!result.error.empty()) obj["error"] = result.error;
  return obj;
}

AttackResult AttackResultFromJson(const nlohmann::json& obj) {
  try {
    AttackResult result;
    result.status = ParseAttackStatus(obj.at("status").get<std::string>());
    result.original_text = obj.at("original_text").get<std::string>();
    result.adversarial_text = obj.at("adversarial_text").get<std::string>();
    result.original_label = obj.at("original_label").get<int>();
    result.original_prediction = obj.at("original_prediction").get<int>();
    result.adversarial_prediction = obj.at("adversarial_prediction").get<int>();
    result.num_tokens = obj.at("num_tokens").get<size_t>();
    result.queries = obj.at("queries").get<int64_t>();
    for (const nlohmann::json& r : obj.at("replacements")) {
      result.replacements.push_back({r.at("position").get<size_t>(),
                                     r.at("original").get<std::string>(),
                                     r.at("substitute").get<std::string>(),
                                     r.at("score_drop").get<double>(),
                                     r.at("label_prob").get<double>()});
    }
    if (obj.contains("error")) result.error = obj["error"].get<std::string>();
    return result;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("malformed attack result: ") + e.what());
  }
}

bool IsAttackTarget(const TokenizedText& tokens, size_t position,
                    bool skip_punctuation) {
  if (Segmenter::IsSpecial(tokens.piece_ids.at(position))) return false;
  return !skip_punctuation ||
         !utf8::IsPunctuationOrDigitOnly(tokens.SpanText(position));
}

ImportanceRanking RankImportance(const TokenizedText& tokens,
                                 const Victim& victim, int label,
                                 bool skip_punctuation) {
  const std::vector<size_t> eligible =
      EligiblePositions(tokens, skip_punctuation);
  std::vector<std::string> texts;
  texts.reserve(eligible.size() + 1);
  texts.push_back(tokens.original);
  for (std::string& t : MaskedTexts(tokens, eligible)) {
    texts.push_back(std::move(t));
  }
  const std::vector<ClassDistribution> scores = victim.BatchScore(texts);
  const double base = scores.at(0).prob(label);
  std::vector<double> drops;
  drops.reserve(eligible.size());
  for (size_t e = 0; e < eligible.size(); ++e) {
    drops.push_back(base - scores.at(e + 1).prob(label));
  }
  return MakeRanking(tokens.size(), eligible, drops);
}

AttackResult AttackExample(const LabeledExample& example, const Victim& victim,
                           const Generator& generator,
                           const Segmenter& segmenter,
                           const AttackConfig& config) {
  config.Validate();
  if (example.text.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "cannot attack an empty text");
  }
  const CountingVictim counted(victim);
  const int label = example.label;
  AttackResult result;
  result.original_text = example.text;
  result.adversarial_text = example.text;
  result.original_label = label;

  try {
    const TokenizedText original = segmenter.Encode(example.text);
    result.num_tokens = original.size();

    const ClassDistribution base = counted.Score(example.text);
    result.original_prediction = base.predicted;
    result.adversarial_prediction = base.predicted;
    if (base.predicted != label) {
      result.status = AttackStatus::kSkippedOriginallyWrong;
      result.queries = counted.queries();
      return result;
    }
    if (label >= static_cast<int>(base.num_classes())) {
      throw Error(ErrorCode::kInvalidArgument, "label out of range");
    }

    const std::vector<size_t> eligible =
        EligiblePositions(original, config.skip_punctuation);
    std::vector<double> drops;
    if (!eligible.empty()) {
      const std::vector<ClassDistribution> masked =
          counted.BatchScore(MaskedTexts(original, eligible));
      for (const ClassDistribution& d : masked) {
        drops.push_back(base.prob(label) - d.prob(label));
      }
    }
    const ImportanceRanking ranking =
        MakeRanking(original.size(), eligible, drops);

    // Current character span of every original position; cleared once the
    // span is replaced or overlapped by a replacement.
    std::vector<std::optional<CharSpan>> located(original.spans.begin(),
                                                 original.spans.end());
    TokenizedText current = original;
    double current_prob = base.prob(label);
    result.status = AttackStatus::kFailure;

    for (size_t pos : ranking.order) {
      if (ranking.scores[pos] == kNegInf) break;
      if (config.max_replacements &&
          static_cast<int>(result.replacements.size()) >=
              *config.max_replacements) {
        break;
      }
      if (!located[pos]) continue;
      const int index = current.FindSpan(*located[pos]);
      if (index < 0 || !IsAttackTarget(current, static_cast<size_t>(index),
                                       config.skip_punctuation)) {
        continue;
      }
      const size_t j = static_cast<size_t>(index);
      const CandidateList candidates = generator.Candidates(current, j, config.k);
      if (candidates.items.empty()) continue;

      std::vector<std::string> trials;
      trials.reserve(candidates.items.size());
      for (const Candidate& c : candidates.items) {
        trials.push_back(current.ReplaceSpan(j, c.surface));
      }
      const std::vector<ClassDistribution> scored = counted.BatchScore(trials);

      int flip = -1;
      int best = -1;
      for (size_t t = 0; t < scored.size(); ++t) {
        const double p = scored[t].prob(label);
        if (scored[t].predicted != label &&
            (flip < 0 || p < scored[flip].prob(label))) {
          flip = static_cast<int>(t);
        }
        if (best < 0 || p < scored[best].prob(label)) best = static_cast<int>(t);
      }
      const int chosen = flip >= 0 ? flip : best;
      const double chosen_prob = scored[chosen].prob(label);
      if (flip < 0 && current_prob - chosen_prob <= 0.0) continue;

      const CharSpan span = current.spans[j];
      const std::string& substitute = candidates.items[chosen].surface;
      result.replacements.push_back({j, std::string(current.SpanText(j)),
                                     substitute, current_prob - chosen_prob,
                                     chosen_prob});
      const long delta = static_cast<long>(utf8::CountChars(substitute)) -
                         static_cast<long>(span.length());
      for (auto& other : located) {
        if (!other) continue;
        if (other->end <= span.begin) continue;
        if (other->begin >= span.end) {
          other->begin = static_cast<size_t>(static_cast<long>(other->begin) + delta);
          other->end = static_cast<size_t>(static_cast<long>(other->end) + delta);
        } else {
          other.reset();
        }
      }
      current = segmenter.Encode(trials[chosen]);
      current_prob = chosen_prob;
      result.adversarial_text = current.original;
      result.adversarial_prediction = scored[chosen].predicted;

      if (flip >= 0) {
        const ClassDistribution check = counted.Score(result.adversarial_text);
        result.adversarial_prediction = check.predicted;
        if (check.predicted != label) {
          result.status = AttackStatus::kSuccess;
        } else {
          result.error = "flip did not survive re-scoring";
        }
        break;
      }
    }
  } catch (const Error& e) {
    if (!IsOutage(e.code())) throw;
    result.status = AttackStatus::kError;
    result.error = e.what();
  }
  result.queries = counted.queries();
  return result;
}

double ChangeRate(const AttackResult& result) {
  if (result.status == AttackStatus::kSkippedOriginallyWrong) {
    throw Error(ErrorCode::kInvalidArgument,
                "change rate is undefined for skipped examples");
  }
  if (result.num_tokens == 0) return 0.0;
  return static_cast<double>(result.replacements.size()) /
         static_cast<double>(result.num_tokens);
}

}  // namespace pieceattack
