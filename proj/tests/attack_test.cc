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

#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "pieceattack/error.h"
#include "pieceattack/toy_victim.h"
#include "testing/desk_data.h"
#include "testing/desk_pipeline.h"
#include "testing/oracles.h"

namespace pieceattack {
namespace {

using testing::FixedGenerator;

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::shared_ptr<const Vocabulary> LetterVocab() {
  std::vector<std::pair<std::string, double>> pieces;
  for (const char* s : {"a", "b", "c", "d", "p", "q", "x", "y", "今天", "的", "，", "1", "2"}) {
    pieces.emplace_back(s, -1.0);
  }
  return std::make_shared<const Vocabulary>(pieces);
}

const testing::DeskPipeline& Desk() {
  static const testing::DeskPipeline* pipeline =
      new testing::DeskPipeline(testing::MakeDeskPipeline(300, 100, 77));
  return *pipeline;
}

// Re-applies each recorded replacement to a fresh encoding and checks the
// result is exactly the reported adversarial text.
void ExpectReplayable(const AttackResult& r, const Segmenter& segmenter) {
  std::string text = r.original_text;
  for (const Replacement& rep : r.replacements) {
    const TokenizedText tokens = segmenter.Encode(text);
    ASSERT_LT(rep.position, tokens.size());
    EXPECT_EQ(tokens.SpanText(rep.position), rep.original);
    EXPECT_NE(rep.original, rep.substitute);
    text = tokens.ReplaceSpan(rep.position, rep.substitute);
  }
  EXPECT_EQ(text, r.adversarial_text);
}

class ThrowingVictim : public Victim {
 public:
  ThrowingVictim(const Victim& inner, int fail_after)
      : inner_(inner), left_(fail_after) {}
  std::vector<ClassDistribution> BatchScore(
      std::span<const std::string> texts) const override {
    if (left_-- <= 0) throw Error(ErrorCode::kVictimUnavailable, "down");
    return inner_.BatchScore(texts);
  }

 private:
  const Victim& inner_;
  mutable int left_;
};

class DownGenerator : public Generator {
 public:
  CandidateList Candidates(const TokenizedText&, size_t, int) const override {
    throw Error(ErrorCode::kGeneratorUnavailable, "down");
  }
};

TEST(AttackConfigTest, Validates) {
  AttackConfig config;
  EXPECT_EQ(config.k, 12);
  EXPECT_FALSE(config.max_replacements.has_value());
  EXPECT_NO_THROW(config.Validate());
  config.k = 0;
  EXPECT_THROW(config.Validate(), Error);
  config.k = 3;
  config.max_replacements = 0;
  EXPECT_THROW(config.Validate(), Error);
}

TEST(RankImportanceTest, MatchesHandComputation) {
  const auto vocab = LetterVocab();
  ToyVictimParams params = ToyVictimParams::Zeros(2, vocab->size());
  params.weight(0, vocab->PieceId("a")) = 1.0;
  params.weight(0, vocab->PieceId("b")) = 0.5;
  params.weight(0, vocab->PieceId("d")) = -0.5;
  params.weight(0, kMaskId) = 0.2;
  const ToyVictim victim(vocab, params);
  const CountingVictim counted(victim);
  const TokenizedText tokens = vocab->Encode("abcd");
  const ImportanceRanking r = RankImportance(tokens, counted, 0);
  // Class-0 logit is 1.0 on the text; masking swaps a weight for 0.2.
  const double base = Sigmoid(1.0);
  EXPECT_NEAR(r.scores[0], base - Sigmoid(0.2), 1e-15);
  EXPECT_NEAR(r.scores[1], base - Sigmoid(0.7), 1e-15);
  EXPECT_NEAR(r.scores[2], base - Sigmoid(1.2), 1e-15);
  EXPECT_NEAR(r.scores[3], base - Sigmoid(1.7), 1e-15);
  EXPECT_EQ(r.order, (std::vector<size_t>{0, 1, 2, 3}));
  EXPECT_EQ(counted.queries(), 5);
  EXPECT_EQ(counted.batches(), 1);
}

TEST(RankImportanceTest, IgnoredPieceHasZeroImportance) {
  const auto vocab = LetterVocab();
  ToyVictimParams params = ToyVictimParams::Zeros(2, vocab->size());
  params.weight(1, vocab->PieceId("a")) = 2.0;
  const ToyVictim victim(vocab, params);
  const TokenizedText tokens = vocab->Encode("axa");
  const ImportanceRanking r = RankImportance(tokens, victim, 1);
  EXPECT_EQ(r.scores[1], 0.0);
  EXPECT_GT(r.scores[0], 0.0);
  EXPECT_EQ(r.order, (std::vector<size_t>{0, 2, 1}));
}

TEST(RankImportanceTest, SkipPositionsScoreNegativeInfinityAndSortLast) {
  const auto vocab = LetterVocab();
  const ToyVictim victim(vocab, ToyVictimParams::Zeros(2, vocab->size()));
  const TokenizedText tokens = vocab->Encode("a，😀b12");
  const CountingVictim counted(victim);
  const ImportanceRanking r = RankImportance(tokens, counted, 0);
  ASSERT_EQ(tokens.size(), 6u);  // a ， 😀 b 1 2
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_EQ(r.scores[1], -inf);
  EXPECT_EQ(r.scores[2], -inf);
  EXPECT_EQ(r.scores[4], -inf);
  EXPECT_EQ(r.scores[5], -inf);
  EXPECT_EQ(r.order, (std::vector<size_t>{0, 3, 1, 2, 4, 5}));
  EXPECT_EQ(counted.queries(), 3);
  const ImportanceRanking all = RankImportance(tokens, victim, 0, false);
  EXPECT_EQ(all.scores[2], -inf);  // UNK stays excluded
  EXPECT_EQ(all.scores[1], 0.0);
}

TEST(RankImportanceTest, EqualsDirectRecomputationOnRandomVictims) {
  const testing::DeskPipeline& desk = Desk();
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal;
  const std::vector<std::string> texts = testing::DeskCorpus(50, 98, true);
  for (int instance = 0; instance < 50; ++instance) {
    const int classes = 2 + instance % 3;
    ToyVictimParams params = ToyVictimParams::Zeros(classes, desk.vocab->size());
    for (double& w : params.weights) w = normal(rng);
    for (double& b : params.bias) b = normal(rng);
    const ToyVictim victim(desk.vocab, params);
    const TokenizedText tokens = desk.vocab->Encode(texts[instance]);
    const int label = victim.Score(tokens.original).predicted;
    const ImportanceRanking r = RankImportance(tokens, victim, label);
    const std::vector<double> direct =
        testing::DirectImportance(tokens, victim, label);
    ASSERT_EQ(r.scores.size(), direct.size());
    for (size_t i = 0; i < direct.size(); ++i) {
      EXPECT_EQ(r.scores[i], direct[i]) << "instance " << instance << " pos " << i;
    }
    for (size_t i = 1; i < r.order.size(); ++i) {
      const double a = r.scores[r.order[i - 1]], b = r.scores[r.order[i]];
      EXPECT_TRUE(a > b || (a == b && r.order[i - 1] < r.order[i]));
    }
  }
}

TEST(AttackExampleTest, ForcedFlipNeedsOneReplacement) {
  const auto vocab = LetterVocab();
  ToyVictimParams params = ToyVictimParams::Zeros(2, vocab->size());
  params.weight(0, vocab->PieceId("p")) = 5.0;
  params.bias = {0.0, 1.0};
  const ToyVictim victim(vocab, params);
  const FixedGenerator generator({"q"});
  const AttackResult r =
      AttackExample({"xpx", 0}, victim, generator, *vocab, AttackConfig{});
  EXPECT_EQ(r.status, AttackStatus::kSuccess);
  ASSERT_EQ(r.replacements.size(), 1u);
  EXPECT_EQ(r.replacements[0].original, "p");
  EXPECT_EQ(r.replacements[0].substitute, "q");
  EXPECT_EQ(r.adversarial_text, "xqx");
  EXPECT_NE(victim.Score(r.adversarial_text).predicted, 0);
  EXPECT_EQ(r.adversarial_prediction, 1);
  EXPECT_DOUBLE_EQ(ChangeRate(r), 1.0 / 3.0);
  // original + 3 masks + 1 trial at p + final re-check.
  EXPECT_EQ(r.queries, 6);
}

TEST(AttackExampleTest, MisclassifiedOriginalIsSkippedAfterOneQuery) {
  const auto vocab = LetterVocab();
  const ToyVictim victim(vocab, ToyVictimParams::Zeros(2, vocab->size()));
  const FixedGenerator generator({"q"});
  const AttackResult r =
      AttackExample({"abc", 1}, victim, generator, *vocab, AttackConfig{});
  EXPECT_EQ(r.status, AttackStatus::kSkippedOriginallyWrong);
  EXPECT_EQ(r.queries, 1);
  EXPECT_EQ(r.adversarial_text, "abc");
  EXPECT_THROW(ChangeRate(r), Error);
}

TEST(AttackExampleTest, ConstantVictimFails) {
  const auto vocab = LetterVocab();
  const ToyVictim victim(vocab, ToyVictimParams::Zeros(2, vocab->size()));
  const FixedGenerator generator({"a", "b", "c", "d", "p", "q"});
  const AttackResult r =
      AttackExample({"abcd", 0}, victim, generator, *vocab, AttackConfig{});
  EXPECT_EQ(r.status, AttackStatus::kFailure);
  EXPECT_TRUE(r.replacements.empty());
  EXPECT_EQ(r.adversarial_text, "abcd");
  EXPECT_EQ(ChangeRate(r), 0.0);
  // original + 4 masks + 4 positions x 5 trials.
  EXPECT_EQ(r.queries, 1 + 4 + 20);
}

TEST(AttackExampleTest, EmptyCandidateListsSkipPositions) {
  const auto vocab = LetterVocab();
  const ToyVictim victim(vocab, ToyVictimParams::Zeros(2, vocab->size()));
  const FixedGenerator generator({});
  const AttackResult r =
      AttackExample({"abcd", 0}, victim, generator, *vocab, AttackConfig{});
  EXPECT_EQ(r.status, AttackStatus::kFailure);
  EXPECT_EQ(r.queries, 5);
}

TEST(AttackExampleTest, LengthChangingSubstitutesKeepLaterSpans) {
  const auto vocab = LetterVocab();
  ToyVictimParams params = ToyVictimParams::Zeros(2, vocab->size());
  params.weight(0, vocab->PieceId("a")) = 1.0;
  params.weight(0, vocab->PieceId("b")) = 0.9;
  params.weight(0, vocab->PieceId("c")) = 0.8;
  params.weight(0, vocab->PieceId("今天")) = -0.1;
  // One substitute lowers the class-0 logit from 2.7 to 1.6, two to 0.6.
  params.bias = {0.0, 1.0};
  const ToyVictim victim(vocab, params);
  const FixedGenerator generator({"今天的"});
  AttackConfig config;
  const AttackResult r = AttackExample({"abc", 0}, victim, generator, *vocab, config);
  ExpectReplayable(r, *vocab);
  EXPECT_EQ(r.status, AttackStatus::kSuccess);
  ASSERT_EQ(r.replacements.size(), 2u);
  EXPECT_EQ(r.replacements[1].position, 2u);  // b, after 今天 and 的
  EXPECT_EQ(r.adversarial_text, "今天的今天的c");
}

TEST(AttackExampleTest, BudgetLimitsReplacements) {
  const testing::DeskPipeline& desk = Desk();
  AttackConfig config;
  config.max_replacements = 1;
  for (const LabeledExample& ex : desk.held_out) {
    const AttackResult r =
        AttackExample(ex, *desk.victim, *desk.generator, *desk.vocab, config);
    EXPECT_LE(r.replacements.size(), 1u);
  }
}

TEST(AttackExampleTest, DeskInvariants) {
  const testing::DeskPipeline& desk = Desk();
  int successes = 0;
  for (const LabeledExample& ex : desk.held_out) {
    const CountingVictim counted(*desk.victim);
    const AttackResult r =
        AttackExample(ex, counted, *desk.generator, *desk.vocab, AttackConfig{});
    // Query accounting.
    EXPECT_EQ(r.queries, counted.queries());
    if (r.status == AttackStatus::kSkippedOriginallyWrong) continue;
    EXPECT_GT(r.queries, 0);
    // Soundness.
    if (r.status == AttackStatus::kSuccess) {
      ++successes;
      EXPECT_NE(desk.victim->Score(r.adversarial_text).predicted, ex.label);
    } else {
      EXPECT_EQ(desk.victim->Score(r.adversarial_text).predicted, ex.label);
    }
    // Locality.
    ExpectReplayable(r, *desk.vocab);
    // Greedy-step monotonicity.
    double prev = desk.victim->Score(ex.text).prob(ex.label);
    for (const Replacement& rep : r.replacements) {
      EXPECT_LT(rep.label_prob, prev);
      EXPECT_NEAR(rep.score_drop, prev - rep.label_prob, 1e-12);
      prev = rep.label_prob;
    }
    const double rate = ChangeRate(r);
    EXPECT_GE(rate, 0.0);
    EXPECT_LE(rate, 1.0);
  }
  EXPECT_GT(successes, 0);
}

TEST(AttackExampleTest, GreedyNeverBeatsExhaustiveSearch) {
  int successes = 0;
  for (uint64_t seed = 0; seed < 60; ++seed) {
    const testing::TinyInstance t = testing::MakeTinyInstance(seed);
    AttackConfig config;
    config.max_replacements = 2;
    const AttackResult r =
        AttackExample(t.example, *t.victim, *t.generator, *t.vocab, config);
    if (r.status != AttackStatus::kSuccess) continue;
    ++successes;
    EXPECT_TRUE(testing::ExhaustiveFlipExists(t.vocab->Encode(t.example.text),
                                              *t.victim, t.example.label,
                                              t.generator->surfaces()))
        << t.example.text;
  }
  EXPECT_GT(successes, 0);
}

TEST(AttackExampleTest, FirstStepDropGrowsWithK) {
  const testing::DeskPipeline& desk = Desk();
  for (const LabeledExample& ex : desk.held_out) {
    const TokenizedText tokens = desk.vocab->Encode(ex.text);
    const int label = desk.victim->Score(ex.text).predicted;
    const ImportanceRanking r = RankImportance(tokens, *desk.victim, label);
    if (tokens.empty() || std::isinf(r.scores[r.order[0]])) continue;
    const size_t pos = r.order[0];
    const double base = desk.victim->Score(ex.text).prob(label);
    double previous = -std::numeric_limits<double>::infinity();
    for (int k : {1, 4, 12, 48}) {
      double best = -std::numeric_limits<double>::infinity();
      for (const Candidate& c : desk.generator->Candidates(tokens, pos, k).items) {
        best = std::max(best, base - desk.victim->Score(tokens.ReplaceSpan(pos, c.surface)).prob(label));
      }
      EXPECT_GE(best, previous);
      previous = best;
    }
  }
}

TEST(AttackExampleTest, OutagesEndInErrorStatus) {
  const testing::DeskPipeline& desk = Desk();
  const LabeledExample& ex = desk.held_out[0];
  const ThrowingVictim flaky(*desk.victim, 2);
  const AttackResult a =
      AttackExample(ex, flaky, *desk.generator, *desk.vocab, AttackConfig{});
  EXPECT_EQ(a.status, AttackStatus::kError);
  EXPECT_NE(a.error.find("VictimUnavailable"), std::string::npos);

  const DownGenerator down;
  const int label = desk.victim->Score(ex.text).predicted;
  const AttackResult b = AttackExample({ex.text, label}, *desk.victim, down,
                                       *desk.vocab, AttackConfig{});
  EXPECT_EQ(b.status, AttackStatus::kError);
}

TEST(AttackResultTest, JsonRoundTrip) {
  AttackResult r;
  r.status = AttackStatus::kSuccess;
  r.original_text = "今天比赛";
  r.adversarial_text = "今天股票";
  r.replacements = {{1, "比赛", "股票", 0.625, 0.25}};
  r.queries = 17;
  r.original_label = 1;
  r.original_prediction = 1;
  r.adversarial_prediction = 0;
  r.num_tokens = 2;
  const AttackResult back = AttackResultFromJson(AttackResultToJson(r));
  EXPECT_EQ(AttackResultToJson(back).dump(), AttackResultToJson(r).dump());
  EXPECT_EQ(back.replacements[0].substitute, "股票");
  EXPECT_EQ(back.status, AttackStatus::kSuccess);
  for (AttackStatus s : {AttackStatus::kSuccess, AttackStatus::kFailure,
                         AttackStatus::kSkippedOriginallyWrong,
                         AttackStatus::kError}) {
    EXPECT_EQ(ParseAttackStatus(AttackStatusName(s)), s);
  }
}

TEST(ChangeRateTest, CountsReplacementsPerOriginalPiece) {
  AttackResult r;
  r.num_tokens = 10;
  r.replacements.resize(1);
  EXPECT_DOUBLE_EQ(ChangeRate(r), 0.1);
  r.replacements.clear();
  EXPECT_EQ(ChangeRate(r), 0.0);
}

}  // namespace
}  // namespace pieceattack
