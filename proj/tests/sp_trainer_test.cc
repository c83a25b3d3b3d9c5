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

#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "pieceattack/error.h"
#include "pieceattack/sp_tokenizer.h"
#include "pieceattack/utf8.h"
#include "testing/desk_data.h"

namespace pieceattack {
namespace {

ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidArgument;
}

std::vector<std::string> SixLetterCorpus(uint64_t seed) {
  std::mt19937_64 rng(seed);
  const std::vector<std::string> words = {"ab", "abc", "de", "fa", "cd", "b"};
  std::vector<std::string> corpus;
  for (int s = 0; s < 20; ++s) {
    std::string line;
    const int n = 3 + static_cast<int>(rng() % 5);
    for (int w = 0; w < n; ++w) line += words[rng() % words.size()];
    corpus.push_back(line);
  }
  return corpus;
}

TEST(TrainVocabularyTest, Errors) {
  TrainerOptions options;
  options.target_size = 10;
  EXPECT_EQ(CodeOf([&] { TrainVocabulary({}, options); }),
            ErrorCode::kInvalidCorpus);
  EXPECT_EQ(CodeOf([&] { TrainVocabulary({"", ""}, options); }),
            ErrorCode::kInvalidCorpus);
  EXPECT_EQ(CodeOf([&] { TrainVocabulary({"a\nb"}, options); }),
            ErrorCode::kInvalidCorpus);
  options.target_size = 6;  // 4 specials + 3 characters do not fit.
  EXPECT_EQ(CodeOf([&] { TrainVocabulary({"abc", "abc"}, options); }),
            ErrorCode::kVocabTooSmall);
  options.target_size = 10;
  options.max_piece_chars = 1;
  EXPECT_EQ(CodeOf([&] { TrainVocabulary({"abc"}, options); }),
            ErrorCode::kInvalidArgument);
}

TEST(TrainVocabularyTest, OnlyProductiveMergeSurvives) {
  TrainerOptions options;
  options.target_size = 7;  // specials + a, b, ab
  const Vocabulary vocab =
      TrainVocabulary(std::vector<std::string>(50, "ab"), options);
  ASSERT_EQ(vocab.size(), 7u);
  const int ab = vocab.PieceId("ab");
  ASSERT_GE(ab, 0);
  EXPECT_GT(vocab.piece(ab).log_prob,
            vocab.piece(vocab.PieceId("a")).log_prob +
                vocab.piece(vocab.PieceId("b")).log_prob);
}

TEST(TrainVocabularyTest, ExactTargetSizeAndCoverage) {
  const std::vector<std::string> corpus = testing::DeskCorpus(200, 3, true);
  for (int target : {250, 400, 600}) {
    TrainerOptions options;
    options.target_size = target;
    const Vocabulary vocab = TrainVocabulary(corpus, options);
    EXPECT_EQ(vocab.size(), static_cast<size_t>(target));
    for (const std::string& line : corpus) {
      for (std::string_view ch : utf8::SplitChars(line)) {
        EXPECT_TRUE(vocab.Covers(ch)) << ch;
      }
      for (int id : vocab.Encode(line).piece_ids) EXPECT_NE(id, kUnkId);
    }
    std::set<std::string> unique;
    for (const Piece& p : vocab.pieces()) {
      EXPECT_TRUE(unique.insert(p.surface).second) << p.surface;
      EXPECT_LE(utf8::CountChars(p.surface), 8u);
      if (!p.is_special) EXPECT_LE(p.log_prob, 0.0);
    }
  }
}

TEST(TrainVocabularyTest, BeatsCharacterOnlyOnTinyCorpus) {
  const std::vector<std::string> corpus = SixLetterCorpus(5);
  TrainerOptions options;
  options.target_size = 16;
  const Vocabulary vocab = TrainVocabulary(corpus, options);
  ASSERT_EQ(vocab.size(), 16u);
  const Vocabulary chars = Vocabulary::CharacterOnly(corpus);
  EXPECT_GE(ViterbiLogLikelihood(vocab, corpus),
            ViterbiLogLikelihood(chars, corpus));
}

TEST(TrainVocabularyTest, CharacterOnlyLikelihoodIsDirectCount) {
  const std::vector<std::string> corpus = {"aab", "b"};
  const Vocabulary chars = Vocabulary::CharacterOnly(corpus);
  // a: 2/4, b: 2/4.
  EXPECT_NEAR(ViterbiLogLikelihood(chars, corpus), 4 * std::log(0.5), 1e-12);
  EXPECT_NEAR(LatticeLogLikelihood(chars, corpus), 4 * std::log(0.5), 1e-12);
}

TEST(TrainVocabularyTest, EmRoundsNeverLowerLikelihood) {
  for (uint64_t seed : {1, 2, 3}) {
    TrainingTrace trace;
    TrainerOptions options;
    options.target_size = 300;
    TrainVocabulary(testing::DeskCorpus(150, seed), options, &trace);
    ASSERT_FALSE(trace.stage_log_likelihoods.empty());
    for (const auto& stage : trace.stage_log_likelihoods) {
      ASSERT_GE(stage.size(), 2u);
      for (size_t r = 1; r < stage.size(); ++r) {
        EXPECT_GE(stage[r], stage[r - 1] - 1e-6);
      }
    }
    for (size_t s = 1; s < trace.stage_sizes.size(); ++s) {
      EXPECT_LT(trace.stage_sizes[s], trace.stage_sizes[s - 1]);
    }
  }
}

TEST(TrainVocabularyTest, DeterministicVocabularyFile) {
  const std::vector<std::string> corpus = testing::DeskCorpus(150, 9);
  TrainerOptions options;
  options.target_size = 180;
  std::stringstream a, b;
  TrainVocabulary(corpus, options).Write(a);
  TrainVocabulary(corpus, options).Write(b);
  EXPECT_EQ(a.str(), b.str());
}

TEST(TrainVocabularyTest, LatticeBoundsViterbi) {
  const std::vector<std::string> corpus = testing::DeskCorpus(50, 4);
  TrainerOptions options;
  options.target_size = 260;
  const Vocabulary vocab = TrainVocabulary(corpus, options);
  EXPECT_GE(LatticeLogLikelihood(vocab, corpus),
            ViterbiLogLikelihood(vocab, corpus));
}

}  // namespace
}  // namespace pieceattack
