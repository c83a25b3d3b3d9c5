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

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gtest/gtest.h"
#include "pieceattack/error.h"

namespace pieceattack {
namespace {

struct Row {
  std::string word;
  std::vector<double> v;
};

const std::vector<Row>& TenWords() {
  static const std::vector<Row> kRows = {
      {"今天", {1.0, 0.2, 0.0}},  {"明天", {0.9, 0.3, 0.1}},
      {"昨天", {0.8, 0.1, -0.2}}, {"比赛", {0.0, 1.0, 0.3}},
      {"球队", {0.1, 0.9, 0.4}},  {"股票", {-0.5, 0.0, 1.0}},
      {"市场", {-0.4, 0.2, 0.9}}, {"天气", {0.7, -0.6, 0.2}},
      {"我们", {0.3, 0.3, 0.3}},  {"零", {0.0, 0.0, 0.0}},
  };
  return kRows;
}

std::string TenWordFile(bool header) {
  std::ostringstream out;
  if (header) out << "10 3\n";
  for (const Row& r : TenWords()) {
    out << r.word;
    for (double x : r.v) out << ' ' << x;
    out << '\n';
  }
  return out.str();
}

double RawCosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return na == 0 || nb == 0 ? 0.0 : dot / std::sqrt(na * nb);
}

std::shared_ptr<const EmbeddingTable> Table() {
  std::istringstream in(TenWordFile(true));
  return std::make_shared<const EmbeddingTable>(EmbeddingTable::Read(in));
}

TEST(EmbeddingTableTest, ReadsWithAndWithoutHeader) {
  std::istringstream plain(TenWordFile(false));
  const EmbeddingTable a = EmbeddingTable::Read(plain);
  const auto b = Table();
  EXPECT_EQ(a.size(), 10u);
  EXPECT_EQ(b->size(), 10u);
  EXPECT_EQ(a.dims(), 3u);
  EXPECT_EQ(a.WordId("股票"), 5);
  EXPECT_EQ(a.WordId("足球"), -1);
  std::istringstream limited(TenWordFile(true));
  EXPECT_EQ(EmbeddingTable::Read(limited, 4).size(), 4u);
}

TEST(EmbeddingTableTest, ParseErrorsNameTheLine) {
  auto code_and_message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      EmbeddingTable::Read(in);
    } catch (const Error& e) {
      return std::make_pair(e.code(), std::string(e.what()));
    }
    return std::make_pair(ErrorCode::kInvalidArgument, std::string("no error"));
  };
  auto [code, msg] = code_and_message("a 1 2\nb 1 x\n");
  EXPECT_EQ(code, ErrorCode::kEmbeddingParseError);
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  std::tie(code, msg) = code_and_message("a 1 2\nb 1 2\nc 1\n");
  EXPECT_EQ(code, ErrorCode::kEmbeddingParseError);
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  std::tie(code, msg) = code_and_message("a 1 2\na 3 4\n");
  EXPECT_NE(msg.find("line 2"), std::string::npos) << msg;
  EXPECT_THROW(EmbeddingTable::Load("/nonexistent/emb.txt"), Error);
}

TEST(EmbeddingGeneratorTest, RankingEqualsBruteForceCosine) {
  const auto table = Table();
  const LongestMatchSegmenter segmenter(table->words());
  for (double threshold : {-1.0, 0.0, 0.5, 0.9}) {
    const EmbeddingGenerator gen(table, threshold);
    for (const Row& source : TenWords()) {
      std::vector<Candidate> expected;
      for (const Row& other : TenWords()) {
        if (other.word == source.word) continue;
        const double sim = RawCosine(source.v, other.v);
        if (sim >= threshold) expected.push_back({other.word, sim});
      }
      std::stable_sort(expected.begin(), expected.end(), [](auto& a, auto& b) {
        return a.score != b.score ? a.score > b.score : a.surface < b.surface;
      });
      if (expected.size() > 5) expected.resize(5);
      const TokenizedText tokens = segmenter.Encode(source.word);
      ASSERT_EQ(tokens.size(), 1u);
      const CandidateList list = gen.Candidates(tokens, 0, 5);
      ASSERT_EQ(list.items.size(), expected.size()) << source.word;
      for (size_t i = 0; i < expected.size(); ++i) {
        EXPECT_EQ(list.items[i].surface, expected[i].surface);
        EXPECT_NEAR(list.items[i].score, expected[i].score, 1e-12);
      }
    }
  }
}

TEST(EmbeddingGeneratorTest, ThresholdOneExcludesEverything) {
  const auto table = Table();
  const LongestMatchSegmenter segmenter(table->words());
  const EmbeddingGenerator gen(table, 1.0);
  for (const Row& row : TenWords()) {
    EXPECT_TRUE(gen.Candidates(segmenter.Encode(row.word), 0, 12).items.empty());
  }
  EXPECT_THROW(EmbeddingGenerator(table, 1.5), Error);
}

TEST(LongestMatchSegmenterTest, GreedyWithUnkRuns) {
  const LongestMatchSegmenter segmenter({"今天", "今", "天气", "好"});
  const std::string text = "今天气好xy[MASK]今";
  const TokenizedText tokens = segmenter.Encode(text);
  std::vector<std::string> surfaces;
  for (size_t i = 0; i < tokens.size(); ++i) {
    surfaces.emplace_back(tokens.SpanText(i));
  }
  EXPECT_EQ(surfaces, (std::vector<std::string>{"今天", "气", "好", "xy",
                                                "[MASK]", "今"}));
  // 气 is not a word, so it merges with nothing and becomes UNK.
  EXPECT_EQ(tokens.piece_ids[1], kUnkId);
  EXPECT_EQ(tokens.piece_ids[3], kUnkId);
  EXPECT_EQ(tokens.piece_ids[4], kMaskId);
  EXPECT_EQ(Decode(tokens, segmenter), text);
}

}  // namespace
}  // namespace pieceattack
