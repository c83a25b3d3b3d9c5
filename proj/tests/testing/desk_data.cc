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

#include "testing/desk_data.h"

#include <random>

namespace pieceattack::testing {
namespace {

const std::vector<std::string>& Fillers() {
  static const std::vector<std::string> kWords = {
      "今天", "我们", "这个", "非常", "觉得", "新闻", "报道", "记者", "的",
      "了",   "在",   "是",   "但是", "生活", "自己的", "是不是", "这个问题",
      "一个", "时候", "已经", "可以", "没有", "大家", "表示", "目前", "昨天",
      "城市", "发展", "工作", "问题", "情况", "消息", "关注", "公司", "国家",
      "社会", "朋友", "学校", "老师", "同学", "网友", "视频", "手机", "电视",
      "晚上", "上午", "下午", "北京", "上海", "广州", "深圳", "中国", "世界",
      "重要", "开始", "继续", "进行", "提高", "需要", "希望", "认为", "看到",
      "知道", "喜欢", "很多", "一些", "还是", "因为", "所以", "如果", "就是",
  };
  return kWords;
}

const std::vector<std::string>& Punctuation() {
  static const std::vector<std::string> kMarks = {"，", "。", "！", "？", "、",
                                                  "：", "；", ",", "."};
  return kMarks;
}

const std::vector<std::string>& Extras() {
  static const std::vector<std::string> kExtras = {
      "2023", "12", "APP", "NBA", "GDP", "5G", "100", "3.5", "CEO", "Wi-Fi"};
  return kExtras;
}

const std::vector<std::string>& Exotic() {
  static const std::vector<std::string> kExotic = {
      "😀", "🚀", "👍🏽", "龘", "靐", "ß", "€", "Ω", "🇨🇳", "☃"};
  return kExotic;
}

size_t Draw(std::mt19937_64& rng, size_t n) {
  return static_cast<size_t>(rng() % n);
}

const std::string& Pick(std::mt19937_64& rng,
                        const std::vector<std::string>& from) {
  return from[Draw(rng, from.size())];
}

}  // namespace

const std::vector<std::string>& SportsKeywords() {
  static const std::vector<std::string> kWords = {
      "比赛", "球队", "冠军", "进球", "教练", "球员", "联赛", "决赛"};
  return kWords;
}

const std::vector<std::string>& FinanceKeywords() {
  static const std::vector<std::string> kWords = {
      "股票", "市场", "投资", "银行", "基金", "利率", "经济", "证券"};
  return kWords;
}

std::vector<std::string> DeskCorpus(int lines, uint64_t seed, bool exotic) {
  std::mt19937_64 rng(seed);
  std::vector<std::string> corpus;
  corpus.reserve(lines);
  for (int l = 0; l < lines; ++l) {
    std::string line;
    const size_t clauses = 1 + Draw(rng, 3);
    for (size_t c = 0; c < clauses; ++c) {
      const size_t words = 3 + Draw(rng, 6);
      for (size_t w = 0; w < words; ++w) {
        const size_t roll = Draw(rng, 100);
        if (roll < 6) {
          line += Pick(rng, Extras());
        } else if (roll < 14) {
          line += Pick(rng, SportsKeywords());
        } else if (roll < 22) {
          line += Pick(rng, FinanceKeywords());
        } else if (exotic && roll < 26) {
          line += Pick(rng, Exotic());
        } else {
          line += Pick(rng, Fillers());
        }
      }
      line += Pick(rng, Punctuation());
      if (Draw(rng, 10) == 0) line += " ";
    }
    corpus.push_back(std::move(line));
  }
  return corpus;
}

std::vector<LabeledExample> KeywordTask(int examples, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<LabeledExample> data;
  data.reserve(examples);
  for (int e = 0; e < examples; ++e) {
    const int label = static_cast<int>(Draw(rng, 2));
    const auto& keywords = label == 0 ? SportsKeywords() : FinanceKeywords();
    const size_t words = 4 + Draw(rng, 5);
    const size_t keyword_slot = Draw(rng, words);
    std::string text;
    for (size_t w = 0; w < words; ++w) {
      text += w == keyword_slot ? Pick(rng, keywords) : Pick(rng, Fillers());
      if (w + 1 < words && Draw(rng, 5) == 0) text += "，";
    }
    text += "。";
    data.push_back({std::move(text), label});
  }
  return data;
}

}  // namespace pieceattack::testing
