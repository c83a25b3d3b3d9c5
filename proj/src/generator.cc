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

#include "pieceattack/generator.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "pieceattack/error.h"
#include "pieceattack/utf8.h"

namespace pieceattack {

void CheckCandidateRequest(const TokenizedText& tokens, size_t position,
                           int k) {
  if (k < 1) {
    throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  }
  if (position >= tokens.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "position " + std::to_string(position) + " out of range");
  }
  if (Segmenter::IsSpecial(tokens.piece_ids[position])) {
    throw Error(ErrorCode::kInvalidArgument,
                "position " + std::to_string(position) +
                    " is not an attack target");
  }
}

CandidateList FinalizeCandidates(size_t position, std::string original,
                                 std::vector<Candidate> raw, int k) {
  // Non-finite scores would break the ordering, so drop them before sorting.
  std::erase_if(raw, [](const Candidate& c) { return !std::isfinite(c.score); });
  std::sort(raw.begin(), raw.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.surface < b.surface;
  });
  CandidateList list;
  list.position = position;
  list.original = std::move(original);
  std::set<std::string, std::less<>> seen;
  for (Candidate& c : raw) {
    if (static_cast<int>(list.items.size()) >= k) break;
    if (c.surface.empty() || c.surface == list.original ||
        IsSpecialSurface(c.surface) || utf8::IsPunctuationOnly(c.surface)) {
      continue;
    }
    if (!seen.insert(c.surface).second) continue;
    list.items.push_back(std::move(c));
  }
  return list;
}

ContextCountGenerator::ContextCountGenerator(
    const std::vector<std::string>& corpus,
    std::shared_ptr<const Segmenter> segmenter)
    : segmenter_(std::move(segmenter)) {
  if (segmenter_ == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "generator needs a segmenter");
  }
  if (corpus.empty()) {
    throw Error(ErrorCode::kInvalidCorpus, "generator corpus is empty");
  }
  std::map<int, std::set<int>> followers;
  std::map<int, std::set<int>> predecessors;
  for (const std::string& line : corpus) {
    if (line.empty()) continue;
    const TokenizedText tokens = segmenter_->Encode(line);
    const std::vector<int>& ids = tokens.piece_ids;
    for (size_t i = 0; i < ids.size(); ++i) {
      const int left = i == 0 ? kBoundary : ids[i - 1];
      const int right = i + 1 == ids.size() ? kBoundary : ids[i + 1];
      ++left_counts_[Key(left, ids[i])];
      ++right_counts_[Key(ids[i], right)];
      ++unigram_[ids[i]];
      followers[left].insert(ids[i]);
      predecessors[right].insert(ids[i]);
    }
  }
  for (auto& [ctx, set] : followers) {
    followers_[ctx] = std::vector<int>(set.begin(), set.end());
  }
  for (auto& [ctx, set] : predecessors) {
    predecessors_[ctx] = std::vector<int>(set.begin(), set.end());
  }
}

int64_t ContextCountGenerator::LeftCount(int left, int piece) const {
  const auto it = left_counts_.find(Key(left, piece));
  return it == left_counts_.end() ? 0 : it->second;
}

int64_t ContextCountGenerator::RightCount(int piece, int right) const {
  const auto it = right_counts_.find(Key(piece, right));
  return it == right_counts_.end() ? 0 : it->second;
}

int64_t ContextCountGenerator::UnigramCount(int piece) const {
  const auto it = unigram_.find(piece);
  return it == unigram_.end() ? 0 : it->second;
}

CandidateList ContextCountGenerator::Candidates(const TokenizedText& tokens,
                                                size_t position, int k) const {
  CheckCandidateRequest(tokens, position, k);
  std::vector<Candidate> raw;
  if (tokens.size() == 1) {
    for (const auto& [piece, count] : unigram_) {
      if (Segmenter::IsSpecial(piece)) continue;
      raw.push_back({std::string(segmenter_->PieceSurface(piece)),
                     std::log(static_cast<double>(count))});
    }
  } else {
    const int left = position == 0 ? kBoundary : tokens.piece_ids[position - 1];
    const int right = position + 1 == tokens.size()
                          ? kBoundary
                          : tokens.piece_ids[position + 1];
    std::set<int> pool;
    if (const auto it = followers_.find(left); it != followers_.end()) {
      pool.insert(it->second.begin(), it->second.end());
    }
    if (const auto it = predecessors_.find(right); it != predecessors_.end()) {
      pool.insert(it->second.begin(), it->second.end());
    }
    for (int piece : pool) {
      if (Segmenter::IsSpecial(piece)) continue;
      const double score =
          std::log(static_cast<double>(LeftCount(left, piece)) + 1.0) +
          std::log(static_cast<double>(RightCount(piece, right)) + 1.0);
      raw.push_back({std::string(segmenter_->PieceSurface(piece)), score});
    }
  }
  return FinalizeCandidates(position, std::string(tokens.SpanText(position)),
                            std::move(raw), k);
}

CharGenerator::CharGenerator(const std::vector<std::string>& corpus,
                             ConfusionTable confusion)
    : confusion_(std::move(confusion)) {
  std::map<std::string, std::set<std::string>> followers;
  std::map<std::string, std::set<std::string>> predecessors;
  const std::string boundary(kBoundary);
  for (const std::string& line : corpus) {
    if (line.empty()) continue;
    std::vector<std::string> chars;
    chars.push_back(boundary);
    for (std::string_view ch : utf8::SplitChars(line)) chars.emplace_back(ch);
    chars.push_back(boundary);
    for (size_t i = 0; i + 1 < chars.size(); ++i) {
      bigrams_[{chars[i], chars[i + 1]}] += 1.0;
      if (chars[i + 1] != boundary) followers[chars[i]].insert(chars[i + 1]);
      if (chars[i] != boundary) predecessors[chars[i + 1]].insert(chars[i]);
    }
  }
  for (auto& [ch, set] : followers) {
    followers_[ch] = std::vector<std::string>(set.begin(), set.end());
  }
  for (auto& [ch, set] : predecessors) {
    predecessors_[ch] = std::vector<std::string>(set.begin(), set.end());
  }
}

double CharGenerator::Bigram(const std::string& left,
                             const std::string& right) const {
  const auto it = bigrams_.find({left, right});
  return it == bigrams_.end() ? 0.0 : it->second;
}

CandidateList CharGenerator::Candidates(const TokenizedText& tokens,
                                        size_t position, int k) const {
  CheckCandidateRequest(tokens, position, k);
  if (tokens.spans[position].length() != 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "character generator needs character-tokenized input");
  }
  const std::string original(tokens.SpanText(position));
  std::string left(kBoundary);
  std::string right(kBoundary);
  if (position > 0) {
    const auto chars = utf8::SplitChars(tokens.SpanText(position - 1));
    left = std::string(chars.back());
  }
  if (position + 1 < tokens.size()) {
    const auto chars = utf8::SplitChars(tokens.SpanText(position + 1));
    right = std::string(chars.front());
  }

  std::map<std::string, double> pool;
  if (const auto row = confusion_.find(original); row != confusion_.end()) {
    pool = row->second;
  } else {
    if (const auto it = followers_.find(left); it != followers_.end()) {
      for (const std::string& ch : it->second) pool.emplace(ch, 0.0);
    }
    if (const auto it = predecessors_.find(right); it != predecessors_.end()) {
      for (const std::string& ch : it->second) pool.emplace(ch, 0.0);
    }
  }
  std::vector<Candidate> raw;
  raw.reserve(pool.size());
  for (const auto& [ch, confusion] : pool) {
    const double score = std::log(confusion + 1.0) +
                         std::log(Bigram(left, ch) + 1.0) +
                         std::log(Bigram(ch, right) + 1.0);
    raw.push_back({ch, score});
  }
  return FinalizeCandidates(position, original, std::move(raw), k);
}

}  // namespace pieceattack
