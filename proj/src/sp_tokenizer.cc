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

#include "pieceattack/sp_tokenizer.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "pieceattack/error.h"
#include "pieceattack/utf8.h"

namespace pieceattack {
namespace {

constexpr double kUnkPenalty = 10.0;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double LogAddExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, result.ptr);
}

}  // namespace

Vocabulary::Vocabulary(std::vector<std::pair<std::string, double>> pieces,
                       int max_piece_chars) {
  pieces_.reserve(pieces.size() + kNumSpecialPieces);
  for (std::string_view s : {kPadSurface, kUnkSurface, kClsSurface,
                             kMaskSurface}) {
    const int id = static_cast<int>(pieces_.size());
    pieces_.push_back({id, std::string(s), 0.0, true});
    index_.emplace(std::string(s), id);
  }
  int longest = 1;
  double min_log_prob = 0.0;
  for (auto& [surface, log_prob] : pieces) {
    if (surface.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "empty piece surface");
    }
    if (surface.find('\n') != std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument,
                  "piece surface contains a newline");
    }
    if (!std::isfinite(log_prob) || log_prob > 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "piece '" + surface + "' has invalid log_prob");
    }
    const int id = static_cast<int>(pieces_.size());
    if (!index_.emplace(surface, id).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate piece surface '" + surface + "'");
    }
    longest = std::max(longest, static_cast<int>(utf8::CountChars(surface)));
    min_log_prob = std::min(min_log_prob, log_prob);
    pieces_.push_back({id, std::move(surface), log_prob, false});
  }
  max_piece_chars_ = std::max(longest, max_piece_chars);
  unk_log_prob_ = min_log_prob - kUnkPenalty;
}

Vocabulary Vocabulary::CharacterOnly(const std::vector<std::string>& corpus) {
  std::map<std::string, int64_t> freq;
  int64_t total = 0;
  for (const std::string& line : corpus) {
    for (std::string_view ch : utf8::SplitChars(line)) {
      if (ch == "\n") continue;
      ++freq[std::string(ch)];
      ++total;
    }
  }
  std::vector<std::pair<std::string, double>> pieces;
  pieces.reserve(freq.size());
  for (const auto& [ch, count] : freq) {
    pieces.emplace_back(ch, std::log(static_cast<double>(count) /
                                     static_cast<double>(total)));
  }
  std::stable_sort(pieces.begin(), pieces.end(),
                   [](const auto& a, const auto& b) {
                     return a.second > b.second;
                   });
  return Vocabulary(std::move(pieces), 1);
}

Vocabulary Vocabulary::Read(std::istream& in) {
  std::vector<std::pair<std::string, double>> pieces;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t tab = line.rfind('\t');
    if (tab == std::string::npos || tab == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "vocab line " + std::to_string(line_no) +
                      ": expected surface<TAB>log_prob");
    }
    std::string surface = line.substr(0, tab);
    const std::string number = line.substr(tab + 1);
    double log_prob = 0.0;
    const auto result =
        std::from_chars(number.data(), number.data() + number.size(), log_prob);
    if (result.ec != std::errc() ||
        result.ptr != number.data() + number.size()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "vocab line " + std::to_string(line_no) +
                      ": bad log_prob '" + number + "'");
    }
    if (line_no <= kNumSpecialPieces) {
      constexpr std::string_view kSpecials[] = {kPadSurface, kUnkSurface,
                                                kClsSurface, kMaskSurface};
      if (surface != kSpecials[line_no - 1]) {
        throw Error(ErrorCode::kInvalidArgument,
                    "vocab line " + std::to_string(line_no) + ": expected " +
                        std::string(kSpecials[line_no - 1]));
      }
      continue;
    }
    pieces.emplace_back(std::move(surface), log_prob);
  }
  if (line_no < kNumSpecialPieces) {
    throw Error(ErrorCode::kInvalidArgument, "vocab is missing special pieces");
  }
  return Vocabulary(std::move(pieces));
}

Vocabulary Vocabulary::Load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open vocab " + path);
  return Read(in);
}

void Vocabulary::Write(std::ostream& out) const {
  for (const Piece& p : pieces_) {
    out << p.surface << '\t' << FormatDouble(p.log_prob) << '\n';
  }
}

void Vocabulary::Save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write vocab " + path);
  Write(out);
  if (!out) throw Error(ErrorCode::kIoError, "failed writing vocab " + path);
}

std::string_view Vocabulary::PieceSurface(int id) const {
  return pieces_.at(id).surface;
}

int Vocabulary::PieceId(std::string_view surface) const {
  const auto it = index_.find(surface);
  return it == index_.end() ? -1 : it->second;
}

bool Vocabulary::Covers(std::string_view ch) const {
  return PieceId(ch) >= kNumSpecialPieces && utf8::CountChars(ch) == 1;
}

std::vector<std::string> Vocabulary::CharCover() const {
  std::vector<std::string> cover;
  for (const Piece& p : pieces_) {
    if (!p.is_special && utf8::CountChars(p.surface) == 1) {
      cover.push_back(p.surface);
    }
  }
  std::sort(cover.begin(), cover.end());
  return cover;
}

TokenizedText Vocabulary::Encode(std::string_view text) const {
  TokenizedText out;
  out.original = std::string(text);
  out.char_offsets = utf8::CharOffsets(text);

  size_t byte_pos = 0;
  size_t char_pos = 0;
  while (byte_pos <= text.size()) {
    const size_t mask = text.find(kMaskSurface, byte_pos);
    const size_t chunk_end = mask == std::string_view::npos ? text.size() : mask;
    const std::string_view chunk = text.substr(byte_pos, chunk_end - byte_pos);
    EncodeChunk(chunk, char_pos, &out);
    char_pos += utf8::CountChars(chunk);
    if (mask == std::string_view::npos) break;
    const size_t mask_chars = kMaskSurface.size();
    out.piece_ids.push_back(kMaskId);
    out.spans.push_back({char_pos, char_pos + mask_chars});
    char_pos += mask_chars;
    byte_pos = mask + kMaskSurface.size();
  }
  return out;
}

void Vocabulary::EncodeChunk(std::string_view chunk, size_t char_base,
                             TokenizedText* out) const {
  if (chunk.empty()) return;
  const std::vector<size_t> offsets = utf8::CharOffsets(chunk);
  const size_t n = offsets.size() - 1;

  // Backward DP so that, among equal scores, the shortest first piece wins;
  // this yields the lexicographically smallest optimal piece sequence.
  std::vector<double> best(n + 1, kNegInf);
  std::vector<int> best_len(n + 1, 0);
  std::vector<int> best_id(n + 1, -1);
  best[n] = 0.0;
  for (size_t i = n; i-- > 0;) {
    const size_t max_len =
        std::min(n - i, static_cast<size_t>(max_piece_chars_));
    for (size_t len = 1; len <= max_len; ++len) {
      const std::string_view sub =
          chunk.substr(offsets[i], offsets[i + len] - offsets[i]);
      int id = PieceId(sub);
      double score;
      if (id >= kNumSpecialPieces) {
        score = pieces_[id].log_prob;
      } else if (len == 1) {
        id = kUnkId;
        score = unk_log_prob_;
      } else {
        continue;
      }
      const double total = score + best[i + len];
      if (total > best[i]) {
        best[i] = total;
        best_len[i] = static_cast<int>(len);
        best_id[i] = id;
      }
    }
  }

  for (size_t i = 0; i < n;) {
    const size_t len = static_cast<size_t>(best_len[i]);
    const int id = best_id[i];
    const CharSpan span{char_base + i, char_base + i + len};
    if (id == kUnkId && !out->piece_ids.empty() &&
        out->piece_ids.back() == kUnkId && out->spans.back().end == span.begin) {
      out->spans.back().end = span.end;
    } else {
      out->piece_ids.push_back(id);
      out->spans.push_back(span);
    }
    i += len;
  }
}

double Vocabulary::Score(const TokenizedText& tokens) const {
  double total = 0.0;
  for (size_t i = 0; i < tokens.size(); ++i) {
    const int id = tokens.piece_ids[i];
    if (id == kUnkId) {
      total += unk_log_prob_ * static_cast<double>(tokens.spans[i].length());
    } else {
      total += pieces_.at(id).log_prob;
    }
  }
  return total;
}

double ViterbiLogLikelihood(const Vocabulary& vocab,
                            const std::vector<std::string>& corpus) {
  double total = 0.0;
  for (const std::string& line : corpus) {
    total += vocab.Score(vocab.Encode(line));
  }
  return total;
}

double LatticeLogLikelihood(const Vocabulary& vocab,
                            const std::vector<std::string>& corpus) {
  double total = 0.0;
  for (const std::string& line : corpus) {
    const std::vector<size_t> offsets = utf8::CharOffsets(line);
    const size_t n = offsets.size() - 1;
    std::vector<double> alpha(n + 1, kNegInf);
    alpha[0] = 0.0;
    const std::string_view text(line);
    for (size_t i = 0; i < n; ++i) {
      if (alpha[i] == kNegInf) continue;
      const size_t max_len =
          std::min(n - i, static_cast<size_t>(vocab.max_piece_chars()));
      for (size_t len = 1; len <= max_len; ++len) {
        const int id =
            vocab.PieceId(text.substr(offsets[i], offsets[i + len] - offsets[i]));
        double score;
        if (id >= kNumSpecialPieces) {
          score = vocab.piece(id).log_prob;
        } else if (len == 1) {
          score = vocab.unk_log_prob();
        } else {
          continue;
        }
        alpha[i + len] = LogAddExp(alpha[i + len], alpha[i] + score);
      }
    }
    total += alpha[n];
  }
  return total;
}

VocabStats ComputeVocabStats(const Vocabulary& vocab) {
  VocabStats stats;
  for (const Piece& p : vocab.pieces()) {
    if (p.is_special) continue;
    const size_t chars = utf8::CountChars(p.surface);
    const size_t bucket = std::min<size_t>(chars, 5) - 1;
    ++stats.counts[bucket];
    ++stats.total;
  }
  for (size_t b = 0; b < stats.counts.size(); ++b) {
    stats.percentages[b] =
        stats.total == 0 ? 0.0
                         : 100.0 * static_cast<double>(stats.counts[b]) /
                               static_cast<double>(stats.total);
  }
  return stats;
}

std::string FormatVocabStats(const VocabStats& stats) {
  std::ostringstream out;
  out << "chars\tcount\tpercent\n";
  for (size_t b = 0; b < stats.counts.size(); ++b) {
    out << VocabStats::kBucketNames[b] << '\t' << stats.counts[b] << '\t'
        << std::fixed << std::setprecision(1) << stats.percentages[b] << "%\n";
  }
  out << "total\t" << stats.total << '\n';
  return out.str();
}

}  // namespace pieceattack
