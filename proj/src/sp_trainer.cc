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

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pieceattack/error.h"
#include "pieceattack/sp_tokenizer.h"
#include "pieceattack/utf8.h"

namespace pieceattack {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Expected counts that underflow to zero are floored here so every piece
// keeps a finite log probability.
constexpr double kMinExpectedCount = 1e-300;

double LogAddExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

bool BreaksPiece(std::string_view ch) {
  const char32_t c = utf8::DecodeChar(ch);
  return utf8::IsWhitespace(c) || utf8::IsPunctuation(c);
}

struct Sentence {
  std::string text;
  std::vector<size_t> offsets;
  double freq = 0.0;

  size_t num_chars() const { return offsets.size() - 1; }
  std::string_view Sub(size_t begin, size_t end) const {
    return std::string_view(text).substr(offsets[begin],
                                         offsets[end] - offsets[begin]);
  }
};

struct Node {
  int length;
  int id;
};

// Piece inventory under training. IDs here are local and exclude specials.
class Model {
 public:
  Model(std::vector<std::string> surfaces, std::vector<double> log_probs,
        int max_piece_chars)
      : surfaces_(std::move(surfaces)),
        log_probs_(std::move(log_probs)),
        max_piece_chars_(max_piece_chars) {
    chars_.reserve(surfaces_.size());
    for (size_t i = 0; i < surfaces_.size(); ++i) {
      index_.emplace(surfaces_[i], static_cast<int>(i));
      chars_.push_back(static_cast<int>(utf8::CountChars(surfaces_[i])));
    }
  }

  size_t size() const { return surfaces_.size(); }
  const std::string& surface(int id) const { return surfaces_[id]; }
  double log_prob(int id) const { return log_probs_[id]; }
  void set_log_prob(int id, double v) { log_probs_[id] = v; }
  int chars(int id) const { return chars_[id]; }

  // Lattice nodes starting at each character position.
  std::vector<std::vector<Node>> BuildLattice(const Sentence& s) const {
    const size_t n = s.num_chars();
    std::vector<std::vector<Node>> lattice(n);
    for (size_t i = 0; i < n; ++i) {
      const size_t max_len =
          std::min(n - i, static_cast<size_t>(max_piece_chars_));
      for (size_t len = 1; len <= max_len; ++len) {
        const auto it = index_.find(s.Sub(i, i + len));
        if (it != index_.end()) {
          lattice[i].push_back({static_cast<int>(len), it->second});
        }
      }
    }
    return lattice;
  }

  Model Without(const std::vector<bool>& drop) const {
    std::vector<std::string> surfaces;
    std::vector<double> log_probs;
    for (size_t i = 0; i < surfaces_.size(); ++i) {
      if (drop[i]) continue;
      surfaces.push_back(surfaces_[i]);
      log_probs.push_back(log_probs_[i]);
    }
    return Model(std::move(surfaces), std::move(log_probs), max_piece_chars_);
  }

 private:
  std::vector<std::string> surfaces_;
  std::vector<double> log_probs_;
  std::vector<int> chars_;
  StringMap<int> index_;
  int max_piece_chars_;
};

using Lattice = std::vector<std::vector<Node>>;

std::vector<double> Forward(const Lattice& lattice, const Model& model) {
  const size_t n = lattice.size();
  std::vector<double> alpha(n + 1, kNegInf);
  alpha[0] = 0.0;
  for (size_t i = 0; i < n; ++i) {
    if (alpha[i] == kNegInf) continue;
    for (const Node& node : lattice[i]) {
      alpha[i + node.length] =
          LogAddExp(alpha[i + node.length], alpha[i] + model.log_prob(node.id));
    }
  }
  return alpha;
}

std::vector<double> Backward(const Lattice& lattice, const Model& model) {
  const size_t n = lattice.size();
  std::vector<double> beta(n + 1, kNegInf);
  beta[n] = 0.0;
  for (size_t i = n; i-- > 0;) {
    for (const Node& node : lattice[i]) {
      beta[i] = LogAddExp(beta[i], model.log_prob(node.id) + beta[i + node.length]);
    }
  }
  return beta;
}

// Returns the corpus lattice log-likelihood under the current model and
// accumulates expected piece counts.
double EStep(const std::vector<Sentence>& sentences,
             const std::vector<Lattice>& lattices, const Model& model,
             std::vector<double>* expected) {
  expected->assign(model.size(), 0.0);
  double log_likelihood = 0.0;
  for (size_t s = 0; s < sentences.size(); ++s) {
    const Lattice& lattice = lattices[s];
    const std::vector<double> alpha = Forward(lattice, model);
    const std::vector<double> beta = Backward(lattice, model);
    const double z = alpha[lattice.size()];
    const double freq = sentences[s].freq;
    for (size_t i = 0; i < lattice.size(); ++i) {
      for (const Node& node : lattice[i]) {
        (*expected)[node.id] +=
            freq * std::exp(alpha[i] + model.log_prob(node.id) +
                            beta[i + node.length] - z);
      }
    }
    log_likelihood += freq * z;
  }
  return log_likelihood;
}

void MStep(const std::vector<double>& expected, Model* model) {
  double total = 0.0;
  for (double c : expected) total += std::max(c, kMinExpectedCount);
  for (size_t id = 0; id < expected.size(); ++id) {
    model->set_log_prob(static_cast<int>(id),
                        std::log(std::max(expected[id], kMinExpectedCount) /
                                 total));
  }
}

double CorpusLogLikelihood(const std::vector<Sentence>& sentences,
                           const std::vector<Lattice>& lattices,
                           const Model& model) {
  double total = 0.0;
  for (size_t s = 0; s < sentences.size(); ++s) {
    total += sentences[s].freq * Forward(lattices[s], model)[lattices[s].size()];
  }
  return total;
}

// Best segmentation of a lattice; equal scores prefer the shorter first
// piece. `excluded_full` drops the node spanning the whole lattice.
std::vector<Node> Viterbi(const Lattice& lattice, const Model& model,
                          double* score, bool excluded_full = false) {
  const size_t n = lattice.size();
  std::vector<double> best(n + 1, kNegInf);
  std::vector<Node> choice(n + 1, Node{0, -1});
  best[n] = 0.0;
  for (size_t i = n; i-- > 0;) {
    for (const Node& node : lattice[i]) {
      if (excluded_full && i == 0 && static_cast<size_t>(node.length) == n) {
        continue;
      }
      const double total = model.log_prob(node.id) + best[i + node.length];
      if (total > best[i]) {
        best[i] = total;
        choice[i] = node;
      }
    }
  }
  *score = best[0];
  std::vector<Node> path;
  for (size_t i = 0; i < n && choice[i].id >= 0;) {
    path.push_back(choice[i]);
    i += choice[i].length;
  }
  return path;
}

// Removal loss of each piece: Viterbi frequency times the log-probability
// lost when each use is re-segmented with the piece's best alternative.
std::vector<double> PruneLosses(const std::vector<Sentence>& sentences,
                                const std::vector<Lattice>& lattices,
                                const Model& model) {
  std::vector<double> viterbi_freq(model.size(), 0.0);
  for (size_t s = 0; s < sentences.size(); ++s) {
    double score = 0.0;
    for (const Node& node : Viterbi(lattices[s], model, &score)) {
      viterbi_freq[node.id] += sentences[s].freq;
    }
  }
  std::vector<double> losses(model.size(), 0.0);
  for (size_t id = 0; id < model.size(); ++id) {
    if (model.chars(static_cast<int>(id)) <= 1 || viterbi_freq[id] == 0.0) {
      continue;
    }
    Sentence piece;
    piece.text = model.surface(static_cast<int>(id));
    piece.offsets = utf8::CharOffsets(piece.text);
    double alternative = 0.0;
    Viterbi(model.BuildLattice(piece), model, &alternative,
            /*excluded_full=*/true);
    losses[id] =
        viterbi_freq[id] * (model.log_prob(static_cast<int>(id)) - alternative);
  }
  return losses;
}

}  // namespace

Vocabulary TrainVocabulary(const std::vector<std::string>& corpus,
                           const TrainerOptions& options,
                           TrainingTrace* trace) {
  if (options.max_piece_chars < 2) {
    throw Error(ErrorCode::kInvalidArgument, "max_piece_chars must be >= 2");
  }
  if (options.em_rounds_per_stage < 1 || options.prune_fraction <= 0.0 ||
      options.prune_fraction >= 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid EM/pruning schedule");
  }

  std::map<std::string, int64_t> line_freq;
  for (const std::string& line : corpus) {
    if (line.find('\n') != std::string::npos) {
      throw Error(ErrorCode::kInvalidCorpus, "corpus line contains a newline");
    }
    if (!line.empty()) ++line_freq[line];
  }
  if (line_freq.empty()) {
    throw Error(ErrorCode::kInvalidCorpus, "corpus has no non-empty lines");
  }

  std::vector<Sentence> sentences;
  sentences.reserve(line_freq.size());
  std::map<std::string, int64_t> char_freq;
  StringMap<int64_t> substring_freq;
  for (const auto& [text, freq] : line_freq) {
    Sentence s;
    s.text = text;
    s.offsets = utf8::CharOffsets(s.text);
    s.freq = static_cast<double>(freq);
    const size_t n = s.num_chars();
    for (size_t i = 0; i < n; ++i) {
      char_freq[std::string(s.Sub(i, i + 1))] += freq;
      if (BreaksPiece(s.Sub(i, i + 1))) continue;
      const size_t max_len =
          std::min(n - i, static_cast<size_t>(options.max_piece_chars));
      for (size_t len = 2; len <= max_len; ++len) {
        if (BreaksPiece(s.Sub(i + len - 1, i + len))) break;
        const std::string_view sub = s.Sub(i, i + len);
        const auto it = substring_freq.find(sub);
        if (it == substring_freq.end()) {
          substring_freq.emplace(std::string(sub), freq);
        } else {
          it->second += freq;
        }
      }
    }
    sentences.push_back(std::move(s));
  }

  const int64_t forced =
      kNumSpecialPieces + static_cast<int64_t>(char_freq.size());
  if (options.target_size < forced) {
    throw Error(ErrorCode::kVocabTooSmall,
                "target_size " + std::to_string(options.target_size) +
                    " is below the " + std::to_string(forced) +
                    " pieces needed for specials and character coverage");
  }
  const size_t needed = static_cast<size_t>(options.target_size - forced);

  // Seed: most frequent substrings, frequency >= 2 first. Singletons are only
  // drawn on when the corpus cannot otherwise reach target_size.
  std::vector<std::pair<std::string, int64_t>> candidates(substring_freq.begin(),
                                                          substring_freq.end());
  substring_freq.clear();
  std::sort(candidates.begin(), candidates.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  const size_t frequent = static_cast<size_t>(
      std::count_if(candidates.begin(), candidates.end(),
                    [](const auto& c) { return c.second >= 2; }));
  size_t seed_count = std::max(static_cast<size_t>(std::max(options.seed_size, 0)),
                               needed);
  seed_count = std::min(seed_count, std::max(frequent, needed));
  if (candidates.size() < needed) {
    throw Error(ErrorCode::kInvalidCorpus,
                "corpus yields only " + std::to_string(candidates.size()) +
                    " multi-character candidates; " + std::to_string(needed) +
                    " are needed for target_size " +
                    std::to_string(options.target_size));
  }
  candidates.resize(seed_count);

  std::vector<std::string> surfaces;
  std::vector<double> counts;
  double total = 0.0;
  for (const auto& [ch, freq] : char_freq) {
    surfaces.push_back(ch);
    counts.push_back(static_cast<double>(freq));
    total += static_cast<double>(freq);
  }
  for (auto& [sub, freq] : candidates) {
    surfaces.push_back(std::move(sub));
    counts.push_back(static_cast<double>(freq));
    total += static_cast<double>(freq);
  }
  candidates.clear();
  std::vector<double> log_probs;
  log_probs.reserve(counts.size());
  for (double c : counts) log_probs.push_back(std::log(c / total));

  Model model(std::move(surfaces), std::move(log_probs),
              options.max_piece_chars);
  const size_t target_pieces = needed + char_freq.size();

  while (true) {
    std::vector<Lattice> lattices;
    lattices.reserve(sentences.size());
    for (const Sentence& s : sentences) lattices.push_back(model.BuildLattice(s));

    std::vector<double> stage;
    std::vector<double> expected;
    for (int round = 0; round < options.em_rounds_per_stage; ++round) {
      stage.push_back(EStep(sentences, lattices, model, &expected));
      MStep(expected, &model);
    }
    stage.push_back(CorpusLogLikelihood(sentences, lattices, model));
    if (trace != nullptr) {
      trace->stage_log_likelihoods.push_back(std::move(stage));
      trace->stage_sizes.push_back(model.size() + kNumSpecialPieces);
    }

    if (model.size() <= target_pieces) break;

    const std::vector<double> losses = PruneLosses(sentences, lattices, model);
    std::vector<int> multi;
    for (size_t id = 0; id < model.size(); ++id) {
      if (model.chars(static_cast<int>(id)) > 1) {
        multi.push_back(static_cast<int>(id));
      }
    }
    std::sort(multi.begin(), multi.end(), [&](int a, int b) {
      if (losses[a] != losses[b]) return losses[a] < losses[b];
      return model.surface(a) < model.surface(b);
    });
    const size_t by_fraction = static_cast<size_t>(
        std::ceil(options.prune_fraction * static_cast<double>(multi.size())));
    const size_t drop_count =
        std::min(by_fraction, model.size() - target_pieces);
    std::vector<bool> drop(model.size(), false);
    for (size_t i = 0; i < drop_count; ++i) drop[multi[i]] = true;
    model = model.Without(drop);
  }

  std::vector<std::pair<std::string, double>> pieces;
  pieces.reserve(model.size());
  for (size_t id = 0; id < model.size(); ++id) {
    pieces.emplace_back(model.surface(static_cast<int>(id)),
                        model.log_prob(static_cast<int>(id)));
  }
  std::sort(pieces.begin(), pieces.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return Vocabulary(std::move(pieces), options.max_piece_chars);
}

}  // namespace pieceattack
