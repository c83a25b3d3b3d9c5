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

#ifndef PIECEATTACK_TOY_VICTIM_H_
#define PIECEATTACK_TOY_VICTIM_H_

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pieceattack/sp_tokenizer.h"
#include "pieceattack/victim.h"

namespace pieceattack {

// Row-major class x vocab weights plus per-class bias.
struct ToyVictimParams {
  int num_classes = 0;
  int vocab_size = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  static ToyVictimParams Zeros(int num_classes, int vocab_size);

  double& weight(int label, int piece) {
    return weights[static_cast<size_t>(label) * vocab_size + piece];
  }
  double weight(int label, int piece) const {
    return weights[static_cast<size_t>(label) * vocab_size + piece];
  }
};

using SparseFeatures = std::vector<std::pair<int, double>>;

// Count of every piece id in the tokenization, sorted by id.
SparseFeatures PieceCounts(const TokenizedText& tokens);

// Bag-of-pieces multinomial logistic regression. Scores depend only on the
// piece counts of the encoded text.
class ToyVictim : public Victim {
 public:
  ToyVictim(std::shared_ptr<const Vocabulary> vocab, ToyVictimParams params);

  std::vector<ClassDistribution> BatchScore(
      std::span<const std::string> texts) const override;

  std::vector<double> Logits(const SparseFeatures& features) const;

  const ToyVictimParams& params() const { return params_; }
  const Vocabulary& vocab() const { return *vocab_; }
  int num_classes() const { return params_.num_classes; }

  std::optional<double> train_accuracy;

  // JSON: {"num_classes", "vocab_size", "bias", "weights", "train_accuracy"}.
  void Save(const std::string& path) const;
  static ToyVictim Load(const std::string& path,
                        std::shared_ptr<const Vocabulary> vocab);

 private:
  std::shared_ptr<const Vocabulary> vocab_;
  ToyVictimParams params_;
};

// Mean cross-entropy plus (l2 / 2) * ||W||^2; the bias is not regularized.
class ToyObjective {
 public:
  ToyObjective(std::vector<SparseFeatures> features, std::vector<int> labels,
               int num_classes, int vocab_size, double l2);

  double Loss(const ToyVictimParams& params) const;
  ToyVictimParams Gradient(const ToyVictimParams& params) const;

  size_t size() const { return features_.size(); }

 private:
  std::vector<SparseFeatures> features_;
  std::vector<int> labels_;
  int num_classes_;
  int vocab_size_;
  double l2_;
};

struct ToyTrainOptions {
  int epochs = 200;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  // 0 means max label + 1.
  int num_classes = 0;
};

// Full-batch gradient descent from zero weights.
ToyVictim TrainToyVictim(std::span<const LabeledExample> train,
                         std::shared_ptr<const Vocabulary> vocab,
                         const ToyTrainOptions& options);

double Accuracy(const Victim& victim, std::span<const LabeledExample> data);

}  // namespace pieceattack

#endif  // PIECEATTACK_TOY_VICTIM_H_
