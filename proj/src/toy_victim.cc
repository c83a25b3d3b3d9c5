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

#include "pieceattack/toy_victim.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "json.hpp"
#include "pieceattack/error.h"

namespace pieceattack {

namespace {

std::vector<double> LogitsFor(const ToyVictimParams& params,
                              const SparseFeatures& features) {
  std::vector<double> logits(params.bias);
  for (int c = 0; c < params.num_classes; ++c) {
    for (const auto& [id, count] : features) {
      logits[c] += count * params.weight(c, id);
    }
  }
  return logits;
}

}  // namespace

ToyVictimParams ToyVictimParams::Zeros(int num_classes, int vocab_size) {
  ToyVictimParams p;
  p.num_classes = num_classes;
  p.vocab_size = vocab_size;
  p.weights.assign(static_cast<size_t>(num_classes) * vocab_size, 0.0);
  p.bias.assign(num_classes, 0.0);
  return p;
}

SparseFeatures PieceCounts(const TokenizedText& tokens) {
  std::map<int, double> counts;
  for (int id : tokens.piece_ids) counts[id] += 1.0;
  return SparseFeatures(counts.begin(), counts.end());
}

ToyVictim::ToyVictim(std::shared_ptr<const Vocabulary> vocab,
                     ToyVictimParams params)
    : vocab_(std::move(vocab)), params_(std::move(params)) {
  if (vocab_ == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "toy victim needs a vocabulary");
  }
  if (params_.num_classes < 1 ||
      params_.vocab_size != static_cast<int>(vocab_->size()) ||
      params_.weights.size() !=
          static_cast<size_t>(params_.num_classes) * params_.vocab_size ||
      params_.bias.size() != static_cast<size_t>(params_.num_classes)) {
    throw Error(ErrorCode::kInvalidArgument,
                "toy victim parameters do not match the vocabulary");
  }
  for (double w : params_.weights) {
    if (!std::isfinite(w)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite toy victim weight");
    }
  }
  for (double b : params_.bias) {
    if (!std::isfinite(b)) {
      throw Error(ErrorCode::kInvalidArgument, "non-finite toy victim bias");
    }
  }
}

std::vector<double> ToyVictim::Logits(const SparseFeatures& features) const {
  return LogitsFor(params_, features);
}

std::vector<ClassDistribution> ToyVictim::BatchScore(
    std::span<const std::string> texts) const {
  CheckTexts(texts);
  std::vector<ClassDistribution> out;
  out.reserve(texts.size());
  for (const std::string& text : texts) {
    out.push_back(
        ClassDistribution::Softmax(Logits(PieceCounts(vocab_->Encode(text)))));
  }
  return out;
}

void ToyVictim::Save(const std::string& path) const {
  nlohmann::json obj;
  obj["num_classes"] = params_.num_classes;
  obj["vocab_size"] = params_.vocab_size;
  obj["bias"] = params_.bias;
  obj["weights"] = params_.weights;
  if (train_accuracy) obj["train_accuracy"] = *train_accuracy;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write model " + path);
  out << obj.dump() << '\n';
}

ToyVictim ToyVictim::Load(const std::string& path,
                          std::shared_ptr<const Vocabulary> vocab) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open model " + path);
  nlohmann::json obj;
  try {
    obj = nlohmann::json::parse(in);
    ToyVictimParams params;
    params.num_classes = obj.at("num_classes").get<int>();
    params.vocab_size = obj.at("vocab_size").get<int>();
    params.bias = obj.at("bias").get<std::vector<double>>();
    params.weights = obj.at("weights").get<std::vector<double>>();
    ToyVictim victim(std::move(vocab), std::move(params));
    if (obj.contains("train_accuracy")) {
      victim.train_accuracy = obj["train_accuracy"].get<double>();
    }
    return victim;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidArgument,
                "malformed model " + path + ": " + e.what());
  }
}

ToyObjective::ToyObjective(std::vector<SparseFeatures> features,
                           std::vector<int> labels, int num_classes,
                           int vocab_size, double l2)
    : features_(std::move(features)),
      labels_(std::move(labels)),
      num_classes_(num_classes),
      vocab_size_(vocab_size),
      l2_(l2) {}

double ToyObjective::Loss(const ToyVictimParams& params) const {
  double loss = 0.0;
  for (size_t n = 0; n < features_.size(); ++n) {
    const std::vector<double> logits = LogitsFor(params, features_[n]);
    const double max_logit = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double z : logits) sum += std::exp(z - max_logit);
    loss += max_logit + std::log(sum) - logits[labels_[n]];
  }
  loss /= static_cast<double>(features_.size());
  double norm = 0.0;
  for (double w : params.weights) norm += w * w;
  return loss + 0.5 * l2_ * norm;
}

ToyVictimParams ToyObjective::Gradient(const ToyVictimParams& params) const {
  ToyVictimParams grad = ToyVictimParams::Zeros(num_classes_, vocab_size_);
  const double scale = 1.0 / static_cast<double>(features_.size());
  for (size_t n = 0; n < features_.size(); ++n) {
    const ClassDistribution dist =
        ClassDistribution::Softmax(LogitsFor(params, features_[n]));
    for (int c = 0; c < num_classes_; ++c) {
      const double residual =
          (dist.probs[c] - (labels_[n] == c ? 1.0 : 0.0)) * scale;
      grad.bias[c] += residual;
      for (const auto& [id, count] : features_[n]) {
        grad.weight(c, id) += residual * count;
      }
    }
  }
  for (size_t i = 0; i < grad.weights.size(); ++i) {
    grad.weights[i] += l2_ * params.weights[i];
  }
  return grad;
}

ToyVictim TrainToyVictim(std::span<const LabeledExample> train,
                         std::shared_ptr<const Vocabulary> vocab,
                         const ToyTrainOptions& options) {
  if (vocab == nullptr) {
    throw Error(ErrorCode::kInvalidArgument, "toy victim needs a vocabulary");
  }
  if (options.epochs < 0 || options.learning_rate <= 0.0 || options.l2 < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid toy training options");
  }
  std::set<int> classes;
  int max_label = -1;
  for (const LabeledExample& ex : train) {
    if (ex.label < 0) {
      throw Error(ErrorCode::kInvalidArgument, "negative label");
    }
    classes.insert(ex.label);
    max_label = std::max(max_label, ex.label);
  }
  if (classes.size() < 2) {
    throw Error(ErrorCode::kDegenerateDataset,
                "training data must contain at least two classes");
  }
  const int num_classes =
      options.num_classes > 0 ? options.num_classes : max_label + 1;
  if (max_label >= num_classes) {
    throw Error(ErrorCode::kInvalidArgument, "label exceeds num_classes");
  }
  const int vocab_size = static_cast<int>(vocab->size());

  std::vector<SparseFeatures> features;
  std::vector<int> labels;
  features.reserve(train.size());
  labels.reserve(train.size());
  for (const LabeledExample& ex : train) {
    features.push_back(PieceCounts(vocab->Encode(ex.text)));
    labels.push_back(ex.label);
  }
  const ToyObjective objective(std::move(features), labels, num_classes,
                               vocab_size, options.l2);

  ToyVictimParams params = ToyVictimParams::Zeros(num_classes, vocab_size);
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    const ToyVictimParams grad = objective.Gradient(params);
    for (size_t i = 0; i < params.weights.size(); ++i) {
      params.weights[i] -= options.learning_rate * grad.weights[i];
    }
    for (int c = 0; c < num_classes; ++c) {
      params.bias[c] -= options.learning_rate * grad.bias[c];
    }
  }
  ToyVictim victim(std::move(vocab), std::move(params));
  victim.train_accuracy = Accuracy(victim, train);
  return victim;
}

double Accuracy(const Victim& victim, std::span<const LabeledExample> data) {
  if (data.empty()) return 0.0;
  std::vector<std::string> texts;
  texts.reserve(data.size());
  for (const LabeledExample& ex : data) texts.push_back(ex.text);
  const std::vector<ClassDistribution> scores = victim.BatchScore(texts);
  size_t correct = 0;
  for (size_t i = 0; i < data.size(); ++i) {
    if (scores[i].predicted == data[i].label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace pieceattack
