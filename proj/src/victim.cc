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

#include "pieceattack/victim.h"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "json.hpp"
#include "pieceattack/error.h"

namespace pieceattack {

int ArgMax(std::span<const double> values) {
  int best = 0;
  for (size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = static_cast<int>(i);
  }
  return best;
}

ClassDistribution ClassDistribution::FromProbabilities(
    std::vector<double> probs) {
  if (probs.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty class distribution");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "class probabilities must be finite and non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(ErrorCode::kInvalidArgument,
                "class probabilities sum to " + std::to_string(sum));
  }
  ClassDistribution dist;
  dist.predicted = ArgMax(probs);
  dist.probs = std::move(probs);
  return dist;
}

ClassDistribution ClassDistribution::Softmax(std::span<const double> logits) {
  if (logits.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "empty logits");
  }
  const double max_logit = *std::max_element(logits.begin(), logits.end());
  std::vector<double> probs(logits.size());
  double sum = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    probs[i] = std::exp(logits[i] - max_logit);
    sum += probs[i];
  }
  for (double& p : probs) p /= sum;
  ClassDistribution dist;
  dist.predicted = ArgMax(probs);
  dist.probs = std::move(probs);
  return dist;
}

std::vector<LabeledExample> ReadDataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open dataset " + path);
  std::vector<LabeledExample> examples;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = path + ":" + std::to_string(line_no);
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument, where + ": " + e.what());
    }
    if (!obj.is_object() || !obj.contains("text") || !obj["text"].is_string() ||
        !obj.contains("label") || !obj["label"].is_number_integer() ||
        obj["label"].get<int64_t>() < 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  where + ": expected {\"text\": string, \"label\": int >= 0}");
    }
    examples.push_back(
        {obj["text"].get<std::string>(), obj["label"].get<int>()});
  }
  return examples;
}

void WriteDataset(const std::string& path,
                  std::span<const LabeledExample> examples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write dataset " + path);
  for (const LabeledExample& ex : examples) {
    out << nlohmann::json{{"text", ex.text}, {"label", ex.label}}.dump()
        << '\n';
  }
}

ClassDistribution Victim::Score(std::string_view text) const {
  const std::string texts[] = {std::string(text)};
  return BatchScore(texts).at(0);
}

void Victim::CheckTexts(std::span<const std::string> texts) {
  for (const std::string& t : texts) {
    if (t.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "cannot score an empty text");
    }
  }
}

std::vector<ClassDistribution> CountingVictim::BatchScore(
    std::span<const std::string> texts) const {
  queries_ += static_cast<int64_t>(texts.size());
  ++batches_;
  return inner_.BatchScore(texts);
}

}  // namespace pieceattack
