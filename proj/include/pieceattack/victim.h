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

#ifndef PIECEATTACK_VICTIM_H_
#define PIECEATTACK_VICTIM_H_

#include <atomic>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pieceattack {

// Post-softmax victim output.
struct ClassDistribution {
  std::vector<double> probs;
  int predicted = 0;

  // Validates non-negativity and |sum - 1| <= 1e-6, and sets the argmax
  // (lowest index wins ties).
  static ClassDistribution FromProbabilities(std::vector<double> probs);
  static ClassDistribution Softmax(std::span<const double> logits);

  double prob(int label) const { return probs.at(label); }
  size_t num_classes() const { return probs.size(); }
};

int ArgMax(std::span<const double> values);

struct LabeledExample {
  std::string text;
  int label = 0;
};

// JSON Lines: {"text": string, "label": integer} per line. Blank lines are
// ignored.
std::vector<LabeledExample> ReadDataset(const std::string& path);
void WriteDataset(const std::string& path,
                  std::span<const LabeledExample> examples);

// A black-box classifier. Implementations must be deterministic and safe
// for concurrent calls.
class Victim {
 public:
  virtual ~Victim() = default;

  // Element-wise scores in input order. Every text must be non-empty.
  virtual std::vector<ClassDistribution> BatchScore(
      std::span<const std::string> texts) const = 0;

  ClassDistribution Score(std::string_view text) const;

 protected:
  // Throws InvalidArgument on an empty text.
  static void CheckTexts(std::span<const std::string> texts);
};

// Forwards to another victim and counts every text scored.
class CountingVictim : public Victim {
 public:
  explicit CountingVictim(const Victim& inner) : inner_(inner) {}

  std::vector<ClassDistribution> BatchScore(
      std::span<const std::string> texts) const override;

  int64_t queries() const { return queries_.load(); }
  int64_t batches() const { return batches_.load(); }

 private:
  const Victim& inner_;
  mutable std::atomic<int64_t> queries_{0};
  mutable std::atomic<int64_t> batches_{0};
};

}  // namespace pieceattack

#endif  // PIECEATTACK_VICTIM_H_
