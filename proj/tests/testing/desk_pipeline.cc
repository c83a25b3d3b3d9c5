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

#include "testing/desk_pipeline.h"

#include "testing/desk_data.h"

namespace pieceattack::testing {

DeskPipeline MakeDeskPipeline(int train_examples, int held_out_examples,
                              uint64_t seed) {
  DeskPipeline p;
  std::vector<LabeledExample> data =
      KeywordTask(train_examples + held_out_examples, seed);
  p.train.assign(data.begin(), data.begin() + train_examples);
  p.held_out.assign(data.begin() + train_examples, data.end());

  p.corpus = DeskCorpus(1000, seed + 1);
  for (const LabeledExample& ex : p.train) p.corpus.push_back(ex.text);
  TrainerOptions options;
  options.target_size = 400;
  p.vocab = std::make_shared<const Vocabulary>(TrainVocabulary(p.corpus, options));
  p.victim = std::make_unique<ToyVictim>(TrainToyVictim(p.train, p.vocab, {}));
  p.generator = std::make_unique<ContextCountGenerator>(p.corpus, p.vocab);
  return p;
}

}  // namespace pieceattack::testing
