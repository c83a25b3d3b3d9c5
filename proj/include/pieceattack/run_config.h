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

#ifndef PIECEATTACK_RUN_CONFIG_H_
#define PIECEATTACK_RUN_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pieceattack/attack.h"

namespace pieceattack {

// Everything a campaign needs, as resolved from flags and config file.
struct RunConfig {
  std::string victim = "toy";
  std::string generator = "count";
  std::string vocab;
  std::string dataset;
  std::string corpus;
  std::string embeddings;
  std::string model;
  std::string endpoint;
  std::string out = "pieceattack_out";
  int k = kDefaultCandidates;
  // Unset means unlimited.
  std::optional<int> budget;
  size_t n_samples = 200;
  uint64_t seed = 0;
  int workers = 1;
  double threshold = 0.5;
  size_t max_words = 60000;
  std::vector<int> ks = {1, 4, 12, 48};

  // Throws InvalidArgument for bad values or kinds, IoError for referenced
  // paths that do not exist.
  void Validate() const;

  AttackConfig ToAttackConfig() const;

  std::map<std::string, std::string> ToKeyValues() const;
};

// Flat "key=value" lines; '#' starts a comment line. Keys are flag names
// without the leading dashes.
std::map<std::string, std::string> ReadKeyValueFile(const std::string& path);

void WriteKeyValueFile(const std::string& path,
                       const std::map<std::string, std::string>& values);

}  // namespace pieceattack

#endif  // PIECEATTACK_RUN_CONFIG_H_
