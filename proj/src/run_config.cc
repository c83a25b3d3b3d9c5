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

#include "pieceattack/run_config.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "pieceattack/error.h"

namespace pieceattack {
namespace {

void RequirePath(const std::string& flag, const std::string& path) {
  if (path.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--" + flag + " is required");
  }
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::kIoError, "--" + flag + " path does not exist: " + path);
  }
}

std::string Trim(const std::string& s) {
  const size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const size_t end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void RunConfig::Validate() const {
  ToAttackConfig().Validate();
  if (victim != "toy" && victim != "remote") {
    throw Error(ErrorCode::kInvalidArgument, "unknown victim kind '" + victim + "'");
  }
  if (generator != "count" && generator != "char" && generator != "embed" &&
      generator != "remote") {
    throw Error(ErrorCode::kInvalidArgument,
                "unknown generator kind '" + generator + "'");
  }
  if (workers < 1) throw Error(ErrorCode::kInvalidArgument, "--workers must be >= 1");
  if (n_samples < 1) {
    throw Error(ErrorCode::kInvalidArgument, "--n-samples must be >= 1");
  }
  if (!(threshold >= -1.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "--threshold must lie in [-1, 1]");
  }
  RequirePath("dataset", dataset);
  if (victim == "toy") {
    RequirePath("vocab", vocab);
    RequirePath("model", model);
  }
  if (generator == "count") {
    RequirePath("vocab", vocab);
    RequirePath("corpus", corpus);
  } else if (generator == "char") {
    RequirePath("corpus", corpus);
  } else if (generator == "embed") {
    RequirePath("embeddings", embeddings);
  } else {
    RequirePath("vocab", vocab);
  }
  if ((victim == "remote" || generator == "remote") && endpoint.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--endpoint is required");
  }
}

AttackConfig RunConfig::ToAttackConfig() const {
  AttackConfig config;
  config.k = k;
  config.max_replacements = budget;
  config.seed = seed;
  return config;
}

std::map<std::string, std::string> RunConfig::ToKeyValues() const {
  std::ostringstream ks_text;
  for (size_t i = 0; i < ks.size(); ++i) ks_text << (i ? "," : "") << ks[i];
  std::ostringstream threshold_text;
  threshold_text << threshold;
  return {
      {"victim", victim},
      {"generator", generator},
      {"vocab", vocab},
      {"dataset", dataset},
      {"corpus", corpus},
      {"embeddings", embeddings},
      {"model", model},
      {"endpoint", endpoint},
      {"out", out},
      {"k", std::to_string(k)},
      {"budget", budget ? std::to_string(*budget) : "unlimited"},
      {"n-samples", std::to_string(n_samples)},
      {"seed", std::to_string(seed)},
      {"workers", std::to_string(workers)},
      {"threshold", threshold_text.str()},
      {"max-words", std::to_string(max_words)},
      {"ks", ks_text.str()},
  };
}

std::map<std::string, std::string> ReadKeyValueFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open config " + path);
  std::map<std::string, std::string> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string trimmed = Trim(line);
    if (trimmed.empty() || trimmed[0] == '#') continue;
    const size_t eq = trimmed.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorCode::kInvalidArgument,
                  path + ":" + std::to_string(line_no) + ": expected key=value");
    }
    values[Trim(trimmed.substr(0, eq))] = Trim(trimmed.substr(eq + 1));
  }
  return values;
}

void WriteKeyValueFile(const std::string& path,
                       const std::map<std::string, std::string>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path);
  for (const auto& [key, value] : values) out << key << '=' << value << '\n';
}

}  // namespace pieceattack
