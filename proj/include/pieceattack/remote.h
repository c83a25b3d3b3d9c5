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

#ifndef PIECEATTACK_REMOTE_H_
#define PIECEATTACK_REMOTE_H_

#include <chrono>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pieceattack/error.h"
#include "pieceattack/generator.h"
#include "pieceattack/victim.h"

namespace pieceattack {

struct RemoteOptions {
  int max_in_flight = 4;
  int retries = 2;
  std::chrono::milliseconds initial_backoff{100};
  std::chrono::milliseconds timeout{30000};
};

// JSON-over-HTTP client for one base URL ("http://host:port[/prefix]").
// Transport failures and 5xx responses are retried with exponential backoff;
// after the last retry `unavailable` is thrown. Thread-safe; at most
// max_in_flight requests are outstanding at once.
class HttpJsonClient {
 public:
  HttpJsonClient(const std::string& base_url, RemoteOptions options,
                 ErrorCode unavailable);
  ~HttpJsonClient();

  nlohmann::json Post(const std::string& path, const nlohmann::json& body) const;

  const std::string& base_url() const { return base_url_; }

 private:
  class Limiter;

  std::string base_url_;
  std::string host_;
  int port_ = 80;
  std::string prefix_;
  RemoteOptions options_;
  ErrorCode unavailable_;
  std::unique_ptr<Limiter> limiter_;
};

// Victim behind POST /score: {"texts": [...]} -> {"probabilities": [[...]]}.
// Rows off by more than 1e-3 from summing to one are rejected as
// MalformedResponse; smaller deviations are renormalized.
class RemoteVictim : public Victim {
 public:
  static constexpr double kSumTolerance = 1e-3;

  explicit RemoteVictim(const std::string& endpoint, RemoteOptions options = {});

  std::vector<ClassDistribution> BatchScore(
      std::span<const std::string> texts) const override;

 private:
  HttpJsonClient client_;
};

// Parses and validates a /score response body against the request size.
std::vector<ClassDistribution> ParseScoreResponse(const nlohmann::json& body,
                                                  size_t expected_rows);

// Masked-LM generator behind POST /fill_mask. Character spans, not piece
// indices, cross the wire; the unmasked text is sent (keep_original=true).
class RemoteGenerator : public Generator {
 public:
  explicit RemoteGenerator(const std::string& endpoint,
                           RemoteOptions options = {});

  CandidateList Candidates(const TokenizedText& tokens, size_t position,
                           int k) const override;

 private:
  HttpJsonClient client_;
};

nlohmann::json MakeFillMaskRequest(const TokenizedText& tokens,
                                   size_t position, int k);

// Validates a /fill_mask response (at most k rows, descending scores) and
// returns the raw candidates.
std::vector<Candidate> ParseFillMaskResponse(const nlohmann::json& body, int k);

}  // namespace pieceattack

#endif  // PIECEATTACK_REMOTE_H_
