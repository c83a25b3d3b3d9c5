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

#include "pieceattack/remote.h"

#include <cmath>
#include <condition_variable>
#include <mutex>
#include <thread>

#include "httplib.h"

namespace pieceattack {

class HttpJsonClient::Limiter {
 public:
  explicit Limiter(int slots) : free_(slots) {}

  void Acquire() {
    std::unique_lock<std::mutex> lock(mu_);
    cv_.wait(lock, [this] { return free_ > 0; });
    --free_;
  }

  void Release() {
    {
      std::lock_guard<std::mutex> lock(mu_);
      ++free_;
    }
    cv_.notify_one();
  }

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int free_;
};

HttpJsonClient::HttpJsonClient(const std::string& base_url,
                               RemoteOptions options, ErrorCode unavailable)
    : base_url_(base_url), options_(options), unavailable_(unavailable) {
  constexpr std::string_view kScheme = "http://";
  if (base_url.rfind(kScheme, 0) != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "endpoint must start with http:// (got '" + base_url + "')");
  }
  std::string rest = base_url.substr(kScheme.size());
  const size_t slash = rest.find('/');
  if (slash != std::string::npos) {
    prefix_ = rest.substr(slash);
    rest = rest.substr(0, slash);
    while (!prefix_.empty() && prefix_.back() == '/') prefix_.pop_back();
  }
  const size_t colon = rest.rfind(':');
  if (colon != std::string::npos) {
    host_ = rest.substr(0, colon);
    const std::string port = rest.substr(colon + 1);
    try {
      size_t used = 0;
      port_ = std::stoi(port, &used);
      if (used != port.size() || port_ <= 0 || port_ > 65535) {
        throw std::invalid_argument(port);
      }
    } catch (const std::exception&) {
      throw Error(ErrorCode::kInvalidArgument, "bad port in '" + base_url + "'");
    }
  } else {
    host_ = rest;
  }
  if (host_.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "missing host in '" + base_url + "'");
  }
  if (options_.max_in_flight < 1 || options_.retries < 0) {
    throw Error(ErrorCode::kInvalidArgument, "invalid remote options");
  }
  limiter_ = std::make_unique<Limiter>(options_.max_in_flight);
}

HttpJsonClient::~HttpJsonClient() = default;

nlohmann::json HttpJsonClient::Post(const std::string& path,
                                    const nlohmann::json& body) const {
  struct Slot {
    explicit Slot(Limiter* l) : limiter(l) { limiter->Acquire(); }
    ~Slot() { limiter->Release(); }
    Limiter* limiter;
  } slot(limiter_.get());
  const std::string payload = body.dump();
  const auto seconds =
      std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(
      options_.timeout - seconds);
  std::string last_error;
  auto backoff = options_.initial_backoff;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
    httplib::Client client(host_, port_);
    client.set_connection_timeout(seconds.count(), micros.count());
    client.set_read_timeout(seconds.count(), micros.count());
    client.set_write_timeout(seconds.count(), micros.count());
    const auto res = client.Post(prefix_ + path, payload, "application/json");
    if (!res) {
      last_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 500) {
      last_error = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw Error(ErrorCode::kMalformedResponse,
                  base_url_ + path + " rejected the request: HTTP " +
                      std::to_string(res->status) + " " + res->body);
    }
    try {
      return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kMalformedResponse,
                  base_url_ + path + " returned invalid JSON: " + e.what());
    }
  }
  throw Error(unavailable_, base_url_ + path + " unreachable after " +
                                std::to_string(options_.retries + 1) +
                                " attempts: " + last_error);
}

std::vector<ClassDistribution> ParseScoreResponse(const nlohmann::json& body,
                                                  size_t expected_rows) {
  if (!body.is_object() || !body.contains("probabilities") ||
      !body["probabilities"].is_array()) {
    throw Error(ErrorCode::kMalformedResponse,
                "score response lacks a 'probabilities' array");
  }
  const nlohmann::json& rows = body["probabilities"];
  if (rows.size() != expected_rows) {
    throw Error(ErrorCode::kMalformedResponse,
                "score response has " + std::to_string(rows.size()) +
                    " rows for " + std::to_string(expected_rows) + " texts");
  }
  std::vector<ClassDistribution> out;
  out.reserve(rows.size());
  size_t width = 0;
  for (size_t r = 0; r < rows.size(); ++r) {
    const nlohmann::json& row = rows[r];
    if (!row.is_array() || row.empty()) {
      throw Error(ErrorCode::kMalformedResponse,
                  "row " + std::to_string(r) + " is not a non-empty array");
    }
    if (r == 0) width = row.size();
    if (row.size() != width) {
      throw Error(ErrorCode::kMalformedResponse, "rows differ in class count");
    }
    std::vector<double> probs;
    probs.reserve(row.size());
    double sum = 0.0;
    for (const nlohmann::json& v : row) {
      if (!v.is_number()) {
        throw Error(ErrorCode::kMalformedResponse,
                    "row " + std::to_string(r) + " has a non-numeric entry");
      }
      const double p = v.get<double>();
      if (!std::isfinite(p) || p < 0.0) {
        throw Error(ErrorCode::kMalformedResponse,
                    "row " + std::to_string(r) + " has a negative probability");
      }
      probs.push_back(p);
      sum += p;
    }
    if (std::abs(sum - 1.0) > RemoteVictim::kSumTolerance) {
      throw Error(ErrorCode::kMalformedResponse,
                  "row " + std::to_string(r) + " sums to " +
                      std::to_string(sum));
    }
    for (double& p : probs) p /= sum;
    out.push_back(ClassDistribution::FromProbabilities(std::move(probs)));
  }
  return out;
}

RemoteVictim::RemoteVictim(const std::string& endpoint, RemoteOptions options)
    : client_(endpoint, options, ErrorCode::kVictimUnavailable) {}

std::vector<ClassDistribution> RemoteVictim::BatchScore(
    std::span<const std::string> texts) const {
  CheckTexts(texts);
  if (texts.empty()) return {};
  nlohmann::json request;
  request["texts"] = std::vector<std::string>(texts.begin(), texts.end());
  return ParseScoreResponse(client_.Post("/score", request), texts.size());
}

nlohmann::json MakeFillMaskRequest(const TokenizedText& tokens,
                                   size_t position, int k) {
  return nlohmann::json{{"text", tokens.original},
                        {"char_start", tokens.spans.at(position).begin},
                        {"char_end", tokens.spans.at(position).end},
                        {"k", k},
                        {"keep_original", true}};
}

std::vector<Candidate> ParseFillMaskResponse(const nlohmann::json& body, int k) {
  if (!body.is_object() || !body.contains("candidates") ||
      !body["candidates"].is_array()) {
    throw Error(ErrorCode::kMalformedResponse,
                "fill_mask response lacks a 'candidates' array");
  }
  const nlohmann::json& rows = body["candidates"];
  if (static_cast<int>(rows.size()) > k) {
    throw Error(ErrorCode::kMalformedResponse,
                "fill_mask returned more than k candidates");
  }
  std::vector<Candidate> out;
  for (const nlohmann::json& row : rows) {
    if (!row.is_object() || !row.contains("piece") || !row["piece"].is_string() ||
        !row.contains("score") || !row["score"].is_number()) {
      throw Error(ErrorCode::kMalformedResponse,
                  "fill_mask candidate needs 'piece' and 'score'");
    }
    const double score = row["score"].get<double>();
    if (!out.empty() && score > out.back().score) {
      throw Error(ErrorCode::kMalformedResponse,
                  "fill_mask candidates are not in descending score order");
    }
    out.push_back({row["piece"].get<std::string>(), score});
  }
  return out;
}

RemoteGenerator::RemoteGenerator(const std::string& endpoint,
                                 RemoteOptions options)
    : client_(endpoint, options, ErrorCode::kGeneratorUnavailable) {}

CandidateList RemoteGenerator::Candidates(const TokenizedText& tokens,
                                          size_t position, int k) const {
  CheckCandidateRequest(tokens, position, k);
  const nlohmann::json body =
      client_.Post("/fill_mask", MakeFillMaskRequest(tokens, position, k));
  return FinalizeCandidates(position, std::string(tokens.SpanText(position)),
                            ParseFillMaskResponse(body, k), k);
}

}  // namespace pieceattack
