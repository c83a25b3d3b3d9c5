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

#include "pieceattack/eval.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "pieceattack/error.h"

namespace pieceattack {
namespace {

// Unbiased draw from [0, range) using only raw engine output, which the
// standard fixes bit-for-bit for mt19937_64.
uint64_t Bounded(std::mt19937_64& rng, uint64_t range) {
  const uint64_t limit =
      std::numeric_limits<uint64_t>::max() -
      std::numeric_limits<uint64_t>::max() % range;
  uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % range;
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  return out;
}

}  // namespace

std::vector<LabeledExample> SelectSamples(
    std::span<const LabeledExample> dataset, size_t n, uint64_t seed) {
  if (n > dataset.size()) {
    throw Error(ErrorCode::kInsufficientData,
                "cannot sample " + std::to_string(n) + " of " +
                    std::to_string(dataset.size()) + " examples");
  }
  std::mt19937_64 rng(seed);
  std::vector<size_t> index(dataset.size());
  for (size_t i = 0; i < index.size(); ++i) index[i] = i;
  for (size_t i = 0; i < n; ++i) {
    const size_t j = i + Bounded(rng, index.size() - i);
    std::swap(index[i], index[j]);
  }
  index.resize(n);
  std::sort(index.begin(), index.end());
  std::vector<LabeledExample> out;
  out.reserve(n);
  for (size_t i : index) out.push_back(dataset[i]);
  return out;
}

CampaignReport Summarize(std::vector<AttackResult> results,
                         const std::string& dataset_name) {
  CampaignReport report;
  report.dataset_name = dataset_name;
  report.n_total = results.size();
  report.n_requested = results.size();
  double change_sum = 0.0;
  double query_sum = 0.0;
  for (const AttackResult& r : results) {
    switch (r.status) {
      case AttackStatus::kSuccess:
        ++report.n_success;
        change_sum += ChangeRate(r);
        break;
      case AttackStatus::kFailure:
        ++report.n_failure;
        break;
      case AttackStatus::kSkippedOriginallyWrong:
        ++report.n_skipped;
        break;
      case AttackStatus::kError:
        ++report.n_errors;
        break;
    }
    if (r.status != AttackStatus::kError) {
      query_sum += static_cast<double>(r.queries);
    }
  }
  report.n_originally_correct = report.n_success + report.n_failure;
  const size_t evaluated = report.n_total - report.n_errors;
  if (evaluated > 0) {
    report.original_accuracy = static_cast<double>(report.n_originally_correct) /
                               static_cast<double>(evaluated);
    report.attacked_accuracy =
        static_cast<double>(report.n_failure) / static_cast<double>(evaluated);
    report.mean_queries = query_sum / static_cast<double>(evaluated);
  }
  if (report.n_originally_correct > 0) {
    report.success_rate = static_cast<double>(report.n_success) /
                          static_cast<double>(report.n_originally_correct);
  }
  if (report.n_success > 0) {
    report.mean_change_rate =
        change_sum / static_cast<double>(report.n_success);
  }
  report.results = std::move(results);
  return report;
}

nlohmann::json ReportToJson(const CampaignReport& report) {
  nlohmann::json config = nlohmann::json::object();
  for (const auto& [key, value] : report.config_snapshot) config[key] = value;
  return {
      {"dataset", report.dataset_name},
      {"n_requested", report.n_requested},
      {"n_total", report.n_total},
      {"n_originally_correct", report.n_originally_correct},
      {"n_success", report.n_success},
      {"n_failure", report.n_failure},
      {"n_skipped", report.n_skipped},
      {"n_errors", report.n_errors},
      {"n_excluded", report.n_errors},
      {"aborted", report.aborted},
      {"original_accuracy", report.original_accuracy},
      {"attacked_accuracy", report.attacked_accuracy},
      {"success_rate", report.success_rate},
      {"mean_change_rate", report.mean_change_rate},
      {"mean_queries", report.mean_queries},
      {"human_consistency", "n/a"},
      {"human_fluency", "n/a"},
      {"k", report.k},
      {"seed", report.seed},
      {"config", std::move(config)},
  };
}

CampaignReport RunCampaign(std::span<const LabeledExample> samples,
                           const Victim& victim, const Generator& generator,
                           const Segmenter& segmenter,
                           const AttackConfig& config,
                           const CampaignOptions& options) {
  if (samples.empty()) {
    throw Error(ErrorCode::kInsufficientData, "no samples to attack");
  }
  config.Validate();
  if (options.workers < 1) {
    throw Error(ErrorCode::kInvalidArgument, "workers must be >= 1");
  }

  std::optional<std::ofstream> lines;
  const std::filesystem::path out_dir(options.out_dir);
  if (!options.out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    lines = OpenOutput(out_dir / "results.jsonl");
  }

  const size_t n = samples.size();
  std::vector<std::optional<AttackResult>> slots(n);
  std::atomic<size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  size_t next_to_write = 0;
  std::exception_ptr failure;

  auto work = [&] {
    while (!stop.load()) {
      const size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        AttackResult result =
            AttackExample(samples[i], victim, generator, segmenter, config);
        const bool outage = result.status == AttackStatus::kError;
        std::lock_guard<std::mutex> lock(mu);
        slots[i] = std::move(result);
        // Ordered flush: write every finished prefix line now.
        while (next_to_write < n && slots[next_to_write]) {
          if (lines) {
            nlohmann::json obj = AttackResultToJson(*slots[next_to_write]);
            obj["index"] = next_to_write;
            *lines << obj.dump() << '\n';
            lines->flush();
          }
          ++next_to_write;
        }
        if (outage && options.abort_on_outage) stop = true;
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) failure = std::current_exception();
        stop = true;
      }
    }
  };

  const int threads = std::min<int>(options.workers, static_cast<int>(n));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<AttackResult> results;
  results.reserve(next_to_write);
  for (size_t i = 0; i < next_to_write; ++i) results.push_back(std::move(*slots[i]));

  CampaignReport report = Summarize(std::move(results), options.dataset_name);
  report.n_requested = n;
  report.aborted = report.n_total < n;
  report.k = config.k;
  report.seed = config.seed;
  report.config_snapshot = options.config_snapshot;
  if (!options.out_dir.empty()) {
    std::ofstream summary = OpenOutput(out_dir / "report.json");
    summary << ReportToJson(report).dump(2) << '\n';
  }
  return report;
}

std::vector<AttackResult> ReadResults(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open results " + path);
  std::vector<AttackResult> results;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    try {
      results.push_back(AttackResultFromJson(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::kInvalidArgument,
                  "malformed results line in " + path + ": " + e.what());
    }
  }
  return results;
}

SweepResult SweepK(std::span<const LabeledExample> samples, const Victim& victim,
                   const Generator& generator, const Segmenter& segmenter,
                   const AttackConfig& config, std::span<const int> ks,
                   const CampaignOptions& options) {
  if (samples.empty()) {
    throw Error(ErrorCode::kInsufficientData, "no samples to attack");
  }
  if (ks.empty()) throw Error(ErrorCode::kInvalidArgument, "no k values");
  for (size_t i = 1; i < ks.size(); ++i) {
    if (ks[i] <= ks[i - 1]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "k values must be strictly increasing");
    }
  }
  SweepResult sweep;
  for (int k : ks) {
    AttackConfig cfg = config;
    cfg.k = k;
    CampaignOptions opts = options;
    if (!options.out_dir.empty()) {
      opts.out_dir =
          (std::filesystem::path(options.out_dir) / ("k" + std::to_string(k)))
              .string();
    }
    opts.config_snapshot["k"] = std::to_string(k);
    CampaignReport report =
        RunCampaign(samples, victim, generator, segmenter, cfg, opts);
    sweep.curve.push_back({k, report.success_rate, report.mean_change_rate});
    const bool aborted = report.aborted;
    sweep.reports.push_back(std::move(report));
    if (aborted) break;
  }
  if (!options.out_dir.empty()) {
    std::ofstream curve =
        OpenOutput(std::filesystem::path(options.out_dir) / "curve.tsv");
    curve << FormatCurve(sweep.curve);
  }
  return sweep;
}

std::string FormatCurve(std::span<const CurvePoint> curve) {
  std::ostringstream out;
  out << "k\tsuccess_rate\tchange_rate\n";
  out << std::fixed << std::setprecision(6);
  for (const CurvePoint& p : curve) {
    out << p.k << '\t' << p.success_rate << '\t' << p.mean_change_rate << '\n';
  }
  return out.str();
}

}  // namespace pieceattack
