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

#ifndef PIECEATTACK_EVAL_H_
#define PIECEATTACK_EVAL_H_

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "pieceattack/attack.h"
#include "pieceattack/generator.h"
#include "pieceattack/victim.h"

namespace pieceattack {

// Uniform sample of n examples without replacement, returned in dataset
// order. Reproducible from seed on every platform (mt19937_64 with
// rejection sampling). Throws InsufficientData when n > dataset size.
std::vector<LabeledExample> SelectSamples(
    std::span<const LabeledExample> dataset, size_t n, uint64_t seed);

struct CampaignOptions {
  std::string dataset_name = "dataset";
  int workers = 1;
  // When non-empty, results.jsonl and report.json are written here.
  std::string out_dir;
  // Stop scheduling new examples once an example ends in a victim or
  // generator outage.
  bool abort_on_outage = true;
  // Free-form settings echoed into the report.
  std::map<std::string, std::string> config_snapshot;
};

struct CampaignReport {
  std::string dataset_name;
  size_t n_requested = 0;
  size_t n_total = 0;
  size_t n_originally_correct = 0;
  size_t n_success = 0;
  size_t n_failure = 0;
  size_t n_skipped = 0;
  size_t n_errors = 0;
  bool aborted = false;
  // Rates exclude error examples from their denominators.
  double original_accuracy = 0.0;
  double attacked_accuracy = 0.0;
  double success_rate = 0.0;
  // Mean over successful examples.
  double mean_change_rate = 0.0;
  // Mean over non-error examples.
  double mean_queries = 0.0;
  int k = 0;
  uint64_t seed = 0;
  std::map<std::string, std::string> config_snapshot;
  std::vector<AttackResult> results;
};

// Aggregates metrics from per-example results.
CampaignReport Summarize(std::vector<AttackResult> results,
                         const std::string& dataset_name);

nlohmann::json ReportToJson(const CampaignReport& report);

// Attacks every sample (concurrently up to options.workers) and writes
// per-example lines in input order.
CampaignReport RunCampaign(std::span<const LabeledExample> samples,
                           const Victim& victim, const Generator& generator,
                           const Segmenter& segmenter,
                           const AttackConfig& config,
                           const CampaignOptions& options);

// Parses a results.jsonl file back into results.
std::vector<AttackResult> ReadResults(const std::string& path);

struct CurvePoint {
  int k = 0;
  double success_rate = 0.0;
  double mean_change_rate = 0.0;
};

struct SweepResult {
  std::vector<CampaignReport> reports;
  std::vector<CurvePoint> curve;
};

// One campaign per k (strictly increasing) with everything else fixed.
// With an output directory, each campaign goes to out_dir/k<k>/ and the
// curve to out_dir/curve.tsv.
SweepResult SweepK(std::span<const LabeledExample> samples, const Victim& victim,
                   const Generator& generator, const Segmenter& segmenter,
                   const AttackConfig& config, std::span<const int> ks,
                   const CampaignOptions& options);

// "k<TAB>success_rate<TAB>change_rate" rows under a header line.
std::string FormatCurve(std::span<const CurvePoint> curve);

}  // namespace pieceattack

#endif  // PIECEATTACK_EVAL_H_
