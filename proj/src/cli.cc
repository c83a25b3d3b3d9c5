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

#include "pieceattack/cli.h"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>

#include "CLI11.hpp"
#include "pieceattack/attack.h"
#include "pieceattack/embedding.h"
#include "pieceattack/error.h"
#include "pieceattack/eval.h"
#include "pieceattack/generator.h"
#include "pieceattack/remote.h"
#include "pieceattack/run_config.h"
#include "pieceattack/sp_tokenizer.h"
#include "pieceattack/toy_victim.h"

namespace pieceattack::cli {
namespace {

std::vector<std::string> ReadLines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));
  return lines;
}

// Expands "--config FILE": every key not given as a flag is appended as
// "--key value".
std::vector<std::string> ApplyConfigFile(std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        throw Error(ErrorCode::kInvalidArgument, "--config needs a path");
      }
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;
  std::set<std::string> given;
  for (const std::string& a : rest) {
    if (a.rfind("--", 0) == 0) given.insert(a.substr(2, a.find('=') - 2));
  }
  for (const auto& [key, value] : ReadKeyValueFile(path)) {
    if (given.count(key)) continue;
    rest.push_back("--" + key);
    rest.push_back(value);
  }
  return rest;
}

std::optional<int> ParseBudget(const std::string& text) {
  if (text.empty() || text == "unlimited") return std::nullopt;
  try {
    size_t used = 0;
    const int value = std::stoi(text, &used);
    if (used == text.size()) return value;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kInvalidArgument, "--budget must be an integer or 'unlimited'");
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kIoError:
    case ErrorCode::kInsufficientData:
    case ErrorCode::kVocabTooSmall:
    case ErrorCode::kEmbeddingParseError:
      return kExitUsage;
    default:
      return kExitRuntime;
  }
}

struct TokenizerFlags {
  std::string corpus;
  std::string vocab;
  std::string input = "-";
  int vocab_size = 8000;
  int max_piece_chars = Vocabulary::kDefaultMaxPieceChars;
  int seed_size = 100000;
};

struct VictimFlags {
  std::string kind = "toy";
  std::string vocab;
  std::string dataset;
  std::string model;
  std::string endpoint;
  std::optional<std::string> text;
  int epochs = 200;
  double learning_rate = 0.5;
  double l2 = 1e-4;
};

struct RunFlags {
  RunConfig config;
  std::string budget = "unlimited";
};

void AddRunFlags(CLI::App* app, RunFlags* flags, bool with_ks) {
  RunConfig& c = flags->config;
  app->add_option("--victim", c.victim, "Victim kind")
      ->check(CLI::IsMember({"toy", "remote"}));
  app->add_option("--generator", c.generator, "Generator kind")
      ->check(CLI::IsMember({"count", "char", "embed", "remote"}));
  app->add_option("--vocab", c.vocab, "Piece vocabulary file");
  app->add_option("--dataset", c.dataset, "JSONL dataset to sample from");
  app->add_option("--corpus", c.corpus, "Raw text corpus for count/char generators");
  app->add_option("--embeddings", c.embeddings, "Word embedding file");
  app->add_option("--model", c.model, "Toy victim model file");
  app->add_option("--endpoint", c.endpoint, "Model server base URL");
  app->add_option("--k", c.k, "Candidate list size");
  app->add_option("--budget", flags->budget, "Max replacements or 'unlimited'");
  app->add_option("--n-samples", c.n_samples, "Examples sampled from the dataset");
  app->add_option("--seed", c.seed, "Sampling seed");
  app->add_option("--workers", c.workers, "Concurrent attacks");
  app->add_option("--out", c.out, "Output directory");
  app->add_option("--threshold", c.threshold, "Cosine threshold (embed generator)");
  app->add_option("--max-words", c.max_words, "Embedding rows to load");
  if (with_ks) {
    app->add_option("--ks", c.ks, "Comma separated candidate list sizes")
        ->delimiter(',');
  }
}

int TokenizerTrain(const TokenizerFlags& f, std::ostream& out) {
  if (f.corpus.empty() || f.vocab.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--corpus and --vocab are required");
  }
  TrainerOptions options;
  options.target_size = f.vocab_size;
  options.max_piece_chars = f.max_piece_chars;
  options.seed_size = f.seed_size;
  const Vocabulary vocab = TrainVocabulary(ReadLines(f.corpus), options);
  vocab.Save(f.vocab);
  out << "wrote " << vocab.size() << " pieces to " << f.vocab << '\n';
  return kExitOk;
}

int TokenizerEncode(const TokenizerFlags& f, std::ostream& out) {
  const Vocabulary vocab = Vocabulary::Load(f.vocab);
  std::ifstream file;
  std::istream* in = &std::cin;
  if (f.input != "-") {
    file.open(f.input, std::ios::binary);
    if (!file) throw Error(ErrorCode::kIoError, "cannot open " + f.input);
    in = &file;
  }
  // One piece per line; an empty line ends each sentence.
  std::string line;
  while (std::getline(*in, line)) {
    const TokenizedText tokens = vocab.Encode(line);
    for (size_t i = 0; i < tokens.size(); ++i) out << tokens.SpanText(i) << '\n';
    out << '\n';
  }
  return kExitOk;
}

int TokenizerStats(const TokenizerFlags& f, std::ostream& out) {
  const Vocabulary vocab = Vocabulary::Load(f.vocab);
  out << FormatVocabStats(ComputeVocabStats(vocab));
  return kExitOk;
}

int VictimTrain(const VictimFlags& f, std::ostream& out) {
  if (f.kind != "toy") {
    throw Error(ErrorCode::kInvalidArgument, "only toy victims can be trained");
  }
  if (f.model.empty()) throw Error(ErrorCode::kInvalidArgument, "--model is required");
  auto vocab = std::make_shared<const Vocabulary>(Vocabulary::Load(f.vocab));
  const std::vector<LabeledExample> data = ReadDataset(f.dataset);
  ToyTrainOptions options;
  options.epochs = f.epochs;
  options.learning_rate = f.learning_rate;
  options.l2 = f.l2;
  const ToyVictim victim = TrainToyVictim(data, vocab, options);
  victim.Save(f.model);
  out << "train_accuracy=" << *victim.train_accuracy << '\n';
  return kExitOk;
}

std::unique_ptr<Victim> MakeVictim(const std::string& kind,
                                   const std::string& vocab_path,
                                   const std::string& model,
                                   const std::string& endpoint) {
  if (kind == "remote") {
    if (endpoint.empty()) {
      throw Error(ErrorCode::kInvalidArgument, "--endpoint is required");
    }
    return std::make_unique<RemoteVictim>(endpoint);
  }
  auto vocab = std::make_shared<const Vocabulary>(Vocabulary::Load(vocab_path));
  return std::make_unique<ToyVictim>(ToyVictim::Load(model, vocab));
}

int VictimScore(const VictimFlags& f, std::ostream& out) {
  if (f.text && f.text->empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--text must not be empty");
  }
  if (!f.text && f.dataset.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "--text or --dataset is required");
  }
  const auto victim = MakeVictim(f.kind, f.vocab, f.model, f.endpoint);
  if (f.text) {
    const ClassDistribution dist = victim->Score(*f.text);
    out << "predicted=" << dist.predicted << '\n' << "probabilities=";
    for (size_t c = 0; c < dist.probs.size(); ++c) {
      out << (c ? "," : "") << dist.probs[c];
    }
    out << '\n';
    return kExitOk;
  }
  const std::vector<LabeledExample> data = ReadDataset(f.dataset);
  out << "accuracy=" << Accuracy(*victim, data) << '\n';
  return kExitOk;
}

struct Pipeline {
  std::unique_ptr<Victim> victim;
  std::shared_ptr<const Segmenter> segmenter;
  std::unique_ptr<Generator> generator;
};

Pipeline BuildPipeline(const RunConfig& c) {
  Pipeline p;
  p.victim = MakeVictim(c.victim, c.vocab, c.model, c.endpoint);
  if (c.generator == "count") {
    auto vocab = std::make_shared<const Vocabulary>(Vocabulary::Load(c.vocab));
    p.segmenter = vocab;
    p.generator =
        std::make_unique<ContextCountGenerator>(ReadLines(c.corpus), vocab);
  } else if (c.generator == "char") {
    const std::vector<std::string> corpus = ReadLines(c.corpus);
    p.segmenter =
        std::make_shared<const Vocabulary>(Vocabulary::CharacterOnly(corpus));
    p.generator = std::make_unique<CharGenerator>(corpus);
  } else if (c.generator == "embed") {
    auto table = std::make_shared<const EmbeddingTable>(
        EmbeddingTable::Load(c.embeddings, c.max_words));
    p.segmenter = std::make_shared<const LongestMatchSegmenter>(table->words());
    p.generator = std::make_unique<EmbeddingGenerator>(table, c.threshold);
  } else {
    p.segmenter = std::make_shared<const Vocabulary>(Vocabulary::Load(c.vocab));
    p.generator = std::make_unique<RemoteGenerator>(c.endpoint);
  }
  return p;
}

void PrintSummary(const CampaignReport& report, std::ostream& out) {
  out << ReportToJson(report).dump(2) << '\n';
}

int Campaign(RunFlags flags, bool sweep, std::ostream& out, std::ostream& err) {
  RunConfig& c = flags.config;
  c.budget = ParseBudget(flags.budget);
  c.Validate();
  std::filesystem::create_directories(c.out);
  WriteKeyValueFile((std::filesystem::path(c.out) / "run_config.txt").string(),
                    c.ToKeyValues());

  const std::vector<LabeledExample> dataset = ReadDataset(c.dataset);
  const std::vector<LabeledExample> samples =
      SelectSamples(dataset, c.n_samples, c.seed);
  const Pipeline p = BuildPipeline(c);

  CampaignOptions options;
  options.dataset_name = std::filesystem::path(c.dataset).stem().string();
  options.workers = c.workers;
  options.out_dir = c.out;
  options.config_snapshot = c.ToKeyValues();

  std::vector<const CampaignReport*> reports;
  SweepResult result;
  CampaignReport single;
  if (sweep) {
    result = SweepK(samples, *p.victim, *p.generator, *p.segmenter,
                    c.ToAttackConfig(), c.ks, options);
    for (const CampaignReport& r : result.reports) reports.push_back(&r);
    out << FormatCurve(result.curve);
  } else {
    single = RunCampaign(samples, *p.victim, *p.generator, *p.segmenter,
                         c.ToAttackConfig(), options);
    reports.push_back(&single);
    PrintSummary(single, out);
  }
  for (const CampaignReport* r : reports) {
    if (r->aborted || r->n_errors > 0) {
      err << "endpoint failure: " << r->n_total - r->n_errors << " of "
          << r->n_requested << " examples completed; results kept in " << c.out
          << '\n';
      return kExitRuntime;
    }
  }
  return kExitOk;
}

}  // namespace

int Run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Piece-level adversarial attacks on Chinese text classifiers",
               "pieceattack"};
  app.require_subcommand(1);

  TokenizerFlags tok;
  CLI::App* tokenizer = app.add_subcommand("tokenizer", "Piece vocabulary tools");
  tokenizer->require_subcommand(1);
  CLI::App* tok_train = tokenizer->add_subcommand("train", "Train a vocabulary");
  tok_train->add_option("--corpus", tok.corpus, "One sentence per line")->required();
  tok_train->add_option("--vocab", tok.vocab, "Output vocabulary file")->required();
  tok_train->add_option("--vocab-size", tok.vocab_size, "Pieces including specials");
  tok_train->add_option("--max-piece-chars", tok.max_piece_chars);
  tok_train->add_option("--seed-size", tok.seed_size);
  CLI::App* tok_encode = tokenizer->add_subcommand("encode", "Segment lines");
  tok_encode->add_option("--vocab", tok.vocab)->required();
  tok_encode->add_option("--input", tok.input, "Input file, '-' for stdin");
  CLI::App* tok_stats = tokenizer->add_subcommand("stats", "Piece length table");
  tok_stats->add_option("--vocab", tok.vocab)->required();

  VictimFlags vic;
  CLI::App* victim = app.add_subcommand("victim", "Victim classifiers");
  victim->require_subcommand(1);
  CLI::App* vic_train = victim->add_subcommand("train", "Train the toy victim");
  CLI::App* vic_score = victim->add_subcommand("score", "Score text or a dataset");
  for (CLI::App* sub : {vic_train, vic_score}) {
    sub->add_option("--victim", vic.kind)->check(CLI::IsMember({"toy", "remote"}));
    sub->add_option("--vocab", vic.vocab);
    sub->add_option("--dataset", vic.dataset);
    sub->add_option("--model", vic.model);
  }
  vic_train->add_option("--epochs", vic.epochs);
  vic_train->add_option("--lr", vic.learning_rate);
  vic_train->add_option("--l2", vic.l2);
  vic_score->add_option("--endpoint", vic.endpoint);
  vic_score->add_option("--text", vic.text);

  RunFlags attack_flags;
  CLI::App* attack = app.add_subcommand("attack", "Adversarial campaigns");
  attack->require_subcommand(1);
  CLI::App* attack_run = attack->add_subcommand("run", "Attack sampled examples");
  AddRunFlags(attack_run, &attack_flags, false);

  RunFlags eval_flags;
  CLI::App* eval = app.add_subcommand("eval", "Evaluation campaigns");
  eval->require_subcommand(1);
  CLI::App* eval_run = eval->add_subcommand("run", "Attack and report metrics");
  CLI::App* eval_sweep = eval->add_subcommand("sweep", "Success rate against k");
  AddRunFlags(eval_run, &eval_flags, false);
  AddRunFlags(eval_sweep, &eval_flags, true);

  try {
    args = ApplyConfigFile(std::move(args));
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (tok_train->parsed()) return TokenizerTrain(tok, out);
    if (tok_encode->parsed()) return TokenizerEncode(tok, out);
    if (tok_stats->parsed()) return TokenizerStats(tok, out);
    if (vic_train->parsed()) return VictimTrain(vic, out);
    if (vic_score->parsed()) return VictimScore(vic, out);
    if (attack_run->parsed()) return Campaign(attack_flags, false, out, err);
    if (eval_run->parsed()) return Campaign(eval_flags, false, out, err);
    if (eval_sweep->parsed()) return Campaign(eval_flags, true, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  err << "error: no command given\n";
  return kExitUsage;
}

}  // namespace pieceattack::cli
