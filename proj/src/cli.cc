// Copyright 2026 The arner Authors.
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

#include "arner/cli.h"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "arner/bioes.h"
#include "arner/checkpoint.h"
#include "arner/corpus.h"
#include "arner/evaluation.h"
#include "arner/model.h"
#include "arner/text_norm.h"
#include "arner/training.h"
#include "arner/utf8.h"

namespace arner::cli {

namespace {

namespace fs = std::filesystem;

class CliError : public std::runtime_error {
 public:
  CliError(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

std::string ReadAll(const std::string& path, std::istream& fallback) {
  if (path.empty()) {
    std::ostringstream ss;
    ss << fallback.rdbuf();
    return ss.str();
  }
  std::ifstream f(path, std::ios::binary);
  if (!f) throw CliError(kIoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> SplitWhitespace(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

std::optional<CellKind> OptionalCell(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return ParseCellKind(s);
}

std::vector<TaggedSentence> LoadSplit(const std::string& data,
                                      const std::string& split,
                                      LoadMode mode, std::ostream& err) {
  for (const auto& [name, path] : ResolveSplits(data, split)) {
    if (name != split) continue;
    Corpus corpus = ReadCorpus(path, mode);
    if (!corpus.report.clean()) err << corpus.report.Format();
    return std::move(corpus.sentences);
  }
  throw CliError(kIoError, "no '" + split + "' split under '" + data + "'");
}

struct Options {
  std::string input;
  std::string data;
  std::string out;
  std::string ckpt;
  std::string split = "valid";
  std::string cell;
  std::string log;
  bool lenient = false;
  bool no_relu_head = false;
  int iterations = 500;
  double lr = 0.01;
  int hidden = 50;
  int embed = 50;
  int batch = 8;
  uint64_t seed = 0;
  int max_len = 0;
  int min_count = 1;
  int eval_every = 50;
};

int DoNormalize(const Options& o, std::istream& in, std::ostream& out) {
  out << NormalizeUtf8(ReadAll(o.input, in), NormalizationConfig::Default());
  return kOk;
}

int DoValidate(const Options& o, std::ostream& out) {
  bool clean = true;
  for (const auto& [name, path] : ResolveSplits(o.data, "all")) {
    Corpus corpus = ReadCorpus(path, LoadMode::kStrict);
    out << "[" << name << "] " << corpus.sentences.size()
        << " valid sentences\n"
        << corpus.report.Format();
    clean = clean && corpus.report.clean();
  }
  out << (clean ? "corpus is clean\n" : "corpus has problems\n");
  return clean ? kOk : kValidationFailed;
}

int DoStats(const Options& o, std::ostream& out, std::ostream& err) {
  std::vector<NamedSplit> splits;
  const LoadMode mode = o.lenient ? LoadMode::kLenient : LoadMode::kStrict;
  for (const auto& [name, path] : ResolveSplits(o.data, "all")) {
    Corpus corpus = ReadCorpus(path, mode);
    if (!corpus.report.clean()) err << corpus.report.Format();
    splits.emplace_back(name, std::move(corpus.sentences));
  }
  out << FormatCorpusStats(ComputeCorpusStats(splits));
  return kOk;
}

int DoTrain(const Options& o, std::ostream& out, std::ostream& err) {
  const LoadMode mode = o.lenient ? LoadMode::kLenient : LoadMode::kStrict;
  std::vector<TaggedSentence> train;
  std::vector<TaggedSentence> valid;
  for (const auto& [name, path] : ResolveSplits(o.data, "train")) {
    Corpus corpus = ReadCorpus(path, mode);
    if (!corpus.report.clean()) err << corpus.report.Format();
    if (name == "train") train = std::move(corpus.sentences);
    if (name == "valid") valid = std::move(corpus.sentences);
  }
  if (train.empty()) {
    throw CliError(kFormatError, "no usable training sentences under '" +
                                     o.data + "'");
  }

  ModelConfig model;
  try {
    model.cell = ParseCellKind(o.cell);
  } catch (const std::invalid_argument& e) {
    throw CliError(kUsage, e.what());
  }
  model.embed_dim = o.embed;
  model.hidden_dim = o.hidden;
  model.num_classes = kNumTags;
  model.seed = o.seed;
  model.relu_head = !o.no_relu_head;

  TrainConfig cfg;
  cfg.adam.learning_rate = o.lr;
  cfg.iterations = o.iterations;
  cfg.batch_size = o.batch;
  cfg.max_len = o.max_len;
  cfg.min_count = o.min_count;
  cfg.seed = o.seed;
  cfg.eval_every = o.eval_every;
  try {
    cfg.Validate();
    model.vocab_size = 2;
    model.Validate();
  } catch (const std::invalid_argument& e) {
    throw CliError(kUsage, e.what());
  }

  const std::string log_path = o.log.empty() ? o.out + ".metrics" : o.log;
  std::ofstream log(log_path, std::ios::trunc);
  if (!log) throw CliError(kIoError, "cannot open '" + log_path + "'");
  auto on_record = [&](const MetricRecord& r) {
    log << r.Format() << "\n";
    if (r.split == "valid") out << r.Format() << "\n";
  };

  TrainResult result;
  try {
    result = Train(train, valid, model, cfg, on_record);
  } catch (const TrainingAborted& e) {
    SaveCheckpoint(e.last_good().checkpoint, o.out);
    throw CliError(kNumericError,
                   std::string(e.what()) + "; last good checkpoint written to '" +
                       o.out + "'");
  }
  SaveCheckpoint(result.checkpoint, o.out);
  const MetricRecord& last = result.log.back();
  out << "trained " << CellKindName(model.cell) << " for " << cfg.iterations
      << " iterations, " << CountParams(result.checkpoint.config())
      << " parameters, vocabulary " << result.checkpoint.vocab.size() << "\n"
      << "last record: " << last.Format() << "\n"
      << "checkpoint: " << o.out << "\nmetric log: " << log_path << "\n";
  return kOk;
}

int DoEval(const Options& o, std::ostream& out, std::ostream& err) {
  const Checkpoint ckpt = LoadCheckpoint(o.ckpt, OptionalCell(o.cell));
  const LoadMode mode = o.lenient ? LoadMode::kLenient : LoadMode::kStrict;
  const std::vector<TaggedSentence> split = LoadSplit(o.data, o.split, mode, err);
  if (split.empty()) {
    throw CliError(kFormatError, "split '" + o.split + "' has no sentences");
  }
  out << "split: " << o.split << " (" << split.size() << " sentences)\n"
      << Evaluate(ckpt, split).Format();
  return kOk;
}

int DoPredict(const Options& o, std::istream& in, std::ostream& out) {
  const Checkpoint ckpt = LoadCheckpoint(o.ckpt, OptionalCell(o.cell));
  std::istringstream lines(ReadAll(o.input, in));
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::vector<std::string> tokens = SplitWhitespace(line);
    if (tokens.empty()) continue;
    const std::vector<Tag> tags = PredictTags(ckpt, tokens);
    for (size_t i = 0; i < tokens.size(); ++i) {
      out << tokens[i] << '\t' << TagToString(tags[i]) << '\n';
    }
    out << '\n';
  }
  return kOk;
}

}  // namespace

int Run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
  CLI::App app{"BIOES named-entity tagging toolkit", "arner"};
  app.require_subcommand(1);
  Options o;

  auto* normalize = app.add_subcommand(
      "normalize", "Strip tashkil and tanween from UTF-8 text");
  normalize->add_option("--input", o.input, "Input file (default: stdin)");

  auto* validate = app.add_subcommand(
      "validate", "Strict-load a corpus and print the load report");
  validate->add_option("--data", o.data, "Corpus directory or CSV file")
      ->required();

  auto* stats = app.add_subcommand("stats", "Print corpus statistics");
  stats->add_option("--data", o.data, "Corpus directory or CSV file")
      ->required();
  stats->add_flag("--lenient", o.lenient, "Coerce unknown tags to O");

  auto* train = app.add_subcommand("train", "Train a tagger");
  train->add_option("--data", o.data, "Corpus directory")->required();
  train->add_option("--cell", o.cell, "Recurrent cell")
      ->required()
      ->check(CLI::IsMember({"lstm", "gru"}));
  train->add_option("--out", o.out, "Checkpoint path")->required();
  train->add_option("--iterations", o.iterations, "Optimizer steps")
      ->capture_default_str();
  train->add_option("--lr", o.lr, "Adam learning rate")->capture_default_str();
  train->add_option("--hidden", o.hidden, "Hidden units")->capture_default_str();
  train->add_option("--embed", o.embed, "Embedding size")->capture_default_str();
  train->add_option("--batch", o.batch, "Sentences per batch")
      ->capture_default_str();
  train->add_option("--seed", o.seed, "Initialization and shuffle seed")
      ->capture_default_str();
  train->add_option("--max-len", o.max_len,
                    "Truncate training sentences (0: longest)")
      ->capture_default_str();
  train->add_option("--min-count", o.min_count, "Vocabulary frequency cutoff")
      ->capture_default_str();
  train->add_option("--eval-every", o.eval_every,
                    "Validation interval in steps (0: never)")
      ->capture_default_str();
  train->add_option("--log", o.log, "Metric log path (default: <out>.metrics)");
  train->add_flag("--no-relu-head", o.no_relu_head,
                  "Skip the ReLU before LogSoftmax");
  train->add_flag("--lenient", o.lenient, "Coerce unknown tags to O");

  auto* eval = app.add_subcommand("eval", "Score a checkpoint on a split");
  eval->add_option("--ckpt", o.ckpt, "Checkpoint path")->required();
  eval->add_option("--data", o.data, "Corpus directory")->required();
  eval->add_option("--split", o.split, "Split to score")
      ->check(CLI::IsMember({"train", "valid", "test"}))
      ->capture_default_str();
  eval->add_option("--cell", o.cell, "Require this cell kind")
      ->check(CLI::IsMember({"lstm", "gru"}));
  eval->add_flag("--lenient", o.lenient, "Coerce unknown tags to O");

  auto* predict = app.add_subcommand(
      "predict", "Tag whitespace-tokenized sentences, one per line");
  predict->add_option("--ckpt", o.ckpt, "Checkpoint path")->required();
  predict->add_option("--input", o.input, "Input file (default: stdin)");
  predict->add_option("--cell", o.cell, "Require this cell kind")
      ->check(CLI::IsMember({"lstm", "gru"}));

  std::vector<std::string> argv_storage = {"arner"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*normalize) return DoNormalize(o, in, out);
    if (*validate) return DoValidate(o, out);
    if (*stats) return DoStats(o, out, err);
    if (*train) return DoTrain(o, out, err);
    if (*eval) return DoEval(o, out, err);
    if (*predict) return DoPredict(o, in, out);
  } catch (const CliError& e) {
    err << "error: " << e.what() << "\n";
    return e.code();
  } catch (const CorpusError& e) {
    err << "error: " << e.what() << "\n";
    return e.line() == 0 ? kIoError : kFormatError;
  } catch (const utf8::Utf8Error& e) {
    err << "error: " << e.what() << " at byte " << e.byte_offset() << "\n";
    return kFormatError;
  } catch (const CheckpointError& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case CheckpointError::Kind::kIo: return kIoError;
      case CheckpointError::Kind::kConfigMismatch: return kConfigMismatch;
      default: return kFormatError;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace arner::cli
