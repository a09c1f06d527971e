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

#ifndef ARNER_CORPUS_H_
#define ARNER_CORPUS_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "arner/bioes.h"
#include "arner/text_norm.h"

namespace arner {

// Header every corpus CSV must start with.
inline constexpr std::string_view kCorpusHeader = "file_name,sentence,word,tag";

struct TaggedSentence {
  std::string file_name;
  std::string sentence;  // sentence id as written in the file
  std::vector<std::string> tokens;  // normalized UTF-8
  std::vector<Tag> tags;
  std::string source;  // CSV path the rows came from
  int first_line = 0;  // 1-based line of the first row
};

enum class LoadMode {
  kStrict,   // drop sentences with bad rows or invalid tag grammar
  kLenient,  // coerce unknown tags to O; keep everything, with warnings
};

struct LoadIssue {
  enum class Severity { kError, kWarning };
  Severity severity = Severity::kError;
  std::string file;
  int line = 0;
  std::string message;
};

struct LoadReport {
  std::vector<LoadIssue> issues;
  int64_t rows_read = 0;
  int64_t sentences_dropped = 0;

  bool clean() const { return issues.empty(); }
  std::string Format() const;
};

struct Corpus {
  std::vector<TaggedSentence> sentences;
  LoadReport report;
};

// Unrecoverable input problem: unreadable file, missing header, wrong column
// count, malformed quoting or invalid UTF-8.
class CorpusError : public std::runtime_error {
 public:
  CorpusError(const std::string& file, int line, const std::string& what);
  const std::string& file() const { return file_; }
  int line() const { return line_; }

 private:
  std::string file_;
  int line_;
};

// Splits one CSV record (no trailing newline) into fields. Supports
// double-quoted fields with "" escapes. Throws std::invalid_argument on an
// unterminated quote or stray characters after a closing quote.
std::vector<std::string> SplitCsvRecord(std::string_view line);

Corpus ParseCorpusCsv(std::string_view contents, const std::string& file_label,
                      LoadMode mode = LoadMode::kStrict,
                      const NormalizationConfig& norm = {});

// `path` is a single CSV file or a directory whose *.csv files are read in
// sorted path order.
Corpus ReadCorpus(const std::filesystem::path& path,
                  LoadMode mode = LoadMode::kStrict,
                  const NormalizationConfig& norm = {});

// If `root` has any of train/, valid/, test/ subdirectories, returns those
// that exist in that order. Otherwise returns {fallback_name, root}.
std::vector<std::pair<std::string, std::filesystem::path>> ResolveSplits(
    const std::filesystem::path& root, const std::string& fallback_name);

class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr std::string_view kPadToken = "<pad>";
  static constexpr std::string_view kUnkToken = "<unk>";

  Vocabulary();
  // `tokens` lists non-reserved tokens for ids 2, 3, ... Throws
  // std::invalid_argument on duplicates.
  static Vocabulary FromTokens(std::vector<std::string> tokens);

  int Lookup(std::string_view token) const;
  const std::string& Token(int id) const;
  int size() const { return static_cast<int>(id_to_token_.size()); }
  // Non-reserved tokens in id order.
  std::vector<std::string> NonReservedTokens() const;

 private:
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, int> token_to_id_;
};

// Ids ordered by descending frequency, ties by codepoint order.
Vocabulary BuildVocab(const std::vector<TaggedSentence>& sentences,
                      int min_count = 1);

// Tag id carried by padded positions; never a valid class.
inline constexpr int kPadTagId = -1;

struct EncodedSentence {
  std::vector<int> token_ids;
  std::vector<int> tag_ids;
  std::vector<uint8_t> mask;
  bool truncated = false;

  int real_length() const;
};

EncodedSentence EncodeSentence(const TaggedSentence& sentence,
                               const Vocabulary& vocab, int max_len);

struct SplitStats {
  int64_t files = 0;
  int64_t sentences = 0;
  int64_t words = 0;
  std::array<int64_t, kNumCategories> category_tokens{};

  int64_t entity_tokens() const;
};

struct CorpusStats {
  std::vector<std::pair<std::string, SplitStats>> splits;
  SplitStats total;
};

using NamedSplit = std::pair<std::string, std::vector<TaggedSentence>>;

CorpusStats ComputeCorpusStats(const std::vector<NamedSplit>& splits);

// Two plain-text tables: files/sentences/words per split, then entity-token
// counts per category per split.
std::string FormatCorpusStats(const CorpusStats& stats);

}  // namespace arner

#endif  // ARNER_CORPUS_H_
