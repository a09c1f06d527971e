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

#include "arner/corpus.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include "arner/utf8.h"

namespace arner {

namespace fs = std::filesystem;

CorpusError::CorpusError(const std::string& file, int line,
                         const std::string& what)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
      file_(file),
      line_(line) {}

std::string LoadReport::Format() const {
  std::ostringstream os;
  for (const LoadIssue& issue : issues) {
    os << (issue.severity == LoadIssue::Severity::kError ? "error" : "warning")
       << ": " << issue.file << ":" << issue.line << ": " << issue.message
       << "\n";
  }
  os << "rows read: " << rows_read << ", sentences dropped: "
     << sentences_dropped << "\n";
  return os.str();
}

std::vector<std::string> SplitCsvRecord(std::string_view line) {
  std::vector<std::string> fields;
  std::string field;
  size_t i = 0;
  while (true) {
    field.clear();
    if (i < line.size() && line[i] == '"') {
      ++i;
      bool closed = false;
      while (i < line.size()) {
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            field.push_back('"');
            i += 2;
            continue;
          }
          closed = true;
          ++i;
          break;
        }
        field.push_back(line[i++]);
      }
      if (!closed) throw std::invalid_argument("unterminated quoted field");
      if (i < line.size() && line[i] != ',') {
        throw std::invalid_argument("unexpected character after quoted field");
      }
    } else {
      while (i < line.size() && line[i] != ',') field.push_back(line[i++]);
    }
    fields.push_back(field);
    if (i >= line.size()) break;
    ++i;  // comma
  }
  return fields;
}

namespace {

struct PendingSentence {
  TaggedSentence sentence;
  bool has_error = false;
};

class SentenceAssembler {
 public:
  SentenceAssembler(const std::string& file, LoadMode mode, Corpus* corpus)
      : file_(file), mode_(mode), corpus_(corpus) {}

  void AddRow(int line, const std::string& file_name,
              const std::string& sentence_id, std::string token, Tag tag,
              bool row_error) {
    if (!open_ || pending_.sentence.file_name != file_name ||
        pending_.sentence.sentence != sentence_id) {
      Flush();
      open_ = true;
      pending_ = PendingSentence{};
      pending_.sentence.file_name = file_name;
      pending_.sentence.sentence = sentence_id;
      pending_.sentence.source = file_;
      pending_.sentence.first_line = line;
    }
    if (row_error) {
      pending_.has_error = true;
      return;
    }
    pending_.sentence.tokens.push_back(std::move(token));
    pending_.sentence.tags.push_back(tag);
  }

  void Flush() {
    if (!open_) return;
    open_ = false;
    TaggedSentence& s = pending_.sentence;
    bool drop = pending_.has_error && mode_ == LoadMode::kStrict;
    if (auto violation = ValidateSequence(s.tags)) {
      const bool strict = mode_ == LoadMode::kStrict;
      corpus_->report.issues.push_back(
          {strict ? LoadIssue::Severity::kError : LoadIssue::Severity::kWarning,
           file_, s.first_line,
           "sentence (" + s.file_name + ", " + s.sentence +
               ") violates BIOES grammar at " + violation->Describe()});
      drop = drop || strict;
    }
    if (s.tokens.empty()) drop = true;
    if (drop) {
      ++corpus_->report.sentences_dropped;
      return;
    }
    corpus_->sentences.push_back(std::move(s));
  }

 private:
  std::string file_;
  LoadMode mode_;
  Corpus* corpus_;
  PendingSentence pending_;
  bool open_ = false;
};

void AppendCsv(std::string_view contents, const std::string& file,
               LoadMode mode, const NormalizationConfig& norm,
               Corpus* corpus) {
  if (!utf8::IsValid(contents)) {
    size_t offset = 0;
    try {
      utf8::Decode(contents);
    } catch (const utf8::Utf8Error& e) {
      offset = e.byte_offset();
    }
    const int line = 1 + static_cast<int>(std::count(
                             contents.begin(), contents.begin() + offset, '\n'));
    throw CorpusError(file, line, "invalid UTF-8");
  }
  if (contents.substr(0, 3) == "\xEF\xBB\xBF") contents.remove_prefix(3);

  SentenceAssembler assembler(file, mode, corpus);
  size_t pos = 0;
  int line_no = 0;
  bool saw_header = false;
  while (pos < contents.size()) {
    size_t nl = contents.find('\n', pos);
    if (nl == std::string_view::npos) nl = contents.size();
    std::string_view line = contents.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!saw_header) {
      if (line != kCorpusHeader) {
        throw CorpusError(file, line_no,
                          "missing header '" + std::string(kCorpusHeader) +
                              "'");
      }
      saw_header = true;
      continue;
    }
    if (line.empty()) continue;

    std::vector<std::string> fields;
    try {
      fields = SplitCsvRecord(line);
    } catch (const std::invalid_argument& e) {
      throw CorpusError(file, line_no, e.what());
    }
    if (fields.size() != 4) {
      throw CorpusError(file, line_no,
                        "expected 4 columns, found " +
                            std::to_string(fields.size()));
    }
    ++corpus->report.rows_read;

    bool row_error = false;
    auto issue = [&](LoadIssue::Severity sev, const std::string& msg) {
      corpus->report.issues.push_back({sev, file, line_no, msg});
    };
    const auto kError = LoadIssue::Severity::kError;
    const auto kWarning = LoadIssue::Severity::kWarning;

    const std::string& sid = fields[1];
    int parsed_id = 0;
    auto [ptr, ec] = std::from_chars(sid.data(), sid.data() + sid.size(),
                                     parsed_id);
    if (ec != std::errc() || ptr != sid.data() + sid.size()) {
      if (mode == LoadMode::kStrict) {
        issue(kError, "sentence id '" + sid + "' is not an integer");
        row_error = true;
      } else {
        issue(kWarning, "sentence id '" + sid + "' is not an integer");
      }
    }

    std::string token = NormalizeUtf8(fields[2], norm);
    if (token.empty()) {
      issue(mode == LoadMode::kStrict ? kError : kWarning,
            "empty word after normalization");
      row_error = true;
    }

    Tag tag;
    try {
      tag = ParseTag(fields[3]);
    } catch (const TagParseError& e) {
      if (mode == LoadMode::kStrict) {
        issue(kError, e.what());
        row_error = true;
      } else {
        issue(kWarning, std::string(e.what()) + "; coerced to O");
        tag = Tag::Outside();
      }
    }
    assembler.AddRow(line_no, fields[0], sid, std::move(token), tag,
                     row_error);
  }
  if (!saw_header) throw CorpusError(file, 1, "missing header");
  assembler.Flush();
}

std::string ReadFileBytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CorpusError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw CorpusError(path.string(), 0, "read failure");
  return ss.str();
}

}  // namespace

Corpus ParseCorpusCsv(std::string_view contents, const std::string& file_label,
                      LoadMode mode, const NormalizationConfig& norm) {
  Corpus corpus;
  AppendCsv(contents, file_label, mode, norm, &corpus);
  return corpus;
}

Corpus ReadCorpus(const fs::path& path, LoadMode mode,
                  const NormalizationConfig& norm) {
  std::vector<fs::path> files;
  std::error_code ec;
  if (fs::is_directory(path, ec)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        files.push_back(entry.path());
      }
    }
    std::sort(files.begin(), files.end());
  } else if (fs::is_regular_file(path, ec)) {
    files.push_back(path);
  } else {
    throw CorpusError(path.string(), 0, "no such file or directory");
  }
  Corpus corpus;
  for (const fs::path& file : files) {
    AppendCsv(ReadFileBytes(file), file.string(), mode, norm, &corpus);
  }
  return corpus;
}

std::vector<std::pair<std::string, fs::path>> ResolveSplits(
    const fs::path& root, const std::string& fallback_name) {
  std::vector<std::pair<std::string, fs::path>> out;
  for (const char* name : {"train", "valid", "test"}) {
    std::error_code ec;
    if (fs::is_directory(root / name, ec)) out.emplace_back(name, root / name);
  }
  if (out.empty()) out.emplace_back(fallback_name, root);
  return out;
}

Vocabulary::Vocabulary() {
  id_to_token_ = {std::string(kPadToken), std::string(kUnkToken)};
  token_to_id_[std::string(kPadToken)] = kPad;
  token_to_id_[std::string(kUnkToken)] = kUnk;
}

Vocabulary Vocabulary::FromTokens(std::vector<std::string> tokens) {
  Vocabulary v;
  for (std::string& t : tokens) {
    if (!v.token_to_id_.emplace(t, v.size()).second) {
      throw std::invalid_argument("duplicate vocabulary token '" + t + "'");
    }
    v.id_to_token_.push_back(std::move(t));
  }
  return v;
}

int Vocabulary::Lookup(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::Token(int id) const {
  return id_to_token_.at(static_cast<size_t>(id));
}

std::vector<std::string> Vocabulary::NonReservedTokens() const {
  return {id_to_token_.begin() + 2, id_to_token_.end()};
}

Vocabulary BuildVocab(const std::vector<TaggedSentence>& sentences,
                      int min_count) {
  if (min_count < 1) throw std::invalid_argument("min_count must be >= 1");
  std::map<std::string, int64_t> counts;
  for (const TaggedSentence& s : sentences) {
    for (const std::string& t : s.tokens) ++counts[t];
  }
  std::vector<std::pair<std::string, int64_t>> kept;
  for (auto& [token, n] : counts) {
    if (n >= min_count) kept.emplace_back(token, n);
  }
  // std::string compares bytes as unsigned char; UTF-8 byte order equals
  // codepoint order.
  std::stable_sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [token, n] : kept) tokens.push_back(token);
  return Vocabulary::FromTokens(std::move(tokens));
}

int EncodedSentence::real_length() const {
  return static_cast<int>(std::count(mask.begin(), mask.end(), 1));
}

EncodedSentence EncodeSentence(const TaggedSentence& sentence,
                               const Vocabulary& vocab, int max_len) {
  if (max_len < 1) throw std::invalid_argument("max_len must be >= 1");
  EncodedSentence out;
  out.token_ids.assign(max_len, Vocabulary::kPad);
  out.tag_ids.assign(max_len, kPadTagId);
  out.mask.assign(max_len, 0);
  const int n = static_cast<int>(sentence.tokens.size());
  out.truncated = n > max_len;
  for (int t = 0; t < std::min(n, max_len); ++t) {
    out.token_ids[t] = vocab.Lookup(sentence.tokens[t]);
    out.tag_ids[t] = TagToId(sentence.tags[t]);
    out.mask[t] = 1;
  }
  return out;
}

int64_t SplitStats::entity_tokens() const {
  int64_t sum = 0;
  for (int64_t c : category_tokens) sum += c;
  return sum;
}

CorpusStats ComputeCorpusStats(const std::vector<NamedSplit>& splits) {
  CorpusStats stats;
  for (const auto& [name, sentences] : splits) {
    SplitStats s;
    std::set<std::string> files;
    for (const TaggedSentence& sentence : sentences) {
      files.insert(sentence.file_name);
      ++s.sentences;
      s.words += static_cast<int64_t>(sentence.tokens.size());
      for (const Tag& tag : sentence.tags) {
        if (!tag.is_outside()) {
          ++s.category_tokens[static_cast<int>(tag.category)];
        }
      }
    }
    s.files = static_cast<int64_t>(files.size());
    stats.total.files += s.files;
    stats.total.sentences += s.sentences;
    stats.total.words += s.words;
    for (int c = 0; c < kNumCategories; ++c) {
      stats.total.category_tokens[c] += s.category_tokens[c];
    }
    stats.splits.emplace_back(name, s);
  }
  return stats;
}

std::string FormatCorpusStats(const CorpusStats& stats) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "split" << std::right << std::setw(8)
     << "files" << std::setw(11) << "sentences" << std::setw(9) << "words"
     << "\n";
  auto row1 = [&](const std::string& name, const SplitStats& s) {
    os << std::left << std::setw(10) << name << std::right << std::setw(8)
       << s.files << std::setw(11) << s.sentences << std::setw(9) << s.words
       << "\n";
  };
  for (const auto& [name, s] : stats.splits) row1(name, s);
  row1("total", stats.total);

  os << "\n" << std::left << std::setw(10) << "split" << std::right;
  for (Category c : kAllCategories) os << std::setw(6) << CategoryName(c);
  os << "\n";
  auto row2 = [&](const std::string& name, const SplitStats& s) {
    os << std::left << std::setw(10) << name << std::right;
    for (int64_t n : s.category_tokens) os << std::setw(6) << n;
    os << "\n";
  };
  for (const auto& [name, s] : stats.splits) row2(name, s);
  row2("total", stats.total);
  return os.str();
}

}  // namespace arner
