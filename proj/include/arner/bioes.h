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

#ifndef ARNER_BIOES_H_
#define ARNER_BIOES_H_

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace arner {

// The nine entity categories, in the fixed order used for tag ids.
enum class Category : int { PER, GPE, LOC, ORG, TIM, PRO, MISC, DIS, GEO };
inline constexpr int kNumCategories = 9;
inline constexpr std::array<Category, kNumCategories> kAllCategories = {
    Category::PER, Category::GPE, Category::LOC, Category::ORG, Category::TIM,
    Category::PRO, Category::MISC, Category::DIS, Category::GEO};

enum class Prefix : int { kOutside, kBegin, kInside, kEnd, kSingle };

inline constexpr int kNumTags = kNumCategories * 4 + 1;  // 37

using TagId = int;

struct Tag {
  Prefix prefix = Prefix::kOutside;
  Category category = Category::PER;  // ignored when prefix is kOutside

  static constexpr Tag Outside() { return Tag{}; }
  static constexpr Tag Of(Prefix p, Category c) { return Tag{p, c}; }

  bool is_outside() const { return prefix == Prefix::kOutside; }

  friend bool operator==(const Tag& a, const Tag& b) {
    if (a.prefix != b.prefix) return false;
    return a.prefix == Prefix::kOutside || a.category == b.category;
  }
};

struct EntitySpan {
  int start = 0;  // inclusive
  int end = 0;    // inclusive
  Category category = Category::PER;

  friend bool operator==(const EntitySpan&, const EntitySpan&) = default;
};

class TagParseError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::string_view CategoryName(Category c);
std::optional<Category> ParseCategory(std::string_view s);

// Id 0 is "O"; then each category in declaration order contributes
// B, I, E, S consecutively, so "B-PER" is 1 and "S-GEO" is 36.
TagId TagToId(Tag tag);
// Throws std::out_of_range for ids outside [0, 36].
Tag IdToTag(TagId id);

std::string TagToString(Tag tag);
// Throws TagParseError on unknown prefix, unknown category or bad separator.
Tag ParseTag(std::string_view s);

// Comma-joined tag strings in id order; identifies the label space a model
// was trained against.
std::string TagOrderingFingerprint();

enum class GrammarRule {
  kInsideWithoutBegin,   // I-X not preceded by B-X or I-X
  kEndWithoutBegin,      // E-X not preceded by B-X or I-X
  kCategoryMismatch,     // I-Y/E-Y following B-X/I-X with X != Y
  kEntityNotContinued,   // B-X/I-X followed by O, S-*, or B-*
  kUnterminatedEntity,   // sequence ends in B-X or I-X
};

std::string_view GrammarRuleName(GrammarRule rule);

struct GrammarViolation {
  int position = 0;
  GrammarRule rule = GrammarRule::kInsideWithoutBegin;

  std::string Describe() const;
};

// Returns the first violation, or nullopt when the sequence is well formed.
// A violation is reported at the position whose tag completes an illegal
// transition; an unterminated trailing entity is reported at the last
// position.
std::optional<GrammarViolation> ValidateSequence(const std::vector<Tag>& tags);

class SpanError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Throws SpanError if the sequence is not well formed.
std::vector<EntitySpan> DecodeSpans(const std::vector<Tag>& tags);

// Best-effort decoding for model output. Well-formed sequences decode as in
// DecodeSpans; otherwise every maximal run of non-O tags sharing a category
// becomes one span.
std::vector<EntitySpan> DecodeSpansLenient(const std::vector<Tag>& tags);

// Throws SpanError on overlapping, unsorted or out-of-range spans.
std::vector<Tag> EncodeSpans(const std::vector<EntitySpan>& spans, int length);

}  // namespace arner

#endif  // ARNER_BIOES_H_
