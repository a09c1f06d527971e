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

#include "arner/bioes.h"

#include <string>

namespace arner {

namespace {

constexpr std::array<std::string_view, kNumCategories> kCategoryNames = {
    "PER", "GPE", "LOC", "ORG", "TIM", "PRO", "MISC", "DIS", "GEO"};

char PrefixChar(Prefix p) {
  switch (p) {
    case Prefix::kBegin: return 'B';
    case Prefix::kInside: return 'I';
    case Prefix::kEnd: return 'E';
    case Prefix::kSingle: return 'S';
    case Prefix::kOutside: break;
  }
  return 'O';
}

}  // namespace

std::string_view CategoryName(Category c) {
  return kCategoryNames[static_cast<int>(c)];
}

std::optional<Category> ParseCategory(std::string_view s) {
  for (int i = 0; i < kNumCategories; ++i) {
    if (kCategoryNames[i] == s) return static_cast<Category>(i);
  }
  return std::nullopt;
}

TagId TagToId(Tag tag) {
  if (tag.is_outside()) return 0;
  return 1 + static_cast<int>(tag.category) * 4 +
         (static_cast<int>(tag.prefix) - 1);
}

Tag IdToTag(TagId id) {
  if (id < 0 || id >= kNumTags) {
    throw std::out_of_range("tag id " + std::to_string(id) +
                            " outside [0, 36]");
  }
  if (id == 0) return Tag::Outside();
  const int k = id - 1;
  return Tag::Of(static_cast<Prefix>(k % 4 + 1),
                 static_cast<Category>(k / 4));
}

std::string TagToString(Tag tag) {
  if (tag.is_outside()) return "O";
  std::string s(1, PrefixChar(tag.prefix));
  s += '-';
  s += CategoryName(tag.category);
  return s;
}

Tag ParseTag(std::string_view s) {
  if (s == "O") return Tag::Outside();
  if (s.size() < 3 || s[1] != '-') {
    throw TagParseError("malformed tag '" + std::string(s) + "'");
  }
  Prefix prefix;
  switch (s[0]) {
    case 'B': prefix = Prefix::kBegin; break;
    case 'I': prefix = Prefix::kInside; break;
    case 'E': prefix = Prefix::kEnd; break;
    case 'S': prefix = Prefix::kSingle; break;
    default:
      throw TagParseError("unknown prefix in tag '" + std::string(s) + "'");
  }
  auto category = ParseCategory(s.substr(2));
  if (!category) {
    throw TagParseError("unknown category in tag '" + std::string(s) + "'");
  }
  return Tag::Of(prefix, *category);
}

std::string TagOrderingFingerprint() {
  std::string out;
  for (TagId id = 0; id < kNumTags; ++id) {
    if (id) out += ',';
    out += TagToString(IdToTag(id));
  }
  return out;
}

std::string_view GrammarRuleName(GrammarRule rule) {
  switch (rule) {
    case GrammarRule::kInsideWithoutBegin: return "I without preceding B";
    case GrammarRule::kEndWithoutBegin: return "E without preceding B";
    case GrammarRule::kCategoryMismatch: return "category mismatch";
    case GrammarRule::kEntityNotContinued: return "entity not continued";
    case GrammarRule::kUnterminatedEntity: return "unterminated entity";
  }
  return "unknown";
}

std::string GrammarViolation::Describe() const {
  return "position " + std::to_string(position) + ": " +
         std::string(GrammarRuleName(rule));
}

// Two-state automaton: outside any entity, or inside an open entity of a
// known category.
std::optional<GrammarViolation> ValidateSequence(const std::vector<Tag>& tags) {
  std::optional<Category> open;
  for (int t = 0; t < static_cast<int>(tags.size()); ++t) {
    const Tag& tag = tags[t];
    const bool continues =
        tag.prefix == Prefix::kInside || tag.prefix == Prefix::kEnd;
    if (open) {
      if (!continues) {
        return GrammarViolation{t, GrammarRule::kEntityNotContinued};
      }
      if (tag.category != *open) {
        return GrammarViolation{t, GrammarRule::kCategoryMismatch};
      }
      if (tag.prefix == Prefix::kEnd) open.reset();
    } else {
      if (tag.prefix == Prefix::kInside) {
        return GrammarViolation{t, GrammarRule::kInsideWithoutBegin};
      }
      if (tag.prefix == Prefix::kEnd) {
        return GrammarViolation{t, GrammarRule::kEndWithoutBegin};
      }
      if (tag.prefix == Prefix::kBegin) open = tag.category;
    }
  }
  if (open) {
    return GrammarViolation{static_cast<int>(tags.size()) - 1,
                            GrammarRule::kUnterminatedEntity};
  }
  return std::nullopt;
}

std::vector<EntitySpan> DecodeSpans(const std::vector<Tag>& tags) {
  if (auto violation = ValidateSequence(tags)) {
    throw SpanError("invalid tag sequence at " + violation->Describe());
  }
  std::vector<EntitySpan> spans;
  int start = 0;
  for (int t = 0; t < static_cast<int>(tags.size()); ++t) {
    switch (tags[t].prefix) {
      case Prefix::kSingle:
        spans.push_back({t, t, tags[t].category});
        break;
      case Prefix::kBegin:
        start = t;
        break;
      case Prefix::kEnd:
        spans.push_back({start, t, tags[t].category});
        break;
      default:
        break;
    }
  }
  return spans;
}

std::vector<EntitySpan> DecodeSpansLenient(const std::vector<Tag>& tags) {
  if (!ValidateSequence(tags)) return DecodeSpans(tags);
  std::vector<EntitySpan> spans;
  const int n = static_cast<int>(tags.size());
  int t = 0;
  while (t < n) {
    if (tags[t].is_outside()) {
      ++t;
      continue;
    }
    const Category c = tags[t].category;
    int end = t;
    while (end + 1 < n && !tags[end + 1].is_outside() &&
           tags[end + 1].category == c) {
      ++end;
    }
    spans.push_back({t, end, c});
    t = end + 1;
  }
  return spans;
}

std::vector<Tag> EncodeSpans(const std::vector<EntitySpan>& spans, int length) {
  if (length < 0) throw SpanError("negative sequence length");
  std::vector<Tag> tags(length, Tag::Outside());
  int next_free = 0;
  for (const EntitySpan& s : spans) {
    if (s.start < 0 || s.end < s.start || s.end >= length) {
      throw SpanError("span [" + std::to_string(s.start) + ", " +
                      std::to_string(s.end) + "] out of range for length " +
                      std::to_string(length));
    }
    if (s.start < next_free) {
      throw SpanError("span starting at " + std::to_string(s.start) +
                      " overlaps or precedes the previous span");
    }
    if (s.start == s.end) {
      tags[s.start] = Tag::Of(Prefix::kSingle, s.category);
    } else {
      tags[s.start] = Tag::Of(Prefix::kBegin, s.category);
      for (int t = s.start + 1; t < s.end; ++t) {
        tags[t] = Tag::Of(Prefix::kInside, s.category);
      }
      tags[s.end] = Tag::Of(Prefix::kEnd, s.category);
    }
    next_free = s.end + 1;
  }
  return tags;
}

}  // namespace arner
