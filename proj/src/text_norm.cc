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

#include "arner/text_norm.h"

#include <stdexcept>

#include "arner/utf8.h"

namespace arner {

namespace {

constexpr char32_t kFathatan = 0x064B;
constexpr char32_t kSukun = 0x0652;

}  // namespace

NormalizationConfig::NormalizationConfig() {
  for (char32_t c = kFathatan; c <= kSukun; ++c) strip_set_.insert(c);
}

NormalizationConfig::NormalizationConfig(std::set<char32_t> strip_set)
    : strip_set_(std::move(strip_set)) {
  for (char32_t c : strip_set_) {
    if (!IsArabicCombiningMark(c)) {
      throw std::invalid_argument(
          "strip set may only contain Arabic combining marks");
    }
  }
}

bool IsArabicCombiningMark(char32_t c) {
  return (c >= 0x0610 && c <= 0x061A) || (c >= 0x064B && c <= 0x065F) ||
         c == 0x0670 || (c >= 0x06D6 && c <= 0x06DC) ||
         (c >= 0x06DF && c <= 0x06E4) || (c >= 0x06E7 && c <= 0x06E8) ||
         (c >= 0x06EA && c <= 0x06ED);
}

bool IsStrippedDiacritic(char32_t c, const NormalizationConfig& cfg) {
  return cfg.strip_set().count(c) != 0;
}

std::u32string NormalizeText(std::u32string_view text,
                             const NormalizationConfig& cfg) {
  std::u32string out;
  out.reserve(text.size());
  for (char32_t c : text) {
    if (!IsStrippedDiacritic(c, cfg)) out.push_back(c);
  }
  return out;
}

std::string NormalizeUtf8(std::string_view text,
                          const NormalizationConfig& cfg) {
  return utf8::Encode(NormalizeText(utf8::Decode(text), cfg));
}

}  // namespace arner
