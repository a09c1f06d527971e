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

#ifndef ARNER_TEXT_NORM_H_
#define ARNER_TEXT_NORM_H_

#include <set>
#include <string>
#include <string_view>

namespace arner {

// Codepoints deleted by normalization. The default set is the contiguous
// Arabic block U+064B..U+0652: the three tanween marks (fathatan, dammatan,
// kasratan) followed by fatha, damma, kasra, shadda and sukun.
//
// Superscript alef (U+0670) and tatweel (U+0640) are kept unless added.
class NormalizationConfig {
 public:
  NormalizationConfig();
  // Throws std::invalid_argument if any codepoint is not an Arabic
  // combining mark.
  explicit NormalizationConfig(std::set<char32_t> strip_set);

  static NormalizationConfig Default() { return NormalizationConfig(); }

  const std::set<char32_t>& strip_set() const { return strip_set_; }

 private:
  std::set<char32_t> strip_set_;
};

// True for codepoints Unicode classifies as Arabic nonspacing marks
// (U+0610..U+061A, U+064B..U+065F, U+0670, U+06D6..U+06DC, U+06DF..U+06E4,
// U+06E7..U+06E8, U+06EA..U+06ED).
bool IsArabicCombiningMark(char32_t c);

bool IsStrippedDiacritic(char32_t c, const NormalizationConfig& cfg);

std::u32string NormalizeText(std::u32string_view text,
                             const NormalizationConfig& cfg);

// UTF-8 in, UTF-8 out. Throws utf8::Utf8Error on malformed input.
std::string NormalizeUtf8(std::string_view text,
                          const NormalizationConfig& cfg);

}  // namespace arner

#endif  // ARNER_TEXT_NORM_H_
