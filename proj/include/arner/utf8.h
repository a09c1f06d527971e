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

#ifndef ARNER_UTF8_H_
#define ARNER_UTF8_H_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace arner::utf8 {

// Raised for malformed input: bad lead/continuation bytes, overlong forms,
// surrogates, codepoints above U+10FFFF, or a truncated trailing sequence.
class Utf8Error : public std::runtime_error {
 public:
  Utf8Error(const std::string& what, size_t byte_offset)
      : std::runtime_error(what), byte_offset_(byte_offset) {}
  size_t byte_offset() const { return byte_offset_; }

 private:
  size_t byte_offset_;
};

std::u32string Decode(std::string_view bytes);
std::string Encode(std::u32string_view codepoints);
void AppendCodepoint(char32_t c, std::string* out);
bool IsValid(std::string_view bytes);

}  // namespace arner::utf8

#endif  // ARNER_UTF8_H_
