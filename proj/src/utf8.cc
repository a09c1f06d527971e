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

#include "arner/utf8.h"

#include <cstdint>

namespace arner::utf8 {

std::u32string Decode(std::string_view bytes) {
  std::u32string out;
  out.reserve(bytes.size());
  size_t i = 0;
  while (i < bytes.size()) {
    const auto lead = static_cast<uint8_t>(bytes[i]);
    if (lead < 0x80) {
      out.push_back(lead);
      ++i;
      continue;
    }
    int extra = 0;
    char32_t cp = 0;
    char32_t min_cp = 0;
    if ((lead & 0xE0) == 0xC0) {
      extra = 1;
      cp = lead & 0x1F;
      min_cp = 0x80;
    } else if ((lead & 0xF0) == 0xE0) {
      extra = 2;
      cp = lead & 0x0F;
      min_cp = 0x800;
    } else if ((lead & 0xF8) == 0xF0) {
      extra = 3;
      cp = lead & 0x07;
      min_cp = 0x10000;
    } else {
      throw Utf8Error("invalid UTF-8 lead byte", i);
    }
    if (i + extra >= bytes.size()) {
      throw Utf8Error("truncated UTF-8 sequence", i);
    }
    for (int k = 1; k <= extra; ++k) {
      const auto cont = static_cast<uint8_t>(bytes[i + k]);
      if ((cont & 0xC0) != 0x80) {
        throw Utf8Error("invalid UTF-8 continuation byte", i + k);
      }
      cp = (cp << 6) | (cont & 0x3F);
    }
    if (cp < min_cp) throw Utf8Error("overlong UTF-8 encoding", i);
    if (cp > 0x10FFFF) throw Utf8Error("codepoint above U+10FFFF", i);
    if (cp >= 0xD800 && cp <= 0xDFFF) {
      throw Utf8Error("UTF-8 encoded surrogate", i);
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

void AppendCodepoint(char32_t c, std::string* out) {
  if (c < 0x80) {
    out->push_back(static_cast<char>(c));
  } else if (c < 0x800) {
    out->push_back(static_cast<char>(0xC0 | (c >> 6)));
    out->push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else if (c < 0x10000) {
    out->push_back(static_cast<char>(0xE0 | (c >> 12)));
    out->push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (c & 0x3F)));
  } else {
    out->push_back(static_cast<char>(0xF0 | (c >> 18)));
    out->push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
    out->push_back(static_cast<char>(0x80 | (c & 0x3F)));
  }
}

std::string Encode(std::u32string_view codepoints) {
  std::string out;
  out.reserve(codepoints.size() * 2);
  for (char32_t c : codepoints) AppendCodepoint(c, &out);
  return out;
}

bool IsValid(std::string_view bytes) {
  try {
    Decode(bytes);
    return true;
  } catch (const Utf8Error&) {
    return false;
  }
}

}  // namespace arner::utf8
