// Copyright 2026 The CCC Toolkit Authors.
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

#ifndef CCC_TEXT_H_
#define CCC_TEXT_H_

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace ccc {

// ASCII lowercase; bytes >= 0x80 are passed through so UTF-8 stays intact.
std::string ToLower(std::string_view s);

// Trims, collapses every whitespace run to a single space.
std::string CollapseWhitespace(std::string_view s);

// Lowercase + CollapseWhitespace. The key form of every concept phrase.
std::string NormalizePhrase(std::string_view s);

// Splits on runs of whitespace; never yields empty pieces.
std::vector<std::string_view> SplitWhitespace(std::string_view s);

// Splits on every occurrence of `sep`; keeps empty fields.
std::vector<std::string_view> SplitFields(std::string_view s, char sep);

std::string Join(const std::vector<std::string_view>& parts,
                 std::string_view sep);

// Removes every whitespace byte.
std::string StripWhitespace(std::string_view s);

// Transparent hash so string-keyed unordered containers can be probed with
// a string_view without allocating.
struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const {
    return std::hash<std::string_view>{}(s);
  }
};

inline bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace ccc

#endif  // CCC_TEXT_H_
