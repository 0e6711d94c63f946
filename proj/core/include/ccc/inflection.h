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

// Rule-table English morphology used when substituting into surface-form
// node text. Covers regular s/es/ies plurals, f/fe -> ves, o -> oes for a
// short list, irregular nouns, and nouns with identical plural forms.

#ifndef CCC_INFLECTION_H_
#define CCC_INFLECTION_H_

#include <string>
#include <string_view>

#include "ccc/parsed_node.h"

namespace ccc {

std::string Pluralize(std::string_view noun);

// Heuristic: known irregular plural, or a regular -s plural (but not -ss,
// -us, -is endings).
bool LooksPlural(std::string_view word);

// "a" or "an" for the word that follows, by initial sound.
std::string_view IndefiniteArticle(std::string_view next_word);

// Number=Plur in FEATS, else NNS/NNPS in XPOS; with neither column present
// falls back to comparing form and lemma.
bool IsPluralToken(const Token& token);

}  // namespace ccc

#endif  // CCC_INFLECTION_H_
