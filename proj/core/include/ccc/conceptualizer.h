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

// Entity identification and substitution over parsed node text.
//
// Every noun or proper noun k roots a family of candidate entity phrases:
// all contiguous token ranges [l, r] with L <= l <= k <= r <= R, where
// [L, R] are the bounds of k's dependency subtree. Each phrase is looked up
// in the concept graph in both directions, and every hit yields the node
// text with tokens l..r replaced (the tokens after r are kept). A phrase
// whose head word is inflected is also looked up with that word's lemma.

#ifndef CCC_CONCEPTUALIZER_H_
#define CCC_CONCEPTUALIZER_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ccc/concept_graph.h"
#include "ccc/parsed_node.h"

namespace ccc {

enum class RepairMode {
  kLemmatized,  // insert replacement verbatim
  kSurface,     // inflect number and fix the indefinite article
};

struct SubstitutionCandidate {
  std::string new_text;
  TokenSpan span;
  int root = 0;                   // entity root token k
  std::string original_phrase;    // surface text of tokens l..r
  std::string replacement;        // concept-graph phrase
  IsaDirection direction = IsaDirection::kAbstraction;
  std::uint64_t frequency = 0;

  bool operator==(const SubstitutionCandidate&) const = default;
};

struct EntitySpan {
  int root = 0;
  TokenSpan span;
};

// Every (root, span) probed for a node, in (k, l, r) order. For a root k
// with subtree bounds [L, R] there are (k - L + 1) * (R - k + 1) of them.
std::vector<EntitySpan> EnumerateEntitySpans(const ParsedNode& node);

struct IdentifyOptions {
  // Unset: lemmatized nodes use kLemmatized, others kSurface.
  std::optional<RepairMode> mode;
};

// Candidates in (k, l, r, direction, graph rank) order. Substitutions that
// reproduce the original phrase or node are dropped; candidates with equal
// new_text are merged into the first one's slot, keeping the fields of the
// highest-frequency contributor.
std::vector<SubstitutionCandidate> IdentifyConceptualizations(
    const ParsedNode& node, const ConceptGraph& graph,
    const IdentifyOptions& options = {});

// Node text with tokens span.left..span.right replaced by `replacement`.
// In surface mode the replacement's last word is pluralized when the
// replaced head noun is plural, a directly preceding "a"/"an" is re-chosen
// by the replacement's initial sound, that article is dropped when the
// replacement was pluralized, and a sentence-initial capital is carried
// over.
std::string RepairGrammar(const ParsedNode& node, TokenSpan span,
                          std::string_view replacement, RepairMode mode);

// Candidate dump row:
// node_id \t l \t r \t direction \t original \t replacement \t frequency \t new_text
void WriteCandidateRow(std::ostream& out, std::string_view node_id,
                       const SubstitutionCandidate& c);

}  // namespace ccc

#endif  // CCC_CONCEPTUALIZER_H_
