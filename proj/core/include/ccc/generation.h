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

// Triple construction by conceptualization: every candidate rewrite of a
// seed's head or tail becomes a new triple, which a scorer then accepts or
// rejects. Unlike negative sampling, expansion enumerates candidates
// deterministically instead of drawing them.

#ifndef CCC_GENERATION_H_
#define CCC_GENERATION_H_

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "ccc/concept_graph.h"
#include "ccc/conceptualizer.h"
#include "ccc/parsed_node.h"
#include "ccc/sampler.h"
#include "ccc/scorer.h"
#include "ccc/triple_store.h"

namespace ccc {

struct ExpansionLimits {
  std::size_t per_side_cap = 10;
  std::uint64_t min_frequency = 1;
};

struct ExpandedTriple {
  Triple triple;
  Triple seed;
  Side side = Side::kHead;
  SubstitutionCandidate candidate;
  // False when the triple already exists in the reference store.
  bool novel = true;
};

// Head-side candidates first, then tail-side. On each side candidates below
// min_frequency are dropped and the per_side_cap most frequent kept, in
// descending frequency (ties keep enumeration order). Either parse may be
// null. `known` is optional and only drives the novel flag.
std::vector<ExpandedTriple> ExpandSeed(const Triple& seed,
                                       const ParsedNode* head_parse,
                                       const ParsedNode* tail_parse,
                                       const ConceptGraph& graph,
                                       const ExpansionLimits& limits,
                                       const TripleStore* known = nullptr,
                                       const IdentifyOptions& options = {});

struct ScoredTriple {
  ExpandedTriple expanded;
  double score = 0;
};

// Scores `expanded` in order via ScoreBatch.
std::vector<ScoredTriple> ScoreExpansions(Scorer& scorer,
                                          std::vector<ExpandedTriple> expanded,
                                          unsigned max_in_flight = 1);

// Triples with score >= threshold, by descending score; ties keep input
// order. Throws InvalidArgument unless threshold is in [0, 1].
std::vector<ScoredTriple> AcceptByThreshold(std::vector<ScoredTriple> scored,
                                            double threshold);

// Provenance sidecar row, one JSON object per accepted triple.
std::string ProvenanceJsonLine(const ScoredTriple& s);

}  // namespace ccc

#endif  // CCC_GENERATION_H_
