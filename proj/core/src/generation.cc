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

#include "ccc/generation.h"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "ccc/errors.h"

namespace ccc {

std::vector<ExpandedTriple> ExpandSeed(const Triple& seed,
                                       const ParsedNode* head_parse,
                                       const ParsedNode* tail_parse,
                                       const ConceptGraph& graph,
                                       const ExpansionLimits& limits,
                                       const TripleStore* known,
                                       const IdentifyOptions& options) {
  std::vector<ExpandedTriple> out;
  for (Side side : {Side::kHead, Side::kTail}) {
    const ParsedNode* parse = side == Side::kHead ? head_parse : tail_parse;
    if (!parse) continue;
    std::vector<SubstitutionCandidate> candidates =
        IdentifyConceptualizations(*parse, graph, options);
    std::erase_if(candidates, [&](const SubstitutionCandidate& c) {
      return c.frequency < limits.min_frequency;
    });
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const SubstitutionCandidate& a,
                        const SubstitutionCandidate& b) {
                       return a.frequency > b.frequency;
                     });
    if (candidates.size() > limits.per_side_cap) {
      candidates.resize(limits.per_side_cap);
    }
    for (SubstitutionCandidate& c : candidates) {
      ExpandedTriple e;
      e.triple = seed;
      (side == Side::kHead ? e.triple.head : e.triple.tail) = c.new_text;
      e.seed = seed;
      e.side = side;
      e.novel = !(known && known->Contains(e.triple));
      e.candidate = std::move(c);
      out.push_back(std::move(e));
    }
  }
  return out;
}

std::vector<ScoredTriple> ScoreExpansions(Scorer& scorer,
                                          std::vector<ExpandedTriple> expanded,
                                          unsigned max_in_flight) {
  std::vector<Triple> triples;
  triples.reserve(expanded.size());
  for (const ExpandedTriple& e : expanded) triples.push_back(e.triple);
  std::vector<double> scores = ScoreBatch(scorer, triples, max_in_flight);
  std::vector<ScoredTriple> out;
  out.reserve(expanded.size());
  for (std::size_t i = 0; i < expanded.size(); ++i) {
    out.push_back({std::move(expanded[i]), scores[i]});
  }
  return out;
}

std::vector<ScoredTriple> AcceptByThreshold(std::vector<ScoredTriple> scored,
                                            double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw InvalidArgument("threshold must be in [0, 1]");
  }
  std::erase_if(scored, [&](const ScoredTriple& s) { return s.score < threshold; });
  std::stable_sort(scored.begin(), scored.end(),
                   [](const ScoredTriple& a, const ScoredTriple& b) {
                     return a.score > b.score;
                   });
  return scored;
}

std::string ProvenanceJsonLine(const ScoredTriple& s) {
  const ExpandedTriple& e = s.expanded;
  nlohmann::ordered_json j;
  j["head"] = e.triple.head;
  j["relation"] = e.triple.relation;
  j["tail"] = e.triple.tail;
  j["score"] = s.score;
  j["seed"] = {{"head", e.seed.head},
               {"relation", e.seed.relation},
               {"tail", e.seed.tail}};
  j["side"] = SideName(e.side);
  j["direction"] = DirectionName(e.candidate.direction);
  j["span"] = {e.candidate.span.left, e.candidate.span.right};
  j["original"] = e.candidate.original_phrase;
  j["replacement"] = e.candidate.replacement;
  j["frequency"] = e.candidate.frequency;
  j["novel"] = e.novel;
  return j.dump();
}

}  // namespace ccc
