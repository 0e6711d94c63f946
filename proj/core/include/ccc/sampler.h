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

// Negative sampling for triple classification.
//
// NS replaces the head or the tail (each with probability 0.5) by a random
// existing node; in constrained mode heads come from the head set and tails
// from the tails of the same relation. EC replaces one side by one of its
// conceptualized rewrites, drawn with probability proportional to the
// rewrite's IsA frequency. Every emitted negative is checked against the
// full positive store (filtered setting).

#ifndef CCC_SAMPLER_H_
#define CCC_SAMPLER_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "ccc/concept_graph.h"
#include "ccc/conceptualizer.h"
#include "ccc/parsed_node.h"
#include "ccc/rng.h"
#include "ccc/triple_store.h"

namespace ccc {

enum class Side { kHead, kTail };
enum class ExampleSource { kPositive, kNs, kEc };

std::string_view SideName(Side side);
std::string_view SourceName(ExampleSource source);

inline constexpr std::array<double, 3> kEcRatioPresets = {0.5, 0.75, 0.875};

struct SamplerConfig {
  // Share of negatives built by EC; the rest use NS.
  double ec_ratio = 0.5;
  double head_probability = 0.5;
  bool constrained_ns = true;
  std::uint64_t seed = 0;
  std::uint32_t max_retries = 10;
  // EC on a triple with no conceptualizable side: skip instead of falling
  // back to NS. Used for EC dev/test sets.
  bool strict_ec = false;
  // Emit a positive even when its negative was skipped.
  bool keep_unpaired_positives = false;
  unsigned workers = 1;
};

// Throws InvalidArgument when a field is out of range.
void Validate(const SamplerConfig& config);

struct Provenance {
  Side side = Side::kHead;
  std::string original_node;
  std::string replacement;  // new node text
  std::string replaced_phrase;  // EC only: entity phrase that was replaced
  std::string concept_phrase;   // EC only: graph phrase substituted in
  std::uint64_t frequency = 0;  // EC only
  std::uint64_t draw = 0;       // index drawn from the pool or candidate list
  std::uint32_t attempts = 1;
  bool side_fallback = false;   // EC used the other side
  bool ns_fallback = false;     // EC impossible, NS used instead

  bool operator==(const Provenance&) const = default;
};

struct Corruption {
  Triple triple;
  Provenance provenance;
};

struct LabeledExample {
  Triple triple;
  int label = 1;
  ExampleSource source = ExampleSource::kPositive;
  std::optional<Provenance> provenance;

  bool operator==(const LabeledExample&) const = default;
};

// Index k with probability weights[k] / sum(weights). Weights must be
// positive.
std::size_t SampleCategorical(std::span<const std::uint64_t> weights, Rng& rng);

// NS corruption. nullopt is the skip signal: the pool has no node other
// than the original, or max_retries draws all hit the original.
std::optional<Corruption> CorruptNs(const Triple& triple,
                                    const TripleStore& store,
                                    const SamplerConfig& config, Rng& rng);

// EC corruption from precomputed candidate lists. Falls back to the other
// side when the chosen side has none; nullopt when both are empty.
std::optional<Corruption> CorruptEc(
    const Triple& triple, std::span<const SubstitutionCandidate> head_candidates,
    std::span<const SubstitutionCandidate> tail_candidates,
    const SamplerConfig& config, Rng& rng);

// Same, computing candidates from parses (either may be null).
std::optional<Corruption> CorruptEc(const Triple& triple,
                                    const ParsedNode* head_parse,
                                    const ParsedNode* tail_parse,
                                    const ConceptGraph& graph,
                                    const SamplerConfig& config, Rng& rng);

// Conceptualization candidates per node text, computed once.
class CandidateCache {
 public:
  // Computes candidates for every node of `nodes` that has a parse.
  CandidateCache(const std::vector<std::string>& nodes,
                 const ParsedNodeIndex& parses, const ConceptGraph& graph,
                 unsigned workers, const IdentifyOptions& options = {});

  // Empty span for nodes without parse or candidates.
  std::span<const SubstitutionCandidate> Get(std::string_view node) const;
  bool HasParse(std::string_view node) const;
  std::size_t missing_parses() const { return missing_parses_; }

 private:
  std::unordered_map<std::string, std::vector<SubstitutionCandidate>,
                     StringHash, std::equal_to<>>
      candidates_;
  std::size_t missing_parses_ = 0;
};

struct DatasetStats {
  std::size_t seeds = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t ns = 0;
  std::size_t ec = 0;
  std::size_t ec_requested = 0;
  std::size_t ec_side_fallbacks = 0;
  std::size_t ec_ns_fallbacks = 0;
  std::size_t skipped_ns = 0;
  std::size_t skipped_ec_no_candidates = 0;
  std::size_t skipped_ec_collisions = 0;
  std::size_t filtered_rejections = 0;
  std::size_t nodes_without_parse = 0;
};

// For each triple of `seeds` (in order) emits the positive followed by one
// negative. Negatives are checked against `known`, the full positive store,
// which is also the NS node pool. Positive i uses RNG stream (seed, i), so
// the output does not depend on the worker count.
std::vector<LabeledExample> BuildDataset(const TripleStore& seeds,
                                         const TripleStore& known,
                                         const ConceptGraph& graph,
                                         const ParsedNodeIndex& parses,
                                         const SamplerConfig& config,
                                         DatasetStats* stats = nullptr);

struct CoverageResult {
  std::size_t triples = 0;
  std::size_t covered = 0;
  std::size_t nodes_without_parse = 0;
  double fraction() const {
    return triples == 0 ? 0.0
                        : static_cast<double>(covered) /
                              static_cast<double>(triples);
  }
};

// Share of triples with at least one side that has a non-empty candidate
// list. Nodes without a parse count as not conceptualizable.
CoverageResult MeasureEcCoverage(const TripleStore& store,
                                 const ConceptGraph& graph,
                                 const ParsedNodeIndex& parses,
                                 unsigned workers = 1);

// One JSON object per line:
// {"head","relation","tail","label","source","provenance"}.
std::string ToJsonLine(const LabeledExample& example);
LabeledExample ParseJsonLine(std::string_view line);

std::string StatsToJson(const DatasetStats& stats, const SamplerConfig& config);

}  // namespace ccc

#endif  // CCC_SAMPLER_H_
