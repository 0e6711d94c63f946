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

// In-memory IsA taxonomy: (hypo, IsA, hyper, frequency) tuples indexed in
// both directions. Phrases are interned into one contiguous buffer and
// numbered in byte-lexicographic order, so a phrase id comparison is a
// string comparison. Adjacency is stored as two CSR arrays (hypo -> hypers,
// hyper -> hypos), each row sorted by frequency descending then phrase.
//
// A built graph is immutable and shares its storage between copies, so it
// can be handed to any number of reader threads.

#ifndef CCC_CONCEPT_GRAPH_H_
#define CCC_CONCEPT_GRAPH_H_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccc/errors.h"

namespace ccc {

using PhraseId = std::uint32_t;

enum class IsaDirection {
  kAbstraction,    // phrase -> its hypernyms (concepts)
  kInstantiation,  // phrase -> its hyponyms (instances)
};

std::string_view DirectionName(IsaDirection d);

struct ConceptEdge {
  std::string hypo;
  std::string hyper;
  std::uint64_t frequency = 0;

  bool operator==(const ConceptEdge&) const = default;
};

struct IsaHit {
  std::string_view phrase;
  std::uint64_t frequency = 0;

  bool operator==(const IsaHit&) const = default;
};

// Column order of a concept TSV row. The public Probase dump is
// concept \t instance \t frequency.
enum class ColumnOrder { kHyperHypo, kHypoHyper };

struct ConceptLoadOptions {
  std::uint64_t min_frequency = 1;
  ColumnOrder order = ColumnOrder::kHyperHypo;
  ErrorPolicy on_error = ErrorPolicy::kAbort;
};

struct ConceptLoadStats {
  std::size_t rows = 0;
  std::size_t malformed = 0;
  std::size_t self_loops = 0;
  std::size_t merged_duplicates = 0;
  std::size_t below_min_frequency = 0;
  // 1-based line of the first skipped malformed row; 0 if none.
  std::size_t first_malformed_line = 0;
};

class ConceptGraph {
 public:
  // Empty graph.
  ConceptGraph();

  // Normalizes phrases, drops self loops, merges duplicate (hypo, hyper)
  // pairs by summing frequencies, then drops merged edges whose frequency
  // is below min_frequency.
  static ConceptGraph FromEdges(const std::vector<ConceptEdge>& edges,
                                std::uint64_t min_frequency = 1,
                                ConceptLoadStats* stats = nullptr);

  // Distinct phrases that occur in at least one edge.
  std::size_t phrase_count() const;
  std::size_t edge_count() const;
  bool empty() const { return edge_count() == 0; }

  // Phrase is normalized before lookup. Unknown phrases yield {}.
  std::vector<IsaHit> Query(std::string_view phrase,
                            IsaDirection direction) const;
  // As Query, but the caller guarantees `key` is already normalized.
  std::vector<IsaHit> QueryKey(std::string_view key,
                               IsaDirection direction) const;

  std::optional<PhraseId> Find(std::string_view key) const;
  std::string_view phrase(PhraseId id) const;

  // All edges ordered by (hypo, frequency desc, hyper).
  std::vector<ConceptEdge> Edges() const;

  // Versioned binary image; see concept_graph.cc for the layout.
  void SaveBinary(std::ostream& out) const;
  static ConceptGraph LoadBinary(std::istream& in);

  bool operator==(const ConceptGraph& other) const;

  struct Data;

 private:
  friend ConceptGraph LoadConceptGraph(const std::string& path,
                                       const ConceptLoadOptions& options,
                                       ConceptLoadStats* stats);

  explicit ConceptGraph(std::shared_ptr<const Data> data);
  std::shared_ptr<const Data> data_;
};

// Reads a 3-column UTF-8 TSV of concept rows.
ConceptGraph LoadConceptGraph(const std::string& path,
                              const ConceptLoadOptions& options = {},
                              ConceptLoadStats* stats = nullptr);

// Loads either a binary image written by SaveBinary or a TSV, chosen by
// sniffing the file's magic bytes.
ConceptGraph OpenConceptGraph(const std::string& path,
                              const ConceptLoadOptions& options = {},
                              ConceptLoadStats* stats = nullptr);

void SaveConceptGraph(const ConceptGraph& graph, const std::string& path);

bool IsBinaryConceptGraph(const std::string& path);

}  // namespace ccc

#endif  // CCC_CONCEPT_GRAPH_H_
