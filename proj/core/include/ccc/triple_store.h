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

#ifndef CCC_TRIPLE_STORE_H_
#define CCC_TRIPLE_STORE_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "ccc/errors.h"
#include "ccc/text.h"

namespace ccc {

using NodeId = std::uint32_t;
using RelationId = std::uint16_t;

struct Triple {
  std::string head;
  std::string relation;
  std::string tail;

  bool operator==(const Triple&) const = default;
  auto operator<=>(const Triple&) const = default;
};

struct TripleHash {
  std::size_t operator()(const Triple& t) const;
};

enum class CkgFormat { kAtomic, kAser };

std::string_view FormatName(CkgFormat format);

// Declared relation vocabulary of each CKG. ATOMIC has 9 types, ASER 15.
const std::vector<std::string>& RelationVocabulary(CkgFormat format);

// A deduplicated set of CKG triples over interned node texts.
//
// Node text is kept verbatim. Besides the triples, the store keeps a node
// set, which may contain nodes that no triple mentions (isolated nodes, as
// in raw ASER); prune_ckg can drop them. Heads, and tails per relation, are
// tracked in first-insertion order so random draws are reproducible.
class TripleStore {
 public:
  explicit TripleStore(std::vector<std::string> relations);
  explicit TripleStore(CkgFormat format);

  // Returns false when the triple is already present. Throws
  // InvalidArgument for an unknown relation or empty node text.
  bool Insert(const Triple& t);
  // Adds a node to the node set without any triple.
  NodeId AddNode(std::string_view text);

  bool Contains(const Triple& t) const;
  bool Contains(std::string_view head, std::string_view relation,
                std::string_view tail) const;

  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  std::size_t node_count() const { return node_text_.size(); }

  // Triples in insertion order.
  Triple triple(std::size_t i) const;
  std::vector<Triple> Triples() const;

  const std::vector<std::string>& relations() const { return relations_; }
  std::optional<RelationId> FindRelation(std::string_view name) const;
  std::optional<NodeId> FindNode(std::string_view text) const;
  std::string_view node(NodeId id) const { return node_text_[id]; }

  // Distinct heads in first-seen order.
  std::span<const NodeId> heads() const { return heads_; }
  // Distinct tails of triples with this relation, in first-seen order.
  std::span<const NodeId> tails(RelationId relation) const {
    return tails_by_relation_[relation];
  }

  // Nodes mentioned by at least one triple.
  std::size_t ConnectedNodeCount() const;

  struct Key {
    NodeId head;
    RelationId relation;
    NodeId tail;
    bool operator==(const Key&) const = default;
  };

 private:
  struct KeyHash {
    std::size_t operator()(const Key& k) const;
  };

  NodeId Intern(std::string_view text);

  std::vector<std::string> relations_;
  std::vector<std::string> node_text_;
  std::unordered_map<std::string, NodeId, StringHash, std::equal_to<>>
      node_ids_;
  std::vector<Key> triples_;
  std::unordered_set<Key, KeyHash> members_;
  std::vector<NodeId> heads_;
  std::unordered_set<NodeId> head_set_;
  std::vector<std::vector<NodeId>> tails_by_relation_;
  std::vector<std::unordered_set<NodeId>> tail_sets_;
};

struct CkgLoadStats {
  std::size_t rows = 0;
  std::size_t duplicates = 0;
  std::size_t rejected = 0;
  std::size_t first_rejected_line = 0;
};

// Reads `head \t relation \t tail` rows. Rows with an unknown relation or
// empty node text are rejected: with kAbort the first one throws a
// FormatError naming the line, with kSkip they are counted.
TripleStore LoadCkg(const std::string& path, CkgFormat format,
                    ErrorPolicy on_error = ErrorPolicy::kAbort,
                    CkgLoadStats* stats = nullptr);

// Adds one node per non-empty line to the store's node set.
std::size_t LoadNodeList(const std::string& path, TripleStore& store);

void WriteCkg(const TripleStore& store, std::ostream& out);

// Drops every triple whose relation is in `excluded_relations`. With
// `drop_isolated` the node set is reduced to nodes of surviving triples;
// otherwise it is kept whole.
TripleStore PruneCkg(const TripleStore& store,
                     const std::vector<std::string>& excluded_relations,
                     bool drop_isolated);

struct SplitRatios {
  double train = 8;
  double dev = 1;
  double test = 1;
};

struct SplitResult {
  TripleStore train;
  TripleStore dev;
  TripleStore test;
};

// Part sizes from ratios by largest remainder, so every part is within one
// triple of its exact share. Exposed for tests.
std::array<std::size_t, 3> SplitSizes(std::size_t n, const SplitRatios& ratios);

// Uniform (unstratified) shuffle-and-cut. Deterministic given `seed`.
SplitResult SplitTriples(const TripleStore& store, const SplitRatios& ratios,
                         std::uint64_t seed);

}  // namespace ccc

#endif  // CCC_TRIPLE_STORE_H_
