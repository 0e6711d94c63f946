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

#include "ccc/triple_store.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numeric>
#include <ostream>

#include "ccc/io.h"
#include "ccc/rng.h"
#include "ccc/text.h"

namespace ccc {
namespace {

std::size_t HashCombine(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

bool IsBlank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return IsSpace(c); });
}

}  // namespace

std::size_t TripleHash::operator()(const Triple& t) const {
  std::hash<std::string> h;
  return HashCombine(HashCombine(h(t.head), h(t.relation)), h(t.tail));
}

std::size_t TripleStore::KeyHash::operator()(const Key& k) const {
  return HashCombine(HashCombine(k.head, k.relation), k.tail);
}

std::string_view FormatName(CkgFormat format) {
  return format == CkgFormat::kAtomic ? "atomic-tsv" : "aser-tsv";
}

const std::vector<std::string>& RelationVocabulary(CkgFormat format) {
  static const std::vector<std::string> kAtomic = {
      "oEffect", "oReact", "oWant",  "xAttr", "xEffect",
      "xIntent", "xNeed",  "xReact", "xWant"};
  static const std::vector<std::string> kAser = {
      "Precedence",  "Succession",    "Synchronous",       "Reason",
      "Result",      "Condition",     "Contrast",          "Concession",
      "Conjunction", "Instantiation", "Restatement",       "ChosenAlternative",
      "Alternative", "Exception",     "Co_Occurrence"};
  return format == CkgFormat::kAtomic ? kAtomic : kAser;
}

TripleStore::TripleStore(std::vector<std::string> relations)
    : relations_(std::move(relations)),
      tails_by_relation_(relations_.size()),
      tail_sets_(relations_.size()) {}

TripleStore::TripleStore(CkgFormat format)
    : TripleStore(RelationVocabulary(format)) {}

std::optional<RelationId> TripleStore::FindRelation(
    std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (relations_[i] == name) return static_cast<RelationId>(i);
  }
  return std::nullopt;
}

std::optional<NodeId> TripleStore::FindNode(std::string_view text) const {
  auto it = node_ids_.find(text);
  if (it == node_ids_.end()) return std::nullopt;
  return it->second;
}

NodeId TripleStore::Intern(std::string_view text) {
  if (auto it = node_ids_.find(text); it != node_ids_.end()) return it->second;
  auto id = static_cast<NodeId>(node_text_.size());
  node_ids_.emplace(std::string(text), id);
  node_text_.emplace_back(text);
  return id;
}

NodeId TripleStore::AddNode(std::string_view text) {
  if (IsBlank(text)) throw InvalidArgument("empty node text");
  return Intern(text);
}

bool TripleStore::Insert(const Triple& t) {
  auto rel = FindRelation(t.relation);
  if (!rel) throw InvalidArgument("unknown relation '" + t.relation + "'");
  if (IsBlank(t.head) || IsBlank(t.tail)) {
    throw InvalidArgument("empty node text");
  }
  Key key{Intern(t.head), *rel, Intern(t.tail)};
  if (!members_.insert(key).second) return false;
  triples_.push_back(key);
  if (head_set_.insert(key.head).second) heads_.push_back(key.head);
  if (tail_sets_[*rel].insert(key.tail).second) {
    tails_by_relation_[*rel].push_back(key.tail);
  }
  return true;
}

bool TripleStore::Contains(std::string_view head, std::string_view relation,
                           std::string_view tail) const {
  auto rel = FindRelation(relation);
  if (!rel) return false;
  auto h = FindNode(head);
  if (!h) return false;
  auto t = FindNode(tail);
  if (!t) return false;
  return members_.count(Key{*h, *rel, *t}) > 0;
}

bool TripleStore::Contains(const Triple& t) const {
  return Contains(t.head, t.relation, t.tail);
}

Triple TripleStore::triple(std::size_t i) const {
  const Key& k = triples_[i];
  return {node_text_[k.head], relations_[k.relation], node_text_[k.tail]};
}

std::vector<Triple> TripleStore::Triples() const {
  std::vector<Triple> out;
  out.reserve(triples_.size());
  for (std::size_t i = 0; i < triples_.size(); ++i) out.push_back(triple(i));
  return out;
}

std::size_t TripleStore::ConnectedNodeCount() const {
  std::vector<char> seen(node_text_.size(), 0);
  std::size_t n = 0;
  for (const Key& k : triples_) {
    for (NodeId id : {k.head, k.tail}) {
      if (!seen[id]) {
        seen[id] = 1;
        ++n;
      }
    }
  }
  return n;
}

TripleStore LoadCkg(const std::string& path, CkgFormat format,
                    ErrorPolicy on_error, CkgLoadStats* stats) {
  std::ifstream in = OpenInput(path);
  TripleStore store(format);
  CkgLoadStats local;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StripCarriageReturn(line);
    if (line.empty()) continue;
    ++local.rows;
    auto fields = SplitFields(line, '\t');
    std::string problem;
    if (fields.size() != 3) {
      problem = "expected 3 tab-separated columns, found " +
                std::to_string(fields.size());
    } else if (!store.FindRelation(fields[1])) {
      problem = "unknown relation '" + std::string(fields[1]) + "' for " +
                std::string(FormatName(format));
    } else if (IsBlank(fields[0]) || IsBlank(fields[2])) {
      problem = "empty node text";
    }
    if (!problem.empty()) {
      if (on_error == ErrorPolicy::kAbort) {
        throw FormatError(path + ":" + std::to_string(line_no) + ": " + problem,
                          line_no);
      }
      ++local.rejected;
      if (local.first_rejected_line == 0) local.first_rejected_line = line_no;
      continue;
    }
    Triple t{std::string(fields[0]), std::string(fields[1]),
             std::string(fields[2])};
    if (!store.Insert(t)) ++local.duplicates;
  }
  if (stats) *stats = local;
  return store;
}

std::size_t LoadNodeList(const std::string& path, TripleStore& store) {
  std::ifstream in = OpenInput(path);
  std::string line;
  std::size_t added = 0;
  while (std::getline(in, line)) {
    StripCarriageReturn(line);
    if (IsBlank(line)) continue;
    std::size_t before = store.node_count();
    store.AddNode(line);
    if (store.node_count() > before) ++added;
  }
  return added;
}

void WriteCkg(const TripleStore& store, std::ostream& out) {
  for (std::size_t i = 0; i < store.size(); ++i) {
    Triple t = store.triple(i);
    out << t.head << '\t' << t.relation << '\t' << t.tail << '\n';
  }
}

TripleStore PruneCkg(const TripleStore& store,
                     const std::vector<std::string>& excluded_relations,
                     bool drop_isolated) {
  for (const std::string& r : excluded_relations) {
    if (!store.FindRelation(r)) {
      throw InvalidArgument("excluded relation '" + r +
                            "' is not in the relation vocabulary");
    }
  }
  TripleStore out(store.relations());
  if (!drop_isolated) {
    for (NodeId id = 0; id < store.node_count(); ++id) out.AddNode(store.node(id));
  }
  for (std::size_t i = 0; i < store.size(); ++i) {
    Triple t = store.triple(i);
    if (std::find(excluded_relations.begin(), excluded_relations.end(),
                  t.relation) != excluded_relations.end()) {
      continue;
    }
    out.Insert(t);
  }
  return out;
}

std::array<std::size_t, 3> SplitSizes(std::size_t n, const SplitRatios& ratios) {
  const double parts[3] = {ratios.train, ratios.dev, ratios.test};
  for (double p : parts) {
    if (!(p > 0) || !std::isfinite(p)) {
      throw InvalidArgument("split ratios must be positive");
    }
  }
  const double total = parts[0] + parts[1] + parts[2];
  std::array<std::size_t, 3> sizes{};
  std::array<double, 3> remainder{};
  std::size_t assigned = 0;
  for (int i = 0; i < 3; ++i) {
    double exact = static_cast<double>(n) * parts[i] / total;
    sizes[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - static_cast<double>(sizes[i]);
    assigned += sizes[i];
  }
  // Largest remainder; ties go to the earlier part.
  std::array<int, 3> order = {0, 1, 2};
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n; ++k, ++assigned) ++sizes[order[k % 3]];
  return sizes;
}

SplitResult SplitTriples(const TripleStore& store, const SplitRatios& ratios,
                         std::uint64_t seed) {
  auto sizes = SplitSizes(store.size(), ratios);
  std::vector<std::size_t> order(store.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.Shuffle(std::span<std::size_t>(order));

  SplitResult result{TripleStore(store.relations()),
                     TripleStore(store.relations()),
                     TripleStore(store.relations())};
  TripleStore* parts[3] = {&result.train, &result.dev, &result.test};
  std::size_t begin = 0;
  for (int p = 0; p < 3; ++p) {
    // Each part keeps the source's relative order.
    std::sort(order.begin() + begin, order.begin() + begin + sizes[p]);
    for (std::size_t i = begin; i < begin + sizes[p]; ++i) {
      parts[p]->Insert(store.triple(order[i]));
    }
    begin += sizes[p];
  }
  return result;
}

}  // namespace ccc
