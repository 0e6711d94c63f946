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

#include "ccc/concept_graph.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <unordered_map>

#include "ccc/io.h"
#include "ccc/text.h"

namespace ccc {

static_assert(std::endian::native == std::endian::little,
              "binary concept index assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'C', 'C', 'C', 'I', 'S', 'A', '\0', '\n'};
constexpr std::uint32_t kFormatVersion = 1;

struct RawEdge {
  PhraseId hypo;
  PhraseId hyper;
  std::uint64_t frequency;
};

// One direction of adjacency in CSR form.
struct Adjacency {
  std::vector<std::uint64_t> offsets;  // phrase_count + 1
  std::vector<PhraseId> targets;
  std::vector<std::uint64_t> frequencies;

  bool operator==(const Adjacency&) const = default;
};

// Builds CSR rows from (source, target, frequency) triples. Rows come out
// sorted by frequency descending, then target id (= lexicographic).
Adjacency BuildAdjacency(std::size_t phrase_count,
                         const std::vector<RawEdge>& edges, bool forward) {
  Adjacency adj;
  adj.offsets.assign(phrase_count + 1, 0);
  for (const RawEdge& e : edges) ++adj.offsets[(forward ? e.hypo : e.hyper) + 1];
  std::partial_sum(adj.offsets.begin(), adj.offsets.end(), adj.offsets.begin());
  adj.targets.resize(edges.size());
  adj.frequencies.resize(edges.size());
  std::vector<std::uint64_t> cursor(adj.offsets.begin(), adj.offsets.end() - 1);
  for (const RawEdge& e : edges) {
    PhraseId src = forward ? e.hypo : e.hyper;
    std::uint64_t slot = cursor[src]++;
    adj.targets[slot] = forward ? e.hyper : e.hypo;
    adj.frequencies[slot] = e.frequency;
  }
  std::vector<std::uint32_t> order;
  for (std::size_t p = 0; p < phrase_count; ++p) {
    std::uint64_t lo = adj.offsets[p], hi = adj.offsets[p + 1];
    if (hi - lo < 2) continue;
    order.resize(hi - lo);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
      std::uint64_t fa = adj.frequencies[lo + a], fb = adj.frequencies[lo + b];
      if (fa != fb) return fa > fb;
      return adj.targets[lo + a] < adj.targets[lo + b];
    });
    std::vector<PhraseId> t(hi - lo);
    std::vector<std::uint64_t> f(hi - lo);
    for (std::size_t i = 0; i < order.size(); ++i) {
      t[i] = adj.targets[lo + order[i]];
      f[i] = adj.frequencies[lo + order[i]];
    }
    std::copy(t.begin(), t.end(), adj.targets.begin() + lo);
    std::copy(f.begin(), f.end(), adj.frequencies.begin() + lo);
  }
  return adj;
}

}  // namespace

struct ConceptGraph::Data {
  std::vector<char> blob;
  std::vector<std::uint64_t> phrase_offsets;  // phrase_count + 1
  std::unordered_map<std::string_view, PhraseId> index;
  Adjacency forward;  // hypo -> hypers
  Adjacency inverse;  // hyper -> hypos

  std::size_t phrase_count() const {
    return phrase_offsets.empty() ? 0 : phrase_offsets.size() - 1;
  }
  std::string_view phrase(PhraseId id) const {
    return std::string_view(blob.data() + phrase_offsets[id],
                            phrase_offsets[id + 1] - phrase_offsets[id]);
  }
  void BuildIndex() {
    index.clear();
    index.reserve(phrase_count());
    for (PhraseId i = 0; i < phrase_count(); ++i) index.emplace(phrase(i), i);
  }
};

namespace {

// Interns normalized phrases during a load, then compacts them into the
// final lexicographically numbered table.
class GraphBuilder {
 public:
  PhraseId Intern(std::string key) {
    auto [it, inserted] =
        ids_.try_emplace(std::move(key), static_cast<PhraseId>(names_.size()));
    if (inserted) names_.push_back(&it->first);
    return it->second;
  }

  void Add(std::string_view hypo, std::string_view hyper,
           std::uint64_t frequency, ConceptLoadStats& stats) {
    std::string h = NormalizePhrase(hypo);
    std::string t = NormalizePhrase(hyper);
    if (h == t) {
      ++stats.self_loops;
      return;
    }
    PhraseId a = Intern(std::move(h));
    PhraseId b = Intern(std::move(t));
    edges_.push_back({a, b, frequency});
  }

  std::shared_ptr<ConceptGraph::Data> Finish(std::uint64_t min_frequency,
                                              ConceptLoadStats& stats) {
    std::sort(edges_.begin(), edges_.end(), [](const RawEdge& x, const RawEdge& y) {
      return x.hypo != y.hypo ? x.hypo < y.hypo : x.hyper < y.hyper;
    });
    std::vector<RawEdge> merged;
    merged.reserve(edges_.size());
    for (const RawEdge& e : edges_) {
      if (!merged.empty() && merged.back().hypo == e.hypo &&
          merged.back().hyper == e.hyper) {
        merged.back().frequency += e.frequency;
        ++stats.merged_duplicates;
      } else {
        merged.push_back(e);
      }
    }
    edges_.clear();
    edges_.shrink_to_fit();
    std::erase_if(merged, [&](const RawEdge& e) {
      if (e.frequency >= min_frequency) return false;
      ++stats.below_min_frequency;
      return true;
    });

    // Keep only phrases that still touch an edge, renumbered
    // lexicographically.
    std::vector<char> used(names_.size(), 0);
    for (const RawEdge& e : merged) used[e.hypo] = used[e.hyper] = 1;
    std::vector<PhraseId> kept;
    for (PhraseId i = 0; i < names_.size(); ++i) {
      if (used[i]) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end(), [&](PhraseId a, PhraseId b) {
      return *names_[a] < *names_[b];
    });
    std::vector<PhraseId> remap(names_.size(), 0);
    auto data = std::make_shared<ConceptGraph::Data>();
    data->phrase_offsets.reserve(kept.size() + 1);
    data->phrase_offsets.push_back(0);
    for (PhraseId new_id = 0; new_id < kept.size(); ++new_id) {
      const std::string& s = *names_[kept[new_id]];
      remap[kept[new_id]] = new_id;
      data->blob.insert(data->blob.end(), s.begin(), s.end());
      data->phrase_offsets.push_back(data->blob.size());
    }
    for (RawEdge& e : merged) {
      e.hypo = remap[e.hypo];
      e.hyper = remap[e.hyper];
    }
    ids_.clear();
    names_.clear();
    data->forward = BuildAdjacency(kept.size(), merged, true);
    data->inverse = BuildAdjacency(kept.size(), merged, false);
    data->BuildIndex();
    return data;
  }

 private:
  std::unordered_map<std::string, PhraseId> ids_;
  std::vector<const std::string*> names_;
  std::vector<RawEdge> edges_;
};

std::optional<std::uint64_t> ParseFrequency(std::string_view s) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || v == 0) {
    return std::nullopt;
  }
  return v;
}

template <typename T>
void WritePod(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void WriteVector(std::ostream& out, const std::vector<T>& v) {
  WritePod<std::uint64_t>(out, v.size());
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(T)));
}

template <typename T>
T ReadPod(std::istream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw FormatError("truncated binary concept index", 0);
  return v;
}

template <typename T>
std::vector<T> ReadVector(std::istream& in) {
  auto n = ReadPod<std::uint64_t>(in);
  std::vector<T> v;
  // Grow in chunks so a corrupt length fails on EOF instead of on a
  // multi-terabyte allocation.
  constexpr std::uint64_t kChunk = 1 << 20;
  for (std::uint64_t done = 0; done < n;) {
    std::uint64_t take = std::min(kChunk, n - done);
    v.resize(done + take);
    in.read(reinterpret_cast<char*>(v.data() + done),
            static_cast<std::streamsize>(take * sizeof(T)));
    if (!in) throw FormatError("truncated binary concept index", 0);
    done += take;
  }
  return v;
}

}  // namespace

std::string_view DirectionName(IsaDirection d) {
  return d == IsaDirection::kAbstraction ? "abstraction" : "instantiation";
}

ConceptGraph::ConceptGraph() : data_(std::make_shared<const Data>()) {}

ConceptGraph::ConceptGraph(std::shared_ptr<const Data> data)
    : data_(std::move(data)) {}

ConceptGraph ConceptGraph::FromEdges(const std::vector<ConceptEdge>& edges,
                                     std::uint64_t min_frequency,
                                     ConceptLoadStats* stats) {
  if (min_frequency < 1) throw InvalidArgument("min_frequency must be >= 1");
  ConceptLoadStats local;
  GraphBuilder builder;
  for (const ConceptEdge& e : edges) {
    ++local.rows;
    if (e.frequency < 1 || NormalizePhrase(e.hypo).empty() ||
        NormalizePhrase(e.hyper).empty()) {
      throw InvalidArgument("concept edge needs non-empty phrases and "
                            "frequency >= 1");
    }
    builder.Add(e.hypo, e.hyper, e.frequency, local);
  }
  ConceptGraph g(builder.Finish(min_frequency, local));
  if (stats) *stats = local;
  return g;
}

std::size_t ConceptGraph::phrase_count() const { return data_->phrase_count(); }

std::size_t ConceptGraph::edge_count() const {
  return data_->forward.targets.size();
}

std::optional<PhraseId> ConceptGraph::Find(std::string_view key) const {
  auto it = data_->index.find(key);
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::string_view ConceptGraph::phrase(PhraseId id) const {
  return data_->phrase(id);
}

std::vector<IsaHit> ConceptGraph::Query(std::string_view phrase,
                                        IsaDirection direction) const {
  return QueryKey(NormalizePhrase(phrase), direction);
}

std::vector<IsaHit> ConceptGraph::QueryKey(std::string_view key,
                                           IsaDirection direction) const {
  std::vector<IsaHit> hits;
  auto id = Find(key);
  if (!id) return hits;
  const Adjacency& adj = direction == IsaDirection::kAbstraction
                             ? data_->forward
                             : data_->inverse;
  std::uint64_t lo = adj.offsets[*id], hi = adj.offsets[*id + 1];
  hits.reserve(hi - lo);
  for (std::uint64_t i = lo; i < hi; ++i) {
    hits.push_back({data_->phrase(adj.targets[i]), adj.frequencies[i]});
  }
  return hits;
}

std::vector<ConceptEdge> ConceptGraph::Edges() const {
  std::vector<ConceptEdge> out;
  out.reserve(edge_count());
  const Adjacency& adj = data_->forward;
  for (PhraseId p = 0; p < phrase_count(); ++p) {
    for (std::uint64_t i = adj.offsets[p]; i < adj.offsets[p + 1]; ++i) {
      out.push_back({std::string(data_->phrase(p)),
                     std::string(data_->phrase(adj.targets[i])),
                     adj.frequencies[i]});
    }
  }
  return out;
}

bool ConceptGraph::operator==(const ConceptGraph& other) const {
  if (data_ == other.data_) return true;
  return data_->blob == other.data_->blob &&
         data_->phrase_offsets == other.data_->phrase_offsets &&
         data_->forward == other.data_->forward;
}

// Layout (little-endian):
//   magic[8] "CCCISA\0\n", u32 version,
//   vec<char> phrase blob, vec<u64> phrase offsets,
//   vec<u64> forward offsets, vec<u32> forward targets,
//   vec<u64> forward frequencies
// where vec<T> is a u64 element count followed by the raw elements. The
// inverse adjacency is rebuilt on load.
void ConceptGraph::SaveBinary(std::ostream& out) const {
  out.write(kMagic, sizeof(kMagic));
  WritePod<std::uint32_t>(out, kFormatVersion);
  WriteVector(out, data_->blob);
  WriteVector(out, data_->phrase_offsets);
  WriteVector(out, data_->forward.offsets);
  WriteVector(out, data_->forward.targets);
  WriteVector(out, data_->forward.frequencies);
  if (!out) throw IoError("failed writing binary concept index");
}

ConceptGraph ConceptGraph::LoadBinary(std::istream& in) {
  char magic[sizeof(kMagic)];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("not a binary concept index (bad magic)", 0);
  }
  auto version = ReadPod<std::uint32_t>(in);
  if (version != kFormatVersion) {
    throw FormatError("unsupported concept index version " +
                          std::to_string(version),
                      0);
  }
  auto data = std::make_shared<Data>();
  data->blob = ReadVector<char>(in);
  data->phrase_offsets = ReadVector<std::uint64_t>(in);
  data->forward.offsets = ReadVector<std::uint64_t>(in);
  data->forward.targets = ReadVector<PhraseId>(in);
  data->forward.frequencies = ReadVector<std::uint64_t>(in);

  const std::size_t n = data->phrase_count();
  const Adjacency& fwd = data->forward;
  bool ok = (data->phrase_offsets.empty() || data->phrase_offsets.front() == 0) &&
            (data->phrase_offsets.empty() ||
             data->phrase_offsets.back() == data->blob.size()) &&
            std::is_sorted(data->phrase_offsets.begin(), data->phrase_offsets.end()) &&
            fwd.offsets.size() == n + 1 && fwd.offsets.front() == 0 &&
            fwd.offsets.back() == fwd.targets.size() &&
            std::is_sorted(fwd.offsets.begin(), fwd.offsets.end()) &&
            fwd.frequencies.size() == fwd.targets.size() &&
            std::all_of(fwd.targets.begin(), fwd.targets.end(),
                        [n](PhraseId t) { return t < n; });
  if (!ok) throw FormatError("corrupt binary concept index", 0);

  std::vector<RawEdge> edges;
  edges.reserve(fwd.targets.size());
  for (PhraseId p = 0; p < n; ++p) {
    for (std::uint64_t i = fwd.offsets[p]; i < fwd.offsets[p + 1]; ++i) {
      edges.push_back({p, fwd.targets[i], fwd.frequencies[i]});
    }
  }
  data->inverse = BuildAdjacency(n, edges, false);
  data->BuildIndex();
  return ConceptGraph(std::move(data));
}

ConceptGraph LoadConceptGraph(const std::string& path,
                              const ConceptLoadOptions& options,
                              ConceptLoadStats* stats) {
  if (options.min_frequency < 1) {
    throw InvalidArgument("min_frequency must be >= 1");
  }
  std::ifstream in = OpenInput(path);
  ConceptLoadStats local;
  GraphBuilder builder;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StripCarriageReturn(line);
    if (line.empty()) continue;
    ++local.rows;
    auto fields = SplitFields(line, '\t');
    std::string problem;
    std::optional<std::uint64_t> freq;
    if (fields.size() != 3) {
      problem = "expected 3 tab-separated columns, found " +
                std::to_string(fields.size());
    } else if (!(freq = ParseFrequency(fields[2]))) {
      problem = "frequency is not a positive integer: '" +
                std::string(fields[2]) + "'";
    } else if (CollapseWhitespace(fields[0]).empty() ||
               CollapseWhitespace(fields[1]).empty()) {
      problem = "empty phrase";
    }
    if (!problem.empty()) {
      if (options.on_error == ErrorPolicy::kAbort) {
        throw FormatError(path + ":" + std::to_string(line_no) + ": " + problem,
                          line_no);
      }
      ++local.malformed;
      if (local.first_malformed_line == 0) local.first_malformed_line = line_no;
      continue;
    }
    bool hyper_first = options.order == ColumnOrder::kHyperHypo;
    builder.Add(hyper_first ? fields[1] : fields[0],
                hyper_first ? fields[0] : fields[1], *freq, local);
  }
  ConceptGraph g(builder.Finish(options.min_frequency, local));
  if (stats) *stats = local;
  return g;
}

bool IsBinaryConceptGraph(const std::string& path) {
  std::ifstream in = OpenInput(path, std::ios::binary);
  char magic[sizeof(kMagic)] = {};
  in.read(magic, sizeof(magic));
  return in && std::memcmp(magic, kMagic, sizeof(kMagic)) == 0;
}

ConceptGraph OpenConceptGraph(const std::string& path,
                              const ConceptLoadOptions& options,
                              ConceptLoadStats* stats) {
  if (IsBinaryConceptGraph(path)) {
    std::ifstream in = OpenInput(path, std::ios::binary);
    return ConceptGraph::LoadBinary(in);
  }
  return LoadConceptGraph(path, options, stats);
}

void SaveConceptGraph(const ConceptGraph& graph, const std::string& path) {
  AtomicOutputFile out(path, std::ios::binary);
  graph.SaveBinary(out.stream());
  out.Commit();
}

}  // namespace ccc
