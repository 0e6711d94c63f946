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

#include "ccc/sampler.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ccc/errors.h"
#include "ccc/parallel.h"

namespace ccc {
namespace {

using Json = nlohmann::ordered_json;

Triple WithSide(const Triple& t, Side side, std::string node) {
  Triple out = t;
  (side == Side::kHead ? out.head : out.tail) = std::move(node);
  return out;
}

const std::string& SideText(const Triple& t, Side side) {
  return side == Side::kHead ? t.head : t.tail;
}

Side Other(Side s) { return s == Side::kHead ? Side::kTail : Side::kHead; }

Side DrawSide(const SamplerConfig& config, Rng& rng) {
  return rng.Bernoulli(config.head_probability) ? Side::kHead : Side::kTail;
}

Json ProvenanceJson(const Provenance& p, ExampleSource source) {
  Json j;
  j["side"] = SideName(p.side);
  j["original"] = p.original_node;
  j["replacement"] = p.replacement;
  if (source == ExampleSource::kEc) {
    j["replaced_phrase"] = p.replaced_phrase;
    j["concept_phrase"] = p.concept_phrase;
    j["frequency"] = p.frequency;
    j["side_fallback"] = p.side_fallback;
  }
  j["draw"] = p.draw;
  j["attempts"] = p.attempts;
  if (source == ExampleSource::kNs) j["ns_fallback"] = p.ns_fallback;
  return j;
}

}  // namespace

std::string_view SideName(Side side) {
  return side == Side::kHead ? "head" : "tail";
}

std::string_view SourceName(ExampleSource source) {
  switch (source) {
    case ExampleSource::kPositive:
      return "positive";
    case ExampleSource::kNs:
      return "ns";
    case ExampleSource::kEc:
      return "ec";
  }
  return "";
}

void Validate(const SamplerConfig& config) {
  if (!(config.ec_ratio >= 0.0 && config.ec_ratio <= 1.0)) {
    throw InvalidArgument("ec_ratio must be in [0, 1]");
  }
  if (!(config.head_probability >= 0.0 && config.head_probability <= 1.0)) {
    throw InvalidArgument("head probability must be in [0, 1]");
  }
  if (config.max_retries < 1) throw InvalidArgument("max_retries must be >= 1");
}

std::size_t SampleCategorical(std::span<const std::uint64_t> weights, Rng& rng) {
  if (weights.empty()) throw InvalidArgument("categorical over no outcomes");
  std::uint64_t total = 0;
  for (std::uint64_t w : weights) {
    if (w == 0) throw InvalidArgument("categorical weights must be positive");
    total += w;
  }
  std::uint64_t u = rng.Uniform(total);
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return i;
    u -= weights[i];
  }
  return weights.size() - 1;
}

std::optional<Corruption> CorruptNs(const Triple& triple,
                                    const TripleStore& store,
                                    const SamplerConfig& config, Rng& rng) {
  const Side side = DrawSide(config, rng);
  const std::string& original = SideText(triple, side);
  const auto original_id = store.FindNode(original);

  std::span<const NodeId> pool;
  std::size_t pool_size = store.node_count();
  if (config.constrained_ns) {
    if (side == Side::kHead) {
      pool = store.heads();
    } else {
      auto rel = store.FindRelation(triple.relation);
      if (!rel) return std::nullopt;
      pool = store.tails(*rel);
    }
    pool_size = pool.size();
  }
  auto pool_at = [&](std::uint64_t i) -> NodeId {
    return config.constrained_ns ? pool[i] : static_cast<NodeId>(i);
  };
  bool original_in_pool = false;
  if (original_id) {
    original_in_pool =
        config.constrained_ns
            ? std::find(pool.begin(), pool.end(), *original_id) != pool.end()
            : true;
  }
  if (pool_size == 0 || (pool_size == 1 && original_in_pool)) return std::nullopt;

  for (std::uint32_t attempt = 1; attempt <= config.max_retries; ++attempt) {
    const std::uint64_t draw = rng.Uniform(pool_size);
    const NodeId id = pool_at(draw);
    if (original_id && id == *original_id) continue;
    Corruption c;
    c.triple = WithSide(triple, side, std::string(store.node(id)));
    c.provenance.side = side;
    c.provenance.original_node = original;
    c.provenance.replacement = store.node(id);
    c.provenance.draw = draw;
    c.provenance.attempts = attempt;
    return c;
  }
  return std::nullopt;
}

std::optional<Corruption> CorruptEc(
    const Triple& triple, std::span<const SubstitutionCandidate> head_candidates,
    std::span<const SubstitutionCandidate> tail_candidates,
    const SamplerConfig& config, Rng& rng) {
  Side side = DrawSide(config, rng);
  auto candidates = [&](Side s) {
    return s == Side::kHead ? head_candidates : tail_candidates;
  };
  bool side_fallback = false;
  if (candidates(side).empty()) {
    side = Other(side);
    side_fallback = true;
    if (candidates(side).empty()) return std::nullopt;
  }
  std::span<const SubstitutionCandidate> list = candidates(side);
  std::vector<std::uint64_t> weights(list.size());
  std::transform(list.begin(), list.end(), weights.begin(),
                 [](const SubstitutionCandidate& c) { return c.frequency; });
  const std::size_t k = SampleCategorical(weights, rng);
  const SubstitutionCandidate& chosen = list[k];

  Corruption c;
  c.triple = WithSide(triple, side, chosen.new_text);
  c.provenance.side = side;
  c.provenance.original_node = SideText(triple, side);
  c.provenance.replacement = chosen.new_text;
  c.provenance.replaced_phrase = chosen.original_phrase;
  c.provenance.concept_phrase = chosen.replacement;
  c.provenance.frequency = chosen.frequency;
  c.provenance.draw = k;
  c.provenance.side_fallback = side_fallback;
  return c;
}

std::optional<Corruption> CorruptEc(const Triple& triple,
                                    const ParsedNode* head_parse,
                                    const ParsedNode* tail_parse,
                                    const ConceptGraph& graph,
                                    const SamplerConfig& config, Rng& rng) {
  std::vector<SubstitutionCandidate> head, tail;
  if (head_parse) head = IdentifyConceptualizations(*head_parse, graph);
  if (tail_parse) tail = IdentifyConceptualizations(*tail_parse, graph);
  return CorruptEc(triple, head, tail, config, rng);
}

CandidateCache::CandidateCache(const std::vector<std::string>& nodes,
                               const ParsedNodeIndex& parses,
                               const ConceptGraph& graph, unsigned workers,
                               const IdentifyOptions& options) {
  std::vector<const ParsedNode*> found(nodes.size());
  std::vector<std::vector<SubstitutionCandidate>> lists(nodes.size());
  ParallelFor(nodes.size(), workers, [&](std::size_t i) {
    found[i] = parses.Find(nodes[i]);
    if (found[i]) lists[i] = IdentifyConceptualizations(*found[i], graph, options);
  });
  candidates_.reserve(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (!found[i]) {
      ++missing_parses_;
      continue;
    }
    candidates_.try_emplace(nodes[i], std::move(lists[i]));
  }
}

std::span<const SubstitutionCandidate> CandidateCache::Get(
    std::string_view node) const {
  auto it = candidates_.find(node);
  if (it == candidates_.end()) return {};
  return it->second;
}

bool CandidateCache::HasParse(std::string_view node) const {
  return candidates_.find(node) != candidates_.end();
}

namespace {

std::vector<std::string> DistinctNodes(const TripleStore& store) {
  std::vector<std::string> nodes;
  std::unordered_set<std::string_view> seen;
  for (std::size_t i = 0; i < store.size(); ++i) {
    Triple t = store.triple(i);
    for (const std::string* s : {&t.head, &t.tail}) {
      auto id = store.FindNode(*s);
      std::string_view stable = store.node(*id);
      if (seen.insert(stable).second) nodes.emplace_back(stable);
    }
  }
  return nodes;
}

enum class Outcome {
  kOk,
  kSkippedNs,
  kSkippedEcNoCandidates,
  kSkippedEcCollisions,
};

struct PerSeed {
  std::optional<LabeledExample> negative;
  Outcome outcome = Outcome::kOk;
  bool ec_requested = false;
  std::size_t filtered = 0;
};

PerSeed NegativeFor(std::size_t index, const Triple& positive,
                    const TripleStore& known, const CandidateCache* cache,
                    const SamplerConfig& config) {
  PerSeed result;
  Rng rng(config.seed, index);
  result.ec_requested = rng.Bernoulli(config.ec_ratio);
  bool ns_fallback = false;

  if (result.ec_requested) {
    std::span<const SubstitutionCandidate> head, tail;
    if (cache) {
      head = cache->Get(positive.head);
      tail = cache->Get(positive.tail);
    }
    if (head.empty() && tail.empty()) {
      if (config.strict_ec) {
        result.outcome = Outcome::kSkippedEcNoCandidates;
        return result;
      }
      ns_fallback = true;
    } else {
      for (std::uint32_t attempt = 1; attempt <= config.max_retries; ++attempt) {
        auto c = CorruptEc(positive, head, tail, config, rng);
        if (known.Contains(c->triple)) {
          ++result.filtered;
          continue;
        }
        c->provenance.attempts = attempt;
        result.negative =
            LabeledExample{c->triple, 0, ExampleSource::kEc, c->provenance};
        return result;
      }
      result.outcome = Outcome::kSkippedEcCollisions;
      return result;
    }
  }

  std::uint32_t draws = 0;
  for (std::uint32_t attempt = 1; attempt <= config.max_retries; ++attempt) {
    auto c = CorruptNs(positive, known, config, rng);
    if (!c) break;
    draws += c->provenance.attempts;
    if (known.Contains(c->triple)) {
      ++result.filtered;
      continue;
    }
    c->provenance.attempts = draws;
    c->provenance.ns_fallback = ns_fallback;
    result.negative = LabeledExample{c->triple, 0, ExampleSource::kNs, c->provenance};
    return result;
  }
  result.outcome = Outcome::kSkippedNs;
  return result;
}

}  // namespace

std::vector<LabeledExample> BuildDataset(const TripleStore& seeds,
                                         const TripleStore& known,
                                         const ConceptGraph& graph,
                                         const ParsedNodeIndex& parses,
                                         const SamplerConfig& config,
                                         DatasetStats* stats) {
  Validate(config);
  std::optional<CandidateCache> cache;
  if (config.ec_ratio > 0) {
    cache.emplace(DistinctNodes(seeds), parses, graph, config.workers);
  }
  std::vector<Triple> positives = seeds.Triples();
  std::vector<PerSeed> results(positives.size());
  ParallelFor(positives.size(), config.workers, [&](std::size_t i) {
    results[i] = NegativeFor(i, positives[i], known, cache ? &*cache : nullptr,
                             config);
  });

  DatasetStats local;
  local.seeds = positives.size();
  local.nodes_without_parse = cache ? cache->missing_parses() : 0;
  std::vector<LabeledExample> out;
  out.reserve(positives.size() * 2);
  for (std::size_t i = 0; i < positives.size(); ++i) {
    PerSeed& r = results[i];
    local.filtered_rejections += r.filtered;
    if (r.ec_requested) ++local.ec_requested;
    switch (r.outcome) {
      case Outcome::kOk:
        break;
      case Outcome::kSkippedNs:
        ++local.skipped_ns;
        break;
      case Outcome::kSkippedEcNoCandidates:
        ++local.skipped_ec_no_candidates;
        break;
      case Outcome::kSkippedEcCollisions:
        ++local.skipped_ec_collisions;
        break;
    }
    if (!r.negative && !config.keep_unpaired_positives) continue;
    out.push_back({positives[i], 1, ExampleSource::kPositive, std::nullopt});
    ++local.positives;
    if (!r.negative) continue;
    const Provenance& p = *r.negative->provenance;
    if (r.negative->source == ExampleSource::kEc) {
      ++local.ec;
      if (p.side_fallback) ++local.ec_side_fallbacks;
    } else {
      ++local.ns;
      if (p.ns_fallback) ++local.ec_ns_fallbacks;
    }
    ++local.negatives;
    out.push_back(std::move(*r.negative));
  }
  if (stats) *stats = local;
  return out;
}

CoverageResult MeasureEcCoverage(const TripleStore& store,
                                 const ConceptGraph& graph,
                                 const ParsedNodeIndex& parses,
                                 unsigned workers) {
  CandidateCache cache(DistinctNodes(store), parses, graph, workers);
  CoverageResult r;
  r.triples = store.size();
  r.nodes_without_parse = cache.missing_parses();
  for (std::size_t i = 0; i < store.size(); ++i) {
    Triple t = store.triple(i);
    if (!cache.Get(t.head).empty() || !cache.Get(t.tail).empty()) ++r.covered;
  }
  return r;
}

std::string ToJsonLine(const LabeledExample& example) {
  Json j;
  j["head"] = example.triple.head;
  j["relation"] = example.triple.relation;
  j["tail"] = example.triple.tail;
  j["label"] = example.label;
  j["source"] = SourceName(example.source);
  j["provenance"] = example.provenance
                        ? ProvenanceJson(*example.provenance, example.source)
                        : Json(nullptr);
  return j.dump();
}

LabeledExample ParseJsonLine(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bad dataset record: ") + e.what(), 0);
  }
  try {
    LabeledExample ex;
    ex.triple = {j.at("head").get<std::string>(),
                 j.at("relation").get<std::string>(),
                 j.at("tail").get<std::string>()};
    ex.label = j.at("label").get<int>();
    const std::string source = j.at("source").get<std::string>();
    if (source == "positive") {
      ex.source = ExampleSource::kPositive;
    } else if (source == "ns") {
      ex.source = ExampleSource::kNs;
    } else if (source == "ec") {
      ex.source = ExampleSource::kEc;
    } else {
      throw FormatError("bad dataset record: unknown source '" + source + "'", 0);
    }
    const Json& p = j.at("provenance");
    if (!p.is_null()) {
      Provenance prov;
      prov.side = p.at("side").get<std::string>() == "head" ? Side::kHead
                                                            : Side::kTail;
      prov.original_node = p.at("original").get<std::string>();
      prov.replacement = p.at("replacement").get<std::string>();
      prov.replaced_phrase = p.value("replaced_phrase", "");
      prov.concept_phrase = p.value("concept_phrase", "");
      prov.frequency = p.value("frequency", std::uint64_t{0});
      prov.draw = p.at("draw").get<std::uint64_t>();
      prov.attempts = p.at("attempts").get<std::uint32_t>();
      prov.side_fallback = p.value("side_fallback", false);
      prov.ns_fallback = p.value("ns_fallback", false);
      ex.provenance = prov;
    }
    return ex;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("bad dataset record: ") + e.what(), 0);
  }
}

std::string StatsToJson(const DatasetStats& s, const SamplerConfig& config) {
  Json j;
  j["config"] = {{"ec_ratio", config.ec_ratio},
                 {"head_probability", config.head_probability},
                 {"constrained_ns", config.constrained_ns},
                 {"seed", config.seed},
                 {"max_retries", config.max_retries},
                 {"strict_ec", config.strict_ec},
                 {"keep_unpaired_positives", config.keep_unpaired_positives}};
  j["counts"] = {{"seeds", s.seeds},
                 {"positives", s.positives},
                 {"negatives", s.negatives},
                 {"ns", s.ns},
                 {"ec", s.ec},
                 {"ec_requested", s.ec_requested},
                 {"ec_side_fallbacks", s.ec_side_fallbacks},
                 {"ec_ns_fallbacks", s.ec_ns_fallbacks},
                 {"skipped_ns", s.skipped_ns},
                 {"skipped_ec_no_candidates", s.skipped_ec_no_candidates},
                 {"skipped_ec_collisions", s.skipped_ec_collisions},
                 {"filtered_rejections", s.filtered_rejections},
                 {"nodes_without_parse", s.nodes_without_parse}};
  return j.dump(2) + "\n";
}

}  // namespace ccc
