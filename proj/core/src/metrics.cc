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

#include "ccc/metrics.h"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "ccc/errors.h"
#include "ccc/io.h"

namespace ccc {
namespace {

#include "structural_words_v1.inc"

std::unordered_set<std::string> ParseWordList(std::istream& in) {
  std::unordered_set<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    StripCarriageReturn(line);
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string word = NormalizePhrase(line);
    if (!word.empty()) words.insert(std::move(word));
  }
  return words;
}

double Ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void RequireNonEmpty(const GenerationSet& gen) {
  if (gen.records.empty()) {
    throw InvalidArgument("generation set is empty; ratios are undefined");
  }
}

struct NodeCounts {
  std::size_t produced = 0;
  std::size_t distinct = 0;
  std::size_t novel = 0;
  std::size_t novel_distinct = 0;
};

template <typename Transform>
NodeCounts CountNodes(const GenerationSet& gen, const NodeSet& train,
                      Transform&& transform) {
  NodeCounts c;
  NodeSet seen;
  for (const GenerationRecord& r : gen.records) {
    std::string node = transform(r.node);
    bool novel = train.find(node) == train.end();
    ++c.produced;
    if (novel) ++c.novel;
    if (seen.insert(std::move(node)).second) {
      ++c.distinct;
      if (novel) ++c.novel_distinct;
    }
  }
  return c;
}

}  // namespace

std::size_t GenerationSet::SeedCount() const {
  if (seed_count) return *seed_count;
  std::unordered_set<Triple, TripleHash> seeds;
  for (const GenerationRecord& r : records) seeds.insert(r.seed);
  return seeds.size();
}

GenerationSet LoadGenerationSet(const std::string& path) {
  std::ifstream in = OpenInput(path);
  GenerationSet gen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    StripCarriageReturn(line);
    if (line.empty()) continue;
    auto f = SplitFields(line, '\t');
    if (f.size() != 5) {
      throw FormatError(path + ":" + std::to_string(line_no) +
                            ": expected 5 tab-separated columns, found " +
                            std::to_string(f.size()),
                        line_no);
    }
    if (f[3] != "head" && f[3] != "tail") {
      throw FormatError(path + ":" + std::to_string(line_no) +
                            ": side must be 'head' or 'tail'",
                        line_no);
    }
    gen.records.push_back({{std::string(f[0]), std::string(f[1]), std::string(f[2])},
                           std::string(f[3]),
                           std::string(f[4])});
  }
  return gen;
}

NodeSet LoadNodeSet(const std::string& path, bool from_ckg) {
  std::ifstream in = OpenInput(path);
  NodeSet nodes;
  std::string line;
  while (std::getline(in, line)) {
    StripCarriageReturn(line);
    if (line.empty()) continue;
    if (from_ckg) {
      auto f = SplitFields(line, '\t');
      if (f.size() != 3) continue;
      nodes.emplace(f[0]);
      nodes.emplace(f[2]);
    } else {
      nodes.insert(line);
    }
  }
  return nodes;
}

Diversity ComputeDiversity(const GenerationSet& gen) {
  RequireNonEmpty(gen);
  NodeSet nodes, unigrams, bigrams;
  for (const GenerationRecord& r : gen.records) {
    nodes.insert(r.node);
    auto tokens = SplitWhitespace(r.node);
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      unigrams.emplace(tokens[i]);
      if (i + 1 < tokens.size()) {
        std::string bigram(tokens[i]);
        bigram.push_back('\x1f');
        bigram.append(tokens[i + 1]);
        bigrams.insert(std::move(bigram));
      }
    }
  }
  const std::size_t produced = gen.records.size();
  Diversity d;
  d.dist_1 = Ratio(unigrams.size(), produced);
  d.dist_2 = Ratio(bigrams.size(), produced);
  d.dist_n = Ratio(nodes.size(), produced);
  d.n_per_seed = Ratio(produced, gen.SeedCount());
  return d;
}

Novelty ComputeNovelty(const GenerationSet& gen, const NodeSet& train_nodes) {
  RequireNonEmpty(gen);
  NodeCounts c = CountNodes(gen, train_nodes,
                            [](const std::string& s) { return s; });
  return {Ratio(c.novel, c.produced), Ratio(c.novel_distinct, c.distinct)};
}

NodeNormalizer::NodeNormalizer() : version_("structural_words_v1") {
  std::istringstream in(kStructuralWordsV1);
  words_ = ParseWordList(in);
}

NodeNormalizer::NodeNormalizer(std::unordered_set<std::string> words,
                               std::string version)
    : words_(std::move(words)), version_(std::move(version)) {}

NodeNormalizer NodeNormalizer::FromFile(const std::string& path) {
  std::ifstream in = OpenInput(path);
  return NodeNormalizer(ParseWordList(in), path);
}

bool NodeNormalizer::IsStructural(std::string_view token) const {
  return words_.count(ToLower(token)) > 0;
}

std::string NodeNormalizer::Normalize(std::string_view text) const {
  std::string out;
  for (std::string_view token : SplitWhitespace(text)) {
    if (IsStructural(token)) continue;
    if (!out.empty()) out.push_back(' ');
    out.append(token);
  }
  return out;
}

std::string NormalizeNode(std::string_view text) {
  static const NodeNormalizer kDefault;
  return kDefault.Normalize(text);
}

MetricsReport ComputeMetrics(const GenerationSet& gen,
                             const NodeSet& train_nodes,
                             const NodeNormalizer& normalizer) {
  Diversity d = ComputeDiversity(gen);
  Novelty n = ComputeNovelty(gen, train_nodes);
  NodeSet train_norm;
  for (const std::string& node : train_nodes) {
    train_norm.insert(normalizer.Normalize(node));
  }
  NodeCounts c = CountNodes(gen, train_norm, [&](const std::string& s) {
    return normalizer.Normalize(s);
  });
  MetricsReport r;
  r.n_per_seed = d.n_per_seed;
  r.dist_1 = d.dist_1;
  r.dist_2 = d.dist_2;
  r.dist_n = d.dist_n;
  r.novel_per_total = n.n_t;
  r.novel_per_unique = n.n_u;
  r.dist_n_norm = Ratio(c.distinct, c.produced);
  r.novel_per_total_norm = Ratio(c.novel, c.produced);
  r.novel_per_unique_norm = Ratio(c.novel_distinct, c.distinct);
  r.produced = gen.records.size();
  r.seeds = gen.SeedCount();
  return r;
}

void WriteReport(std::ostream& out, const MetricsReport& r,
                 std::string_view label) {
  auto pct = [](double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v * 100.0 << "%";
    return s.str();
  };
  auto row = [&](std::string_view name, const std::string& value) {
    out << std::left << std::setw(14) << name << value << "\n";
  };
  out << std::left << std::setw(14) << "" << label << "\n";
  std::ostringstream nps;
  nps << std::fixed << std::setprecision(2) << r.n_per_seed;
  row("N/Seed", nps.str());
  row("Dist-N", pct(r.dist_n));
  row("Dist-1", pct(r.dist_1));
  row("Dist-2", pct(r.dist_2));
  row("N/T N", pct(r.novel_per_total));
  row("N/U N", pct(r.novel_per_unique));
  row("Dist-N-Norm", pct(r.dist_n_norm));
  row("N/T N-Norm", pct(r.novel_per_total_norm));
  row("N/U N-Norm", pct(r.novel_per_unique_norm));
}

}  // namespace ccc
