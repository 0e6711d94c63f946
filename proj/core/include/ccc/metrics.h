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

// Diversity and novelty of generated nodes.
//
// All ratios are normalized by the number of produced nodes, and distinct
// counts are pooled over every seed and relation of a generation set.

#ifndef CCC_METRICS_H_
#define CCC_METRICS_H_

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "ccc/text.h"
#include "ccc/triple_store.h"

namespace ccc {


struct GenerationRecord {
  Triple seed;
  std::string side;  // "head" or "tail"
  std::string node;
};

struct GenerationSet {
  std::vector<GenerationRecord> records;
  // Seeds used for generation, including ones that produced nothing. Unset:
  // the number of distinct seeds among the records.
  std::optional<std::size_t> seed_count;

  std::size_t SeedCount() const;
};

// Reads `seed_head \t relation \t seed_tail \t side \t generated_node`.
GenerationSet LoadGenerationSet(const std::string& path);

using NodeSet = std::unordered_set<std::string, StringHash, std::equal_to<>>;

// One node per line, or a CKG TSV (both sides of every row) when
// `from_ckg` is set.
NodeSet LoadNodeSet(const std::string& path, bool from_ckg = false);

struct Diversity {
  double dist_1 = 0;
  double dist_2 = 0;
  double dist_n = 0;
  double n_per_seed = 0;
};

struct Novelty {
  double n_t = 0;  // novel produced / produced
  double n_u = 0;  // novel distinct / distinct
};

// Throws InvalidArgument on an empty set.
Diversity ComputeDiversity(const GenerationSet& gen);
Novelty ComputeNovelty(const GenerationSet& gen, const NodeSet& train_nodes);

// Removes structural words, then collapses whitespace.
class NodeNormalizer {
 public:
  // The built-in list (structural_words_v1.txt).
  NodeNormalizer();
  explicit NodeNormalizer(std::unordered_set<std::string> words,
                          std::string version = "custom");
  // '#' comments and blank lines are ignored.
  static NodeNormalizer FromFile(const std::string& path);

  std::string Normalize(std::string_view text) const;
  const std::string& version() const { return version_; }
  bool IsStructural(std::string_view token) const;

 private:
  std::unordered_set<std::string> words_;
  std::string version_;
};

// Normalizes with the built-in list.
std::string NormalizeNode(std::string_view text);

struct MetricsReport {
  double n_per_seed = 0;
  double dist_1 = 0;
  double dist_2 = 0;
  double dist_n = 0;
  double novel_per_total = 0;
  double novel_per_unique = 0;
  double dist_n_norm = 0;
  double novel_per_total_norm = 0;
  double novel_per_unique_norm = 0;
  std::size_t produced = 0;
  std::size_t seeds = 0;
};

MetricsReport ComputeMetrics(const GenerationSet& gen,
                             const NodeSet& train_nodes,
                             const NodeNormalizer& normalizer);

// Table with rows N/Seed, Dist-N, Dist-1, Dist-2, N/T N, N/U N,
// Dist-N-Norm, N/T N-Norm, N/U N-Norm. Ratios are printed in percent.
void WriteReport(std::ostream& out, const MetricsReport& report,
                 std::string_view label);

}  // namespace ccc

#endif  // CCC_METRICS_H_
