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

// Test-only helpers: scratch files, random inputs, and reference
// implementations written independently of the library code they check.

#ifndef CCC_TESTS_TEST_UTIL_H_
#define CCC_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "ccc/concept_graph.h"
#include "ccc/parsed_node.h"

namespace ccc::testing {

// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  ScratchDir() {
    static int counter = 0;
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("ccc_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir&) = delete;
  ScratchDir& operator=(const ScratchDir&) = delete;

  std::string Path(const std::string& name) const { return (path_ / name).string(); }
  std::string Write(const std::string& name, const std::string& contents) const {
    std::string p = Path(name);
    std::ofstream(p, std::ios::binary) << contents;
    return p;
  }

 private:
  std::filesystem::path path_;
};

inline std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Builds tokens from (form, upos, head) triples; lemma = form.
inline std::vector<Token> MakeTokens(
    const std::vector<std::tuple<std::string, std::string, int>>& rows) {
  std::vector<Token> tokens;
  int i = 1;
  for (const auto& [form, upos, head] : rows) {
    Token t;
    t.index = i++;
    t.form = form;
    t.lemma = form;
    t.upos = upos;
    t.head = head;
    t.deprel = head == 0 ? "root" : "dep";
    tokens.push_back(t);
  }
  return tokens;
}

// Subtree bounds by explicit DFS over child lists.
inline std::pair<int, int> DfsSpan(const std::vector<Token>& tokens, int k) {
  std::vector<std::vector<int>> children(tokens.size() + 1);
  for (const Token& t : tokens) children[t.head].push_back(t.index);
  int lo = k, hi = k;
  std::vector<int> stack = {k};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    for (int c : children[v]) stack.push_back(c);
  }
  return {lo, hi};
}

inline bool DfsReaches(const std::vector<Token>& tokens, int from, int to) {
  std::vector<std::vector<int>> children(tokens.size() + 1);
  for (const Token& t : tokens) children[t.head].push_back(t.index);
  std::vector<int> stack = {from};
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (v == to) return true;
    for (int c : children[v]) stack.push_back(c);
  }
  return false;
}

struct RawEdge {
  std::string hyper;
  std::string hypo;
  std::uint64_t freq;
};

// Random tree over forms drawn from `vocab`: nodes are attached in a random
// order, each to a random already-attached node, so non-projective trees
// occur.
inline std::vector<Token> RandomTree(std::mt19937_64& gen,
                                     const std::vector<std::string>& vocab,
                                     int max_len) {
  const int n = std::uniform_int_distribution<int>(1, max_len)(gen);
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i + 1;
  std::shuffle(order.begin(), order.end(), gen);
  std::vector<Token> tokens(n);
  static const char* kTags[] = {"NOUN", "PROPN", "VERB", "ADJ", "DET", "NOUN"};
  for (int pos = 0; pos < n; ++pos) {
    Token& t = tokens[order[pos] - 1];
    t.index = order[pos];
    t.form = vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(gen)];
    t.lemma = t.form;
    t.upos = kTags[std::uniform_int_distribution<int>(0, 5)(gen)];
    t.head = pos == 0 ? 0 : order[std::uniform_int_distribution<int>(0, pos - 1)(gen)];
    t.deprel = t.head == 0 ? "root" : "dep";
  }
  return tokens;
}

// Random edges over single words and two-word phrases of `vocab`.
inline std::vector<RawEdge> RandomEdges(std::mt19937_64& gen,
                                        const std::vector<std::string>& vocab,
                                        int count) {
  auto phrase = [&] {
    std::string p = vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(gen)];
    if (std::uniform_int_distribution<int>(0, 2)(gen) == 0) {
      p += " " + vocab[std::uniform_int_distribution<std::size_t>(0, vocab.size() - 1)(gen)];
    }
    return p;
  };
  std::vector<RawEdge> edges;
  for (int i = 0; i < count; ++i) {
    edges.push_back({phrase(), phrase(),
                     std::uniform_int_distribution<std::uint64_t>(1, 50)(gen)});
  }
  return edges;
}

inline ConceptGraph GraphOf(const std::vector<RawEdge>& edges) {
  std::vector<ConceptEdge> ce;
  for (const RawEdge& e : edges) ce.push_back({e.hypo, e.hyper, e.freq});
  return ConceptGraph::FromEdges(ce);
}

// Reference join over the raw rows: every noun root k, every l..r inside its
// DFS bounds, every raw row whose hypo (or hyper) equals the span words.
// Rows are merged by (hypo, hyper) with summed counts first, as a graph
// loader must. Result: new node text -> max frequency, with verbatim
// insertion and the tail w_{r+1..n} kept.
inline std::map<std::string, std::uint64_t> BruteForceJoin(
    const std::vector<Token>& tokens, const std::vector<RawEdge>& rows) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> merged;
  for (const RawEdge& e : rows) {
    if (e.hypo != e.hyper) merged[{e.hypo, e.hyper}] += e.freq;
  }
  const int n = static_cast<int>(tokens.size());
  auto words = [&](int a, int b) {
    std::string s;
    for (int i = a; i <= b; ++i) {
      if (!s.empty()) s += ' ';
      s += tokens[i - 1].form;
    }
    return s;
  };
  const std::string original = words(1, n);
  std::map<std::string, std::uint64_t> out;
  for (int k = 1; k <= n; ++k) {
    const std::string& pos = tokens[k - 1].upos;
    if (pos != "NOUN" && pos != "PROPN") continue;
    auto [lo, hi] = DfsSpan(tokens, k);
    for (int l = lo; l <= k; ++l) {
      for (int r = k; r <= hi; ++r) {
        const std::string phrase = words(l, r);
        for (const auto& [key, f] : merged) {
          std::string rep;
          if (key.first == phrase) rep = key.second;
          else if (key.second == phrase) rep = key.first;
          else continue;
          std::string text = words(1, l - 1);
          if (!text.empty()) text += ' ';
          text += rep;
          std::string rest = words(r + 1, n);
          if (!rest.empty()) text += ' ' + rest;
          if (text == original) continue;
          auto [it, fresh] = out.try_emplace(text, f);
          if (!fresh && f > it->second) it->second = f;
        }
      }
    }
  }
  return out;
}

// Chi-square upper-tail probability for one degree of freedom.
inline double ChiSquare1Pvalue(double stat) { return std::erfc(std::sqrt(stat / 2)); }

}  // namespace ccc::testing

#endif  // CCC_TESTS_TEST_UTIL_H_
