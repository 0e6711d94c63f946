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

#include <atomic>
#include <sstream>
#include <thread>

#include <gtest/gtest.h>

#include "ccc/errors.h"
#include "test_util.h"

namespace ccc {
namespace {

using testing::RawEdge;
using testing::ScratchDir;

// Linear scan over raw rows: merged frequency per (hypo, hyper), then the
// hits for one phrase in one direction, ordered by frequency desc, phrase.
std::vector<std::pair<std::string, std::uint64_t>> ScanOracle(
    const std::vector<RawEdge>& rows, const std::string& phrase,
    IsaDirection dir) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> merged;
  for (const RawEdge& e : rows) {
    if (e.hypo != e.hyper) merged[{e.hypo, e.hyper}] += e.freq;
  }
  std::vector<std::pair<std::string, std::uint64_t>> out;
  for (const auto& [key, f] : merged) {
    if (dir == IsaDirection::kAbstraction && key.first == phrase) {
      out.emplace_back(key.second, f);
    }
    if (dir == IsaDirection::kInstantiation && key.second == phrase) {
      out.emplace_back(key.first, f);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    return a.second != b.second ? a.second > b.second : a.first < b.first;
  });
  return out;
}

std::vector<std::pair<std::string, std::uint64_t>> Flatten(
    const std::vector<IsaHit>& hits) {
  std::vector<std::pair<std::string, std::uint64_t>> out;
  for (const IsaHit& h : hits) out.emplace_back(std::string(h.phrase), h.frequency);
  return out;
}

const char kToy[] = "animal\tdog\t10\nanimal\tcat\t5\ndog\tpoodle\t2\n";

TEST(ConceptGraphTest, ToyFileMatchesScan) {
  ScratchDir dir;
  ConceptGraph g = LoadConceptGraph(dir.Write("toy.tsv", kToy));
  std::vector<RawEdge> rows = {{"animal", "dog", 10}, {"animal", "cat", 5},
                               {"dog", "poodle", 2}};
  EXPECT_EQ(g.phrase_count(), 4u);
  EXPECT_EQ(g.edge_count(), 3u);
  for (const char* p : {"dog", "animal", "cat", "poodle", "wolf"}) {
    for (IsaDirection d : {IsaDirection::kAbstraction, IsaDirection::kInstantiation}) {
      EXPECT_EQ(Flatten(g.Query(p, d)), ScanOracle(rows, p, d)) << p;
    }
  }
  EXPECT_EQ(Flatten(g.Query("dog", IsaDirection::kAbstraction)),
            (std::vector<std::pair<std::string, std::uint64_t>>{{"animal", 10}}));
  EXPECT_EQ(Flatten(g.Query("dog", IsaDirection::kInstantiation)),
            (std::vector<std::pair<std::string, std::uint64_t>>{{"poodle", 2}}));
  EXPECT_EQ(Flatten(g.Query("animal", IsaDirection::kInstantiation)),
            (std::vector<std::pair<std::string, std::uint64_t>>{{"dog", 10}, {"cat", 5}}));
}

TEST(ConceptGraphTest, EmptyFileGivesEmptyGraph) {
  ScratchDir dir;
  ConceptGraph g = LoadConceptGraph(dir.Write("e.tsv", ""));
  EXPECT_TRUE(g.empty());
  EXPECT_EQ(g.phrase_count(), 0u);
  EXPECT_TRUE(g.Query("anything", IsaDirection::kAbstraction).empty());
  EXPECT_TRUE(ConceptGraph().Query("x", IsaDirection::kInstantiation).empty());
}

TEST(ConceptGraphTest, MilkHasBothConcepts) {
  ConceptGraph g = ConceptGraph::FromEdges(
      {{"milk", "beverage", 30}, {"milk", "dairy", 10}, {"juice", "beverage", 7}});
  auto hits = Flatten(g.Query("Milk", IsaDirection::kAbstraction));
  EXPECT_EQ(hits, (std::vector<std::pair<std::string, std::uint64_t>>{
                      {"beverage", 30}, {"dairy", 10}}));
}

TEST(ConceptGraphTest, DuplicatesMergeBySumAndNormalize) {
  ScratchDir dir;
  ConceptLoadStats st;
  ConceptGraph g = LoadConceptGraph(
      dir.Write("d.tsv", "Animal\tdog\t3\nanimal\t  Dog \t4\nfruit\tfruit\t9\n"), {}, &st);
  EXPECT_EQ(st.rows, 3u);
  EXPECT_EQ(st.merged_duplicates, 1u);
  EXPECT_EQ(st.self_loops, 1u);
  EXPECT_EQ(Flatten(g.Query("dog", IsaDirection::kAbstraction)),
            (std::vector<std::pair<std::string, std::uint64_t>>{{"animal", 7}}));
}

TEST(ConceptGraphTest, MinFrequencyAppliesAfterMerge) {
  ConceptGraph g = ConceptGraph::FromEdges(
      {{"dog", "animal", 2}, {"dog", "animal", 2}, {"cat", "animal", 3}}, 4);
  EXPECT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.Query("cat", IsaDirection::kAbstraction).size(), 0u);
  EXPECT_EQ(g.Query("dog", IsaDirection::kAbstraction).size(), 1u);
}

TEST(ConceptGraphTest, ReversedColumnOrder) {
  ScratchDir dir;
  ConceptLoadOptions opts;
  opts.order = ColumnOrder::kHypoHyper;
  ConceptGraph g = LoadConceptGraph(dir.Write("r.tsv", "dog\tanimal\t10\n"), opts);
  EXPECT_EQ(g.Query("dog", IsaDirection::kAbstraction).at(0).phrase, "animal");
}

TEST(ConceptGraphTest, MalformedRowsAbortWithLineOrSkip) {
  ScratchDir dir;
  std::string path = dir.Write("m.tsv", "animal\tdog\t10\nbad row\nx\ty\tzz\nfruit\tapple\t2\n");
  try {
    LoadConceptGraph(path);
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.location(), 2u);
    EXPECT_NE(std::string(e.what()).find(":2"), std::string::npos) << e.what();
  }
  ConceptLoadOptions opts;
  opts.on_error = ErrorPolicy::kSkip;
  ConceptLoadStats st;
  ConceptGraph g = LoadConceptGraph(path, opts, &st);
  EXPECT_EQ(st.malformed, 2u);
  EXPECT_EQ(st.first_malformed_line, 2u);
  EXPECT_EQ(g.edge_count(), 2u);
}

TEST(ConceptGraphTest, MissingFileIsIoError) {
  EXPECT_THROW(LoadConceptGraph("/nonexistent/probase.tsv"), IoError);
}

TEST(ConceptGraphTest, BinaryRoundTrip) {
  ScratchDir dir;
  std::mt19937_64 gen(5);
  std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f", "g"};
  ConceptGraph g = testing::GraphOf(testing::RandomEdges(gen, vocab, 60));
  std::string path = dir.Path("g.bin");
  SaveConceptGraph(g, path);
  EXPECT_TRUE(IsBinaryConceptGraph(path));
  ConceptGraph back = OpenConceptGraph(path);
  EXPECT_EQ(back, g);
  EXPECT_EQ(back.Edges(), g.Edges());
}

TEST(ConceptGraphTest, BinaryRejectsCorruption) {
  ConceptGraph g = ConceptGraph::FromEdges({{"dog", "animal", 1}});
  std::stringstream buf;
  g.SaveBinary(buf);
  std::string bytes = buf.str();
  std::stringstream truncated(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(ConceptGraph::LoadBinary(truncated), FormatError);
  bytes[9] = 99;  // version
  std::stringstream wrong_version(bytes);
  EXPECT_THROW(ConceptGraph::LoadBinary(wrong_version), FormatError);
}

// Property: (q, f) in forward(p) iff (p, f) in inverse(q), and every query
// matches the scan oracle.
TEST(ConceptGraphProperty, TransposeAndOracle) {
  std::vector<std::string> vocab = {"cat", "dog", "pet", "animal", "tree", "oak"};
  for (int trial = 0; trial < 50; ++trial) {
    std::mt19937_64 gen(trial);
    auto rows = testing::RandomEdges(gen, vocab, 30);
    ConceptGraph g = testing::GraphOf(rows);
    std::set<std::string> phrases;
    for (const auto& e : rows) {
      phrases.insert(e.hypo);
      phrases.insert(e.hyper);
    }
    for (const std::string& p : phrases) {
      for (IsaDirection d : {IsaDirection::kAbstraction, IsaDirection::kInstantiation}) {
        ASSERT_EQ(Flatten(g.Query(p, d)), ScanOracle(rows, p, d));
      }
      for (const IsaHit& h : g.Query(p, IsaDirection::kAbstraction)) {
        auto inv = Flatten(g.Query(h.phrase, IsaDirection::kInstantiation));
        EXPECT_NE(std::find(inv.begin(), inv.end(), std::make_pair(p, h.frequency)),
                  inv.end());
      }
    }
  }
}

TEST(ConceptGraphProperty, LoadIsIdempotent) {
  ScratchDir dir;
  std::string path = dir.Write("t.tsv", "b\ta\t1\nc\ta\t2\nb\td\t3\n");
  EXPECT_EQ(LoadConceptGraph(path), LoadConceptGraph(path));
}

TEST(ConceptGraphTest, ConcurrentReaders) {
  ConceptGraph g = ConceptGraph::FromEdges({{"dog", "animal", 3}, {"cat", "animal", 2}});
  std::vector<std::thread> threads;
  std::atomic<int> ok{0};
  for (int t = 0; t < 4; ++t) {
    threads.emplace_back([g, &ok] {
      for (int i = 0; i < 1000; ++i) {
        if (g.Query("animal", IsaDirection::kInstantiation).size() == 2) ++ok;
      }
    });
  }
  for (auto& t : threads) t.join();
  EXPECT_EQ(ok.load(), 4000);
}

}  // namespace
}  // namespace ccc
