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

#include <set>
#include <unordered_set>

#include <gtest/gtest.h>

#include "ccc/errors.h"
#include "synthetic.h"
#include "test_util.h"

namespace ccc {
namespace {

using testing::EventParse;

SubstitutionCandidate Cand(std::string text, std::uint64_t f) {
  SubstitutionCandidate c;
  c.new_text = std::move(text);
  c.span = {3, 3};
  c.root = 3;
  c.original_phrase = "milk";
  c.replacement = c.new_text.substr(c.new_text.rfind(' ') + 1);
  c.frequency = f;
  return c;
}

TripleStore BalancedStore() {
  TripleStore s(CkgFormat::kAtomic);
  for (int h = 0; h < 10; ++h) {
    for (int t = 0; t < 10; ++t) {
      s.Insert({"head " + std::to_string(h), t % 2 ? "xWant" : "xNeed",
                "tail " + std::to_string(t)});
    }
  }
  return s;
}

TEST(SampleCategoricalTest, RejectsBadWeights) {
  Rng rng(1);
  std::vector<std::uint64_t> none;
  EXPECT_THROW(SampleCategorical(none, rng), InvalidArgument);
  std::vector<std::uint64_t> zero = {3, 0};
  EXPECT_THROW(SampleCategorical(zero, rng), InvalidArgument);
  std::vector<std::uint64_t> one = {5};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(SampleCategorical(one, rng), 0u);
}

TEST(CorruptNsTest, SideFractionNearHalf) {
  TripleStore s = BalancedStore();
  SamplerConfig config;
  Rng rng(17);
  int heads = 0, total = 0;
  for (int i = 0; i < 10000; ++i) {
    auto c = CorruptNs(s.triple(i % s.size()), s, config, rng);
    ASSERT_TRUE(c.has_value());
    heads += c->provenance.side == Side::kHead;
    ++total;
  }
  EXPECT_NEAR(static_cast<double>(heads) / total, 0.5, 0.02);
}

TEST(CorruptNsTest, SingleHeadAndTailSkips) {
  TripleStore s(CkgFormat::kAtomic);
  s.Insert({"only head", "xWant", "only tail"});
  SamplerConfig config;
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    EXPECT_FALSE(CorruptNs(s.triple(0), s, config, rng).has_value());
  }
}

TEST(CorruptNsTest, ConstrainedTailsStayInRelation) {
  TripleStore s = BalancedStore();
  s.Insert({"head 0", "oEffect", "elsewhere"});
  std::set<std::string> want_tails;
  for (NodeId id : s.tails(*s.FindRelation("xWant"))) want_tails.emplace(s.node(id));
  std::set<std::string> heads;
  for (NodeId id : s.heads()) heads.emplace(s.node(id));
  SamplerConfig config;
  Rng rng(5);
  const Triple seed{"head 3", "xWant", "tail 1"};
  for (int i = 0; i < 1000; ++i) {
    auto c = CorruptNs(seed, s, config, rng);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->triple.relation, "xWant");
    if (c->provenance.side == Side::kTail) {
      EXPECT_EQ(c->triple.head, seed.head);
      EXPECT_TRUE(want_tails.count(c->triple.tail)) << c->triple.tail;
      EXPECT_NE(c->triple.tail, seed.tail);
    } else {
      EXPECT_EQ(c->triple.tail, seed.tail);
      EXPECT_TRUE(heads.count(c->triple.head));
      EXPECT_NE(c->triple.head, seed.head);
    }
  }
}

TEST(CorruptNsTest, UnconstrainedDrawsAnyNode) {
  TripleStore s = BalancedStore();
  SamplerConfig config;
  config.constrained_ns = false;
  Rng rng(8);
  bool saw_tail_as_head = false;
  for (int i = 0; i < 500; ++i) {
    auto c = CorruptNs(s.triple(0), s, config, rng);
    ASSERT_TRUE(c.has_value());
    if (c->provenance.side == Side::kHead) {
      saw_tail_as_head |= c->triple.head.rfind("tail", 0) == 0;
    }
  }
  EXPECT_TRUE(saw_tail_as_head);
}

TEST(CorruptEcTest, SingleCandidateAlwaysChosen) {
  std::vector<SubstitutionCandidate> tail = {Cand("PersonX wants beverage", 30)};
  SamplerConfig config;
  Rng rng(2);
  const Triple t{"PersonX is thirsty", "xWant", "PersonX wants milk"};
  for (int i = 0; i < 100; ++i) {
    auto c = CorruptEc(t, {}, tail, config, rng);
    ASSERT_TRUE(c.has_value());
    EXPECT_EQ(c->triple.tail, "PersonX wants beverage");
    EXPECT_EQ(c->triple.head, t.head);
  }
  EXPECT_FALSE(CorruptEc(t, {}, {}, config, rng).has_value());
}

TEST(CorruptEcTest, WeightsThirtyToTenPassChiSquare) {
  std::vector<SubstitutionCandidate> tail = {Cand("PersonX wants beverage", 30),
                                             Cand("PersonX wants dairy", 10)};
  SamplerConfig config;
  Rng rng(2024);
  const Triple t{"PersonX is thirsty", "xWant", "PersonX wants milk"};
  int first = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    auto c = CorruptEc(t, {}, tail, config, rng);
    first += c->triple.tail == "PersonX wants beverage";
  }
  const double e1 = n * 0.75, e2 = n * 0.25;
  const double stat = (first - e1) * (first - e1) / e1 +
                      ((n - first) - e2) * ((n - first) - e2) / e2;
  EXPECT_GT(testing::ChiSquare1Pvalue(stat), 0.01) << first;
}

TEST(CorruptEcTest, SideChoiceNearHalfAndFallback) {
  std::vector<SubstitutionCandidate> head = {Cand("PersonX drinks juice", 5)};
  std::vector<SubstitutionCandidate> tail = {Cand("PersonX wants dairy", 10)};
  SamplerConfig config;
  Rng rng(99);
  const Triple t{"PersonX drinks tea", "xWant", "PersonX wants milk"};
  int heads = 0;
  for (int i = 0; i < 10000; ++i) {
    auto c = CorruptEc(t, head, tail, config, rng);
    heads += c->provenance.side == Side::kHead;
    EXPECT_FALSE(c->provenance.side_fallback);
  }
  EXPECT_NEAR(heads / 10000.0, 0.5, 0.02);
  int fallbacks = 0;
  for (int i = 0; i < 1000; ++i) {
    auto c = CorruptEc(t, {}, tail, config, rng);
    EXPECT_EQ(c->provenance.side, Side::kTail);
    fallbacks += c->provenance.side_fallback;
  }
  EXPECT_GT(fallbacks, 400);
  EXPECT_LT(fallbacks, 600);
}

TEST(CorruptEcTest, MilkToConcepts) {
  ConceptGraph g = ConceptGraph::FromEdges({{"milk", "beverage", 30}, {"milk", "dairy", 10}});
  ParsedNode tail = EventParse("wants", "milk");
  SamplerConfig config;
  Rng rng(4);
  const Triple t{"PersonX is thirsty", "xWant", "PersonX wants milk"};
  for (int i = 0; i < 200; ++i) {
    auto c = CorruptEc(t, nullptr, &tail, g, config, rng);
    ASSERT_TRUE(c.has_value());
    EXPECT_TRUE(c->triple.tail == "PersonX wants beverage" ||
                c->triple.tail == "PersonX wants dairy")
        << c->triple.tail;
    EXPECT_EQ(c->provenance.replaced_phrase, "milk");
  }
}

// Exhaustive set check: no negative is a member of the full store, the
// label mix is exactly 1:1, and EC negatives differ from their positive in
// one node.
void CheckDataset(const std::vector<LabeledExample>& data, const TripleStore& known) {
  std::unordered_set<Triple, TripleHash> positives;
  for (const Triple& t : known.Triples()) positives.insert(t);
  std::size_t pos = 0, neg = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const LabeledExample& ex = data[i];
    EXPECT_EQ(ex.label == 1, ex.source == ExampleSource::kPositive);
    if (ex.label == 1) {
      ++pos;
      continue;
    }
    ++neg;
    ASSERT_EQ(positives.count(ex.triple), 0u) << ToJsonLine(ex);
    ASSERT_GT(i, 0u);
    const Triple& src = data[i - 1].triple;
    EXPECT_EQ(ex.triple.relation, src.relation);
    EXPECT_NE(ex.triple.head == src.head, ex.triple.tail == src.tail);
  }
  EXPECT_EQ(pos, neg);
}

TEST(BuildDatasetTest, FilteredAndBalanced) {
  auto w = testing::MakeSyntheticWorld(5000, 1);
  SamplerConfig config;
  config.seed = 11;
  DatasetStats st;
  auto data = BuildDataset(w.store, w.store, w.graph, w.parses, config, &st);
  CheckDataset(data, w.store);
  EXPECT_EQ(st.positives, st.negatives);
  EXPECT_EQ(st.ec + st.ns, st.negatives);
  EXPECT_EQ(st.nodes_without_parse, 0u);
  // The fixture is dense enough that filtering actually fires.
  EXPECT_GT(st.filtered_rejections, 0u);
}

TEST(BuildDatasetTest, EcRatioPresets) {
  auto w = testing::MakeSyntheticWorld(10000, 2);
  for (double ratio : kEcRatioPresets) {
    SamplerConfig config;
    config.ec_ratio = ratio;
    config.seed = 7;
    DatasetStats st;
    auto data = BuildDataset(w.store, w.store, w.graph, w.parses, config, &st);
    ASSERT_GE(data.size(), 10000u);
    EXPECT_NEAR(static_cast<double>(st.ec) / st.negatives, ratio, 0.02) << ratio;
  }
}

TEST(BuildDatasetTest, CollisionIsRejected) {
  // The only EC rewrite of the tail is itself a positive; the head has no
  // parse, so EC can only collide.
  TripleStore s(CkgFormat::kAtomic);
  s.Insert({"PersonX is thirsty", "xWant", "PersonX wants milk"});
  s.Insert({"PersonX is thirsty", "xWant", "PersonX wants beverage"});
  ConceptGraph g = ConceptGraph::FromEdges({{"milk", "beverage", 30}});
  ParsedNodeIndex parses;
  parses.Add(EventParse("wants", "milk"));
  SamplerConfig config;
  config.ec_ratio = 1.0;
  config.strict_ec = true;
  config.max_retries = 5;
  TripleStore seeds(CkgFormat::kAtomic);
  seeds.Insert(s.triple(0));
  DatasetStats st;
  auto data = BuildDataset(seeds, s, g, parses, config, &st);
  EXPECT_TRUE(data.empty());
  EXPECT_EQ(st.skipped_ec_collisions, 1u);
  EXPECT_EQ(st.filtered_rejections, 5u);
  config.keep_unpaired_positives = true;
  data = BuildDataset(seeds, s, g, parses, config, &st);
  ASSERT_EQ(data.size(), 1u);
  EXPECT_EQ(data[0].label, 1);

  // With a second rewrite available the draw is retried until it misses.
  g = ConceptGraph::FromEdges({{"milk", "beverage", 30}, {"milk", "dairy", 1}});
  config.keep_unpaired_positives = false;
  config.max_retries = 200;
  data = BuildDataset(seeds, s, g, parses, config, &st);
  ASSERT_EQ(data.size(), 2u);
  EXPECT_EQ(data[1].triple.tail, "PersonX wants dairy");
  EXPECT_GT(st.filtered_rejections, 0u);
}

TEST(BuildDatasetTest, StrictEcSkipsAndLenientFallsBack) {
  TripleStore s(CkgFormat::kAtomic);
  s.Insert({"I am fine", "xWant", "to rest"});
  s.Insert({"you are ok", "xNeed", "to sleep"});
  ConceptGraph g = ConceptGraph::FromEdges({{"milk", "beverage", 30}});
  ParsedNodeIndex parses;
  SamplerConfig config;
  config.ec_ratio = 1.0;
  config.strict_ec = true;
  DatasetStats st;
  EXPECT_TRUE(BuildDataset(s, s, g, parses, config, &st).empty());
  EXPECT_EQ(st.skipped_ec_no_candidates, 2u);
  EXPECT_EQ(st.nodes_without_parse, 4u);
  config.strict_ec = false;
  config.constrained_ns = false;
  auto data = BuildDataset(s, s, g, parses, config, &st);
  ASSERT_EQ(data.size(), 4u);
  EXPECT_EQ(data[1].source, ExampleSource::kNs);
  EXPECT_TRUE(data[1].provenance->ns_fallback);
  EXPECT_EQ(st.ec_ns_fallbacks, 2u);
}

TEST(BuildDatasetTest, IndependentOfWorkerCount) {
  auto w = testing::MakeSyntheticWorld(2000, 3);
  SamplerConfig config;
  config.ec_ratio = 0.75;
  config.seed = 5;
  auto one = BuildDataset(w.store, w.store, w.graph, w.parses, config);
  config.workers = 4;
  auto four = BuildDataset(w.store, w.store, w.graph, w.parses, config);
  EXPECT_EQ(one, four);
  config.seed = 6;
  EXPECT_NE(one, BuildDataset(w.store, w.store, w.graph, w.parses, config));
}

TEST(BuildDatasetTest, ValidatesConfig) {
  TripleStore s(CkgFormat::kAtomic);
  SamplerConfig config;
  config.ec_ratio = 1.5;
  EXPECT_THROW(BuildDataset(s, s, ConceptGraph(), ParsedNodeIndex(), config), InvalidArgument);
  config.ec_ratio = 0.5;
  config.max_retries = 0;
  EXPECT_THROW(Validate(config), InvalidArgument);
}

TEST(JsonTest, RecordRoundTripAndKeyOrder) {
  LabeledExample ex{{"PersonX drinks tea", "xWant", "PersonX wants dairy"},
                    0,
                    ExampleSource::kEc,
                    Provenance{Side::kTail, "PersonX wants milk", "PersonX wants dairy",
                               "milk", "dairy", 10, 1, 2, false, false}};
  std::string line = ToJsonLine(ex);
  EXPECT_EQ(line.find("{\"head\":"), 0u);
  EXPECT_LT(line.find("\"relation\""), line.find("\"tail\""));
  EXPECT_LT(line.find("\"label\""), line.find("\"source\""));
  EXPECT_LT(line.find("\"source\""), line.find("\"provenance\""));
  LabeledExample back = ParseJsonLine(line);
  EXPECT_EQ(back.triple, ex.triple);
  EXPECT_EQ(back.label, 0);
  EXPECT_EQ(back.source, ExampleSource::kEc);
  EXPECT_EQ(back.provenance->concept_phrase, "dairy");
  LabeledExample pos{{"a", "xWant", "b"}, 1, ExampleSource::kPositive, std::nullopt};
  EXPECT_EQ(ToJsonLine(pos),
            R"({"head":"a","relation":"xWant","tail":"b","label":1,"source":"positive","provenance":null})");
  EXPECT_THROW(ParseJsonLine("{not json"), FormatError);
}

TEST(CoverageTest, HandCountedToy) {
  // Three of four triples have a side with a noun in the graph.
  TripleStore s(CkgFormat::kAtomic);
  s.Insert({"PersonX likes milk", "xWant", "PersonX buys shoe"});
  s.Insert({"PersonX likes tea", "xWant", "PersonX buys shoe"});
  s.Insert({"PersonX likes shoe", "xNeed", "PersonX buys milk"});
  s.Insert({"PersonX likes shoe", "xWant", "PersonX buys rock"});
  ConceptGraph g = ConceptGraph::FromEdges({{"milk", "beverage", 3}, {"tea", "beverage", 2}});
  ParsedNodeIndex parses;
  for (const char* n : {"milk", "tea", "shoe"}) parses.Add(EventParse("likes", n));
  for (const char* n : {"shoe", "milk", "rock"}) parses.Add(EventParse("buys", n));
  CoverageResult r = MeasureEcCoverage(s, g, parses);
  EXPECT_EQ(r.triples, 4u);
  EXPECT_EQ(r.covered, 3u);
  EXPECT_DOUBLE_EQ(r.fraction(), 0.75);
}

TEST(CoverageTest, PronounsOnly) {
  TripleStore s(CkgFormat::kAtomic);
  s.Insert({"he", "xWant", "she"});
  s.Insert({"it", "xWant", "they"});
  ConceptGraph g = ConceptGraph::FromEdges({{"he", "person", 3}});
  ParsedNodeIndex parses;
  for (const char* p : {"he", "she", "it", "they"}) {
    parses.Add(ParsedNode::Create(testing::MakeTokens({{p, "PRON", 0}})));
  }
  EXPECT_EQ(MeasureEcCoverage(s, g, parses).fraction(), 0.0);
  EXPECT_EQ(MeasureEcCoverage(TripleStore(CkgFormat::kAtomic), g, parses).fraction(), 0.0);
}

}  // namespace
}  // namespace ccc
