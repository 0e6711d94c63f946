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

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "ccc/concept_graph.h"
#include "ccc/conceptualizer.h"
#include "ccc/metrics.h"
#include "ccc/rng.h"
#include "ccc/sampler.h"
#include "synthetic.h"
#include "test_util.h"

namespace ccc {
namespace {

std::vector<ConceptEdge> Edges(std::size_t n) {
  std::vector<ConceptEdge> edges;
  edges.reserve(n);
  std::mt19937_64 gen(1);
  for (std::size_t i = 0; i < n; ++i) {
    edges.push_back({"entity " + std::to_string(i), "concept " + std::to_string(gen() % (n / 10 + 1)),
                     1 + gen() % 100});
  }
  return edges;
}

void BM_LoadConceptTsv(benchmark::State& state) {
  testing::ScratchDir dir;
  const std::string path = dir.Path("g.tsv");
  {
    std::ofstream out(path);
    for (const ConceptEdge& e : Edges(state.range(0))) {
      out << e.hyper << '\t' << e.hypo << '\t' << e.frequency << '\n';
    }
  }
  for (auto _ : state) benchmark::DoNotOptimize(LoadConceptGraph(path));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LoadConceptTsv)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_OpenConceptBinary(benchmark::State& state) {
  testing::ScratchDir dir;
  const std::string path = dir.Path("g.bin");
  SaveConceptGraph(ConceptGraph::FromEdges(Edges(state.range(0))), path);
  for (auto _ : state) benchmark::DoNotOptimize(OpenConceptGraph(path));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_OpenConceptBinary)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_QueryKey(benchmark::State& state) {
  const auto edges = Edges(100000);
  ConceptGraph g = ConceptGraph::FromEdges(edges);
  std::size_t i = 0;
  for (auto _ : state) {
    const std::string& key = edges[i++ % edges.size()].hypo;
    benchmark::DoNotOptimize(g.QueryKey(key, IsaDirection::kAbstraction));
  }
}
BENCHMARK(BM_QueryKey);

void BM_Identify(benchmark::State& state) {
  const std::vector<std::string> vocab = {"cat", "dog", "tea", "milk", "box", "red"};
  std::mt19937_64 gen(3);
  ConceptGraph g = testing::GraphOf(testing::RandomEdges(gen, vocab, 40));
  std::vector<ParsedNode> nodes;
  for (int i = 0; i < 256; ++i) {
    nodes.push_back(ParsedNode::Create(testing::RandomTree(gen, vocab, state.range(0))));
  }
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(IdentifyConceptualizations(nodes[i++ % nodes.size()], g));
  }
}
BENCHMARK(BM_Identify)->Arg(5)->Arg(10)->Arg(20);

void BM_SampleCategorical(benchmark::State& state) {
  std::vector<std::uint64_t> weights(state.range(0));
  for (std::size_t k = 0; k < weights.size(); ++k) weights[k] = 1 + k % 50;
  Rng rng(5);
  for (auto _ : state) benchmark::DoNotOptimize(SampleCategorical(weights, rng));
}
BENCHMARK(BM_SampleCategorical)->Arg(2)->Arg(32)->Arg(1024);

void BM_BuildDataset(benchmark::State& state) {
  auto world = testing::MakeSyntheticWorld(state.range(0), 7);
  SamplerConfig config;
  config.ec_ratio = 0.75;
  config.workers = static_cast<unsigned>(state.range(1));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        BuildDataset(world.store, world.store, world.graph, world.parses, config));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildDataset)
    ->Args({10000, 1})
    ->Args({10000, 4})
    ->Unit(benchmark::kMillisecond)
    ->UseRealTime();

void BM_ComputeMetrics(benchmark::State& state) {
  GenerationSet gen;
  std::mt19937_64 rng(9);
  for (int i = 0; i < state.range(0); ++i) {
    gen.records.push_back({{"seed " + std::to_string(i % 100), "xWant", "t"}, "tail",
                           "PersonX buys the item" + std::to_string(rng() % 5000)});
  }
  NodeSet train;
  for (int i = 0; i < 2500; ++i) train.insert("PersonX buys the item" + std::to_string(i));
  NodeNormalizer normalizer;
  for (auto _ : state) benchmark::DoNotOptimize(ComputeMetrics(gen, train, normalizer));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_ComputeMetrics)->Arg(10000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace ccc

BENCHMARK_MAIN();
