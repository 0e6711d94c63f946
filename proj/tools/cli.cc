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

#include "cli.h"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string_view>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "ccc/concept_graph.h"
#include "ccc/conceptualizer.h"
#include "ccc/errors.h"
#include "ccc/generation.h"
#include "ccc/io.h"
#include "ccc/metrics.h"
#include "ccc/parallel.h"
#include "ccc/parsed_node.h"
#include "ccc/sampler.h"
#include "ccc/scorer.h"
#include "ccc/triple_store.h"

namespace ccc::cli {
namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr char kToolVersion[] = "0.1.0";

std::string Sha256File(const std::string& path) {
  std::ifstream in = OpenInput(path, std::ios::binary);
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                              EVP_MD_CTX_free);
  EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr);
  std::vector<char> buf(1 << 16);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (in.gcount() > 0) {
      EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  }
  return hex.str();
}

// Records a stage's full configuration, input and output checksums and
// counters. Carries no timestamps, so identical runs write identical
// manifests.
class Manifest {
 public:
  explicit Manifest(std::string subcommand) {
    doc_["tool"] = "ccc";
    doc_["version"] = kToolVersion;
    doc_["subcommand"] = std::move(subcommand);
    doc_["config"] = Json::object();
    doc_["inputs"] = Json::array();
    doc_["outputs"] = Json::array();
    doc_["stats"] = Json::object();
  }

  Json& config() { return doc_["config"]; }
  Json& stats() { return doc_["stats"]; }

  void Input(const std::string& path) { doc_["inputs"].push_back(Describe(path)); }
  void Output(const std::string& path) { doc_["outputs"].push_back(Describe(path)); }

  void Write(const std::string& path) const {
    AtomicOutputFile out(path);
    out.stream() << doc_.dump(2) << "\n";
    out.Commit();
  }

 private:
  static Json Describe(const std::string& path) {
    std::string digest = Sha256File(path);  // throws IoError if unreadable
    return {{"path", path}, {"bytes", fs::file_size(path)}, {"sha256", std::move(digest)}};
  }

  Json doc_;
};

std::string ManifestPath(const std::string& explicit_path,
                         const std::string& primary_output) {
  return explicit_path.empty() ? primary_output + ".manifest.json" : explicit_path;
}

CkgFormat ParseFormat(const std::string& s) {
  if (s == "atomic" || s == "atomic-tsv") return CkgFormat::kAtomic;
  if (s == "aser" || s == "aser-tsv") return CkgFormat::kAser;
  throw InvalidArgument("unknown CKG format '" + s + "'");
}

ErrorPolicy ParsePolicy(const std::string& s) {
  if (s == "abort") return ErrorPolicy::kAbort;
  if (s == "skip") return ErrorPolicy::kSkip;
  throw InvalidArgument("--on-error must be abort or skip");
}

std::optional<RepairMode> ParseRepairMode(const std::string& s) {
  if (s == "auto") return std::nullopt;
  if (s == "surface") return RepairMode::kSurface;
  if (s == "lemmatized") return RepairMode::kLemmatized;
  throw InvalidArgument("--repair must be auto, surface or lemmatized");
}

SplitRatios ParseRatios(const std::string& s) {
  std::vector<double> parts;
  std::stringstream in(s);
  std::string piece;
  while (std::getline(in, piece, ':')) {
    try {
      std::size_t used = 0;
      parts.push_back(std::stod(piece, &used));
      if (used != piece.size()) throw std::invalid_argument(piece);
    } catch (const std::exception&) {
      throw InvalidArgument("bad --ratios '" + s + "'");
    }
  }
  if (parts.size() != 3) throw InvalidArgument("--ratios needs train:dev:test");
  return {parts[0], parts[1], parts[2]};
}

std::string EnvOr(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

// Options shared by the stages that read parses and a concept graph.
struct ConceptInputs {
  std::string graph;
  std::string parses;
  std::uint64_t min_frequency = 1;
  std::string columns = "hyper-hypo";
  bool lemmatized = false;
  std::string repair = "auto";

  void Bind(CLI::App* app, bool parses_required = true) {
    app->add_option("--graph", graph, "Concept graph: binary index or TSV")
        ->required();
    auto* p = app->add_option("--parses", parses, "CoNLL-U parses of the nodes");
    if (parses_required) p->required();
    app->add_option("--min-frequency", min_frequency,
                    "Drop IsA edges below this frequency (TSV graphs only)");
    app->add_option("--columns", columns, "TSV column order")
        ->check(CLI::IsMember({"hyper-hypo", "hypo-hyper"}));
    app->add_flag("--lemmatized", lemmatized,
                  "FORM column is lemmatized (ASER); insert substitutions verbatim");
    app->add_option("--repair", repair, "Grammar repair mode")
        ->check(CLI::IsMember({"auto", "surface", "lemmatized"}));
  }

  ConceptGraph LoadGraph(Manifest& m, std::ostream& err, ErrorPolicy policy) const {
    ConceptLoadOptions opts;
    opts.min_frequency = min_frequency;
    opts.order = columns == "hyper-hypo" ? ColumnOrder::kHyperHypo
                                         : ColumnOrder::kHypoHyper;
    opts.on_error = policy;
    ConceptLoadStats st;
    m.Input(graph);
    ConceptGraph g = OpenConceptGraph(graph, opts, &st);
    m.stats()["graph_phrases"] = g.phrase_count();
    m.stats()["graph_edges"] = g.edge_count();
    if (st.malformed > 0) {
      err << "warning: skipped " << st.malformed
          << " malformed concept rows (first at line " << st.first_malformed_line
          << ")\n";
      m.stats()["graph_malformed_rows"] = st.malformed;
    }
    return g;
  }

  ParsedNodeIndex LoadParses(Manifest& m, std::ostream& err,
                             ErrorPolicy policy) const {
    ConllReadStats st;
    m.Input(parses);
    ParsedNodeIndex index = LoadParsedNodeIndex(parses, {lemmatized}, policy, &st);
    m.stats()["parsed_nodes"] = index.size();
    m.stats()["parse_blocks"] = st.blocks;
    m.stats()["parse_rejected_blocks"] = st.rejected;
    m.stats()["parse_dropped_sentences"] = st.dropped_sentences;
    if (st.rejected > 0) {
      err << "warning: rejected " << st.rejected
          << " invalid parse blocks (first: block " << st.first_rejected_block
          << ")\n";
    }
    return index;
  }

  void Record(Manifest& m) const {
    m.config()["graph"] = graph;
    m.config()["parses"] = parses;
    m.config()["min_frequency"] = min_frequency;
    m.config()["columns"] = columns;
    m.config()["lemmatized"] = lemmatized;
    m.config()["repair"] = repair;
  }
};

TripleStore LoadStore(const std::string& path, CkgFormat format,
                      ErrorPolicy policy, Manifest& m, std::ostream& err,
                      const std::string& label) {
  CkgLoadStats st;
  m.Input(path);
  TripleStore store = LoadCkg(path, format, policy, &st);
  m.stats()[label + "_triples"] = store.size();
  m.stats()[label + "_duplicate_rows"] = st.duplicates;
  if (st.rejected > 0) {
    m.stats()[label + "_rejected_rows"] = st.rejected;
    err << "warning: rejected " << st.rejected << " rows of " << path
        << " (first at line " << st.first_rejected_line << ")\n";
  }
  return store;
}

struct Common {
  unsigned workers = 0;
  std::string manifest;
  std::string on_error = "abort";

  void Bind(CLI::App* app) {
    app->add_option("--workers", workers, "Worker threads (0 = all cores)");
    app->add_option("--manifest", manifest,
                    "Manifest path (default: <output>.manifest.json)");
    app->add_option("--on-error", on_error, "Malformed input rows")
        ->check(CLI::IsMember({"abort", "skip"}));
  }
  ErrorPolicy policy() const { return ParsePolicy(on_error); }
  void Record(Manifest& m) const {
    // Worker count never changes outputs, so it is not part of the
    // configuration that identifies a run.
    m.config()["on_error"] = on_error;
  }
};

// ---- build-index -------------------------------------------------------

struct BuildIndexCmd {
  Common common;
  std::string input;
  std::string output;
  std::uint64_t min_frequency = 1;
  std::string columns = "hyper-hypo";

  void Bind(CLI::App* app) {
    common.Bind(app);
    app->add_option("--input", input, "Concept TSV")->required();
    app->add_option("--output", output, "Binary index path")->required();
    app->add_option("--min-frequency", min_frequency, "Drop edges below this frequency");
    app->add_option("--columns", columns, "TSV column order")
        ->check(CLI::IsMember({"hyper-hypo", "hypo-hyper"}));
  }

  int Run(std::ostream& out, std::ostream& err) {
    Manifest m("build-index");
    common.Record(m);
    m.config()["input"] = input;
    m.config()["output"] = output;
    m.config()["min_frequency"] = min_frequency;
    m.config()["columns"] = columns;
    m.Input(input);
    ConceptLoadOptions opts;
    opts.min_frequency = min_frequency;
    opts.order = columns == "hyper-hypo" ? ColumnOrder::kHyperHypo
                                         : ColumnOrder::kHypoHyper;
    opts.on_error = common.policy();
    ConceptLoadStats st;
    ConceptGraph g = LoadConceptGraph(input, opts, &st);
    if (st.malformed > 0) {
      err << "warning: skipped " << st.malformed
          << " malformed rows (first at line " << st.first_malformed_line << ")\n";
    }
    SaveConceptGraph(g, output);
    m.Output(output);
    m.stats() = {{"rows", st.rows},
                 {"malformed_rows", st.malformed},
                 {"self_loops", st.self_loops},
                 {"merged_duplicates", st.merged_duplicates},
                 {"below_min_frequency", st.below_min_frequency},
                 {"phrases", g.phrase_count()},
                 {"edges", g.edge_count()}};
    m.Write(ManifestPath(common.manifest, output));
    out << "indexed " << g.phrase_count() << " phrases, " << g.edge_count()
        << " edges\n";
    return kOk;
  }
};

// ---- ingest-ckg --------------------------------------------------------

struct IngestCmd {
  Common common;
  std::string input;
  std::string format;
  std::string output;
  std::vector<std::string> exclude;
  bool drop_isolated = false;
  std::string nodes;
  std::string nodes_out;

  void Bind(CLI::App* app) {
    common.Bind(app);
    app->add_option("--input", input, "Raw CKG TSV")->required();
    app->add_option("--format", format, "atomic or aser")
        ->required()
        ->check(CLI::IsMember({"atomic", "aser", "atomic-tsv", "aser-tsv"}));
    app->add_option("--output", output, "Deduplicated, pruned CKG TSV")->required();
    app->add_option("--exclude-relation", exclude, "Relation type to remove (repeatable)");
    app->add_flag("--drop-isolated", drop_isolated, "Remove nodes left without triples");
    app->add_option("--nodes", nodes, "Extra node list (one per line)");
    app->add_option("--nodes-out", nodes_out, "Write the surviving node set here");
  }

  int Run(std::ostream& out, std::ostream& err) {
    Manifest m("ingest-ckg");
    common.Record(m);
    m.config()["input"] = input;
    m.config()["format"] = std::string(FormatName(ParseFormat(format)));
    m.config()["output"] = output;
    m.config()["exclude_relations"] = exclude;
    m.config()["drop_isolated"] = drop_isolated;
    m.config()["nodes"] = nodes;
    m.config()["nodes_out"] = nodes_out;
    TripleStore store =
        LoadStore(input, ParseFormat(format), common.policy(), m, err, "input");
    if (!nodes.empty()) {
      m.Input(nodes);
      LoadNodeList(nodes, store);
    }
    m.stats()["input_nodes"] = store.node_count();
    TripleStore pruned = PruneCkg(store, exclude, drop_isolated);
    {
      AtomicOutputFile f(output);
      WriteCkg(pruned, f.stream());
      f.Commit();
    }
    m.Output(output);
    if (!nodes_out.empty()) {
      AtomicOutputFile f(nodes_out);
      for (NodeId id = 0; id < pruned.node_count(); ++id) {
        f.stream() << pruned.node(id) << "\n";
      }
      f.Commit();
      m.Output(nodes_out);
    }
    m.stats()["output_triples"] = pruned.size();
    m.stats()["output_nodes"] = pruned.node_count();
    m.Write(ManifestPath(common.manifest, output));
    out << "kept " << pruned.size() << " triples, " << pruned.node_count()
        << " nodes\n";
    return kOk;
  }
};

// ---- split -------------------------------------------------------------

struct SplitCmd {
  Common common;
  std::string input;
  std::string format;
  std::string out_dir;
  std::string ratios = "8:1:1";
  std::uint64_t seed = 0;

  void Bind(CLI::App* app) {
    common.Bind(app);
    app->add_option("--input", input, "CKG TSV")->required();
    app->add_option("--format", format, "atomic or aser")
        ->required()
        ->check(CLI::IsMember({"atomic", "aser", "atomic-tsv", "aser-tsv"}));
    app->add_option("--out-dir", out_dir, "Directory for train.tsv, dev.tsv, test.tsv")
        ->required();
    app->add_option("--ratios", ratios, "train:dev:test");
    app->add_option("--seed", seed, "RNG seed");
  }

  int Run(std::ostream& out, std::ostream& err) {
    Manifest m("split");
    common.Record(m);
    m.config()["input"] = input;
    m.config()["format"] = std::string(FormatName(ParseFormat(format)));
    m.config()["out_dir"] = out_dir;
    m.config()["ratios"] = ratios;
    m.config()["seed"] = seed;
    m.config()["stratified"] = false;
    SplitRatios r = ParseRatios(ratios);
    TripleStore store =
        LoadStore(input, ParseFormat(format), common.policy(), m, err, "input");
    SplitResult parts = SplitTriples(store, r, seed);
    fs::create_directories(out_dir);
    const std::pair<const char*, const TripleStore*> named[] = {
        {"train.tsv", &parts.train}, {"dev.tsv", &parts.dev}, {"test.tsv", &parts.test}};
    for (const auto& [name, part] : named) {
      std::string path = (fs::path(out_dir) / name).string();
      AtomicOutputFile f(path);
      WriteCkg(*part, f.stream());
      f.Commit();
      m.Output(path);
    }
    m.stats()["train"] = parts.train.size();
    m.stats()["dev"] = parts.dev.size();
    m.stats()["test"] = parts.test.size();
    m.Write(ManifestPath(common.manifest, (fs::path(out_dir) / "split").string()));
    out << "train " << parts.train.size() << ", dev " << parts.dev.size()
        << ", test " << parts.test.size() << "\n";
    return kOk;
  }
};

// ---- identify ----------------------------------------------------------

struct IdentifyCmd {
  Common common;
  ConceptInputs concepts;
  std::string output;

  void Bind(CLI::App* app) {
    common.Bind(app);
    concepts.Bind(app);
    app->add_option("--output", output, "Candidate dump TSV")->required();
  }

  int Run(std::ostream& out, std::ostream& err) {
    Manifest m("identify");
    common.Record(m);
    concepts.Record(m);
    m.config()["output"] = output;
    ConceptGraph graph = concepts.LoadGraph(m, err, common.policy());
    m.Input(concepts.parses);
    std::ifstream in = OpenInput(concepts.parses);
    ConllReader reader(in, {concepts.lemmatized});
    std::vector<ParsedNode> nodes;
    std::size_t rejected = 0;
    while (true) {
      try {
        auto node = reader.Next();
        if (!node) break;
        nodes.push_back(std::move(*node));
      } catch (const FormatError& e) {
        if (common.policy() == ErrorPolicy::kAbort) throw;
        ++rejected;
        err << "warning: " << e.what() << "\n";
      }
    }
    IdentifyOptions opts{ParseRepairMode(concepts.repair)};
    std::vector<std::vector<SubstitutionCandidate>> results(nodes.size());
    ParallelFor(nodes.size(), common.workers, [&](std::size_t i) {
      results[i] = IdentifyConceptualizations(nodes[i], graph, opts);
    });
    std::size_t total = 0, with_candidates = 0;
    {
      AtomicOutputFile f(output);
      for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (const SubstitutionCandidate& c : results[i]) {
          WriteCandidateRow(f.stream(), std::to_string(i), c);
        }
        total += results[i].size();
        if (!results[i].empty()) ++with_candidates;
      }
      f.Commit();
    }
    m.Output(output);
    m.stats()["nodes"] = nodes.size();
    m.stats()["rejected_blocks"] = rejected;
    m.stats()["dropped_sentences"] = reader.dropped_sentences();
    m.stats()["nodes_with_candidates"] = with_candidates;
    m.stats()["candidates"] = total;
    m.Write(ManifestPath(common.manifest, output));
    out << total << " candidates over " << nodes.size() << " nodes ("
        << with_candidates << " conceptualizable)\n";
    return kOk;
  }
};

// ---- emit-dataset ------------------------------------------------------

struct EmitCmd {
  Common common;
  ConceptInputs concepts;
  std::string ckg;
  std::string known;
  std::string format;
  std::string output;
  std::string stats_path;
  double ec_ratio = 0.5;
  std::uint64_t seed = 0;
  std::string ns_mode;
  std::uint32_t max_retries = 10;
  bool strict_ec = false;
  bool keep_unpaired = false;

  void Bind(CLI::App* app) {
    common.Bind(app);
    concepts.Bind(app, false);
    app->add_option("--ckg", ckg, "Triples to emit as positives")
        ->required();
    app->add_option("--known", known,
                    "Full positive store for filtering and NS (default: --ckg)");
    app->add_option("--format", format, "atomic or aser")
        ->required()
        ->check(CLI::IsMember({"atomic", "aser", "atomic-tsv", "aser-tsv"}));
    app->add_option("--output", output, "Dataset JSONL")->required();
    app->add_option("--stats", stats_path, "Stats JSON (default: <output>.stats.json)");
    app->add_option("--ec-ratio", ec_ratio, "Share of negatives built by EC")
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--seed", seed, "RNG seed");
    app->add_option("--ns-mode", ns_mode,
                    "constrained or unconstrained (default: constrained for "
                    "atomic, unconstrained for aser)")
        ->check(CLI::IsMember({"constrained", "unconstrained"}));
    app->add_option("--max-retries", max_retries, "Redraws per negative")
        ->check(CLI::PositiveNumber);
    app->add_flag("--strict-ec", strict_ec,
                  "Skip triples EC cannot corrupt instead of using NS");
    app->add_flag("--keep-unpaired", keep_unpaired,
                  "Emit positives whose negative was skipped");
  }

  int Run(std::ostream& out, std::ostream& err) {
    const CkgFormat fmt = ParseFormat(format);
    if (ec_ratio > 0 && concepts.parses.empty()) {
      throw InvalidArgument("--parses is required when --ec-ratio > 0");
    }
    Manifest m("emit-dataset");
    common.Record(m);
    concepts.Record(m);
    SamplerConfig config;
    config.ec_ratio = ec_ratio;
    config.seed = seed;
    config.constrained_ns = ns_mode.empty() ? fmt == CkgFormat::kAtomic
                                            : ns_mode == "constrained";
    config.max_retries = max_retries;
    config.strict_ec = strict_ec;
    config.keep_unpaired_positives = keep_unpaired;
    config.workers = common.workers;
    const std::string stats_out = stats_path.empty() ? output + ".stats.json" : stats_path;
    m.config()["ckg"] = ckg;
    m.config()["known"] = known.empty() ? ckg : known;
    m.config()["format"] = std::string(FormatName(fmt));
    m.config()["output"] = output;
    m.config()["stats"] = stats_out;
    m.config()["ec_ratio"] = config.ec_ratio;
    m.config()["seed"] = config.seed;
    m.config()["ns_mode"] = config.constrained_ns ? "constrained" : "unconstrained";
    m.config()["max_retries"] = config.max_retries;
    m.config()["strict_ec"] = config.strict_ec;
    m.config()["keep_unpaired"] = config.keep_unpaired_positives;

    TripleStore seeds = LoadStore(ckg, fmt, common.policy(), m, err, "seed");
    std::optional<TripleStore> full;
    if (!known.empty() && known != ckg) {
      full.emplace(LoadStore(known, fmt, common.policy(), m, err, "known"));
    }
    ConceptGraph graph = concepts.LoadGraph(m, err, common.policy());
    ParsedNodeIndex parses;
    if (!concepts.parses.empty()) parses = concepts.LoadParses(m, err, common.policy());

    DatasetStats st;
    std::vector<LabeledExample> data =
        BuildDataset(seeds, full ? *full : seeds, graph, parses, config, &st);
    {
      AtomicOutputFile f(output);
      for (const LabeledExample& ex : data) f.stream() << ToJsonLine(ex) << "\n";
      f.Commit();
    }
    m.Output(output);
    {
      AtomicOutputFile f(stats_out);
      f.stream() << StatsToJson(st, config);
      f.Commit();
    }
    m.Output(stats_out);
    m.stats()["positives"] = st.positives;
    m.stats()["negatives"] = st.negatives;
    m.stats()["ec"] = st.ec;
    m.stats()["ns"] = st.ns;
    m.Write(ManifestPath(common.manifest, output));
    out << st.positives << " positives, " << st.negatives << " negatives ("
        << st.ec << " ec, " << st.ns << " ns)\n";
    return kOk;
  }
};

// ---- coverage ----------------------------------------------------------

struct CoverageCmd {
  Common common;
  ConceptInputs concepts;
  std::vector<std::string> ckgs;
  std::string format;
  std::string output;

  void Bind(CLI::App* app) {
    common.Bind(app);
    concepts.Bind(app);
    app->add_option("--ckg", ckgs, "CKG TSV (repeatable; pooled)")
        ->required();
    app->add_option("--format", format, "atomic or aser")
        ->required()
        ->check(CLI::IsMember({"atomic", "aser", "atomic-tsv", "aser-tsv"}));
    app->add_option("--output", output, "Write the result as JSON here");
  }

  int Run(std::ostream& out, std::ostream& err) {
    const CkgFormat fmt = ParseFormat(format);
    Manifest m("coverage");
    common.Record(m);
    concepts.Record(m);
    m.config()["ckg"] = ckgs;
    m.config()["format"] = std::string(FormatName(fmt));
    m.config()["output"] = output;
    TripleStore pooled(fmt);
    for (std::size_t i = 0; i < ckgs.size(); ++i) {
      TripleStore part = LoadStore(ckgs[i], fmt, common.policy(), m, err,
                                   "ckg" + std::to_string(i));
      for (std::size_t k = 0; k < part.size(); ++k) pooled.Insert(part.triple(k));
    }
    ConceptGraph graph = concepts.LoadGraph(m, err, common.policy());
    ParsedNodeIndex parses = concepts.LoadParses(m, err, common.policy());
    CoverageResult r = MeasureEcCoverage(pooled, graph, parses, common.workers);
    Json result = {{"triples", r.triples},
                   {"covered", r.covered},
                   {"fraction", r.fraction()},
                   {"nodes_without_parse", r.nodes_without_parse}};
    m.stats() = result;
    if (!output.empty()) {
      AtomicOutputFile f(output);
      f.stream() << result.dump(2) << "\n";
      f.Commit();
      m.Output(output);
      m.Write(ManifestPath(common.manifest, output));
    } else if (!common.manifest.empty()) {
      m.Write(common.manifest);
    }
    out << "coverage " << std::fixed << std::setprecision(4) << r.fraction()
        << " (" << r.covered << "/" << r.triples << ")\n";
    return kOk;
  }
};

// ---- scorer selection --------------------------------------------------

struct ScorerOptions {
  std::string scorer;
  std::size_t batch_size = 64;
  int timeout_ms = 30000;
  int attempts = 3;
  unsigned in_flight = 1;

  void Bind(CLI::App* app) {
    app->add_option("--scorer", scorer,
                    "'stub' or an http://host:port address "
                    "(default: $CCC_SCORER_URL, else stub)");
    app->add_option("--batch-size", batch_size, "Triples per request")
        ->check(CLI::PositiveNumber);
    app->add_option("--timeout-ms", timeout_ms, "Per-request timeout")
        ->check(CLI::PositiveNumber);
    app->add_option("--attempts", attempts, "Tries per batch on transport errors")
        ->check(CLI::PositiveNumber);
    app->add_option("--in-flight", in_flight, "Concurrent batches")
        ->check(CLI::PositiveNumber);
  }

  std::string Resolved() const {
    return scorer.empty() ? EnvOr("CCC_SCORER_URL", "stub") : scorer;
  }

  std::unique_ptr<Scorer> Make() const {
    const std::string target = Resolved();
    if (target == "stub") return std::make_unique<StubScorer>();
    ScorerEndpoint ep;
    ep.base_url = target;
    ep.batch_size = batch_size;
    ep.timeout = std::chrono::milliseconds(timeout_ms);
    ep.max_attempts = attempts;
    return std::make_unique<HttpScorer>(ep);
  }

  void Record(Manifest& m) const {
    m.config()["scorer"] = Resolved();
    m.config()["batch_size"] = batch_size;
  }
};

// ---- generate ----------------------------------------------------------

struct GenerateCmd {
  Common common;
  ConceptInputs concepts;
  ScorerOptions scoring;
  std::string seeds_path;
  std::string known;
  std::string format;
  std::string output;
  std::string provenance;
  std::string generations;
  double threshold = -1;
  std::size_t per_side_cap = 10;
  std::uint64_t floor = 1;

  void Bind(CLI::App* app) {
    common.Bind(app);
    concepts.Bind(app);
    scoring.Bind(app);
    app->add_option("--seeds", seeds_path, "Seed triples (CKG TSV)")
        ->required();
    app->add_option("--known", known, "Reference CKG for the novel flag");
    app->add_option("--format", format, "atomic or aser")
        ->required()
        ->check(CLI::IsMember({"atomic", "aser", "atomic-tsv", "aser-tsv"}));
    app->add_option("--output", output, "Accepted triples (CKG TSV)")->required();
    app->add_option("--provenance", provenance,
                    "Provenance JSONL (default: <output>.provenance.jsonl)");
    app->add_option("--generations", generations,
                    "Also write accepted nodes in the metrics input format");
    app->add_option("--threshold", threshold, "Accept scores >= threshold")
        ->required()
        ->check(CLI::Range(0.0, 1.0));
    app->add_option("--per-side-cap", per_side_cap, "Candidates kept per side");
    app->add_option("--frequency-floor", floor, "Minimum IsA frequency");
  }

  int Run(std::ostream& out, std::ostream& err) {
    const CkgFormat fmt = ParseFormat(format);
    const std::string prov_out =
        provenance.empty() ? output + ".provenance.jsonl" : provenance;
    Manifest m("generate");
    common.Record(m);
    concepts.Record(m);
    scoring.Record(m);
    m.config()["seeds"] = seeds_path;
    m.config()["known"] = known;
    m.config()["format"] = std::string(FormatName(fmt));
    m.config()["output"] = output;
    m.config()["provenance"] = prov_out;
    m.config()["generations"] = generations;
    m.config()["threshold"] = threshold;
    m.config()["per_side_cap"] = per_side_cap;
    m.config()["frequency_floor"] = floor;

    TripleStore seeds = LoadStore(seeds_path, fmt, common.policy(), m, err, "seed");
    std::optional<TripleStore> ref;
    if (!known.empty()) ref.emplace(LoadStore(known, fmt, common.policy(), m, err, "known"));
    ConceptGraph graph = concepts.LoadGraph(m, err, common.policy());
    ParsedNodeIndex parses = concepts.LoadParses(m, err, common.policy());
    std::unique_ptr<Scorer> scorer = scoring.Make();

    const ExpansionLimits limits{per_side_cap, floor};
    const IdentifyOptions opts{ParseRepairMode(concepts.repair)};
    std::vector<std::vector<ExpandedTriple>> per_seed(seeds.size());
    ParallelFor(seeds.size(), common.workers, [&](std::size_t i) {
      Triple t = seeds.triple(i);
      per_seed[i] = ExpandSeed(t, parses.Find(t.head), parses.Find(t.tail), graph,
                               limits, ref ? &*ref : &seeds, opts);
    });
    std::vector<ExpandedTriple> expanded;
    for (auto& v : per_seed) {
      for (auto& e : v) expanded.push_back(std::move(e));
    }
    const std::size_t candidates = expanded.size();
    std::vector<ScoredTriple> accepted = AcceptByThreshold(
        ScoreExpansions(*scorer, std::move(expanded), scoring.in_flight), threshold);

    {
      AtomicOutputFile f(output);
      for (const ScoredTriple& s : accepted) {
        const Triple& t = s.expanded.triple;
        f.stream() << t.head << '\t' << t.relation << '\t' << t.tail << '\n';
      }
      f.Commit();
    }
    m.Output(output);
    {
      AtomicOutputFile f(prov_out);
      for (const ScoredTriple& s : accepted) f.stream() << ProvenanceJsonLine(s) << "\n";
      f.Commit();
    }
    m.Output(prov_out);
    if (!generations.empty()) {
      AtomicOutputFile f(generations);
      for (const ScoredTriple& s : accepted) {
        const ExpandedTriple& e = s.expanded;
        f.stream() << e.seed.head << '\t' << e.seed.relation << '\t' << e.seed.tail
                   << '\t' << SideName(e.side) << '\t'
                   << (e.side == Side::kHead ? e.triple.head : e.triple.tail) << '\n';
      }
      f.Commit();
      m.Output(generations);
    }
    std::size_t novel = std::count_if(accepted.begin(), accepted.end(),
                                      [](const ScoredTriple& s) { return s.expanded.novel; });
    m.stats()["seeds"] = seeds.size();
    m.stats()["candidates"] = candidates;
    m.stats()["accepted"] = accepted.size();
    m.stats()["accepted_novel"] = novel;
    m.Write(ManifestPath(common.manifest, output));
    out << "accepted " << accepted.size() << " of " << candidates
        << " candidates from " << seeds.size() << " seeds\n";
    return kOk;
  }
};

// ---- score -------------------------------------------------------------

struct ScoreCmd {
  Common common;
  ScorerOptions scoring;
  std::string input;
  std::string output;

  void Bind(CLI::App* app) {
    common.Bind(app);
    scoring.Bind(app);
    app->add_option("--input", input, "Triples TSV (head, relation, tail)")
        ->required();
    app->add_option("--output", output, "TSV with a fourth score column")->required();
  }

  int Run(std::ostream& out, std::ostream&) {
    Manifest m("score");
    common.Record(m);
    scoring.Record(m);
    m.config()["input"] = input;
    m.config()["output"] = output;
    m.Input(input);
    std::vector<Triple> triples;
    std::ifstream in = OpenInput(input);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      StripCarriageReturn(line);
      if (line.empty()) continue;
      auto f = SplitFields(line, '\t');
      if (f.size() != 3) {
        throw FormatError(input + ":" + std::to_string(line_no) +
                              ": expected 3 tab-separated columns",
                          line_no);
      }
      triples.push_back({std::string(f[0]), std::string(f[1]), std::string(f[2])});
    }
    std::unique_ptr<Scorer> scorer = scoring.Make();
    std::vector<double> scores = ScoreBatch(*scorer, triples, scoring.in_flight);
    {
      AtomicOutputFile f(output);
      for (std::size_t i = 0; i < triples.size(); ++i) {
        // Shortest text that round-trips to the same double.
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof(buf), scores[i]);
        f.stream() << triples[i].head << '\t' << triples[i].relation << '\t'
                   << triples[i].tail << '\t' << std::string_view(buf, res.ptr - buf)
                   << '\n';
      }
      f.Commit();
    }
    m.Output(output);
    m.stats()["triples"] = triples.size();
    m.Write(ManifestPath(common.manifest, output));
    out << "scored " << triples.size() << " triples\n";
    return kOk;
  }
};

// ---- metrics -----------------------------------------------------------

struct MetricsCmd {
  Common common;
  std::string generations;
  std::string train_nodes;
  std::string train_ckg;
  std::string words;
  std::size_t num_seeds = 0;
  std::string label = "generations";
  std::string output;

  void Bind(CLI::App* app) {
    common.Bind(app);
    app->add_option("--generations", generations,
                    "seed_head, relation, seed_tail, side, generated_node TSV")
        ->required();
    auto* tn = app->add_option("--train-nodes", train_nodes, "Training nodes, one per line");
    auto* tc = app->add_option("--train-ckg", train_ckg, "Training CKG TSV");
    tn->excludes(tc);
    app->add_option("--structural-words", words,
                    "Structural-word list (default: built-in v1)");
    app->add_option("--num-seeds", num_seeds,
                    "Seeds used, counting ones with no output (default: distinct "
                    "seeds in the file)");
    app->add_option("--label", label, "Column label in the report");
    app->add_option("--output", output, "Also write the report here");
  }

  int Run(std::ostream& out, std::ostream&) {
    Manifest m("metrics");
    common.Record(m);
    m.config()["generations"] = generations;
    m.config()["train_nodes"] = train_nodes;
    m.config()["train_ckg"] = train_ckg;
    m.config()["structural_words"] = words.empty() ? "builtin:v1" : words;
    m.config()["num_seeds"] = num_seeds;
    m.config()["label"] = label;
    m.Input(generations);
    GenerationSet gen = LoadGenerationSet(generations);
    if (num_seeds > 0) gen.seed_count = num_seeds;
    NodeSet train;
    if (!train_nodes.empty()) {
      m.Input(train_nodes);
      train = LoadNodeSet(train_nodes, false);
    } else if (!train_ckg.empty()) {
      m.Input(train_ckg);
      train = LoadNodeSet(train_ckg, true);
    }
    NodeNormalizer normalizer;
    if (!words.empty()) {
      m.Input(words);
      normalizer = NodeNormalizer::FromFile(words);
    }
    MetricsReport r = ComputeMetrics(gen, train, normalizer);
    std::ostringstream report;
    WriteReport(report, r, label);
    out << report.str();
    m.stats() = {{"produced", r.produced},
                 {"seeds", r.seeds},
                 {"n_per_seed", r.n_per_seed},
                 {"dist_1", r.dist_1},
                 {"dist_2", r.dist_2},
                 {"dist_n", r.dist_n},
                 {"novel_per_total", r.novel_per_total},
                 {"novel_per_unique", r.novel_per_unique},
                 {"dist_n_norm", r.dist_n_norm},
                 {"novel_per_total_norm", r.novel_per_total_norm},
                 {"novel_per_unique_norm", r.novel_per_unique_norm}};
    if (!output.empty()) {
      AtomicOutputFile f(output);
      f.stream() << report.str();
      f.Commit();
      m.Output(output);
      m.Write(ManifestPath(common.manifest, output));
    } else if (!common.manifest.empty()) {
      m.Write(common.manifest);
    }
    return kOk;
  }
};

}  // namespace

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Commonsense KG expansion by conceptualization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  BuildIndexCmd build_index;
  IngestCmd ingest;
  SplitCmd split;
  IdentifyCmd identify;
  EmitCmd emit;
  CoverageCmd coverage;
  GenerateCmd generate;
  ScoreCmd score;
  MetricsCmd metrics;

  auto* c_build = app.add_subcommand("build-index", "Index a concept TSV into a binary image");
  build_index.Bind(c_build);
  auto* c_ingest = app.add_subcommand("ingest-ckg", "Load, deduplicate and prune a CKG");
  ingest.Bind(c_ingest);
  auto* c_split = app.add_subcommand("split", "Split triples into train/dev/test");
  split.Bind(c_split);
  auto* c_identify = app.add_subcommand("identify", "Dump conceptualization candidates");
  identify.Bind(c_identify);
  auto* c_emit = app.add_subcommand("emit-dataset", "Emit a labeled NS/EC dataset");
  emit.Bind(c_emit);
  auto* c_cov = app.add_subcommand("coverage", "Share of triples EC can corrupt");
  coverage.Bind(c_cov);
  auto* c_gen = app.add_subcommand("generate", "Expand seeds, score and accept");
  generate.Bind(c_gen);
  auto* c_score = app.add_subcommand("score", "Score triples with a scorer");
  score.Bind(c_score);
  auto* c_metrics = app.add_subcommand("metrics", "Diversity and novelty report");
  metrics.Bind(c_metrics);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (c_build->parsed()) return build_index.Run(out, err);
    if (c_ingest->parsed()) return ingest.Run(out, err);
    if (c_split->parsed()) return split.Run(out, err);
    if (c_identify->parsed()) return identify.Run(out, err);
    if (c_emit->parsed()) return emit.Run(out, err);
    if (c_cov->parsed()) return coverage.Run(out, err);
    if (c_gen->parsed()) return generate.Run(out, err);
    if (c_score->parsed()) return score.Run(out, err);
    if (c_metrics->parsed()) return metrics.Run(out, err);
  } catch (const IoError& e) {
    err << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return kFormat;
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const TransportError& e) {
    err << "scorer transport error: " << e.what() << "\n";
    return kScorer;
  } catch (const ProtocolError& e) {
    err << "scorer protocol error: " << e.what() << "\n";
    return kScorer;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kUsage;
}

}  // namespace ccc::cli
