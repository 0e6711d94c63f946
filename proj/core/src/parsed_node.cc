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

#include "ccc/parsed_node.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>

#include "ccc/io.h"

namespace ccc {
namespace {

std::optional<int> ParseInt(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::string Field(std::string_view s) {
  return s == "_" ? std::string() : std::string(s);
}

std::string_view CommentValue(std::string_view line, std::string_view key) {
  // "# key = value"
  std::string_view rest = line.substr(1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  if (rest.substr(0, key.size()) != key) return {};
  rest.remove_prefix(key.size());
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  if (rest.empty() || rest.front() != '=') return {};
  rest.remove_prefix(1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  return rest;
}

}  // namespace

bool IsEntityRoot(const Token& token) {
  return token.upos == "NOUN" || token.upos == "PROPN";
}

ParsedNode ParsedNode::Create(std::vector<Token> tokens, std::string text,
                              bool lemmatized) {
  const int n = static_cast<int>(tokens.size());
  if (n == 0) throw FormatError("node has no tokens", 0);
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Token& t = tokens[i];
    if (t.index != i + 1) {
      throw FormatError("token ids must run 1..n in order; found " +
                            std::to_string(t.index) + " at position " +
                            std::to_string(i + 1),
                        0);
    }
    if (t.head < 0 || t.head > n) {
      throw FormatError("HEAD " + std::to_string(t.head) + " of token " +
                            std::to_string(t.index) + " is outside [0, " +
                            std::to_string(n) + "]",
                        0);
    }
    if (t.head == t.index) {
      throw FormatError("token " + std::to_string(t.index) + " heads itself", 0);
    }
    if (t.head == 0) ++roots;
  }
  if (roots != 1) {
    throw FormatError("dependency tree must have exactly one root, found " +
                          std::to_string(roots),
                      0);
  }

  // Depth via memoized walk to the root; a walk longer than n is a cycle.
  std::vector<int> depth(n + 1, -1);
  depth[0] = 0;
  for (int k = 1; k <= n; ++k) {
    std::vector<int> path;
    int cur = k;
    while (depth[cur] < 0) {
      path.push_back(cur);
      if (static_cast<int>(path.size()) > n) {
        throw FormatError("dependency arcs form a cycle through token " +
                              std::to_string(k),
                          0);
      }
      cur = tokens[cur - 1].head;
    }
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      depth[*it] = depth[tokens[*it - 1].head] + 1;
    }
  }

  ParsedNode node;
  node.lemmatized_ = lemmatized;
  if (lemmatized) {
    for (Token& t : tokens) t.lemma = t.form;
  }

  if (text.empty()) {
    for (int i = 0; i < n; ++i) {
      if (i > 0) text.push_back(' ');
      text += tokens[i].form;
    }
  }
  node.char_ranges_.reserve(n);
  std::size_t pos = 0;
  for (const Token& t : tokens) {
    std::size_t begin = std::string::npos, end = pos;
    for (char c : t.form) {
      if (IsSpace(c)) continue;
      while (pos < text.size() && IsSpace(text[pos])) ++pos;
      if (pos >= text.size() || text[pos] != c) {
        throw FormatError("token forms do not reconstruct the node text '" +
                              text + "' at token " + std::to_string(t.index),
                          0);
      }
      if (begin == std::string::npos) begin = pos;
      end = ++pos;
    }
    if (begin == std::string::npos) {
      throw FormatError("token " + std::to_string(t.index) + " has empty form", 0);
    }
    node.char_ranges_.emplace_back(begin, end);
  }
  if (!StripWhitespace(std::string_view(text).substr(pos)).empty()) {
    throw FormatError("node text '" + text + "' has characters after the last token",
                      0);
  }

  // Subtree bounds, children before parents.
  node.subtree_spans_.resize(n);
  for (int k = 1; k <= n; ++k) node.subtree_spans_[k - 1] = {k, k};
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return depth[a] > depth[b]; });
  for (int k : order) {
    int h = tokens[k - 1].head;
    if (h == 0) continue;
    TokenSpan& parent = node.subtree_spans_[h - 1];
    const TokenSpan& child = node.subtree_spans_[k - 1];
    parent.left = std::min(parent.left, child.left);
    parent.right = std::max(parent.right, child.right);
  }

  node.tokens_ = std::move(tokens);
  node.text_ = std::move(text);
  return node;
}

TokenSpan ParsedNode::SubtreeSpan(int k) const {
  if (k < 1 || k > static_cast<int>(size())) {
    throw InvalidArgument("token index " + std::to_string(k) +
                          " outside [1, " + std::to_string(size()) + "]");
  }
  return subtree_spans_[k - 1];
}

std::string_view ParsedNode::SurfaceOf(TokenSpan span) const {
  std::size_t begin = char_range(span.left).first;
  std::size_t end = char_range(span.right).second;
  return std::string_view(text_).substr(begin, end - begin);
}

ConllReader::ConllReader(std::istream& in, ConllReadOptions options)
    : in_(in), options_(options) {}

bool ConllReader::ReadBlock(std::vector<std::string>& lines) {
  lines.clear();
  std::string line;
  while (std::getline(in_, line)) {
    StripCarriageReturn(line);
    if (line.empty() ||
        std::all_of(line.begin(), line.end(), [](char c) { return IsSpace(c); })) {
      if (!lines.empty()) return true;
      continue;
    }
    lines.push_back(line);
  }
  return !lines.empty();
}

std::optional<ParsedNode> ConllReader::Next() {
  std::vector<std::string> lines;
  while (ReadBlock(lines)) {
    ++block_index_;
    const std::string where = "block " + std::to_string(block_index_);
    std::string text;
    std::string node_id;
    std::vector<Token> tokens;
    for (const std::string& line : lines) {
      if (line[0] == '#') {
        if (auto v = CommentValue(line, "text"); !v.empty()) text = v;
        if (auto v = CommentValue(line, "node_id"); !v.empty()) node_id = v;
        continue;
      }
      auto cols = SplitFields(line, '\t');
      if (cols.size() < 8) {
        throw FormatError(where + ": expected at least 8 columns, found " +
                              std::to_string(cols.size()),
                          block_index_);
      }
      if (cols[0].find_first_of("-.") != std::string_view::npos) continue;
      auto id = ParseInt(cols[0]);
      auto head = ParseInt(cols[6]);
      if (!id) {
        throw FormatError(where + ": bad ID '" + std::string(cols[0]) + "'",
                          block_index_);
      }
      if (!head) {
        throw FormatError(where + ": bad HEAD '" + std::string(cols[6]) + "'",
                          block_index_);
      }
      tokens.push_back({*id, std::string(cols[1]), Field(cols[2]),
                        Field(cols[3]), Field(cols[4]), Field(cols[5]), *head,
                        Field(cols[7])});
    }
    if (!node_id.empty() && node_id == last_node_id_) {
      ++dropped_sentences_;
      continue;
    }
    last_node_id_ = node_id;
    try {
      return ParsedNode::Create(std::move(tokens), std::move(text),
                                options_.lemmatized);
    } catch (const FormatError& e) {
      throw FormatError(where + ": " + e.what(), block_index_);
    }
  }
  return std::nullopt;
}

bool ParsedNodeIndex::Add(ParsedNode node) {
  std::string key = node.text();
  return nodes_.try_emplace(std::move(key), std::move(node)).second;
}

const ParsedNode* ParsedNodeIndex::Find(std::string_view text) const {
  auto it = nodes_.find(text);
  return it == nodes_.end() ? nullptr : &it->second;
}

namespace {

template <typename Sink>
void ReadAll(const std::string& path, ConllReadOptions options,
             ErrorPolicy on_error, ConllReadStats* stats, Sink&& sink) {
  std::ifstream in = OpenInput(path);
  ConllReader reader(in, options);
  ConllReadStats local;
  while (true) {
    try {
      auto node = reader.Next();
      if (!node) break;
      sink(std::move(*node), local);
    } catch (const FormatError& e) {
      if (on_error == ErrorPolicy::kAbort) {
        throw FormatError(path + ": " + e.what(), e.location());
      }
      ++local.rejected;
      if (local.first_rejected_block == 0) local.first_rejected_block = e.location();
    }
  }
  local.blocks = reader.blocks_read();
  local.dropped_sentences = reader.dropped_sentences();
  if (stats) *stats = local;
}

}  // namespace

std::vector<ParsedNode> ReadParsedNodes(const std::string& path,
                                        ConllReadOptions options,
                                        ErrorPolicy on_error,
                                        ConllReadStats* stats) {
  std::vector<ParsedNode> nodes;
  ReadAll(path, options, on_error, stats,
          [&](ParsedNode node, ConllReadStats&) { nodes.push_back(std::move(node)); });
  return nodes;
}

ParsedNodeIndex LoadParsedNodeIndex(const std::string& path,
                                    ConllReadOptions options,
                                    ErrorPolicy on_error,
                                    ConllReadStats* stats) {
  ParsedNodeIndex index;
  ReadAll(path, options, on_error, stats, [&](ParsedNode node, ConllReadStats& s) {
    if (!index.Add(std::move(node))) ++s.duplicate_texts;
  });
  return index;
}

}  // namespace ccc
