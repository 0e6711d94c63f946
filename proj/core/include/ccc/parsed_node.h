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

// Dependency-parsed node text and the CoNLL-U subset reader that produces
// it. Parses come from an external parser; this layer validates them and
// answers subtree-span queries.

#ifndef CCC_PARSED_NODE_H_
#define CCC_PARSED_NODE_H_

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ccc/errors.h"
#include "ccc/text.h"

namespace ccc {

struct Token {
  int index = 0;  // 1-based
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos;   // optional, "" when absent
  std::string feats;  // optional, "" when absent
  int head = 0;       // 0 = root
  std::string deprel;
};

struct TokenSpan {
  int left = 0;   // inclusive, 1-based
  int right = 0;  // inclusive, 1-based

  bool operator==(const TokenSpan&) const = default;
  bool Contains(int k) const { return left <= k && k <= right; }
};

// A validated parse of one node: a single-rooted acyclic dependency tree
// whose token forms reconstruct the node text (ignoring whitespace).
class ParsedNode {
 public:
  // Validates and builds. Throws FormatError on a bad tree or when the forms
  // do not match `text`. An empty `text` means "forms joined by spaces".
  static ParsedNode Create(std::vector<Token> tokens, std::string text = "",
                           bool lemmatized = false);

  std::size_t size() const { return tokens_.size(); }
  // 1-based.
  const Token& token(int k) const { return tokens_[k - 1]; }
  const std::vector<Token>& tokens() const { return tokens_; }
  const std::string& text() const { return text_; }
  bool lemmatized() const { return lemmatized_; }

  // Byte range [begin, end) of token k inside text().
  std::pair<std::size_t, std::size_t> char_range(int k) const {
    return char_ranges_[k - 1];
  }

  // Min and max index over the subtree rooted at k (k included). Throws
  // InvalidArgument when k is out of range. Non-projective subtrees still
  // report their outer bounds.
  TokenSpan SubtreeSpan(int k) const;

  // Surface text of tokens l..r as it appears in text().
  std::string_view SurfaceOf(TokenSpan span) const;

 private:
  ParsedNode() = default;

  std::vector<Token> tokens_;
  std::string text_;
  bool lemmatized_ = false;
  std::vector<std::pair<std::size_t, std::size_t>> char_ranges_;
  std::vector<TokenSpan> subtree_spans_;
};

// POS predicate for entity roots: UPOS NOUN or PROPN.
bool IsEntityRoot(const Token& token);

struct ConllReadOptions {
  // The FORM column is already lemmatized (ASER); LEMMA is replaced by
  // FORM and grammar repair is disabled downstream.
  bool lemmatized = false;
};

// Streams CoNLL-U blocks. Required columns: ID FORM LEMMA UPOS XPOS FEATS
// HEAD DEPREL (the first eight); DEPS and MISC are ignored. Multiword-token
// ranges (1-2) and empty nodes (1.1) are skipped. `# text = ...` sets the
// node text; `# node_id = ...` groups blocks of one node, of which only the
// first sentence is kept.
class ConllReader {
 public:
  explicit ConllReader(std::istream& in, ConllReadOptions options = {});

  // Next node, or nullopt at end of input. A malformed block throws
  // FormatError whose location is the 1-based block index; the block is
  // consumed, so reading can continue after the error.
  std::optional<ParsedNode> Next();

  std::size_t blocks_read() const { return block_index_; }
  // Extra sentences dropped from multi-sentence nodes.
  std::size_t dropped_sentences() const { return dropped_sentences_; }

 private:
  bool ReadBlock(std::vector<std::string>& lines);

  std::istream& in_;
  ConllReadOptions options_;
  std::size_t block_index_ = 0;
  std::size_t dropped_sentences_ = 0;
  std::string last_node_id_;
};

struct ConllReadStats {
  std::size_t blocks = 0;
  std::size_t rejected = 0;
  std::size_t dropped_sentences = 0;
  std::size_t duplicate_texts = 0;
  std::size_t first_rejected_block = 0;
};

// Parses looked up by node text.
class ParsedNodeIndex {
 public:
  // Returns false (and keeps the existing parse) if the text is present.
  bool Add(ParsedNode node);
  const ParsedNode* Find(std::string_view text) const;
  std::size_t size() const { return nodes_.size(); }

 private:
  std::unordered_map<std::string, ParsedNode, StringHash, std::equal_to<>>
      nodes_;
};

std::vector<ParsedNode> ReadParsedNodes(const std::string& path,
                                        ConllReadOptions options = {},
                                        ErrorPolicy on_error = ErrorPolicy::kAbort,
                                        ConllReadStats* stats = nullptr);

ParsedNodeIndex LoadParsedNodeIndex(const std::string& path,
                                    ConllReadOptions options = {},
                                    ErrorPolicy on_error = ErrorPolicy::kAbort,
                                    ConllReadStats* stats = nullptr);

}  // namespace ccc

#endif  // CCC_PARSED_NODE_H_
