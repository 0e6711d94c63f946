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

#include "ccc/conceptualizer.h"

#include <unordered_map>

#include "ccc/inflection.h"
#include "ccc/text.h"

namespace ccc {
namespace {

// Head of a token range: the rightmost noun whose governor lies outside the
// range, else the rightmost token with an outside governor.
int SpanHead(const ParsedNode& node, TokenSpan span) {
  int fallback = span.right;
  bool have_fallback = false;
  for (int i = span.right; i >= span.left; --i) {
    int h = node.token(i).head;
    if (span.Contains(h)) continue;
    if (IsEntityRoot(node.token(i))) return i;
    if (!have_fallback) {
      fallback = i;
      have_fallback = true;
    }
  }
  return fallback;
}

bool IsIndefiniteArticle(std::string_view form) {
  std::string lower = ToLower(form);
  return lower == "a" || lower == "an";
}

// Lookup key of tokens l..r. With `lemma_at` set, that token contributes
// its lemma instead of its form.
std::string SpanKey(const ParsedNode& node, TokenSpan span, int lemma_at = 0) {
  std::string key;
  for (int i = span.left; i <= span.right; ++i) {
    if (i > span.left) key.push_back(' ');
    const Token& t = node.token(i);
    key += i == lemma_at && !t.lemma.empty() ? t.lemma : t.form;
  }
  return NormalizePhrase(key);
}

}  // namespace

std::vector<EntitySpan> EnumerateEntitySpans(const ParsedNode& node) {
  std::vector<EntitySpan> spans;
  const int n = static_cast<int>(node.size());
  for (int k = 1; k <= n; ++k) {
    if (!IsEntityRoot(node.token(k))) continue;
    TokenSpan bounds = node.SubtreeSpan(k);
    for (int l = bounds.left; l <= k; ++l) {
      for (int r = k; r <= bounds.right; ++r) spans.push_back({k, {l, r}});
    }
  }
  return spans;
}

std::string RepairGrammar(const ParsedNode& node, TokenSpan span,
                          std::string_view replacement, RepairMode mode) {
  const std::string& text = node.text();
  std::size_t begin = node.char_range(span.left).first;
  const std::size_t end = node.char_range(span.right).second;
  std::string rep(replacement);

  if (mode == RepairMode::kSurface) {
    bool pluralized = false;
    if (IsPluralToken(node.token(SpanHead(node, span)))) {
      std::size_t last = rep.find_last_of(' ');
      std::size_t start = last == std::string::npos ? 0 : last + 1;
      std::string_view last_word = std::string_view(rep).substr(start);
      if (!LooksPlural(last_word)) {
        rep = rep.substr(0, start) + Pluralize(last_word);
        pluralized = true;
      }
    }
    if (span.left > 1 && IsIndefiniteArticle(node.token(span.left - 1).form)) {
      const auto [art_begin, art_end] = node.char_range(span.left - 1);
      std::string_view article =
          std::string_view(text).substr(art_begin, art_end - art_begin);
      if (pluralized) {
        begin = art_begin;
      } else {
        std::size_t first_end = rep.find(' ');
        std::string chosen(IndefiniteArticle(rep.substr(0, first_end)));
        if (article[0] == 'A') chosen[0] = 'A';
        rep = chosen + text.substr(art_end, begin - art_end) + rep;
        begin = art_begin;
      }
    } else if (span.left == 1 && !text.empty() && text[begin] >= 'A' &&
               text[begin] <= 'Z' && !rep.empty() && rep[0] >= 'a' &&
               rep[0] <= 'z') {
      rep[0] = static_cast<char>(rep[0] - 'a' + 'A');
    }
  }
  return text.substr(0, begin) + rep + text.substr(end);
}

std::vector<SubstitutionCandidate> IdentifyConceptualizations(
    const ParsedNode& node, const ConceptGraph& graph,
    const IdentifyOptions& options) {
  const RepairMode mode = options.mode.value_or(
      node.lemmatized() ? RepairMode::kLemmatized : RepairMode::kSurface);
  std::vector<SubstitutionCandidate> out;
  if (graph.empty()) return out;
  std::unordered_map<std::string, std::size_t> slot_of;
  auto add = [&](SubstitutionCandidate c) {
    auto [it, inserted] = slot_of.try_emplace(c.new_text, out.size());
    if (inserted) {
      out.push_back(std::move(c));
    } else if (c.frequency > out[it->second].frequency) {
      out[it->second] = std::move(c);
    }
  };
  for (const EntitySpan& es : EnumerateEntitySpans(node)) {
    // An inflected head ("dogs") is also looked up by its lemma, since
    // concept keys are mostly singular; repair re-inflects the replacement.
    const std::string key = SpanKey(node, es.span);
    const std::string lemma_key = SpanKey(node, es.span, SpanHead(node, es.span));
    std::vector<std::string_view> keys = {key};
    if (lemma_key != key) keys.push_back(lemma_key);
    for (IsaDirection dir :
         {IsaDirection::kAbstraction, IsaDirection::kInstantiation}) {
      for (std::string_view k : keys) {
        for (const IsaHit& hit : graph.QueryKey(k, dir)) {
          if (hit.phrase == key || hit.phrase == lemma_key) continue;
          std::string new_text = RepairGrammar(node, es.span, hit.phrase, mode);
          if (new_text == node.text()) continue;
          add({std::move(new_text), es.span, es.root,
               std::string(node.SurfaceOf(es.span)), std::string(hit.phrase), dir,
               hit.frequency});
        }
      }
    }
  }
  return out;
}

void WriteCandidateRow(std::ostream& out, std::string_view node_id,
                       const SubstitutionCandidate& c) {
  out << node_id << '\t' << c.span.left << '\t' << c.span.right << '\t'
      << DirectionName(c.direction) << '\t' << c.original_phrase << '\t'
      << c.replacement << '\t' << c.frequency << '\t' << c.new_text << '\n';
}

}  // namespace ccc
