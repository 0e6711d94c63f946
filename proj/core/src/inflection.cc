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

#include "ccc/inflection.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "ccc/text.h"

namespace ccc {
namespace {

const std::unordered_map<std::string_view, std::string_view>& Irregulars() {
  static const std::unordered_map<std::string_view, std::string_view> kTable = {
      {"man", "men"},           {"woman", "women"},     {"child", "children"},
      {"person", "people"},     {"mouse", "mice"},      {"louse", "lice"},
      {"foot", "feet"},         {"tooth", "teeth"},     {"goose", "geese"},
      {"ox", "oxen"},           {"die", "dice"},        {"leaf", "leaves"},
      {"knife", "knives"},      {"wife", "wives"},      {"life", "lives"},
      {"wolf", "wolves"},       {"half", "halves"},     {"shelf", "shelves"},
      {"loaf", "loaves"},       {"thief", "thieves"},   {"calf", "calves"},
      {"elf", "elves"},         {"self", "selves"},     {"sheaf", "sheaves"},
      {"potato", "potatoes"},   {"tomato", "tomatoes"}, {"hero", "heroes"},
      {"echo", "echoes"},       {"veto", "vetoes"},     {"torpedo", "torpedoes"},
      {"cactus", "cacti"},      {"fungus", "fungi"},    {"nucleus", "nuclei"},
      {"stimulus", "stimuli"},  {"syllabus", "syllabi"},
      {"analysis", "analyses"}, {"crisis", "crises"},   {"thesis", "theses"},
      {"diagnosis", "diagnoses"}, {"hypothesis", "hypotheses"},
      {"basis", "bases"},       {"axis", "axes"},       {"phenomenon", "phenomena"},
      {"criterion", "criteria"}, {"datum", "data"},     {"medium", "media"},
      {"bacterium", "bacteria"}, {"curriculum", "curricula"},
      {"index", "indices"},     {"matrix", "matrices"}, {"appendix", "appendices"},
      {"bus", "buses"},         {"virus", "viruses"},   {"campus", "campuses"},
      {"octopus", "octopuses"}, {"status", "statuses"}, {"bonus", "bonuses"},
  };
  return kTable;
}

const std::unordered_set<std::string_view>& Invariants() {
  static const std::unordered_set<std::string_view> kSet = {
      "sheep",     "fish",      "deer",        "series",    "species",
      "aircraft",  "spacecraft", "moose",      "swine",     "bison",
      "salmon",    "trout",     "information", "equipment", "news",
      "advice",    "furniture", "luggage",     "baggage",   "rice",
      "money",     "music",     "homework",    "research",  "knowledge",
      "water",     "milk",      "software",    "hardware",  "traffic",
      "weather",   "evidence",  "staff",       "police",    "cattle",
      "people",    "data",      "media",       "clothing",  "jewelry",
  };
  return kSet;
}

const std::unordered_set<std::string_view>& IrregularPlurals() {
  static const std::unordered_set<std::string_view> kSet = [] {
    std::unordered_set<std::string_view> s;
    for (const auto& [sing, plur] : Irregulars()) {
      if (plur.back() != 's') s.insert(plur);
    }
    return s;
  }();
  return kSet;
}

bool EndsWith(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool IsVowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// Copies the capitalization of the first letter of `like` onto `word`.
std::string MatchInitialCase(std::string word, std::string_view like) {
  if (!word.empty() && !like.empty() && like[0] >= 'A' && like[0] <= 'Z' &&
      word[0] >= 'a' && word[0] <= 'z') {
    word[0] = static_cast<char>(word[0] - 'a' + 'A');
  }
  return word;
}

}  // namespace

std::string Pluralize(std::string_view noun) {
  if (noun.empty()) return std::string(noun);
  const std::string lower = ToLower(noun);
  if (Invariants().count(lower)) return std::string(noun);
  if (auto it = Irregulars().find(lower); it != Irregulars().end()) {
    return MatchInitialCase(std::string(it->second), noun);
  }
  std::string out(noun);
  if (EndsWith(lower, "s") || EndsWith(lower, "x") || EndsWith(lower, "z") ||
      EndsWith(lower, "ch") || EndsWith(lower, "sh")) {
    return out + "es";
  }
  if (lower.size() >= 2 && lower.back() == 'y' &&
      !IsVowel(lower[lower.size() - 2])) {
    out.pop_back();
    return out + "ies";
  }
  return out + "s";
}

bool LooksPlural(std::string_view word) {
  const std::string lower = ToLower(word);
  if (IrregularPlurals().count(lower)) return true;
  if (lower.size() < 3 || lower.back() != 's') return false;
  return !EndsWith(lower, "ss") && !EndsWith(lower, "us") &&
         !EndsWith(lower, "is");
}

std::string_view IndefiniteArticle(std::string_view next_word) {
  const std::string w = ToLower(next_word);
  if (w.empty()) return "a";
  static constexpr std::string_view kSilentH[] = {"hour", "honest", "honor",
                                                  "honour", "heir", "herb"};
  for (std::string_view p : kSilentH) {
    if (w.rfind(p, 0) == 0) return "an";
  }
  // Vowel letters that open with a consonant sound ("a unicorn", "a euro").
  static constexpr std::string_view kConsonantSound[] = {
      "uni", "use", "usu", "usa", "ute", "uti", "ura", "ure", "uro", "ubiq",
      "eu",  "ewe", "one", "once"};
  for (std::string_view p : kConsonantSound) {
    if (w.rfind(p, 0) == 0) return "a";
  }
  return IsVowel(w[0]) ? "an" : "a";
}

bool IsPluralToken(const Token& token) {
  if (!token.feats.empty()) {
    return token.feats.find("Number=Plur") != std::string::npos;
  }
  if (!token.xpos.empty()) return token.xpos == "NNS" || token.xpos == "NNPS";
  return !token.lemma.empty() && ToLower(token.form) != ToLower(token.lemma) &&
         LooksPlural(token.form);
}

}  // namespace ccc
