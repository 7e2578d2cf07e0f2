// Copyright 2026 The cvetriage Authors
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

// Classic Porter stemmer, following the rule tables of the 1980 algorithm
// without the later extensions (no "logi", "bli"; no short-word shortcut).

#include <string>
#include <string_view>
#include <vector>

#include "cvetriage/textprep.hpp"

namespace cvetriage::textprep {

namespace {

bool is_vowel_letter(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

// consonant[i] for every position; 'y' is a consonant at the start or after
// a vowel.
std::vector<bool> consonant_flags(std::string_view w) {
  std::vector<bool> flags(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (is_vowel_letter(w[i])) {
      flags[i] = false;
    } else if (w[i] == 'y') {
      flags[i] = i == 0 ? true : !flags[i - 1];
    } else {
      flags[i] = true;
    }
  }
  return flags;
}

// m in [C](VC){m}[V].
int measure(std::string_view stem) {
  const auto flags = consonant_flags(stem);
  int m = 0;
  for (std::size_t i = 1; i < flags.size(); ++i) {
    if (!flags[i - 1] && flags[i]) ++m;
  }
  return m;
}

bool contains_vowel(std::string_view stem) {
  for (bool c : consonant_flags(stem)) {
    if (!c) return true;
  }
  return false;
}

bool ends_double_consonant(std::string_view w) {
  if (w.size() < 2 || w[w.size() - 1] != w[w.size() - 2]) return false;
  return consonant_flags(w).back();
}

// *o: ends consonant-vowel-consonant, final consonant not w, x or y.
bool ends_cvc(std::string_view w) {
  if (w.size() < 3) return false;
  const auto flags = consonant_flags(w);
  const std::size_t n = w.size();
  const char last = w[n - 1];
  return flags[n - 3] && !flags[n - 2] && flags[n - 1] && last != 'w' &&
         last != 'x' && last != 'y';
}

enum class Condition { None, MeasureAbove0, MeasureAbove1, MeasureAbove1AndST };

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
  Condition condition;
};

bool holds(Condition condition, std::string_view stem) {
  switch (condition) {
    case Condition::None: return true;
    case Condition::MeasureAbove0: return measure(stem) > 0;
    case Condition::MeasureAbove1: return measure(stem) > 1;
    case Condition::MeasureAbove1AndST:
      return measure(stem) > 1 && (stem.back() == 's' || stem.back() == 't');
  }
  return false;
}

// The first rule whose suffix matches decides; a failed condition leaves the
// word unchanged.
void apply_rules(std::string& word, std::initializer_list<Rule> rules) {
  for (const Rule& rule : rules) {
    if (!std::string_view(word).ends_with(rule.suffix)) continue;
    const std::string_view stem(word.data(), word.size() - rule.suffix.size());
    if (holds(rule.condition, stem)) {
      word.resize(stem.size());
      word += rule.replacement;
    }
    return;
  }
}

void step1a(std::string& w) {
  apply_rules(w, {{"sses", "ss", Condition::None},
                  {"ies", "i", Condition::None},
                  {"ss", "ss", Condition::None},
                  {"s", "", Condition::None}});
}

void step1b(std::string& w) {
  const std::string_view view(w);
  if (view.ends_with("eed")) {
    if (measure(view.substr(0, view.size() - 3)) > 0) w.pop_back();
    return;
  }
  std::size_t cut = 0;
  if (view.ends_with("ed") && contains_vowel(view.substr(0, view.size() - 2))) {
    cut = 2;
  } else if (view.ends_with("ing") &&
             contains_vowel(view.substr(0, view.size() - 3))) {
    cut = 3;
  }
  if (cut == 0) return;
  w.resize(w.size() - cut);

  const std::string_view stem(w);
  if (stem.ends_with("at") || stem.ends_with("bl") || stem.ends_with("iz")) {
    w += 'e';
  } else if (ends_double_consonant(stem)) {
    const char last = stem.back();
    if (last != 'l' && last != 's' && last != 'z') w.pop_back();
  } else if (measure(stem) == 1 && ends_cvc(stem)) {
    w += 'e';
  }
}

void step1c(std::string& w) {
  if (!w.empty() && w.back() == 'y' &&
      contains_vowel(std::string_view(w).substr(0, w.size() - 1))) {
    w.back() = 'i';
  }
}

void step2(std::string& w) {
  constexpr auto c = Condition::MeasureAbove0;
  apply_rules(w, {{"ational", "ate", c}, {"tional", "tion", c},
                  {"enci", "ence", c},   {"anci", "ance", c},
                  {"izer", "ize", c},    {"abli", "able", c},
                  {"alli", "al", c},     {"entli", "ent", c},
                  {"eli", "e", c},       {"ousli", "ous", c},
                  {"ization", "ize", c}, {"ation", "ate", c},
                  {"ator", "ate", c},    {"alism", "al", c},
                  {"iveness", "ive", c}, {"fulness", "ful", c},
                  {"ousness", "ous", c}, {"aliti", "al", c},
                  {"iviti", "ive", c},   {"biliti", "ble", c}});
}

void step3(std::string& w) {
  constexpr auto c = Condition::MeasureAbove0;
  apply_rules(w, {{"icate", "ic", c}, {"ative", "", c}, {"alize", "al", c},
                  {"iciti", "ic", c}, {"ical", "ic", c}, {"ful", "", c},
                  {"ness", "", c}});
}

void step4(std::string& w) {
  constexpr auto c = Condition::MeasureAbove1;
  apply_rules(w, {{"al", "", c},   {"ance", "", c}, {"ence", "", c},
                  {"er", "", c},   {"ic", "", c},   {"able", "", c},
                  {"ible", "", c}, {"ant", "", c},  {"ement", "", c},
                  {"ment", "", c}, {"ent", "", c},
                  {"ion", "", Condition::MeasureAbove1AndST},
                  {"ou", "", c},   {"ism", "", c},  {"ate", "", c},
                  {"iti", "", c},  {"ous", "", c},  {"ive", "", c},
                  {"ize", "", c}});
}

void step5a(std::string& w) {
  if (w.empty() || w.back() != 'e') return;
  const std::string_view stem(w.data(), w.size() - 1);
  const int m = measure(stem);
  if (m > 1 || (m == 1 && !ends_cvc(stem))) w.pop_back();
}

void step5b(std::string& w) {
  if (std::string_view(w).ends_with("ll") &&
      measure(std::string_view(w).substr(0, w.size() - 1)) > 1) {
    w.pop_back();
  }
}

}  // namespace

std::string porter_stem(std::string_view word) {
  std::string w(word);
  step1a(w);
  step1b(w);
  step1c(w);
  step2(w);
  step3(w);
  step4(w);
  step5a(w);
  step5b(w);
  return w;
}

}  // namespace cvetriage::textprep
