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

#include "cvetriage/signature.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "cvetriage/error.hpp"

namespace cvetriage::signature {

using nlohmann::json;

bool TaskSpec::has_minority() const {
  return std::find(minority.begin(), minority.end(), true) != minority.end();
}

std::vector<bool> identify_minority_classes(const corpus::ClassDistribution& dist,
                                            double ratio) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw InputError("minority ratio must lie in (0, 1]");
  }
  const auto nonzero =
      std::count_if(dist.counts.begin(), dist.counts.end(),
                    [](std::size_t c) { return c > 0; });
  if (nonzero < 2) {
    throw InputError(dist.task + ": need at least two classes with samples");
  }
  const double majority = static_cast<double>(dist.majority_count());
  std::vector<bool> flags(dist.counts.size());
  for (std::size_t i = 0; i < flags.size(); ++i) {
    flags[i] = static_cast<double>(dist.counts[i]) < ratio * majority;
  }
  return flags;
}

ClassCorpora::ClassCorpora(std::span<const LabeledDoc> docs, std::size_t class_count)
    : counts_(class_count), lengths_(class_count, 0) {
  for (const auto& doc : docs) {
    if (doc.label >= class_count) {
      throw InputError("document label " + std::to_string(doc.label) +
                       " outside the task's " + std::to_string(class_count) +
                       " classes");
    }
    auto& bag = counts_[doc.label];
    for (const auto& token : doc.tokens) {
      auto it = bag.find(token);
      if (it == bag.end()) it = bag.emplace(token, 0).first;
      ++it->second;
    }
    lengths_[doc.label] += doc.tokens.size();
  }
}

std::size_t ClassCorpora::count(std::size_t cls, std::string_view word) const {
  const auto& bag = counts_.at(cls);
  const auto it = bag.find(word);
  return it == bag.end() ? 0 : it->second;
}

std::size_t ClassCorpora::document_frequency(std::string_view word) const {
  std::size_t df = 0;
  for (std::size_t c = 0; c < counts_.size(); ++c) {
    if (count(c, word) > 0) ++df;
  }
  return df;
}

std::vector<std::string> ClassCorpora::most_frequent(std::size_t cls,
                                                     std::size_t top) const {
  std::vector<std::pair<std::size_t, std::string_view>> ranked;
  for (const auto& [word, n] : counts_.at(cls)) ranked.emplace_back(n, word);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  std::vector<std::string> words;
  for (std::size_t i = 0; i < std::min(top, ranked.size()); ++i) {
    words.emplace_back(ranked[i].second);
  }
  return words;
}

std::vector<std::string> build_seed_lexicon(const ClassCorpora& corpora,
                                            const TaskSpec& task, std::size_t top_f) {
  if (!task.has_minority()) {
    throw InputError(task.name + ": no minority class flagged");
  }
  std::set<std::string> seeds;
  for (std::size_t c = 0; c < task.size(); ++c) {
    if (!task.minority[c]) continue;
    for (auto& word : corpora.most_frequent(c, top_f)) seeds.insert(std::move(word));
  }
  return {seeds.begin(), seeds.end()};
}

std::vector<double> normalize_scores(std::span<const double> raw, double epsilon) {
  const double peak = raw.empty() ? 0.0 : *std::max_element(raw.begin(), raw.end());
  std::vector<double> out(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / (peak + epsilon);
  return out;
}

WordScoreVector score_word(std::string_view word, const ClassCorpora& corpora,
                           double epsilon) {
  const double n = static_cast<double>(corpora.class_count());
  const double df = static_cast<double>(corpora.document_frequency(word));
  const double idf = std::log((n + 1.0) / (df + 1.0)) + 1.0;

  WordScoreVector scores;
  scores.word = std::string(word);
  scores.raw.resize(corpora.class_count());
  for (std::size_t c = 0; c < corpora.class_count(); ++c) {
    const auto length = corpora.length(c);
    const double tf = length == 0 ? 0.0
                                  : static_cast<double>(corpora.count(c, word)) /
                                        static_cast<double>(length);
    scores.raw[c] = tf * idf;
  }
  scores.normalized = normalize_scores(scores.raw, epsilon);
  return scores;
}

bool passes_filter(const WordScoreVector& scores, const TaskSpec& task,
                   double threshold) {
  const auto& t = scores.normalized;
  for (std::size_t j = 0; j < t.size(); ++j) {
    if (!task.minority[j] || !(t[j] > threshold)) continue;
    bool others_low = true;
    for (std::size_t k = 0; k < t.size(); ++k) {
      if (k != j && !(t[k] < 1.0 - threshold)) {
        others_low = false;
        break;
      }
    }
    if (others_low) return true;
  }
  return false;
}

SignatureLexicon filter_lexicon(std::vector<WordScoreVector> seeds,
                                const TaskSpec& task, double threshold,
                                double epsilon) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InputError("signature threshold must lie in (0, 1)");
  }
  SignatureLexicon lexicon;
  lexicon.task = task;
  lexicon.threshold = threshold;
  lexicon.epsilon = epsilon;
  for (auto& seed : seeds) {
    if (seed.normalized.size() != task.size()) {
      throw InputError("score vector for '" + seed.word + "' has wrong arity");
    }
    lexicon.seed_words.push_back(seed.word);
    if (passes_filter(seed, task, threshold)) {
      std::string key = seed.word;
      lexicon.entries.emplace(std::move(key), std::move(seed));
    }
  }
  std::sort(lexicon.seed_words.begin(), lexicon.seed_words.end());
  return lexicon;
}

SignatureLexicon build_lexicon(std::span<const LabeledDoc> docs, const TaskSpec& task,
                               const LexiconParams& params) {
  if (!task.has_minority()) return filter_lexicon({}, task, params.threshold,
                                                  params.epsilon);
  if (docs.empty()) throw InputError(task.name + ": empty training corpus");
  const ClassCorpora corpora(docs, task.size());
  std::vector<WordScoreVector> seeds;
  for (const auto& word : build_seed_lexicon(corpora, task, params.top_f)) {
    seeds.push_back(score_word(word, corpora, params.epsilon));
  }
  return filter_lexicon(std::move(seeds), task, params.threshold, params.epsilon);
}

SignatureVector embed_description(const TokenList& tokens,
                                  const SignatureLexicon& lexicon) {
  std::map<std::string_view, std::size_t> frequency;
  for (const auto& token : tokens) {
    if (lexicon.entries.contains(token)) ++frequency[token];
  }

  SignatureVector v;
  v.values.assign(lexicon.task.size(), 0.0);
  std::size_t total = 0;
  for (const auto& [word, n] : frequency) {
    const auto& scores = lexicon.entries.find(word)->second.normalized;
    for (std::size_t c = 0; c < v.values.size(); ++c) {
      v.values[c] += static_cast<double>(n) * scores[c];
    }
    total += n;
    v.matched.emplace_back(word);
  }
  if (total > 0) {
    for (double& x : v.values) x /= static_cast<double>(total);
  }
  return v;
}

std::string save_lexicon(const SignatureLexicon& lexicon, const json& meta) {
  json header{{"kind", "signature-lexicon"},
              {"task", lexicon.task.name},
              {"classes", lexicon.task.classes},
              {"minority", lexicon.task.minority},
              {"threshold", lexicon.threshold},
              {"epsilon", lexicon.epsilon},
              {"seed_words", lexicon.seed_words},
              {"size", lexicon.entries.size()},
              {"meta", meta}};
  std::string out = header.dump() + "\n";
  for (const auto& [word, scores] : lexicon.entries) {
    out += json{{"word", word}, {"raw", scores.raw}, {"normalized", scores.normalized}}
               .dump();
    out += '\n';
  }
  return out;
}

SignatureLexicon load_lexicon(std::string_view content) {
  SignatureLexicon lexicon;
  std::size_t line_no = 0;
  std::size_t expected = 0;
  while (!content.empty()) {
    const auto newline = content.find('\n');
    const auto line = content.substr(0, newline);
    content = newline == std::string_view::npos ? std::string_view{}
                                                : content.substr(newline + 1);
    ++line_no;
    if (line.empty()) continue;
    json object;
    try {
      object = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError("lexicon line " + std::to_string(line_no) + ": " + e.what(),
                       line_no);
    }
    try {
      if (line_no == 1) {
        if (object.value("kind", "") != "signature-lexicon") {
          throw SchemaError("not a signature lexicon");
        }
        lexicon.task.name = object.at("task").get<std::string>();
        lexicon.task.classes = object.at("classes").get<std::vector<std::string>>();
        lexicon.task.minority = object.at("minority").get<std::vector<bool>>();
        lexicon.threshold = object.at("threshold").get<double>();
        lexicon.epsilon = object.at("epsilon").get<double>();
        lexicon.seed_words = object.at("seed_words").get<std::vector<std::string>>();
        expected = object.at("size").get<std::size_t>();
        continue;
      }
      WordScoreVector scores;
      scores.word = object.at("word").get<std::string>();
      scores.raw = object.at("raw").get<std::vector<double>>();
      scores.normalized = object.at("normalized").get<std::vector<double>>();
      if (scores.raw.size() != lexicon.task.size() ||
          scores.normalized.size() != lexicon.task.size()) {
        throw SchemaError("score vector arity does not match the class list");
      }
      std::string key = scores.word;
      lexicon.entries.emplace(std::move(key), std::move(scores));
    } catch (const json::exception& e) {
      throw SchemaError("lexicon line " + std::to_string(line_no) + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError("lexicon line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (line_no == 0) throw SchemaError("empty lexicon file");
  if (lexicon.entries.size() != expected) {
    throw SchemaError("lexicon declares " + std::to_string(expected) +
                      " words but holds " + std::to_string(lexicon.entries.size()));
  }
  return lexicon;
}

}  // namespace cvetriage::signature
