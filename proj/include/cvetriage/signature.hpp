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

#ifndef CVETRIAGE_SIGNATURE_HPP_
#define CVETRIAGE_SIGNATURE_HPP_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvetriage/corpus.hpp"
#include "cvetriage/textprep.hpp"

namespace cvetriage::signature {

using textprep::TokenList;

// One single-label task: the fixed class order and which classes count as
// minority when the signature lexicon is built.
struct TaskSpec {
  std::string name;
  std::vector<std::string> classes;
  std::vector<bool> minority;  // parallel to classes

  std::size_t size() const { return classes.size(); }
  bool has_minority() const;

  friend bool operator==(const TaskSpec&, const TaskSpec&) = default;
};

// Class c is minority iff count(c) < ratio * majority count. Throws
// InputError when fewer than two classes have samples.
std::vector<bool> identify_minority_classes(const corpus::ClassDistribution& dist,
                                            double ratio);

struct LabeledDoc {
  TokenList tokens;
  std::size_t label;
};

// Every class's training documents merged into one pseudo-document.
class ClassCorpora {
 public:
  ClassCorpora(std::span<const LabeledDoc> docs, std::size_t class_count);

  std::size_t class_count() const { return counts_.size(); }
  std::size_t length(std::size_t cls) const { return lengths_[cls]; }
  std::size_t count(std::size_t cls, std::string_view word) const;

  // Number of class pseudo-documents containing `word`.
  std::size_t document_frequency(std::string_view word) const;

  // Descending count, ties in lexicographic order.
  std::vector<std::string> most_frequent(std::size_t cls, std::size_t top) const;

 private:
  std::vector<std::map<std::string, std::size_t, std::less<>>> counts_;
  std::vector<std::size_t> lengths_;
};

// Union over minority classes of each class's top_f most frequent tokens,
// returned sorted. Throws InputError when no class is flagged minority.
std::vector<std::string> build_seed_lexicon(const ClassCorpora& corpora,
                                            const TaskSpec& task, std::size_t top_f);

struct WordScoreVector {
  std::string word;
  std::vector<double> raw;         // per-class TF-IDF
  std::vector<double> normalized;  // raw / (max(raw) + epsilon)

  friend bool operator==(const WordScoreVector&, const WordScoreVector&) = default;
};

// tf = count / |D_j| (0 for an empty class), idf = ln((n + 1) / (df + 1)) + 1.
WordScoreVector score_word(std::string_view word, const ClassCorpora& corpora,
                           double epsilon);

std::vector<double> normalize_scores(std::span<const double> raw, double epsilon);

// Keep iff some minority class scores above th and every other class scores
// below 1 - th.
bool passes_filter(const WordScoreVector& scores, const TaskSpec& task,
                   double threshold);

struct SignatureLexicon {
  TaskSpec task;
  double threshold = 0.85;
  double epsilon = 1e-9;
  std::vector<std::string> seed_words;
  std::map<std::string, WordScoreVector, std::less<>> entries;

  friend bool operator==(const SignatureLexicon&, const SignatureLexicon&) = default;
};

SignatureLexicon filter_lexicon(std::vector<WordScoreVector> seeds,
                                const TaskSpec& task, double threshold,
                                double epsilon);

struct LexiconParams {
  double threshold = 0.85;
  double epsilon = 1e-9;
  std::size_t top_f = 200;
  double minority_ratio = 0.25;
};

// build_seed_lexicon -> score_word -> filter_lexicon over one corpus. A task
// without minority classes gets an empty lexicon.
SignatureLexicon build_lexicon(std::span<const LabeledDoc> docs, const TaskSpec& task,
                               const LexiconParams& params);

struct SignatureVector {
  std::vector<double> values;
  std::vector<std::string> matched;  // sorted
};

// Term-frequency weighted mean of the normalized vectors of every lexicon
// word in the document; all zeros when nothing matches.
SignatureVector embed_description(const TokenList& tokens,
                                  const SignatureLexicon& lexicon);

// Header line with the task and parameters, then one line per word.
// `meta` is stored verbatim in the header (e.g. a run-config hash).
std::string save_lexicon(const SignatureLexicon& lexicon,
                         const nlohmann::json& meta = nlohmann::json::object());
SignatureLexicon load_lexicon(std::string_view content);

}  // namespace cvetriage::signature

#endif  // CVETRIAGE_SIGNATURE_HPP_
