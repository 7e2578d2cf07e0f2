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

#ifndef CVETRIAGE_EVAL_HPP_
#define CVETRIAGE_EVAL_HPP_

#include <algorithm>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace cvetriage::eval {

// counts[true][predicted], row-major over `classes`.
struct ConfusionMatrix {
  std::vector<std::string> classes;
  std::vector<std::size_t> counts;

  std::size_t at(std::size_t truth, std::size_t predicted) const {
    return counts[truth * classes.size() + predicted];
  }
  std::size_t total() const;
  std::string to_csv() const;  // header row is the class order
};

// Throws InputError when a label is not in `classes`.
ConfusionMatrix confusion(std::span<const std::pair<std::string, std::string>> pairs,
                          const std::vector<std::string>& classes);
ConfusionMatrix confusion(std::span<const std::pair<std::size_t, std::size_t>> pairs,
                          const std::vector<std::string>& classes);

struct ClassScores {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct F1Report {
  double accuracy = 0.0;
  double micro_f1 = 0.0;
  double macro_f1 = 0.0;  // a class with no support and no predictions scores 0
  std::vector<ClassScores> per_class;
};

// Throws InputError on an empty matrix.
F1Report micro_macro_f1(const ConfusionMatrix& matrix);

struct RankedSample {
  std::set<std::string> truth;
  std::vector<std::string> ranked;  // best first, no duplicates
};

struct TopKMetrics {
  std::size_t k = 1;
  double hit_rate = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  std::size_t evaluated = 0;    // samples in the P/R means
  std::size_t empty_truth = 0;  // excluded from P/R
};

// HR@K over all samples; P@K and R@K over samples with non-empty truth.
// Throws InputError for k < 1.
TopKMetrics topk_metrics(std::span<const RankedSample> samples, std::size_t k);

// Correct iff something was predicted and nothing predicted is false.
template <typename T>
bool multilabel_correct(const std::set<T>& predicted, const std::set<T>& truth) {
  return !predicted.empty() &&
         std::includes(truth.begin(), truth.end(), predicted.begin(), predicted.end());
}

nlohmann::json to_json(const F1Report& report, const std::vector<std::string>& classes);
nlohmann::json to_json(const TopKMetrics& metrics);

}  // namespace cvetriage::eval

#endif  // CVETRIAGE_EVAL_HPP_
