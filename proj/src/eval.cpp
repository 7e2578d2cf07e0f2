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

#include "cvetriage/eval.hpp"

#include <numeric>

#include "cvetriage/error.hpp"

namespace cvetriage::eval {

std::size_t ConfusionMatrix::total() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::string ConfusionMatrix::to_csv() const {
  std::string out = "true\\predicted";
  for (const auto& c : classes) out += "," + c;
  out += '\n';
  for (std::size_t t = 0; t < classes.size(); ++t) {
    out += classes[t];
    for (std::size_t p = 0; p < classes.size(); ++p) out += "," + std::to_string(at(t, p));
    out += '\n';
  }
  return out;
}

ConfusionMatrix confusion(std::span<const std::pair<std::size_t, std::size_t>> pairs,
                          const std::vector<std::string>& classes) {
  ConfusionMatrix m{classes, std::vector<std::size_t>(classes.size() * classes.size(), 0)};
  for (const auto& [t, p] : pairs) {
    if (t >= classes.size() || p >= classes.size()) {
      throw InputError("label index outside the class list");
    }
    ++m.counts[t * classes.size() + p];
  }
  return m;
}

ConfusionMatrix confusion(std::span<const std::pair<std::string, std::string>> pairs,
                          const std::vector<std::string>& classes) {
  auto index = [&classes](const std::string& label) {
    const auto it = std::find(classes.begin(), classes.end(), label);
    if (it == classes.end()) throw InputError("unknown label '" + label + "'");
    return static_cast<std::size_t>(it - classes.begin());
  };
  std::vector<std::pair<std::size_t, std::size_t>> indexed;
  indexed.reserve(pairs.size());
  for (const auto& [t, p] : pairs) indexed.emplace_back(index(t), index(p));
  return confusion(std::span<const std::pair<std::size_t, std::size_t>>(indexed), classes);
}

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

F1Report micro_macro_f1(const ConfusionMatrix& m) {
  const std::size_t total = m.total();
  if (total == 0) throw InputError("cannot score an empty confusion matrix");
  const std::size_t n = m.classes.size();

  F1Report report;
  std::size_t tp_sum = 0;
  std::size_t fp_sum = 0;
  std::size_t fn_sum = 0;
  double f1_sum = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t row = 0;
    std::size_t col = 0;
    for (std::size_t k = 0; k < n; ++k) {
      row += m.at(c, k);
      col += m.at(k, c);
    }
    const std::size_t tp = m.at(c, c);
    ClassScores s;
    s.support = row;
    s.precision = ratio(tp, col);
    s.recall = ratio(tp, row);
    s.f1 = harmonic(s.precision, s.recall);
    report.per_class.push_back(s);
    f1_sum += s.f1;
    tp_sum += tp;
    fp_sum += col - tp;
    fn_sum += row - tp;
  }
  report.accuracy = ratio(tp_sum, total);
  report.micro_f1 = ratio(2 * tp_sum, 2 * tp_sum + fp_sum + fn_sum);
  report.macro_f1 = n == 0 ? 0.0 : f1_sum / static_cast<double>(n);
  return report;
}

TopKMetrics topk_metrics(std::span<const RankedSample> samples, std::size_t k) {
  if (k < 1) throw InputError("K must be >= 1");
  TopKMetrics out;
  out.k = k;
  std::size_t hits = 0;
  double precision_sum = 0.0;
  double recall_sum = 0.0;
  for (const auto& s : samples) {
    std::size_t found = 0;
    for (std::size_t i = 0; i < std::min(k, s.ranked.size()); ++i) {
      if (s.truth.contains(s.ranked[i])) ++found;
    }
    if (found > 0) ++hits;
    if (s.truth.empty()) {
      ++out.empty_truth;
      continue;
    }
    ++out.evaluated;
    precision_sum += static_cast<double>(found) / static_cast<double>(k);
    recall_sum += static_cast<double>(found) / static_cast<double>(s.truth.size());
  }
  out.hit_rate = ratio(hits, samples.size());
  if (out.evaluated > 0) {
    out.precision = precision_sum / static_cast<double>(out.evaluated);
    out.recall = recall_sum / static_cast<double>(out.evaluated);
  }
  return out;
}

nlohmann::json to_json(const F1Report& report, const std::vector<std::string>& classes) {
  nlohmann::json per_class = nlohmann::json::object();
  for (std::size_t c = 0; c < report.per_class.size(); ++c) {
    const auto& s = report.per_class[c];
    per_class[classes[c]] = {{"precision", s.precision},
                             {"recall", s.recall},
                             {"f1", s.f1},
                             {"support", s.support}};
  }
  return {{"accuracy", report.accuracy},
          {"micro_f1", report.micro_f1},
          {"macro_f1", report.macro_f1},
          {"per_class", per_class}};
}

nlohmann::json to_json(const TopKMetrics& m) {
  return {{"k", m.k},
          {"hit_rate", m.hit_rate},
          {"precision", m.precision},
          {"recall", m.recall},
          {"evaluated", m.evaluated},
          {"empty_truth", m.empty_truth}};
}

}  // namespace cvetriage::eval
