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

// Single-label task pipeline and the eight-metric CVSS model built on it.

#include <future>
#include <map>

#include "cvetriage/classifier.hpp"
#include "cvetriage/error.hpp"

namespace cvetriage::classifier {

std::optional<TaskModel> train_task_model(const corpus::Dataset& train,
                                          std::span<const TokenList> tokens,
                                          const corpus::LabelTask& task_view,
                                          const PipelineOptions& options,
                                          const corpus::EmbeddingTable* embeddings,
                                          std::uint64_t seed) {
  if (tokens.size() != train.size()) {
    throw InvariantError("token lists are not parallel to the training records");
  }
  corpus::Dataset labeled;
  std::map<std::string, std::size_t, std::less<>> row_of;
  for (std::size_t i = 0; i < train.size(); ++i) {
    if (!task_view.label_of(train.records[i])) continue;
    labeled.add(train.records[i], train.provenance[i]);
    row_of.emplace(train.records[i].id, i);
  }
  if (labeled.empty()) {
    if (options.skip_unlabeled) return std::nullopt;
    throw InputError("no labeled training records");
  }

  TaskModel model;
  model.distribution = corpus::class_distribution(labeled, task_view);
  TaskSpec task{task_view.name, task_view.classes,
                std::vector<bool>(task_view.classes.size(), false)};
  const auto& counts = model.distribution.counts;
  if (std::count_if(counts.begin(), counts.end(), [](auto c) { return c > 0; }) >= 2) {
    task.minority = signature::identify_minority_classes(model.distribution,
                                                         options.lexicon.minority_ratio);
  }

  std::vector<signature::LabeledDoc> docs;
  docs.reserve(labeled.size());
  for (const auto& record : labeled.records) {
    docs.push_back({tokens[row_of.find(record.id)->second], *task_view.label_of(record)});
  }
  if (const auto it = options.prebuilt_lexicons.find(task.name);
      it != options.prebuilt_lexicons.end()) {
    if (it->second.task.classes != task.classes) {
      throw InputError("lexicon for " + task.name + " has a different class order");
    }
    model.lexicon = it->second;
  } else {
    model.lexicon = signature::build_lexicon(docs, task, options.lexicon);
  }

  const corpus::Dataset pool =
      options.resample ? corpus::resample_minority(labeled, task_view, task.minority,
                                                   options.resample_cap, seed ^ 0x5eedULL)
                       : labeled;

  // Features depend only on the record, so duplicates reuse the original's.
  std::map<std::string_view, std::vector<double>> features_of;
  std::vector<Sample> samples;
  samples.reserve(pool.size());
  for (const auto& record : pool.records) {
    auto it = features_of.find(record.id);
    if (it == features_of.end()) {
      const auto& doc_tokens = tokens[row_of.find(record.id)->second];
      it = features_of
               .emplace(record.id, assemble_features(record, doc_tokens, embeddings,
                                                     &model.lexicon, options.features))
               .first;
    }
    samples.push_back({it->second, *task_view.label_of(record)});
  }
  model.train_size = samples.size();

  TrainConfig config = options.train;
  config.seed = seed;
  auto result = train_head(samples, task, options.features, config);
  model.head = std::move(result.head);
  model.epoch_loss = std::move(result.epoch_loss);
  return model;
}

Prediction predict_task(const TaskModel& model, const corpus::CveRecord& record,
                        const TokenList& tokens,
                        const corpus::EmbeddingTable* embeddings) {
  const auto features =
      assemble_features(record, tokens, embeddings, &model.lexicon, model.head.features);
  return predict(model.head, features);
}

const MetricModel* CvssModel::find(cvss::Metric metric) const {
  for (const auto& m : metrics) {
    if (m.metric == metric) return &m;
  }
  return nullptr;
}

CvssModel train_all_cvss(const corpus::Dataset& train, const PipelineOptions& options,
                         const corpus::EmbeddingTable* embeddings) {
  options.train.validate();
  std::vector<TokenList> tokens;
  tokens.reserve(train.size());
  for (const auto& record : train.records) {
    tokens.push_back(textprep::clean_and_tokenize(record.description, options.clean));
  }

  auto run = [&](cvss::Metric metric) -> std::optional<TaskModel> {
    const auto key = std::string(cvss::metric_key(metric));
    try {
      return train_task_model(train, tokens, corpus::cvss_task(metric), options,
                              embeddings,
                              options.train.seed + static_cast<std::uint64_t>(metric));
    } catch (const InvariantError& e) {
      throw InvariantError(key + ": " + e.what());
    } catch (const Error& e) {
      throw InputError(key + ": " + e.what());
    }
  };

  std::vector<std::optional<TaskModel>> trained;
  if (options.parallel) {
    std::vector<std::future<std::optional<TaskModel>>> jobs;
    for (cvss::Metric m : cvss::kMetrics) {
      jobs.push_back(std::async(std::launch::async, run, m));
    }
    for (auto& job : jobs) trained.push_back(job.get());
  } else {
    for (cvss::Metric m : cvss::kMetrics) trained.push_back(run(m));
  }

  CvssModel model;
  for (std::size_t i = 0; i < trained.size(); ++i) {
    if (trained[i]) model.metrics.push_back({cvss::kMetrics[i], std::move(*trained[i])});
  }
  return model;
}

CvssPrediction predict_cvss(const CvssModel& model, const corpus::CveRecord& record,
                            const TokenList& tokens,
                            const corpus::EmbeddingTable* embeddings) {
  CvssPrediction out;
  cvss::BaseVector vector;
  for (const auto& m : model.metrics) {
    auto p = predict_task(m.model, record, tokens, embeddings);
    vector.set(m.metric, m.model.head.task.classes[p.best].front());
    out.per_metric[static_cast<std::size_t>(m.metric)] = std::move(p);
  }
  if (model.metrics.size() == cvss::kMetrics.size()) {
    out.vector = vector;
    out.severity = cvss::base_score(vector);
  }
  return out;
}

}  // namespace cvetriage::classifier
