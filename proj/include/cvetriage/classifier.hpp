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

#ifndef CVETRIAGE_CLASSIFIER_HPP_
#define CVETRIAGE_CLASSIFIER_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cvetriage/corpus.hpp"
#include "cvetriage/cvss.hpp"
#include "cvetriage/signature.hpp"
#include "cvetriage/textprep.hpp"
#include "json.hpp"

namespace cvetriage::classifier {

using signature::TaskSpec;
using textprep::TokenList;

enum class FeatureSource { HashedBow, EmbeddingSidecar };

std::string_view to_string(FeatureSource source);
FeatureSource feature_source_from(std::string_view name);  // "hashed-bow", ...

struct FeatureConfig {
  FeatureSource source = FeatureSource::HashedBow;
  std::size_t bow_dim = 4096;        // power of two
  std::size_t embedding_dim = 0;     // sidecar dimension when source is a sidecar
  bool use_signature = true;

  std::size_t document_dim() const {
    return source == FeatureSource::HashedBow ? bow_dim : embedding_dim;
  }

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

nlohmann::json to_json(const FeatureConfig& config);
FeatureConfig feature_config_from_json(const nlohmann::json& object);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// Signed hashed counts: bucket = h mod dim, sign from the top bit of h;
// L2-normalized unless all-zero.
std::vector<double> hashed_bow(const TokenList& tokens, std::size_t dim);

// Document part (sidecar vector or hashed bag-of-words), followed by the
// signature vector when enabled. Throws InputError when the sidecar has no
// entry for the record id.
std::vector<double> assemble_features(const corpus::CveRecord& record,
                                      const TokenList& tokens,
                                      const corpus::EmbeddingTable* embeddings,
                                      const signature::SignatureLexicon* lexicon,
                                      const FeatureConfig& config);

enum class Output { Softmax, Sigmoid };

// Dense layer: logits = W x + b, W row-major classes x dim.
struct LinearHead {
  TaskSpec task;
  FeatureConfig features;
  Output output = Output::Softmax;
  std::size_t dim = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  static LinearHead zeros(TaskSpec task, FeatureConfig features, Output output,
                          std::size_t dim);

  std::size_t classes() const { return bias.size(); }
  std::vector<double> logits(std::span<const double> x) const;

  friend bool operator==(const LinearHead&, const LinearHead&) = default;
};

std::vector<double> softmax(std::span<const double> logits);
double sigmoid(double z);

struct Sample {
  std::vector<double> x;
  std::size_t label;
};

enum class Optimizer { Adam, GradientDescent };

struct TrainConfig {
  std::size_t epochs = 10;
  std::size_t batch_size = 12;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
  bool full_batch = false;
  Optimizer optimizer = Optimizer::Adam;

  void validate() const;  // throws InputError
};

// Learning rate used when fine-tuning the encoder end to end. Selectable for
// the heads, though far too small for a from-zero linear layer.
inline constexpr double kEncoderLearningRate = 1e-5;

struct Gradient {
  std::vector<double> weights;
  std::vector<double> bias;

  void reset(const LinearHead& head);
};

// Mean softmax cross-entropy over samples[batch]; adds the mean gradient to
// `grad` when non-null.
double softmax_cross_entropy(const LinearHead& head, std::span<const Sample> samples,
                             std::span<const std::size_t> batch, Gradient* grad);
double softmax_cross_entropy(const LinearHead& head, std::span<const Sample> samples,
                             Gradient* grad);

// Returns the mean loss of the batch and fills `grad` (already reset).
using BatchObjective = std::function<double(
    const LinearHead& head, std::span<const std::size_t> batch, Gradient& grad)>;

// Mini-batch optimisation loop shared by every head type. Each epoch visits
// a seeded shuffle of [0, n) (natural order in full-batch mode). Returns the
// per-epoch mean training loss.
std::vector<double> fit(LinearHead& head, std::size_t n, const BatchObjective& objective,
                        const TrainConfig& config);

struct TrainResult {
  LinearHead head;
  std::vector<double> epoch_loss;
};

// Multinomial logistic regression from zero weights.
TrainResult train_head(std::span<const Sample> train, const TaskSpec& task,
                       const FeatureConfig& features, const TrainConfig& config);

struct Prediction {
  std::vector<double> probabilities;
  std::size_t best = 0;  // first maximum in class order
};

// Softmax heads give a distribution; sigmoid heads give independent
// per-class probabilities. Throws DimensionError on a size mismatch.
Prediction predict(const LinearHead& head, std::span<const double> features);

// Header line (task, class order, feature config, output kind), then one
// line per class with its bias and weight row.
std::string save_head(const LinearHead& head,
                      const nlohmann::json& meta = nlohmann::json::object());
LinearHead load_head(std::string_view content);

// --- Single-label task pipeline ---------------------------------------------

struct PipelineOptions {
  textprep::CleanConfig clean;
  signature::LexiconParams lexicon;
  FeatureConfig features;
  TrainConfig train;
  bool resample = true;
  std::size_t resample_cap = 10;
  bool skip_unlabeled = true;  // otherwise a task without labels is an error
  bool parallel = true;
  // Keyed by task name; used instead of building a lexicon for that task.
  std::map<std::string, signature::SignatureLexicon, std::less<>> prebuilt_lexicons;
};

struct TaskModel {
  signature::SignatureLexicon lexicon;
  LinearHead head;
  std::vector<double> epoch_loss;
  corpus::ClassDistribution distribution;  // labeled records, before resampling
  std::size_t train_size = 0;              // after resampling
};

// Minority flags, signature lexicon on the un-resampled labeled records,
// minority resampling, feature assembly, train_head. `tokens` is parallel to
// train.records. Returns nullopt when nothing is labeled and
// options.skip_unlabeled is set. The lexicon is left empty when fewer than
// two classes have samples. A prebuilt lexicon must share the task's class
// order (InputError otherwise).
std::optional<TaskModel> train_task_model(const corpus::Dataset& train,
                                          std::span<const TokenList> tokens,
                                          const corpus::LabelTask& task,
                                          const PipelineOptions& options,
                                          const corpus::EmbeddingTable* embeddings,
                                          std::uint64_t seed);

Prediction predict_task(const TaskModel& model, const corpus::CveRecord& record,
                        const TokenList& tokens,
                        const corpus::EmbeddingTable* embeddings = nullptr);

// --- Eight-metric CVSS model ------------------------------------------------

struct MetricModel {
  cvss::Metric metric;
  TaskModel model;
};

struct CvssModel {
  std::vector<MetricModel> metrics;  // canonical metric order

  const MetricModel* find(cvss::Metric metric) const;
};

// One independent TaskModel per metric; records lacking a metric's label are
// skipped for that metric. Failures are rethrown naming the metric.
CvssModel train_all_cvss(const corpus::Dataset& train, const PipelineOptions& options,
                         const corpus::EmbeddingTable* embeddings = nullptr);

struct CvssPrediction {
  std::array<std::optional<Prediction>, 8> per_metric;
  std::optional<cvss::BaseVector> vector;  // when all eight heads exist
  std::optional<cvss::Severity> severity;
};

CvssPrediction predict_cvss(const CvssModel& model, const corpus::CveRecord& record,
                            const TokenList& tokens,
                            const corpus::EmbeddingTable* embeddings = nullptr);

}  // namespace cvetriage::classifier

#endif  // CVETRIAGE_CLASSIFIER_HPP_
