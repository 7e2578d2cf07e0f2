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

#include "cvetriage/classifier.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

#include "cvetriage/error.hpp"
#include "cvetriage/random.hpp"

namespace cvetriage::classifier {

using nlohmann::json;

std::string_view to_string(FeatureSource source) {
  return source == FeatureSource::HashedBow ? "hashed-bow" : "embedding-sidecar";
}

FeatureSource feature_source_from(std::string_view name) {
  if (name == "hashed-bow") return FeatureSource::HashedBow;
  if (name == "embedding-sidecar") return FeatureSource::EmbeddingSidecar;
  throw InputError("unknown feature source '" + std::string(name) + "'");
}

json to_json(const FeatureConfig& config) {
  return json{{"source", to_string(config.source)},
              {"bow_dim", config.bow_dim},
              {"embedding_dim", config.embedding_dim},
              {"use_signature", config.use_signature}};
}

FeatureConfig feature_config_from_json(const json& object) {
  FeatureConfig config;
  config.source = feature_source_from(object.at("source").get<std::string>());
  config.bow_dim = object.at("bow_dim").get<std::size_t>();
  config.embedding_dim = object.at("embedding_dim").get<std::size_t>();
  config.use_signature = object.at("use_signature").get<bool>();
  return config;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::vector<double> hashed_bow(const TokenList& tokens, std::size_t dim) {
  if (dim == 0 || !std::has_single_bit(dim)) {
    throw InputError("bow_dim must be a power of two, got " + std::to_string(dim));
  }
  std::vector<double> counts(dim, 0.0);
  for (const auto& token : tokens) {
    const auto h = fnv1a64(token);
    counts[h & (dim - 1)] += (h >> 63) ? -1.0 : 1.0;
  }
  double norm = 0.0;
  for (double c : counts) norm += c * c;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& c : counts) c /= norm;
  }
  return counts;
}

std::vector<double> assemble_features(const corpus::CveRecord& record,
                                      const TokenList& tokens,
                                      const corpus::EmbeddingTable* embeddings,
                                      const signature::SignatureLexicon* lexicon,
                                      const FeatureConfig& config) {
  std::vector<double> features;
  if (config.source == FeatureSource::HashedBow) {
    features = hashed_bow(tokens, config.bow_dim);
  } else {
    if (embeddings == nullptr) {
      throw InputError("feature source is embedding-sidecar but no table was given");
    }
    const auto* vector = embeddings->find(record.id);
    if (vector == nullptr) {
      throw InputError("no embedding for record '" + record.id + "'");
    }
    if (vector->size() != config.embedding_dim) {
      throw DimensionError("embedding dimension " + std::to_string(vector->size()) +
                           " does not match the configured " +
                           std::to_string(config.embedding_dim));
    }
    features = *vector;
  }
  if (config.use_signature) {
    if (lexicon == nullptr) {
      throw InputError("use_signature is on but no lexicon was given");
    }
    const auto sig = signature::embed_description(tokens, *lexicon);
    features.insert(features.end(), sig.values.begin(), sig.values.end());
  }
  return features;
}

LinearHead LinearHead::zeros(TaskSpec task, FeatureConfig features, Output output,
                             std::size_t dim) {
  LinearHead head;
  const std::size_t classes = task.size();
  head.task = std::move(task);
  head.features = features;
  head.output = output;
  head.dim = dim;
  head.weights.assign(classes * dim, 0.0);
  head.bias.assign(classes, 0.0);
  return head;
}

std::vector<double> LinearHead::logits(std::span<const double> x) const {
  if (x.size() != dim) {
    throw DimensionError("feature vector has " + std::to_string(x.size()) +
                         " entries, head expects " + std::to_string(dim));
  }
  std::vector<double> z(bias);
  for (std::size_t d = 0; d < dim; ++d) {
    const double xd = x[d];
    if (xd == 0.0) continue;
    for (std::size_t c = 0; c < z.size(); ++c) z[c] += weights[c * dim + d] * xd;
  }
  return z;
}

std::vector<double> softmax(std::span<const double> logits) {
  std::vector<double> p(logits.begin(), logits.end());
  if (p.empty()) return p;
  const double peak = *std::max_element(p.begin(), p.end());
  double total = 0.0;
  for (double& v : p) {
    v = std::exp(v - peak);
    total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void TrainConfig::validate() const {
  if (epochs < 1) throw InputError("epochs must be >= 1");
  if (batch_size < 1) throw InputError("batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw InputError("learning_rate must be > 0");
}

void Gradient::reset(const LinearHead& head) {
  weights.assign(head.weights.size(), 0.0);
  bias.assign(head.bias.size(), 0.0);
}

double softmax_cross_entropy(const LinearHead& head, std::span<const Sample> samples,
                             std::span<const std::size_t> batch, Gradient* grad) {
  if (batch.empty()) return 0.0;
  const double scale = 1.0 / static_cast<double>(batch.size());
  double loss = 0.0;
  for (std::size_t index : batch) {
    const Sample& s = samples[index];
    const auto z = head.logits(s.x);
    const double peak = *std::max_element(z.begin(), z.end());
    double total = 0.0;
    for (double v : z) total += std::exp(v - peak);
    loss += peak + std::log(total) - z[s.label];
    if (grad == nullptr) continue;

    auto delta = softmax(z);
    delta[s.label] -= 1.0;
    for (std::size_t c = 0; c < delta.size(); ++c) grad->bias[c] += scale * delta[c];
    for (std::size_t d = 0; d < head.dim; ++d) {
      const double xd = s.x[d];
      if (xd == 0.0) continue;
      for (std::size_t c = 0; c < delta.size(); ++c) {
        grad->weights[c * head.dim + d] += scale * delta[c] * xd;
      }
    }
  }
  return loss * scale;
}

double softmax_cross_entropy(const LinearHead& head, std::span<const Sample> samples,
                             Gradient* grad) {
  std::vector<std::size_t> all(samples.size());
  std::iota(all.begin(), all.end(), 0);
  return softmax_cross_entropy(head, samples, all, grad);
}

namespace {

class AdamState {
 public:
  explicit AdamState(std::size_t size) : m_(size, 0.0), v_(size, 0.0) {}

  void step(std::span<double> params, std::span<const double> grad,
            const TrainConfig& config, std::size_t t) {
    const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(t));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = config.beta1 * m_[i] + (1.0 - config.beta1) * grad[i];
      v_[i] = config.beta2 * v_[i] + (1.0 - config.beta2) * grad[i] * grad[i];
      const double m_hat = m_[i] / c1;
      const double v_hat = v_[i] / c2;
      params[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.adam_epsilon);
    }
  }

 private:
  std::vector<double> m_;
  std::vector<double> v_;
};

}  // namespace

std::vector<double> fit(LinearHead& head, std::size_t n, const BatchObjective& objective,
                        const TrainConfig& config) {
  config.validate();
  if (n == 0) throw InputError("empty training set");

  AdamState adam_w(head.weights.size());
  AdamState adam_b(head.bias.size());
  Rng rng(config.seed);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t batch_size = config.full_batch ? n : config.batch_size;

  Gradient grad;
  std::vector<double> epoch_loss;
  std::size_t step = 0;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    if (!config.full_batch) rng.shuffle(std::span<std::size_t>(order));
    double total = 0.0;
    for (std::size_t start = 0; start < n; start += batch_size) {
      const std::span<const std::size_t> batch(
          order.data() + start, std::min(batch_size, n - start));
      grad.reset(head);
      const double loss = objective(head, batch, grad);
      total += loss * static_cast<double>(batch.size());
      ++step;
      if (config.optimizer == Optimizer::Adam) {
        adam_w.step(head.weights, grad.weights, config, step);
        adam_b.step(head.bias, grad.bias, config, step);
      } else {
        for (std::size_t i = 0; i < head.weights.size(); ++i) {
          head.weights[i] -= config.learning_rate * grad.weights[i];
        }
        for (std::size_t i = 0; i < head.bias.size(); ++i) {
          head.bias[i] -= config.learning_rate * grad.bias[i];
        }
      }
    }
    epoch_loss.push_back(total / static_cast<double>(n));
  }

  for (double w : head.weights) {
    if (!std::isfinite(w)) throw InvariantError("training diverged: non-finite weight");
  }
  return epoch_loss;
}

TrainResult train_head(std::span<const Sample> train, const TaskSpec& task,
                       const FeatureConfig& features, const TrainConfig& config) {
  if (train.empty()) throw InputError(task.name + ": empty training set");
  const std::size_t dim = train.front().x.size();
  for (const auto& s : train) {
    if (s.label >= task.size()) {
      throw InputError(task.name + ": label " + std::to_string(s.label) +
                       " is not a class of the task");
    }
    if (s.x.size() != dim) {
      throw DimensionError(task.name + ": inconsistent feature dimensions");
    }
  }
  TrainResult result{LinearHead::zeros(task, features, Output::Softmax, dim), {}};
  result.epoch_loss = fit(
      result.head, train.size(),
      [train](const LinearHead& head, std::span<const std::size_t> batch,
              Gradient& grad) { return softmax_cross_entropy(head, train, batch, &grad); },
      config);
  return result;
}

Prediction predict(const LinearHead& head, std::span<const double> features) {
  const auto z = head.logits(features);
  Prediction p;
  if (head.output == Output::Softmax) {
    p.probabilities = softmax(z);
  } else {
    p.probabilities.resize(z.size());
    std::transform(z.begin(), z.end(), p.probabilities.begin(), sigmoid);
  }
  p.best = static_cast<std::size_t>(
      std::max_element(p.probabilities.begin(), p.probabilities.end()) -
      p.probabilities.begin());
  return p;
}

std::string save_head(const LinearHead& head, const json& meta) {
  json header{{"kind", "linear-head"},
              {"task", head.task.name},
              {"classes", head.task.classes},
              {"minority", head.task.minority},
              {"features", to_json(head.features)},
              {"output", head.output == Output::Softmax ? "softmax" : "sigmoid"},
              {"dim", head.dim},
              {"meta", meta}};
  std::string out = header.dump() + "\n";
  for (std::size_t c = 0; c < head.classes(); ++c) {
    const auto row = std::span<const double>(head.weights).subspan(c * head.dim, head.dim);
    out += json{{"class", head.task.classes[c]},
                {"bias", head.bias[c]},
                {"weights", std::vector<double>(row.begin(), row.end())}}
               .dump();
    out += '\n';
  }
  return out;
}

LinearHead load_head(std::string_view content) {
  LinearHead head;
  std::size_t line_no = 0;
  while (!content.empty()) {
    const auto newline = content.find('\n');
    const auto line = content.substr(0, newline);
    content = newline == std::string_view::npos ? std::string_view{}
                                                : content.substr(newline + 1);
    ++line_no;
    if (line.empty()) continue;
    try {
      const json object = json::parse(line);
      if (line_no == 1) {
        if (object.value("kind", "") != "linear-head") {
          throw SchemaError("not a linear head");
        }
        head.task.name = object.at("task").get<std::string>();
        head.task.classes = object.at("classes").get<std::vector<std::string>>();
        head.task.minority = object.at("minority").get<std::vector<bool>>();
        head.features = feature_config_from_json(object.at("features"));
        head.output = object.at("output").get<std::string>() == "sigmoid"
                          ? Output::Sigmoid
                          : Output::Softmax;
        head.dim = object.at("dim").get<std::size_t>();
        continue;
      }
      const std::size_t c = head.bias.size();
      if (c >= head.task.size() || object.at("class") != head.task.classes[c]) {
        throw SchemaError("class rows out of order");
      }
      const auto row = object.at("weights").get<std::vector<double>>();
      if (row.size() != head.dim) throw SchemaError("weight row has wrong length");
      head.bias.push_back(object.at("bias").get<double>());
      head.weights.insert(head.weights.end(), row.begin(), row.end());
    } catch (const json::exception& e) {
      throw SchemaError("head line " + std::to_string(line_no) + ": " + e.what());
    } catch (const SchemaError& e) {
      throw SchemaError("head line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (line_no == 0 || head.bias.size() != head.task.size()) {
    throw SchemaError("head file is truncated");
  }
  return head;
}

}  // namespace cvetriage::classifier
