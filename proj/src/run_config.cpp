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

#include "cvetriage/run_config.hpp"

#include <array>
#include <cstdio>
#include <filesystem>

#include "cvetriage/error.hpp"

namespace cvetriage {

namespace {

constexpr std::array<std::string_view, 7> kPathKeys = {
    "dataset", "embeddings", "model_dir", "output_dir", "test_data", "train_data", "tree"};

std::string joined(const std::string& dir, const char* file) {
  return (std::filesystem::path(dir) / file).string();
}

template <typename T>
void read_key(const nlohmann::json& object, const char* key, T& field) {
  const auto it = object.find(key);
  if (it == object.end()) return;
  const auto& v = *it;
  bool ok = false;
  if constexpr (std::is_same_v<T, bool>) {
    ok = v.is_boolean();
  } else if constexpr (std::is_same_v<T, std::string>) {
    ok = v.is_string();
  } else if constexpr (std::is_integral_v<T>) {
    ok = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
  } else {
    ok = v.is_number();
  }
  if (!ok) {
    throw SchemaError(std::string("config key '") + key + "' has the wrong type");
  }
  field = v.get<T>();
}

}  // namespace

bool is_path_key(std::string_view key) {
  for (auto k : kPathKeys) {
    if (k == key) return true;
  }
  return false;
}

void RunConfig::validate() const {
  auto fail = [](const char* key, const char* why) {
    throw InputError(std::string("config key '") + key + "': " + why);
  };
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) fail("train_fraction", "must be in (0, 1)");
  if (!(threshold > 0.5 && threshold < 1.0)) fail("threshold", "must be in (0.5, 1)");
  if (!(epsilon > 0.0)) fail("epsilon", "must be positive");
  if (top_f == 0) fail("top_f", "must be >= 1");
  if (!(minority_ratio > 0.0 && minority_ratio < 1.0)) fail("minority_ratio", "must be in (0, 1)");
  const auto source = classifier::feature_source_from(feature_source);
  if (source == classifier::FeatureSource::EmbeddingSidecar && embeddings.empty()) {
    fail("embeddings", "required for the embedding-sidecar feature source");
  }
  if (bow_dim == 0 || (bow_dim & (bow_dim - 1)) != 0) fail("bow_dim", "must be a power of two");
  if (epochs == 0) fail("epochs", "must be >= 1");
  if (batch_size == 0) fail("batch_size", "must be >= 1");
  if (!(learning_rate > 0.0)) fail("learning_rate", "must be positive");
  if (resample_cap == 0) fail("resample_cap", "must be >= 1");
  if (!(tau >= 0.0 && tau <= 1.0)) fail("tau", "must be in [0, 1]");
  if (top_k == 0) fail("top_k", "must be >= 1");
  if (output_dir.empty()) fail("output_dir", "must not be empty");
}

std::string RunConfig::train_path() const {
  return train_data.empty() ? joined(output_dir, "train.jsonl") : train_data;
}

std::string RunConfig::test_path() const {
  return test_data.empty() ? joined(output_dir, "test.jsonl") : test_data;
}

std::string RunConfig::models_path() const {
  return joined(model_dir.empty() ? output_dir : model_dir, "models");
}

classifier::PipelineOptions RunConfig::pipeline_options() const {
  classifier::PipelineOptions options;
  options.lexicon.threshold = threshold;
  options.lexicon.epsilon = epsilon;
  options.lexicon.top_f = top_f;
  options.lexicon.minority_ratio = minority_ratio;
  options.features.source = classifier::feature_source_from(feature_source);
  options.features.bow_dim = bow_dim;
  options.features.use_signature = use_signature;
  options.train.epochs = epochs;
  options.train.batch_size = batch_size;
  options.train.learning_rate = learning_rate;
  options.train.full_batch = full_batch;
  options.train.seed = seed;
  options.resample = resample;
  options.resample_cap = resample_cap;
  return options;
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"dataset", c.dataset},
          {"train_data", c.train_data},
          {"test_data", c.test_data},
          {"embeddings", c.embeddings},
          {"tree", c.tree},
          {"output_dir", c.output_dir},
          {"model_dir", c.model_dir},
          {"seed", c.seed},
          {"train_fraction", c.train_fraction},
          {"threshold", c.threshold},
          {"epsilon", c.epsilon},
          {"top_f", c.top_f},
          {"minority_ratio", c.minority_ratio},
          {"feature_source", c.feature_source},
          {"bow_dim", c.bow_dim},
          {"use_signature", c.use_signature},
          {"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"learning_rate", c.learning_rate},
          {"full_batch", c.full_batch},
          {"resample", c.resample},
          {"resample_cap", c.resample_cap},
          {"tau", c.tau},
          {"top_k", c.top_k}};
}

RunConfig run_config_from_json(const nlohmann::json& object) {
  if (!object.is_object()) throw SchemaError("config must be a JSON object");
  RunConfig c;
  const auto known = to_json(c);
  for (const auto& [key, value] : object.items()) {
    if (!known.contains(key)) throw SchemaError("config: unknown key '" + key + "'");
  }
  read_key(object, "dataset", c.dataset);
  read_key(object, "train_data", c.train_data);
  read_key(object, "test_data", c.test_data);
  read_key(object, "embeddings", c.embeddings);
  read_key(object, "tree", c.tree);
  read_key(object, "output_dir", c.output_dir);
  read_key(object, "model_dir", c.model_dir);
  read_key(object, "seed", c.seed);
  read_key(object, "train_fraction", c.train_fraction);
  read_key(object, "threshold", c.threshold);
  read_key(object, "epsilon", c.epsilon);
  read_key(object, "top_f", c.top_f);
  read_key(object, "minority_ratio", c.minority_ratio);
  read_key(object, "feature_source", c.feature_source);
  read_key(object, "bow_dim", c.bow_dim);
  read_key(object, "use_signature", c.use_signature);
  read_key(object, "epochs", c.epochs);
  read_key(object, "batch_size", c.batch_size);
  read_key(object, "learning_rate", c.learning_rate);
  read_key(object, "full_batch", c.full_batch);
  read_key(object, "resample", c.resample);
  read_key(object, "resample_cap", c.resample_cap);
  read_key(object, "tau", c.tau);
  read_key(object, "top_k", c.top_k);
  return c;
}

RunConfig parse_run_config(std::string_view text) {
  nlohmann::json object;
  try {
    object = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what(), e.byte);
  }
  return run_config_from_json(object);
}

std::string config_hash(const RunConfig& config) {
  auto object = to_json(config);
  for (auto key : kPathKeys) object.erase(std::string(key));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(classifier::fnv1a64(object.dump())));
  return buf;
}

}  // namespace cvetriage
