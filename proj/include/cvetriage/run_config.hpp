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

#ifndef CVETRIAGE_RUN_CONFIG_HPP_
#define CVETRIAGE_RUN_CONFIG_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "cvetriage/classifier.hpp"
#include "json.hpp"

namespace cvetriage {

// Every knob of a command-line run. Keys of the JSON form match the field
// names; path fields do not take part in the hash.
struct RunConfig {
  // Paths.
  std::string dataset;     // raw input for ingest (NVD feed or JSONL)
  std::string train_data;  // defaults to <output_dir>/train.jsonl
  std::string test_data;   // defaults to <output_dir>/test.jsonl
  std::string embeddings;
  std::string tree;
  std::string output_dir = "cvetriage-out";
  std::string model_dir;  // defaults to output_dir

  std::uint64_t seed = 42;
  double train_fraction = 0.8;

  double threshold = 0.85;
  double epsilon = 1e-9;
  std::size_t top_f = 200;
  double minority_ratio = 0.25;

  std::string feature_source = "hashed-bow";
  std::size_t bow_dim = 4096;
  bool use_signature = true;

  std::size_t epochs = 10;
  std::size_t batch_size = 12;
  double learning_rate = 1e-3;
  bool full_batch = false;

  bool resample = true;
  std::size_t resample_cap = 10;

  double tau = 0.5;
  std::size_t top_k = 3;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  // Throws InputError naming the offending key.
  void validate() const;

  std::string train_path() const;
  std::string test_path() const;
  std::string models_path() const;

  // Settings shared by every single-label task. embedding_dim is left 0.
  classifier::PipelineOptions pipeline_options() const;
};

// Sorted keys, all fields present.
nlohmann::json to_json(const RunConfig& config);

// Missing keys keep their defaults. Throws SchemaError for unknown keys and
// wrongly typed values, naming the key.
RunConfig run_config_from_json(const nlohmann::json& object);
RunConfig parse_run_config(std::string_view text);  // ParseError with offset

// 16 hex digits of FNV-1a over the compact JSON without path fields.
std::string config_hash(const RunConfig& config);

bool is_path_key(std::string_view key);

}  // namespace cvetriage

#endif  // CVETRIAGE_RUN_CONFIG_HPP_
