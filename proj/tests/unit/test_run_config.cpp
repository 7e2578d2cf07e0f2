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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "cvetriage/error.hpp"
#include "cvetriage/run_config.hpp"

using namespace cvetriage;

namespace {

std::string error_of(const RunConfig& config) {
  try {
    config.validate();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("defaults") {
  const RunConfig c;
  CHECK_NOTHROW(c.validate());
  CHECK(c.seed == 42);
  CHECK(c.threshold == 0.85);
  CHECK(c.tau == 0.5);
  CHECK(c.top_k == 3);
  CHECK(c.train_path() == "cvetriage-out/train.jsonl");
  CHECK(c.test_path() == "cvetriage-out/test.jsonl");
  CHECK(c.models_path() == "cvetriage-out/models");
  RunConfig custom;
  custom.model_dir = "m";
  custom.train_data = "a.jsonl";
  CHECK(custom.models_path() == "m/models");
  CHECK(custom.train_path() == "a.jsonl");
}

TEST_CASE("JSON round trip") {
  RunConfig c;
  c.seed = 7;
  c.use_signature = false;
  c.tree = "tree.csv";
  c.learning_rate = 0.01;
  CHECK(run_config_from_json(to_json(c)) == c);
  CHECK(parse_run_config(to_json(c).dump()) == c);
  CHECK(parse_run_config("{}") == RunConfig{});
  CHECK(parse_run_config(R"({"epochs": 3})").epochs == 3);
}

TEST_CASE("bad input is rejected") {
  CHECK_THROWS_AS(parse_run_config(R"({"epochz": 3})"), SchemaError);
  CHECK_THROWS_AS(parse_run_config(R"({"epochs": "three"})"), SchemaError);
  CHECK_THROWS_AS(parse_run_config(R"({"use_signature": 1})"), SchemaError);
  CHECK_THROWS_AS(parse_run_config("[1, 2]"), SchemaError);
  try {
    parse_run_config("{\"seed\": 1,\n oops}");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() > 10);
  }
}

TEST_CASE("validation names the key") {
  RunConfig c;
  c.threshold = 0.5;
  CHECK(error_of(c).find("threshold") != std::string::npos);
  c = {};
  c.bow_dim = 1000;
  CHECK(error_of(c).find("bow_dim") != std::string::npos);
  c = {};
  c.train_fraction = 1.0;
  CHECK(error_of(c).find("train_fraction") != std::string::npos);
  c = {};
  c.tau = 1.5;
  CHECK(error_of(c).find("tau") != std::string::npos);
  c = {};
  c.feature_source = "embedding-sidecar";
  CHECK(error_of(c).find("embeddings") != std::string::npos);
  c = {};
  c.feature_source = "word2vec";
  CHECK_THROWS_AS(c.validate(), InputError);
}

TEST_CASE("hash ignores paths and tracks settings") {
  const RunConfig base;
  const std::string h = config_hash(base);
  CHECK(h.size() == 16);
  CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
  RunConfig moved = base;
  moved.output_dir = "elsewhere";
  moved.dataset = "other.json";
  moved.tree = "t.csv";
  CHECK(config_hash(moved) == h);
  RunConfig reseeded = base;
  reseeded.seed = 43;
  CHECK(config_hash(reseeded) != h);
  RunConfig unsigned_head = base;
  unsigned_head.use_signature = false;
  CHECK(config_hash(unsigned_head) != h);
  CHECK(is_path_key("output_dir"));
  CHECK_FALSE(is_path_key("seed"));
}

TEST_CASE("pipeline options mirror the config") {
  RunConfig c;
  c.top_f = 50;
  c.epochs = 4;
  c.use_signature = false;
  const auto o = c.pipeline_options();
  CHECK(o.lexicon.top_f == 50);
  CHECK(o.train.epochs == 4);
  CHECK_FALSE(o.features.use_signature);
  CHECK(o.train.seed == 42);
}
