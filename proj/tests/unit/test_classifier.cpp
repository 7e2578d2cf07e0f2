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

#include <cmath>
#include <numeric>
#include <random>

#include "cvetriage/classifier.hpp"
#include "cvetriage/error.hpp"
#include "support/gradcheck.hpp"

using namespace cvetriage;
using classifier::FeatureConfig;
using classifier::LinearHead;
using classifier::Output;
using classifier::Sample;
using classifier::TrainConfig;
using signature::TaskSpec;

namespace {

TaskSpec task_of(std::size_t n) {
  TaskSpec t{"T", {}, std::vector<bool>(n, false)};
  for (std::size_t i = 0; i < n; ++i) t.classes.push_back("c" + std::to_string(i));
  return t;
}

std::vector<Sample> random_samples(std::mt19937_64& rng, std::size_t n, std::size_t dim,
                                   std::size_t classes) {
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<std::size_t> label(0, classes - 1);
  std::vector<Sample> out;
  for (std::size_t i = 0; i < n; ++i) {
    Sample s{std::vector<double>(dim), label(rng)};
    for (double& v : s.x) v = normal(rng);
    out.push_back(std::move(s));
  }
  return out;
}

// Two clusters on either side of the line x + y = 0.
std::vector<Sample> separable() {
  std::vector<Sample> out;
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int i = 0; i < 40; ++i) {
    out.push_back({{u(rng), u(rng)}, 0});
    out.push_back({{-u(rng), -u(rng)}, 1});
  }
  return out;
}

corpus::CveRecord cve(const std::string& id, const std::string& text, const std::string& vector) {
  corpus::CveRecord r;
  r.id = id;
  r.description = text;
  r.cvss_vector = cvss::parse_vector(vector);
  return r;
}

}  // namespace

TEST_CASE("fnv1a64 reference values") {
  CHECK(classifier::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(classifier::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(classifier::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("hashed bag of words") {
  const auto v = classifier::hashed_bow({"sql", "inject", "sql", "login"}, 64);
  CHECK(v.size() == 64);
  CHECK(std::inner_product(v.begin(), v.end(), v.begin(), 0.0) == doctest::Approx(1.0));
  CHECK(classifier::hashed_bow({}, 16) == std::vector<double>(16, 0.0));
  CHECK(classifier::hashed_bow({"a", "b"}, 8) == classifier::hashed_bow({"a", "b"}, 8));

  const auto h = classifier::fnv1a64("sql");
  const auto single = classifier::hashed_bow({"sql"}, 1024);
  CHECK(single[h & 1023] == ((h >> 63) ? -1.0 : 1.0));

  CHECK_THROWS_AS(classifier::hashed_bow({"a"}, 12), InputError);
  CHECK_THROWS_AS(classifier::hashed_bow({"a"}, 0), InputError);
}

TEST_CASE("feature assembly") {
  signature::SignatureLexicon lexicon;
  lexicon.task = TaskSpec{"AV", {"N", "A", "L", "P"}, {false, true, false, true}};
  lexicon.entries["bluetooth"] = {"bluetooth", {0, 1, 0, 0}, {0, 0.9, 0, 0}};
  const auto record = cve("CVE-2020-0001", "x", "AV:A/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H");

  SUBCASE("empty tokens give a zero document part") {
    FeatureConfig config;
    config.bow_dim = 16;
    const auto f = classifier::assemble_features(record, {}, nullptr, &lexicon, config);
    REQUIRE(f.size() == 20);
    CHECK(std::vector<double>(f.begin(), f.begin() + 16) == std::vector<double>(16, 0.0));
    CHECK(std::vector<double>(f.begin() + 16, f.end()) == std::vector<double>(4, 0.0));
  }
  SUBCASE("sidecar plus signature") {
    corpus::EmbeddingTable table(8);
    table.insert("CVE-2020-0001", std::vector<double>(8, 0.5));
    FeatureConfig config;
    config.source = classifier::FeatureSource::EmbeddingSidecar;
    config.embedding_dim = 8;
    const auto f =
        classifier::assemble_features(record, {"bluetooth"}, &table, &lexicon, config);
    REQUIRE(f.size() == 12);
    CHECK(f[9] == 0.9);
    auto other = record;
    other.id = "CVE-2020-0002";
    try {
      classifier::assemble_features(other, {}, &table, &lexicon, config);
      FAIL("expected a missing-embedding error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("CVE-2020-0002") != std::string::npos);
    }
  }
  SUBCASE("signature disabled leaves only the document part") {
    FeatureConfig config;
    config.bow_dim = 16;
    config.use_signature = false;
    CHECK(classifier::assemble_features(record, {"bluetooth"}, nullptr, &lexicon, config).size() ==
          16);
  }
  SUBCASE("feature source names") {
    CHECK(classifier::feature_source_from("hashed-bow") == classifier::FeatureSource::HashedBow);
    CHECK(classifier::to_string(classifier::FeatureSource::EmbeddingSidecar) ==
          "embedding-sidecar");
    CHECK_THROWS_AS(classifier::feature_source_from("bert"), InputError);
  }
}

TEST_CASE("softmax and zero heads") {
  const auto p = classifier::softmax(std::vector<double>{1.0, 2.0, 3.0});
  CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  const auto shifted = classifier::softmax(std::vector<double>{101.0, 102.0, 103.0});
  for (std::size_t i = 0; i < 3; ++i) CHECK(shifted[i] == doctest::Approx(p[i]).epsilon(1e-12));
  const auto big = classifier::softmax(std::vector<double>{1000.0, 0.0});
  CHECK(big[0] == 1.0);
  CHECK(std::isfinite(big[1]));

  const auto head = LinearHead::zeros(task_of(4), {}, Output::Softmax, 3);
  const auto pred = classifier::predict(head, std::vector<double>{0.3, -1.0, 2.0});
  for (double q : pred.probabilities) CHECK(q == doctest::Approx(0.25));
  CHECK(pred.best == 0);
  CHECK_THROWS_AS(classifier::predict(head, std::vector<double>{1.0}), DimensionError);
}

TEST_CASE("cross-entropy gradient matches finite differences") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    auto head = LinearHead::zeros(task_of(3), {}, Output::Softmax, 4);
    testing::randomize(head, rng);
    const auto samples = random_samples(rng, 6, 4, 3);
    classifier::Gradient grad;
    grad.reset(head);
    classifier::softmax_cross_entropy(head, samples, &grad);
    const double err = testing::max_gradient_error(head, grad, [&](const LinearHead& h) {
      return classifier::softmax_cross_entropy(h, samples, nullptr);
    });
    CHECK(err < 1e-4);
  }
}

TEST_CASE("separable data is fit exactly") {
  const auto data = separable();
  TrainConfig config;
  config.epochs = 50;
  config.full_batch = true;
  config.learning_rate = 0.1;
  const auto result = classifier::train_head(data, task_of(2), {}, config);
  CHECK(result.epoch_loss.size() == 50);
  CHECK(result.epoch_loss.back() < result.epoch_loss.front());
  for (const auto& s : data) CHECK(classifier::predict(result.head, s.x).best == s.label);
}

TEST_CASE("training is deterministic for a seed") {
  std::mt19937_64 rng(2);
  const auto data = random_samples(rng, 50, 5, 3);
  TrainConfig config;
  config.seed = 9;
  const auto a = classifier::train_head(data, task_of(3), {}, config);
  const auto b = classifier::train_head(data, task_of(3), {}, config);
  CHECK(a.head == b.head);
  CHECK(a.epoch_loss == b.epoch_loss);
  config.seed = 10;
  CHECK_FALSE(classifier::train_head(data, task_of(3), {}, config).head == a.head);
}

TEST_CASE("training input checks") {
  TrainConfig config;
  CHECK_THROWS_AS(classifier::train_head({}, task_of(2), {}, config), InputError);
  const std::vector<Sample> bad = {{{1.0}, 2}};
  CHECK_THROWS_AS(classifier::train_head(bad, task_of(2), {}, config), InputError);
  config.epochs = 0;
  CHECK_THROWS_AS(config.validate(), InputError);
  config = {};
  config.batch_size = 0;
  CHECK_THROWS_AS(config.validate(), InputError);
  config = {};
  config.learning_rate = 0.0;
  CHECK_THROWS_AS(config.validate(), InputError);
  CHECK(classifier::kEncoderLearningRate == 1e-5);
}

TEST_CASE("plain gradient descent never increases the loss") {
  std::mt19937_64 rng(8);
  const auto data = random_samples(rng, 40, 6, 4);
  TrainConfig config;
  config.optimizer = classifier::Optimizer::GradientDescent;
  config.full_batch = true;
  config.epochs = 100;
  config.learning_rate = 0.05;
  const auto result = classifier::train_head(data, task_of(4), {}, config);
  for (std::size_t i = 1; i < result.epoch_loss.size(); ++i) {
    REQUIRE(result.epoch_loss[i] <= result.epoch_loss[i - 1] + 1e-12);
  }
}

TEST_CASE("zero suffix weights make the signature part inert") {
  std::mt19937_64 rng(4);
  auto full = LinearHead::zeros(task_of(3), {}, Output::Softmax, 6);
  testing::randomize(full, rng);
  auto bare = LinearHead::zeros(task_of(3), {}, Output::Softmax, 4);
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t j = 0; j < 4; ++j) bare.weights[c * 4 + j] = full.weights[c * 6 + j];
    full.weights[c * 6 + 4] = 0.0;
    full.weights[c * 6 + 5] = 0.0;
  }
  bare.bias = full.bias;
  const std::vector<double> doc = {0.1, -0.4, 0.7, 0.2};
  auto with_sig = doc;
  with_sig.insert(with_sig.end(), {0.0, 0.0});
  CHECK(classifier::predict(full, with_sig).probabilities ==
        classifier::predict(bare, doc).probabilities);
}

TEST_CASE("head serialization round trip") {
  std::mt19937_64 rng(6);
  FeatureConfig features;
  features.bow_dim = 8;
  auto head = LinearHead::zeros(task_of(3), features, Output::Sigmoid, 12);
  head.task.minority = {false, true, true};
  testing::randomize(head, rng);
  const auto text = classifier::save_head(head, {{"config_hash", "0123"}});
  const auto loaded = classifier::load_head(text);
  CHECK(loaded == head);
  CHECK(classifier::save_head(loaded, {{"config_hash", "0123"}}) == text);
  CHECK_THROWS_AS(classifier::load_head("not json\n"), InputError);
}

TEST_CASE("eight CVSS heads from one dataset") {
  corpus::Dataset train;
  const char* vectors[] = {"AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H",
                           "AV:A/AC:H/PR:L/UI:R/S:C/C:L/I:L/A:N",
                           "AV:L/AC:L/PR:H/UI:N/S:U/C:N/I:H/A:L",
                           "AV:P/AC:L/PR:N/UI:R/S:U/C:H/I:N/A:N"};
  const char* texts[] = {"remote network attackers execute code",
                         "bluetooth pairing adjacent attackers",
                         "local users gain privileges",
                         "physical access usb dongle"};
  for (int i = 0; i < 40; ++i) {
    train.add(cve("CVE-2020-" + std::to_string(10000 + i), texts[i % 4], vectors[i % 4]), "t");
  }
  classifier::PipelineOptions options;
  options.features.bow_dim = 64;
  options.train.epochs = 30;
  options.train.learning_rate = 0.05;
  const auto model = classifier::train_all_cvss(train, options);
  REQUIRE(model.metrics.size() == 8);
  for (std::size_t i = 0; i < 8; ++i) CHECK(model.metrics[i].metric == cvss::kMetrics[i]);

  const auto again = classifier::train_all_cvss(train, options);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(again.metrics[i].model.head == model.metrics[i].model.head);
    CHECK(again.metrics[i].model.lexicon == model.metrics[i].model.lexicon);
  }
  options.parallel = false;
  const auto serial = classifier::train_all_cvss(train, options);
  for (std::size_t i = 0; i < 8; ++i) CHECK(serial.metrics[i].model.head == model.metrics[i].model.head);

  const auto tokens = textprep::clean_and_tokenize(texts[0]);
  const auto p = classifier::predict_cvss(model, train.records[0], tokens);
  REQUIRE(p.vector);
  CHECK(cvss::format_vector(*p.vector) == "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H");
  CHECK(p.severity->tenths == 98);
}

TEST_CASE("records without a vector are skipped") {
  corpus::Dataset train;
  corpus::CveRecord r;
  r.id = "CVE-2020-0001";
  r.description = "no vector here";
  train.add(r, "t");
  classifier::PipelineOptions options;
  CHECK(classifier::train_all_cvss(train, options).metrics.empty());
  options.skip_unlabeled = false;
  CHECK_THROWS_AS(classifier::train_all_cvss(train, options), InputError);
}
