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

// cvetriage: ingest, train, predict and evaluate from the command line.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cvetriage/classifier.hpp"
#include "cvetriage/corpus.hpp"
#include "cvetriage/cvss.hpp"
#include "cvetriage/cwe_hier.hpp"
#include "cvetriage/error.hpp"
#include "cvetriage/eval.hpp"
#include "cvetriage/run_config.hpp"
#include "cvetriage/signature.hpp"
#include "cvetriage/textprep.hpp"
#include "cvetriage/vt.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace cvetriage::cli {
namespace {

constexpr const char* kOutputDirEnv = "CVETRIAGE_OUTPUT_DIR";

// --- files ------------------------------------------------------------------

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  if (!out) throw InputError("cannot write " + path.string());
}

std::string pretty(const json& value) { return value.dump(2) + "\n"; }

// Prefixes errors raised while handling `path` with the path.
template <typename Fn>
auto in_context(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const InvariantError& e) {
    throw InvariantError(path + ": " + e.what());
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

json header_of(const std::string& content) {
  const auto line = content.substr(0, content.find('\n'));
  return json::parse(line, nullptr, false);
}

// JSON documents carry config_hash at the top; JSONL artifacts in the meta of
// their header line.
std::string hash_of_artifact(const std::string& path) {
  const auto content = read_file(path);
  auto header = json::parse(content, nullptr, false);
  if (!header.is_object()) header = header_of(content);
  if (header.is_object() && header.contains("meta") && header["meta"].contains("config_hash")) {
    return header["meta"]["config_hash"].get<std::string>();
  }
  if (header.is_object() && header.contains("config_hash")) {
    return header["config_hash"].get<std::string>();
  }
  return {};
}

// --- run context ------------------------------------------------------------

struct Run {
  RunConfig config;
  std::string hash;
  std::optional<corpus::EmbeddingTable> embeddings;

  fs::path out() const { return config.output_dir; }
  fs::path models() const { return config.models_path(); }
  json meta() const { return {{"config_hash", hash}}; }

  const corpus::EmbeddingTable* table() const {
    return embeddings ? &*embeddings : nullptr;
  }

  classifier::PipelineOptions options() const {
    auto options = config.pipeline_options();
    if (embeddings) options.features.embedding_dim = embeddings->dim();
    return options;
  }

  corpus::Dataset load(const std::string& path) const {
    return in_context(path, [&] { return corpus::ingest_jsonl(read_file(path)); });
  }

  void write_config() const {
    json doc = to_json(config);
    doc["config_hash"] = hash;
    write_file(out() / "run_config.json", pretty(doc));
  }
};

Run make_run(RunConfig config) {
  config.validate();
  Run run{config, config_hash(config), std::nullopt};
  if (classifier::feature_source_from(config.feature_source) ==
      classifier::FeatureSource::EmbeddingSidecar) {
    run.embeddings = in_context(config.embeddings, [&] {
      return corpus::load_embeddings(read_file(config.embeddings));
    });
  }
  return run;
}

std::vector<textprep::TokenList> tokenize(const corpus::Dataset& data) {
  std::vector<textprep::TokenList> tokens;
  tokens.reserve(data.size());
  const textprep::CleanConfig clean;
  for (const auto& r : data.records) {
    tokens.push_back(textprep::clean_and_tokenize(r.description, clean));
  }
  return tokens;
}

std::vector<corpus::LabelTask> lexicon_tasks() {
  std::vector<corpus::LabelTask> tasks;
  for (auto m : cvss::kMetrics) tasks.push_back(corpus::cvss_task(m));
  tasks.push_back(corpus::vt_task());
  return tasks;
}

// --- ingest / stats -----------------------------------------------------------

int cmd_ingest(const Run& run) {
  const auto& path = run.config.dataset;
  if (path.empty()) throw InputError("ingest needs a dataset path");
  const auto content = read_file(path);

  json report;
  corpus::Dataset data;
  if (fs::path(path).extension() == ".jsonl") {
    data = in_context(path, [&] { return corpus::ingest_jsonl(content); });
    report["format"] = "jsonl";
  } else {
    auto result = in_context(path, [&] { return corpus::ingest_nvd_feed(content); });
    data = std::move(result.dataset);
    report["format"] = "nvd";
    report["rejected"] = result.rejected;
    report["warnings"] = result.warnings;
    for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
  }

  vt::LabelStats stats;
  auto labeled = vt::label_dataset_with_vt(data, &stats);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.records[i].vt_id) labeled.records[i].vt_id = data.records[i].vt_id;
  }
  const auto parts = corpus::split(labeled, run.config.train_fraction, run.config.seed);

  write_file(run.out() / "dataset.jsonl", corpus::to_jsonl(labeled));
  write_file(run.out() / "train.jsonl", corpus::to_jsonl(parts.train));
  write_file(run.out() / "test.jsonl", corpus::to_jsonl(parts.test));

  report["config_hash"] = run.hash;
  report["records"] = labeled.size();
  report["train"] = parts.train.size();
  report["test"] = parts.test.size();
  report["vt_labels"] = {{"labeled", stats.labeled},
                         {"multi_type", stats.multi_type},
                         {"unmapped", stats.unmapped}};
  write_file(run.out() / "ingest.json", pretty(report));
  std::cout << "ingested " << labeled.size() << " records (" << parts.train.size()
            << " train, " << parts.test.size() << " test)\n";
  return 0;
}

int cmd_stats(const Run& run) {
  const auto train = run.load(run.config.train_path());
  json report{{"config_hash", run.hash}, {"records", train.size()}};
  json tasks = json::object();
  for (const auto& task : lexicon_tasks()) {
    const auto dist = corpus::class_distribution(train, task);
    json entry = dist.to_json();
    const auto nonzero = std::count_if(dist.counts.begin(), dist.counts.end(),
                                       [](auto c) { return c > 0; });
    if (nonzero >= 2) {
      const auto minority =
          signature::identify_minority_classes(dist, run.config.minority_ratio);
      json flagged = json::array();
      for (std::size_t c = 0; c < minority.size(); ++c) {
        if (minority[c]) flagged.push_back(dist.classes[c]);
      }
      entry["minority"] = flagged;
    }
    tasks[task.name] = entry;
  }
  report["tasks"] = tasks;
  std::map<std::string, std::size_t> cwe_counts;
  for (const auto& r : train.records) {
    for (const auto& c : r.cwe_ids) ++cwe_counts[c];
  }
  report["cwe_counts"] = cwe_counts;
  write_file(run.out() / "stats.json", pretty(report));
  std::cout << pretty(report);
  return 0;
}

// --- lexicons -----------------------------------------------------------------

fs::path lexicon_dir(const Run& run) { return run.models() / "lexicons"; }

int cmd_build_lexicon(const Run& run) {
  const auto train = run.load(run.config.train_path());
  const auto tokens = tokenize(train);
  const auto params = run.options().lexicon;
  for (const auto& task_view : lexicon_tasks()) {
    std::vector<signature::LabeledDoc> docs;
    corpus::Dataset labeled;
    for (std::size_t i = 0; i < train.size(); ++i) {
      if (const auto label = task_view.label_of(train.records[i])) {
        docs.push_back({tokens[i], *label});
        labeled.add(train.records[i], train.provenance[i]);
      }
    }
    signature::TaskSpec task{task_view.name, task_view.classes,
                             std::vector<bool>(task_view.classes.size(), false)};
    signature::SignatureLexicon lexicon;
    lexicon.task = task;
    const auto dist = corpus::class_distribution(labeled, task_view);
    const auto nonzero = std::count_if(dist.counts.begin(), dist.counts.end(),
                                       [](auto c) { return c > 0; });
    if (nonzero >= 2) {
      task.minority = signature::identify_minority_classes(dist, params.minority_ratio);
      lexicon = signature::build_lexicon(docs, task, params);
    }
    write_file(lexicon_dir(run) / (task.name + ".jsonl"),
               signature::save_lexicon(lexicon, run.meta()));
    std::cout << task.name << ": " << lexicon.entries.size() << " signature words\n";
  }
  return 0;
}

// Lexicons from build-lexicon, refused when built under another config.
std::map<std::string, signature::SignatureLexicon, std::less<>> prebuilt_lexicons(
    const Run& run) {
  std::map<std::string, signature::SignatureLexicon, std::less<>> out;
  const auto dir = lexicon_dir(run);
  if (!fs::exists(dir)) return out;
  for (const auto& task : lexicon_tasks()) {
    const auto path = (dir / (task.name + ".jsonl")).string();
    if (!fs::exists(path)) continue;
    const auto content = read_file(path);
    const auto hash = hash_of_artifact(path);
    if (hash != run.hash) {
      throw InputError(path + ": built with config " + hash + ", current config is " +
                       run.hash + "; rerun build-lexicon");
    }
    out.emplace(task.name, in_context(path, [&] { return signature::load_lexicon(content); }));
  }
  return out;
}

// --- single-label bundles ---------------------------------------------------

void save_task_model(const Run& run, const fs::path& dir, const std::string& name,
                     const classifier::TaskModel& model) {
  write_file(dir / (name + ".head.jsonl"), classifier::save_head(model.head, run.meta()));
  write_file(dir / (name + ".lexicon.jsonl"),
             signature::save_lexicon(model.lexicon, run.meta()));
}

json train_log_entry(const classifier::TaskModel& model) {
  return {{"epoch_loss", model.epoch_loss},
          {"train_size", model.train_size},
          {"distribution", model.distribution.to_json()}};
}

std::optional<classifier::TaskModel> load_task_model(const fs::path& dir,
                                                     const std::string& name) {
  const auto head_path = (dir / (name + ".head.jsonl")).string();
  const auto lex_path = (dir / (name + ".lexicon.jsonl")).string();
  if (!fs::exists(head_path)) return std::nullopt;
  classifier::TaskModel model;
  model.head = in_context(head_path, [&] { return classifier::load_head(read_file(head_path)); });
  model.lexicon =
      in_context(lex_path, [&] { return signature::load_lexicon(read_file(lex_path)); });
  return model;
}

fs::path cvss_dir(const Run& run) { return run.models() / "cvss"; }
fs::path vt_dir(const Run& run) { return run.models() / "vt"; }
fs::path cwe_dir(const Run& run) { return run.models() / "cwe"; }

int cmd_train_cvss(const Run& run) {
  const auto train = run.load(run.config.train_path());
  auto options = run.options();
  options.prebuilt_lexicons = prebuilt_lexicons(run);
  const auto model = classifier::train_all_cvss(train, options, run.table());
  json log{{"config_hash", run.hash}, {"metrics", json::object()}};
  for (const auto& m : model.metrics) {
    const std::string key(cvss::metric_key(m.metric));
    save_task_model(run, cvss_dir(run), key, m.model);
    log["metrics"][key] = train_log_entry(m.model);
    std::cout << key << ": trained on " << m.model.train_size << " samples, final loss "
              << m.model.epoch_loss.back() << '\n';
  }
  write_file(cvss_dir(run) / "train_log.json", pretty(log));
  return 0;
}

classifier::CvssModel load_cvss(const Run& run) {
  classifier::CvssModel model;
  for (auto m : cvss::kMetrics) {
    if (auto task = load_task_model(cvss_dir(run), std::string(cvss::metric_key(m)))) {
      model.metrics.push_back({m, std::move(*task)});
    }
  }
  if (model.metrics.empty()) {
    throw InputError("no CVSS model under " + cvss_dir(run).string() + "; run train-cvss");
  }
  return model;
}

json cvss_prediction_json(const std::string& id, const classifier::CvssModel& model,
                          const classifier::CvssPrediction& p) {
  json metrics = json::object();
  for (const auto& m : model.metrics) {
    const auto& pred = *p.per_metric[static_cast<std::size_t>(m.metric)];
    metrics[std::string(cvss::metric_key(m.metric))] = {
        {"value", m.model.head.task.classes[pred.best]},
        {"probability", pred.probabilities[pred.best]}};
  }
  json line{{"id", id}, {"metrics", metrics}};
  if (p.vector) {
    line["vector"] = cvss::format_vector(*p.vector);
    line["base_score"] = p.severity->score();
    line["severity"] = std::string(cvss::band_name(p.severity->band));
  }
  return line;
}

int cmd_predict_cvss(const Run& run) {
  const auto model = load_cvss(run);
  const auto data = run.load(run.config.test_path());
  const auto tokens = tokenize(data);
  std::string out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto p = classifier::predict_cvss(model, data.records[i], tokens[i], run.table());
    out += cvss_prediction_json(data.records[i].id, model, p).dump() + "\n";
  }
  write_file(run.out() / "predictions_cvss.jsonl", out);
  std::cout << out;
  return 0;
}

int cmd_score(const std::string& vector) {
  const auto severity = cvss::base_score(cvss::parse_vector(vector));
  std::cout << severity.score_text() << ' ' << cvss::band_name(severity.band) << '\n';
  return 0;
}

int cmd_train_vt(const Run& run) {
  const auto train = run.load(run.config.train_path());
  const auto tokens = tokenize(train);
  auto options = run.options();
  options.prebuilt_lexicons = prebuilt_lexicons(run);
  const auto model = classifier::train_task_model(train, tokens, corpus::vt_task(), options,
                                                  run.table(), run.config.seed);
  if (!model) throw InputError("no training record has a vulnerability type");
  save_task_model(run, vt_dir(run), "VT", *model);
  write_file(vt_dir(run) / "train_log.json",
             pretty({{"config_hash", run.hash}, {"VT", train_log_entry(*model)}}));
  std::cout << "VT: trained on " << model->train_size << " samples, final loss "
            << model->epoch_loss.back() << '\n';
  return 0;
}

classifier::TaskModel load_vt(const Run& run) {
  auto model = load_task_model(vt_dir(run), "VT");
  if (!model) throw InputError("no VT model under " + vt_dir(run).string() + "; run train-vt");
  return std::move(*model);
}

std::vector<std::pair<int, double>> rank_vt(const Run& run, const classifier::TaskModel& model,
                                            const corpus::CveRecord& record,
                                            const textprep::TokenList& tokens,
                                            std::size_t k) {
  const auto features = classifier::assemble_features(record, tokens, run.table(),
                                                      &model.lexicon, model.head.features);
  return vt::predict_vt(model.head, features, k);
}

int cmd_predict_vt(const Run& run) {
  const auto model = load_vt(run);
  const auto data = run.load(run.config.test_path());
  const auto tokens = tokenize(data);
  const auto& types = vt::builtin_vt_map();
  std::string out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    json top = json::array();
    for (const auto& [id, prob] : rank_vt(run, model, data.records[i], tokens[i],
                                          run.config.top_k)) {
      top.push_back({{"vt", id}, {"name", types[id - 1].name}, {"probability", prob}});
    }
    out += json{{"id", data.records[i].id}, {"top", top}}.dump() + "\n";
  }
  write_file(run.out() / "predictions_vt.jsonl", out);
  std::cout << out;
  return 0;
}

// --- CWE hierarchy ----------------------------------------------------------

cwe::CweTree load_tree(const Run& run) {
  const auto& path = run.config.tree;
  if (path.empty()) throw InputError("CWE commands need a tree path");
  return in_context(path, [&] { return cwe::CweTree::from_csv(read_file(path)); });
}

classifier::FeatureConfig cwe_features(const Run& run) {
  auto features = run.options().features;
  features.use_signature = false;
  return features;
}

std::vector<int> cwe_numbers(const corpus::CveRecord& record) {
  std::vector<int> out;
  for (const auto& c : record.cwe_ids) {
    if (const auto n = corpus::parse_cwe_id(c)) out.push_back(*n);
  }
  return out;
}

int cmd_train_cwe(const Run& run) {
  const auto tree = load_tree(run);
  const auto train = run.load(run.config.train_path());
  const auto tokens = tokenize(train);
  const auto features = cwe_features(run);
  std::vector<cwe::HierSample> samples;
  for (std::size_t i = 0; i < train.size(); ++i) {
    auto cwes = cwe_numbers(train.records[i]);
    if (tree.closure(cwes).empty()) continue;
    samples.push_back({classifier::assemble_features(train.records[i], tokens[i], run.table(),
                                                     nullptr, features),
                       std::move(cwes)});
  }
  auto config = run.options().train;
  const auto model = cwe::train_hierarchy(samples, tree, features, config);
  for (std::size_t l = 0; l < model.heads.size(); ++l) {
    write_file(cwe_dir(run) / ("L" + std::to_string(l + 1) + ".head.jsonl"),
               classifier::save_head(model.heads[l], run.meta()));
  }
  write_file(cwe_dir(run) / "train_log.json",
             pretty({{"config_hash", run.hash},
                     {"samples", samples.size()},
                     {"levels", model.heads.size()}}));
  std::cout << "CWE: " << model.heads.size() << " level heads on " << samples.size()
            << " samples\n";
  return 0;
}

std::vector<cwe::LevelHead> load_cwe_heads(const Run& run, const cwe::CweTree& tree) {
  std::vector<cwe::LevelHead> heads;
  for (int l = 1; l <= tree.depth(); ++l) {
    const auto path = (cwe_dir(run) / ("L" + std::to_string(l) + ".head.jsonl")).string();
    if (!fs::exists(path)) throw InputError("missing " + path + "; run train-cwe");
    heads.push_back(in_context(path, [&] { return classifier::load_head(read_file(path)); }));
  }
  return heads;
}

int cmd_predict_cwe(const Run& run) {
  const auto tree = load_tree(run);
  const auto heads = load_cwe_heads(run, tree);
  const auto data = run.load(run.config.test_path());
  const auto tokens = tokenize(data);
  const auto features = cwe_features(run);
  std::string out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto x = classifier::assemble_features(data.records[i], tokens[i], run.table(),
                                                 nullptr, features);
    const auto p =
        cwe::predict_hierarchical(x, heads, tree, run.config.tau, run.config.top_k);
    out += json{{"id", data.records[i].id}, {"prediction", p.to_json()}}.dump() + "\n";
  }
  write_file(run.out() / "predictions_cwe.jsonl", out);
  std::cout << out;
  return 0;
}

// --- evaluate ---------------------------------------------------------------

json score_single_label(const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                        const std::vector<std::string>& classes, const fs::path& csv) {
  const auto matrix = eval::confusion(pairs, classes);
  write_file(csv, matrix.to_csv());
  if (pairs.empty()) return {{"evaluated", 0}};
  auto report = eval::to_json(eval::micro_macro_f1(matrix), classes);
  report["evaluated"] = pairs.size();
  return report;
}

json evaluate_cvss(const Run& run, const corpus::Dataset& test,
                   const std::vector<textprep::TokenList>& tokens) {
  const auto model = load_cvss(run);
  std::map<cvss::Metric, std::vector<std::pair<std::size_t, std::size_t>>> pairs;
  std::size_t vectors = 0;
  std::size_t exact = 0;
  std::size_t band_hits = 0;
  double abs_error = 0.0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& record = test.records[i];
    const auto p = classifier::predict_cvss(model, record, tokens[i], run.table());
    if (!record.cvss_vector) continue;
    for (const auto& m : model.metrics) {
      const auto truth = record.cvss_vector->class_of(m.metric);
      pairs[m.metric].emplace_back(truth, p.per_metric[static_cast<std::size_t>(m.metric)]->best);
    }
    if (p.vector) {
      const auto truth = cvss::base_score(*record.cvss_vector);
      ++vectors;
      if (*p.vector == *record.cvss_vector) ++exact;
      if (p.severity->band == truth.band) ++band_hits;
      abs_error += std::abs(p.severity->score() - truth.score());
    }
  }
  json report{{"metrics", json::object()}};
  for (const auto& m : model.metrics) {
    const std::string key(cvss::metric_key(m.metric));
    report["metrics"][key] = score_single_label(
        pairs[m.metric], m.model.head.task.classes,
        run.out() / "report" / ("cvss_" + key + "_confusion.csv"));
  }
  if (vectors > 0) {
    const auto n = static_cast<double>(vectors);
    report["vector"] = {{"evaluated", vectors},
                        {"exact_match", static_cast<double>(exact) / n},
                        {"band_accuracy", static_cast<double>(band_hits) / n},
                        {"mean_abs_score_error", abs_error / n}};
  }
  return report;
}

json topk_table(std::span<const eval::RankedSample> samples, std::size_t top_k) {
  json table = json::array();
  for (std::size_t k = 1; k <= top_k; ++k) table.push_back(eval::to_json(eval::topk_metrics(samples, k)));
  return table;
}

json evaluate_vt(const Run& run, const corpus::Dataset& test,
                 const std::vector<textprep::TokenList>& tokens) {
  const auto model = load_vt(run);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<eval::RankedSample> ranked;
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& record = test.records[i];
    if (!record.vt_id) continue;
    const auto top = rank_vt(run, model, record, tokens[i], vt::kTypeCount);
    eval::RankedSample sample{{std::to_string(*record.vt_id)}, {}};
    for (const auto& [id, prob] : top) sample.ranked.push_back(std::to_string(id));
    ranked.push_back(std::move(sample));
    pairs.emplace_back(static_cast<std::size_t>(*record.vt_id - 1),
                       static_cast<std::size_t>(top.front().first - 1));
  }
  auto report = score_single_label(pairs, model.head.task.classes,
                                   run.out() / "report" / "vt_confusion.csv");
  if (!ranked.empty()) report["topk"] = topk_table(ranked, run.config.top_k);
  return report;
}

json evaluate_cwe(const Run& run, const corpus::Dataset& test,
                  const std::vector<textprep::TokenList>& tokens) {
  const auto tree = load_tree(run);
  const auto heads = load_cwe_heads(run, tree);
  const auto features = cwe_features(run);
  std::vector<std::vector<eval::RankedSample>> per_level(tree.depth());
  std::vector<std::size_t> correct(tree.depth(), 0);
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto truth = tree.closure(cwe_numbers(test.records[i]));
    if (truth.empty()) continue;
    const auto x = classifier::assemble_features(test.records[i], tokens[i], run.table(),
                                                 nullptr, features);
    const auto p = cwe::predict_hierarchical(x, heads, tree, run.config.tau, run.config.top_k);
    for (int l = 1; l <= tree.depth(); ++l) {
      eval::RankedSample sample;
      std::set<int> truth_at;
      for (int c : truth) {
        if (tree.level_of(c) == l) {
          truth_at.insert(c);
          sample.truth.insert("CWE-" + std::to_string(c));
        }
      }
      if (static_cast<std::size_t>(l) <= p.levels.size()) {
        for (const auto& [c, score] : p.levels[l - 1].accepted) {
          sample.ranked.push_back("CWE-" + std::to_string(c));
        }
      }
      if (eval::multilabel_correct(p.accepted_at(l), truth_at)) ++correct[l - 1];
      per_level[l - 1].push_back(std::move(sample));
    }
  }
  json levels = json::array();
  for (int l = 1; l <= tree.depth(); ++l) {
    const auto& samples = per_level[l - 1];
    json entry{{"level", l}, {"evaluated", samples.size()}};
    if (!samples.empty()) {
      entry["multilabel_accuracy"] =
          static_cast<double>(correct[l - 1]) / static_cast<double>(samples.size());
      entry["topk"] = topk_table(samples, run.config.top_k);
    }
    levels.push_back(entry);
  }
  return {{"levels", levels}};
}

int cmd_evaluate(const Run& run, bool force) {
  std::vector<std::string> artifacts;
  for (const auto& dir : {cvss_dir(run), vt_dir(run), cwe_dir(run)}) {
    if (!fs::exists(dir)) continue;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.path().extension() == ".jsonl") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) artifacts.push_back(f.string());
  }
  if (artifacts.empty()) throw InputError("no trained models under " + run.models().string());
  const auto manifest = fs::path(run.config.test_path()).parent_path() / "ingest.json";
  if (fs::exists(manifest)) artifacts.push_back(manifest.string());

  for (const auto& path : artifacts) {
    const auto hash = hash_of_artifact(path);
    if (hash == run.hash) continue;
    const auto message = path + " was produced with config " + hash +
                         ", current config is " + run.hash;
    if (!force) throw InputError(message + " (use --force to evaluate anyway)");
    std::cerr << "warning: " << message << '\n';
  }

  const auto test = run.load(run.config.test_path());
  const auto tokens = tokenize(test);
  json report{{"config_hash", run.hash}, {"test_records", test.size()}};
  if (fs::exists(cvss_dir(run))) report["cvss"] = evaluate_cvss(run, test, tokens);
  if (fs::exists(vt_dir(run))) report["vt"] = evaluate_vt(run, test, tokens);
  if (fs::exists(cwe_dir(run)) && !run.config.tree.empty()) {
    report["cwe"] = evaluate_cwe(run, test, tokens);
  }
  write_file(run.out() / "report.json", pretty(report));
  std::cout << pretty(report);
  return 0;
}

// --- configuration ----------------------------------------------------------

// Converts a flag string to the JSON type of the key's default value.
json flag_value(const std::string& key, const std::string& text, const json& like) {
  auto bad = [&] { return SchemaError("flag --" + key + ": cannot read '" + text + "'"); };
  if (like.is_boolean()) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw bad();
  }
  if (like.is_string()) return text;
  if (text.empty()) throw bad();
  std::size_t used = 0;
  try {
    if (like.is_number_unsigned()) {
      if (text.front() == '-') throw bad();
      const auto v = std::stoull(text, &used);
      if (used != text.size()) throw bad();
      return v;
    }
    const auto v = std::stod(text, &used);
    if (used != text.size()) throw bad();
    return v;
  } catch (const std::logic_error&) {
    throw bad();
  }
}

}  // namespace

int run_main(int argc, char** argv) {
  CLI::App app{"Vulnerability triage: CVSS, CWE and vulnerability-type prediction"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "RunConfig JSON file");

  const json defaults = to_json(RunConfig{});
  std::map<std::string, std::string> flags;
  for (const auto& [key, value] : defaults.items()) {
    std::string names = "--" + key;
    if (key.find('_') != std::string::npos) {
      std::string dashed = key;
      std::replace(dashed.begin(), dashed.end(), '_', '-');
      names += ",--" + dashed;
    }
    app.add_option(names, flags[key], "config key " + key);
  }

  std::string vector;
  bool force = false;
  auto* ingest = app.add_subcommand("ingest", "Normalize a feed into dataset/train/test JSONL");
  auto* stats = app.add_subcommand("stats", "Class distributions of the training split");
  auto* build = app.add_subcommand("build-lexicon", "Signature lexicons per task");
  auto* train_cvss = app.add_subcommand("train-cvss", "Train the eight CVSS metric heads");
  auto* predict_cvss = app.add_subcommand("predict-cvss", "Predict CVSS vectors and scores");
  auto* score = app.add_subcommand("score", "Base score of a CVSS v3.1 vector");
  score->add_option("vector", vector, "e.g. CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")
      ->required();
  auto* train_cwe = app.add_subcommand("train-cwe", "Train the per-level CWE heads");
  auto* predict_cwe = app.add_subcommand("predict-cwe", "Hierarchical CWE prediction");
  auto* train_vt = app.add_subcommand("train-vt", "Train the vulnerability-type head");
  auto* predict_vt = app.add_subcommand("predict-vt", "Top-K vulnerability types");
  auto* evaluate = app.add_subcommand("evaluate", "Metrics report on the test split");
  evaluate->add_flag("--force", force, "Evaluate despite config hash mismatches");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (score->parsed()) return cli::cmd_score(vector);

    json doc = json::object();
    if (!config_path.empty()) {
      doc = cli::in_context(config_path, [&] {
        const auto text = cli::read_file(config_path);
        try {
          return json::parse(text);
        } catch (const json::parse_error& e) {
          throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
        }
      });
      if (!doc.is_object()) throw SchemaError(config_path + ": config must be a JSON object");
    }
    if (const char* dir = std::getenv(cli::kOutputDirEnv); dir && *dir) {
      doc["output_dir"] = dir;
    }
    for (const auto& [key, text] : flags) {
      if (app.count("--" + key) > 0) doc[key] = cli::flag_value(key, text, defaults[key]);
    }
    const auto config = cli::in_context(config_path.empty() ? "config" : config_path,
                                        [&] { return run_config_from_json(doc); });
    const auto run = cli::make_run(config);
    const auto dispatch = [&]() -> int {
      if (ingest->parsed()) return cli::cmd_ingest(run);
      if (stats->parsed()) return cli::cmd_stats(run);
      if (build->parsed()) return cli::cmd_build_lexicon(run);
      if (train_cvss->parsed()) return cli::cmd_train_cvss(run);
      if (predict_cvss->parsed()) return cli::cmd_predict_cvss(run);
      if (train_cwe->parsed()) return cli::cmd_train_cwe(run);
      if (predict_cwe->parsed()) return cli::cmd_predict_cwe(run);
      if (train_vt->parsed()) return cli::cmd_train_vt(run);
      if (predict_vt->parsed()) return cli::cmd_predict_vt(run);
      if (evaluate->parsed()) return cli::cmd_evaluate(run, force);
      throw InputError("unknown command");
    };
    const int code = dispatch();
    run.write_config();
    return code;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace cvetriage::cli

int main(int argc, char** argv) { return cvetriage::cli::run_main(argc, argv); }
