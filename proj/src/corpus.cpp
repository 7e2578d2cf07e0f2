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

#include "cvetriage/corpus.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <set>

#include "cvetriage/error.hpp"
#include "cvetriage/random.hpp"

namespace cvetriage::corpus {

using nlohmann::json;

namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
           return c >= '0' && c <= '9';
         });
}

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  });
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

// Splits on '\n'; a trailing newline does not produce an extra line.
std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  while (!content.empty()) {
    const auto newline = content.find('\n');
    lines.push_back(content.substr(0, newline));
    if (newline == std::string_view::npos) break;
    content.remove_prefix(newline + 1);
  }
  return lines;
}

const json* find_key(const json& object, const char* key) {
  if (!object.is_object()) return nullptr;
  const auto it = object.find(key);
  return it == object.end() ? nullptr : &*it;
}

}  // namespace

bool is_valid_cve_id(std::string_view id) {
  if (!id.starts_with("CVE-")) return false;
  id.remove_prefix(4);
  const auto dash = id.find('-');
  if (dash != 4) return false;
  const auto year = id.substr(0, 4);
  const auto serial = id.substr(5);
  return all_digits(year) && all_digits(serial) && serial.size() >= 4;
}

std::optional<int> parse_cwe_id(std::string_view text) {
  if (!text.starts_with("CWE-")) return std::nullopt;
  text.remove_prefix(4);
  if (!all_digits(text) || text.size() > 9) return std::nullopt;
  int value = 0;
  std::from_chars(text.data(), text.data() + text.size(), value);
  return value;
}

void validate_record(const CveRecord& record) {
  if (!is_valid_cve_id(record.id)) {
    throw SchemaError("invalid CVE id '" + record.id + "'");
  }
  if (is_blank(record.description)) {
    throw SchemaError(record.id + ": description is empty");
  }
  std::set<std::string_view> seen;
  for (const auto& cwe : record.cwe_ids) {
    if (!parse_cwe_id(cwe)) {
      throw SchemaError(record.id + ": invalid CWE id '" + cwe + "'");
    }
    if (!seen.insert(cwe).second) {
      throw SchemaError(record.id + ": duplicate CWE id '" + cwe + "'");
    }
  }
  if (record.vt_id && (*record.vt_id < 1 || *record.vt_id > 27)) {
    throw SchemaError(record.id + ": vt_id out of range 1..27");
  }
}

void Dataset::add(CveRecord record, std::string source) {
  records.push_back(std::move(record));
  provenance.push_back(std::move(source));
}

void require_unique_ids(const Dataset& dataset) {
  std::set<std::string_view> seen;
  for (const auto& record : dataset.records) {
    if (!seen.insert(record.id).second) {
      throw DuplicateIdError("duplicate record id '" + record.id + "'");
    }
  }
}

NvdIngestResult ingest_nvd_feed(std::string_view feed) {
  json document;
  try {
    document = json::parse(feed);
  } catch (const json::parse_error& e) {
    throw ParseError("malformed NVD feed at byte " + std::to_string(e.byte) + ": " +
                         e.what(),
                     e.byte);
  }
  const json* items = find_key(document, "CVE_Items");
  if (items == nullptr || !items->is_array()) {
    throw SchemaError("NVD feed has no CVE_Items array");
  }

  NvdIngestResult result;
  for (std::size_t index = 0; index < items->size(); ++index) {
    const json& item = (*items)[index];
    const std::string where = "CVE_Items[" + std::to_string(index) + "]";
    const json* cve = find_key(item, "cve");
    const json* meta = cve ? find_key(*cve, "CVE_data_meta") : nullptr;
    const json* id = meta ? find_key(*meta, "ID") : nullptr;
    if (id == nullptr || !id->is_string()) {
      throw SchemaError(where + ": missing cve.CVE_data_meta.ID");
    }

    CveRecord record;
    record.id = id->get<std::string>();
    if (!is_valid_cve_id(record.id)) {
      throw SchemaError(where + ": invalid CVE id '" + record.id + "'");
    }

    if (const json* desc = find_key(*cve, "description")) {
      if (const json* data = find_key(*desc, "description_data");
          data && data->is_array()) {
        for (const json& entry : *data) {
          const json* lang = find_key(entry, "lang");
          const json* value = find_key(entry, "value");
          if (lang && value && lang->is_string() && value->is_string() &&
              (*lang == "en" || *lang == "eng")) {
            record.description = value->get<std::string>();
            break;
          }
        }
      }
    }
    if (record.description.starts_with("** REJECT **")) {
      ++result.rejected;
      continue;
    }
    if (is_blank(record.description)) {
      result.warnings.push_back(record.id + ": no English description, skipped");
      continue;
    }

    if (const json* problem = find_key(*cve, "problemtype")) {
      if (const json* data = find_key(*problem, "problemtype_data");
          data && data->is_array()) {
        for (const json& block : *data) {
          const json* descriptions = find_key(block, "description");
          if (!descriptions || !descriptions->is_array()) continue;
          for (const json& entry : *descriptions) {
            const json* value = find_key(entry, "value");
            if (!value || !value->is_string()) continue;
            const auto text = value->get<std::string>();
            if (parse_cwe_id(text) &&
                std::find(record.cwe_ids.begin(), record.cwe_ids.end(), text) ==
                    record.cwe_ids.end()) {
              record.cwe_ids.push_back(text);
            }
          }
        }
      }
    }

    const json* impact = find_key(item, "impact");
    const json* v3 = impact ? find_key(*impact, "baseMetricV3") : nullptr;
    const json* cvss_v3 = v3 ? find_key(*v3, "cvssV3") : nullptr;
    const json* vector = cvss_v3 ? find_key(*cvss_v3, "vectorString") : nullptr;
    if (vector && vector->is_string()) {
      try {
        record.cvss_vector = cvss::parse_vector(vector->get<std::string>());
      } catch (const InputError& e) {
        result.warnings.push_back(record.id + ": unparsable CVSS vector (" +
                                  e.what() + ")");
      }
    }

    result.dataset.add(std::move(record), "nvd");
  }
  require_unique_ids(result.dataset);
  return result;
}

Dataset ingest_jsonl(std::string_view content) {
  Dataset dataset;
  std::set<std::string> seen;
  const auto lines = split_lines(content);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const std::string line_no = "line " + std::to_string(n + 1);
    if (is_blank(lines[n])) continue;
    json object;
    try {
      object = json::parse(lines[n]);
    } catch (const json::parse_error& e) {
      throw ParseError(line_no + ": malformed JSON: " + e.what(), n + 1);
    }
    if (!object.is_object()) {
      throw SchemaError(line_no + ": expected a JSON object");
    }
    for (const char* key : {"id", "description"}) {
      const json* value = find_key(object, key);
      if (value == nullptr) {
        throw SchemaError(line_no + ": missing required key '" + key + "'");
      }
      if (!value->is_string()) {
        throw SchemaError(line_no + ": key '" + key + "' must be a string");
      }
    }

    CveRecord record;
    record.id = object["id"].get<std::string>();
    record.description = object["description"].get<std::string>();
    if (const json* vector = find_key(object, "cvss_vector");
        vector && !vector->is_null()) {
      if (!vector->is_string()) {
        throw SchemaError(line_no + ": cvss_vector must be a string");
      }
      try {
        record.cvss_vector = cvss::parse_vector(vector->get<std::string>());
      } catch (const InputError& e) {
        throw InputError(line_no + ": " + e.what());
      }
    }
    if (const json* cwes = find_key(object, "cwe_ids"); cwes && !cwes->is_null()) {
      if (!cwes->is_array()) throw SchemaError(line_no + ": cwe_ids must be an array");
      for (const json& cwe : *cwes) {
        if (!cwe.is_string()) {
          throw SchemaError(line_no + ": cwe_ids entries must be strings");
        }
        record.cwe_ids.push_back(cwe.get<std::string>());
      }
    }
    if (const json* vt = find_key(object, "vt_id"); vt && !vt->is_null()) {
      if (!vt->is_number_integer()) {
        throw SchemaError(line_no + ": vt_id must be an integer");
      }
      record.vt_id = vt->get<int>();
    }
    std::string source = "jsonl";
    if (const json* tag = find_key(object, "source"); tag && tag->is_string()) {
      source = tag->get<std::string>();
    }

    try {
      validate_record(record);
    } catch (const SchemaError& e) {
      throw SchemaError(line_no + ": " + e.what());
    }
    if (!seen.insert(record.id).second) {
      throw DuplicateIdError(line_no + ": duplicate id '" + record.id + "'");
    }
    dataset.add(std::move(record), std::move(source));
  }
  return dataset;
}

json record_to_json(const CveRecord& record, std::string_view source) {
  json object;
  object["id"] = record.id;
  object["description"] = record.description;
  if (record.cvss_vector) object["cvss_vector"] = cvss::format_vector(*record.cvss_vector);
  object["cwe_ids"] = record.cwe_ids;
  if (record.vt_id) object["vt_id"] = *record.vt_id;
  object["source"] = source;
  return object;
}

std::string to_jsonl(const Dataset& dataset) {
  std::string out;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    out += record_to_json(dataset.records[i], dataset.provenance[i]).dump();
    out += '\n';
  }
  return out;
}

Split split(const Dataset& dataset, double train_fraction, std::uint64_t seed) {
  if (dataset.empty()) throw InputError("cannot split an empty dataset");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw InputError("train_fraction must lie in (0, 1)");
  }
  const std::size_t n = dataset.size();
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(n)));

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<std::size_t> train_idx(order.begin(), order.begin() + n_train);
  std::vector<std::size_t> test_idx(order.begin() + n_train, order.end());
  std::sort(train_idx.begin(), train_idx.end());
  std::sort(test_idx.begin(), test_idx.end());

  Split parts;
  for (auto i : train_idx) parts.train.add(dataset.records[i], dataset.provenance[i]);
  for (auto i : test_idx) parts.test.add(dataset.records[i], dataset.provenance[i]);
  return parts;
}

LabelTask cvss_task(cvss::Metric metric) {
  LabelTask task;
  task.name = std::string(cvss::metric_key(metric));
  for (char v : cvss::allowed_values(metric)) task.classes.emplace_back(1, v);
  task.label_of = [metric](const CveRecord& r) -> std::optional<std::size_t> {
    if (!r.cvss_vector) return std::nullopt;
    return r.cvss_vector->class_of(metric);
  };
  return task;
}

LabelTask vt_task() {
  LabelTask task;
  task.name = "VT";
  for (int id = 1; id <= 27; ++id) task.classes.push_back(std::to_string(id));
  task.label_of = [](const CveRecord& r) -> std::optional<std::size_t> {
    if (!r.vt_id) return std::nullopt;
    return static_cast<std::size_t>(*r.vt_id - 1);
  };
  return task;
}

std::size_t ClassDistribution::labeled() const {
  return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

std::size_t ClassDistribution::majority_count() const {
  return counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
}

json ClassDistribution::to_json() const {
  json per_class = json::object();
  for (std::size_t i = 0; i < classes.size(); ++i) per_class[classes[i]] = counts[i];
  return json{{"task", task},
              {"classes", classes},
              {"counts", per_class},
              {"labeled", labeled()},
              {"unlabeled", unlabeled}};
}

ClassDistribution class_distribution(const Dataset& dataset, const LabelTask& task) {
  ClassDistribution dist;
  dist.task = task.name;
  dist.classes = task.classes;
  dist.counts.assign(task.classes.size(), 0);
  for (const auto& record : dataset.records) {
    if (const auto label = task.label_of(record)) {
      ++dist.counts.at(*label);
    } else {
      ++dist.unlabeled;
    }
  }
  return dist;
}

Dataset resample_minority(const Dataset& train, const LabelTask& task,
                          const std::vector<bool>& minority, std::size_t cap,
                          std::uint64_t seed) {
  if (!minority.empty() && minority.size() != task.classes.size()) {
    throw DimensionError("minority flags do not match the " + task.name + " classes");
  }
  std::vector<std::vector<std::size_t>> members(task.classes.size());
  for (std::size_t i = 0; i < train.size(); ++i) {
    const auto label = task.label_of(train.records[i]);
    if (!label) {
      throw SchemaError("record " + train.records[i].id + " has no " + task.name +
                        " label");
    }
    members.at(*label).push_back(i);
  }
  std::size_t majority = 0;
  for (const auto& m : members) majority = std::max(majority, m.size());

  Dataset out = train;
  Rng rng(seed);
  for (std::size_t c = 0; c < members.size(); ++c) {
    const auto& m = members[c];
    if (m.empty() || m.size() >= majority) continue;
    if (!minority.empty() && !minority[c]) continue;
    const std::size_t target = std::min(majority, cap * m.size());
    for (std::size_t k = m.size(); k < target; ++k) {
      const std::size_t pick = m[rng.below(m.size())];
      out.add(train.records[pick], "resample");
    }
  }
  return out;
}

void EmbeddingTable::insert(std::string id, std::vector<double> vector) {
  if (vector.size() != dim_) {
    throw DimensionError("embedding for '" + id + "' has " +
                         std::to_string(vector.size()) + " values, expected " +
                         std::to_string(dim_));
  }
  for (double v : vector) {
    if (!std::isfinite(v)) {
      throw DimensionError("embedding for '" + id + "' has a non-finite value");
    }
  }
  const auto [it, inserted] = entries_.emplace(std::move(id), std::move(vector));
  if (!inserted) throw DuplicateIdError("duplicate embedding id '" + it->first + "'");
}

const std::vector<double>* EmbeddingTable::find(std::string_view id) const {
  const auto it = entries_.find(id);
  return it == entries_.end() ? nullptr : &it->second;
}

EmbeddingTable load_embeddings(std::string_view content) {
  const auto lines = split_lines(content);
  if (lines.empty() || !trim(lines[0]).starts_with("#dim=")) {
    throw SchemaError("line 1: embedding sidecar must start with '#dim=<d>'");
  }
  const auto dim_text = trim(lines[0]).substr(5);
  std::size_t dim = 0;
  const auto [ptr, ec] =
      std::from_chars(dim_text.data(), dim_text.data() + dim_text.size(), dim);
  if (ec != std::errc{} || ptr != dim_text.data() + dim_text.size() || dim == 0) {
    throw SchemaError("line 1: invalid dimension '" + std::string(dim_text) + "'");
  }

  EmbeddingTable table(dim);
  for (std::size_t n = 1; n < lines.size(); ++n) {
    const std::string line_no = "line " + std::to_string(n + 1);
    if (is_blank(lines[n])) continue;
    const auto tab = lines[n].find('\t');
    if (tab == std::string_view::npos) {
      throw ParseError(line_no + ": expected '<doc_id>\\t<values>'", n + 1);
    }
    const auto id = trim(lines[n].substr(0, tab));
    auto rest = trim(lines[n].substr(tab + 1));
    std::vector<double> values;
    while (true) {
      const auto comma = rest.find(',');
      const auto field = trim(rest.substr(0, comma));
      double value = 0.0;
      const auto [end, err] =
          std::from_chars(field.data(), field.data() + field.size(), value);
      if (field.empty() || err != std::errc{} || end != field.data() + field.size()) {
        throw ParseError(line_no + ": non-numeric field '" + std::string(field) + "'",
                         n + 1);
      }
      values.push_back(value);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (values.size() != dim) {
      throw DimensionError(line_no + ": " + std::to_string(values.size()) +
                           " values under dim=" + std::to_string(dim));
    }
    try {
      table.insert(std::string(id), std::move(values));
    } catch (const DuplicateIdError& e) {
      throw DuplicateIdError(line_no + ": " + e.what());
    } catch (const DimensionError& e) {
      throw DimensionError(line_no + ": " + e.what());
    }
  }
  return table;
}

}  // namespace cvetriage::corpus
