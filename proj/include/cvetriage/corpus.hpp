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

#ifndef CVETRIAGE_CORPUS_HPP_
#define CVETRIAGE_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <map>
#include <vector>

#include "cvetriage/cvss.hpp"
#include "json.hpp"

namespace cvetriage::corpus {

// One vulnerability record.
struct CveRecord {
  std::string id;
  std::string description;
  std::optional<cvss::BaseVector> cvss_vector;
  std::vector<std::string> cwe_ids;  // "CWE-<n>", no duplicates
  std::optional<int> vt_id;          // 1..27 once derived

  friend bool operator==(const CveRecord&, const CveRecord&) = default;
};

// CVE-<4 digits>-<4+ digits>.
bool is_valid_cve_id(std::string_view id);

// "CWE-89" -> 89. Returns nullopt for anything else (e.g. "NVD-CWE-Other").
std::optional<int> parse_cwe_id(std::string_view text);

// Throws SchemaError when a CveRecord invariant does not hold.
void validate_record(const CveRecord& record);

// An ordered record list with a source tag per record. Ingested datasets
// have unique ids; resampled training pools repeat ids by construction.
struct Dataset {
  std::vector<CveRecord> records;
  std::vector<std::string> provenance;

  std::size_t size() const { return records.size(); }
  bool empty() const { return records.empty(); }
  void add(CveRecord record, std::string source);

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

// Throws DuplicateIdError naming the first repeated id.
void require_unique_ids(const Dataset& dataset);

struct NvdIngestResult {
  Dataset dataset;
  std::size_t rejected = 0;           // "** REJECT **" items skipped
  std::vector<std::string> warnings;  // unparsable vectors, skipped items
};

// NVD JSON 1.1 feed (CVE_Items). Throws ParseError carrying the byte offset
// on malformed JSON and SchemaError when CVE_Items is missing.
NvdIngestResult ingest_nvd_feed(std::string_view feed);

// Internal line-delimited format. One object per line with keys id,
// description and optional cvss_vector, cwe_ids, vt_id, source.
// Errors name the 1-based line number.
Dataset ingest_jsonl(std::string_view content);

nlohmann::json record_to_json(const CveRecord& record, std::string_view source);
std::string to_jsonl(const Dataset& dataset);

struct Split {
  Dataset train;
  Dataset test;
};

// Seeded shuffle; |train| = round(train_fraction * N). Both parts keep the
// input's relative order.
Split split(const Dataset& dataset, double train_fraction, std::uint64_t seed);

// A single-label view over records: the class order and how to read a
// record's class index (nullopt when the record is unlabeled for the task).
struct LabelTask {
  std::string name;
  std::vector<std::string> classes;
  std::function<std::optional<std::size_t>(const CveRecord&)> label_of;
};

LabelTask cvss_task(cvss::Metric metric);

// Classes "1".."27".
LabelTask vt_task();

struct ClassDistribution {
  std::string task;
  std::vector<std::string> classes;
  std::vector<std::size_t> counts;
  std::size_t unlabeled = 0;

  std::size_t labeled() const;
  std::size_t majority_count() const;
  nlohmann::json to_json() const;
};

ClassDistribution class_distribution(const Dataset& dataset, const LabelTask& task);

// Raises each flagged minority class to min(majority, cap * original) by
// duplicating uniformly drawn members; empty flags select every class below
// the majority count. Originals come first, duplicates follow grouped by
// class order. Throws SchemaError when a record lacks the task label.
Dataset resample_minority(const Dataset& train, const LabelTask& task,
                          const std::vector<bool>& minority, std::size_t cap,
                          std::uint64_t seed);

// Document vectors produced by an external encoder.
class EmbeddingTable {
 public:
  explicit EmbeddingTable(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return entries_.size(); }

  // Throws DimensionError on a length mismatch or non-finite value and
  // DuplicateIdError on a repeated id.
  void insert(std::string id, std::vector<double> vector);

  const std::vector<double>* find(std::string_view id) const;

 private:
  std::size_t dim_;
  std::map<std::string, std::vector<double>, std::less<>> entries_;
};

// "#dim=<d>" header, then "<doc_id>\t<f1>,...,<fd>" per line.
EmbeddingTable load_embeddings(std::string_view content);

}  // namespace cvetriage::corpus

#endif  // CVETRIAGE_CORPUS_HPP_
