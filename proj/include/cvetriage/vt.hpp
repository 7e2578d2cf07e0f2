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

#ifndef CVETRIAGE_VT_HPP_
#define CVETRIAGE_VT_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cvetriage/classifier.hpp"
#include "cvetriage/corpus.hpp"
#include "json.hpp"

namespace cvetriage::vt {

inline constexpr std::size_t kTypeCount = 27;

struct VulnerabilityType {
  int id = 0;
  std::string name;
  std::vector<int> cwe_ids;
  std::vector<std::string> attack_techniques;  // ATT&CK ids, metadata only
};

// The 27 CWE groupings, ids 1..27 in order.
const std::vector<VulnerabilityType>& builtin_vt_map();

// Every type listing `cwe`, ascending; empty when unmapped.
std::vector<int> map_cwe_to_vt(int cwe);

nlohmann::json vt_map_json();

struct LabelStats {
  std::size_t labeled = 0;
  std::size_t multi_type = 0;  // CWEs map to more than one type
  std::size_t unmapped = 0;    // no CWE maps to any type
};

// Sets vt_id where the record's CWEs map to exactly one type and clears it
// otherwise.
corpus::Dataset label_dataset_with_vt(const corpus::Dataset& dataset,
                                      LabelStats* stats = nullptr);

// Classes "1".."27", no minority flags.
signature::TaskSpec vt_task_spec();

using VtHead = classifier::LinearHead;

// Flat 27-way softmax head; labels are 0-based type indices (id - 1).
classifier::TrainResult train_vt(std::span<const classifier::Sample> train,
                                 const classifier::FeatureConfig& features,
                                 const classifier::TrainConfig& config);

// The k most probable types as (id, probability), descending; ties keep id
// order. Throws InputError for a head that is not 27-way.
std::vector<std::pair<int, double>> predict_vt(const VtHead& head,
                                               std::span<const double> features,
                                               std::size_t k);

}  // namespace cvetriage::vt

#endif  // CVETRIAGE_VT_HPP_
