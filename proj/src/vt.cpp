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

#include "cvetriage/vt.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "cvetriage/error.hpp"

namespace cvetriage::vt {

namespace {

std::vector<int> cwe_range(std::initializer_list<int> head, int from, int to) {
  std::vector<int> ids(head);
  for (int id = from; id <= to; ++id) ids.push_back(id);
  return ids;
}

std::vector<VulnerabilityType> make_map() {
  return {
      {1, "General Improper Access Control", {284, 285, 287, 862, 863}, {}},
      {2, "Improper Restriction of Excessive Authentication Attempts", {306, 307},
       {"T1078", "T1110.001"}},
      {3, "Authentication Bypass by Capture-replay", {294}, {"T1190", "T1040"}},
      {4, "Overly Restrictive Account Lockout Mechanism", {645},
       {"T1446", "T1531", "T1110"}},
      {5, "Use of Password Hash Instead of Password for Authentication", {836},
       {"T1550.002"}},
      {6, "General Credential Management Errors", {255, 256, 257, 260, 261},
       {"T1552", "T1078"}},
      {7, "Cleartext Transmission of Sensitive Information", {319},
       {"T1552", "T1078", "T1040"}},
      {8, "Hard-coded Credentials", {798}, {"T1078.001"}},
      {9, "Weak Password/Hashing", {328, 916}, {"T1078", "T1110"}},
      {10, "General Cryptographic Issues", {310, 324, 325, 326},
       {"T1078", "T1110", "T1557", "T1040"}},
      {11, "XML External Entity (XXE)", {611, 776}, {"T1059", "T1005", "T1046"}},
      {12, "XML Entity Expansion (XEE)", {776}, {"T1499.004"}},
      {13, "URL Redirection to Untrusted Site ('Open Redirect')", {601},
       {"T1036", "T1566.002"}},
      {14, "Cross-site Scripting (XSS)", {79, 692},
       {"T1059.007", "T1557", "T1189", "T1204.001"}},
      {15, "OS Command Injection", {78}, {"T1059", "T1133"}},
      {16, "SQL Injection", {89, 564},
       {"T1059", "T1005", "T1505.003", "T1136", "T1190", "T1565.001"}},
      {17, "Code Injection", {94}, {"T1059"}},
      {18, "Directory Traversal (Relative and Absolute)", cwe_range({20}, 22, 40),
       {"T1202"}},
      {19, "Symlink Attacks", {59, 61, 62, 64, 65, 73, 363}, {"T1202"}},
      {20, "Untrusted/Uncontrolled/Unquoted Search Path", {426, 427, 428}, {"T1574"}},
      {21, "Unrestricted File Upload", {434, 351, 436, 430, 73, 183, 184},
       {"T1505.003", "T1059"}},
      {22, "Deserialization of Untrusted Data", {502}, {"T1059"}},
      {23, "Infinite Loop", {835}, {"T1499.004"}},
      {24, "Cross-site Request Forgery (CSRF)", {352}, {"T1068", "T1204.001"}},
      {25, "Session Fixation", {384}, {"T1563"}},
      {26, "Uncontrolled Resource Consumption",
       {400, 664, 770, 771, 779, 920, 1235, 410}, {"T1499"}},
      {27, "Server-Side Request Forgery (SSRF)", {918},
       {"T1090", "T1135", "T1005", "T1133"}},
  };
}

}  // namespace

const std::vector<VulnerabilityType>& builtin_vt_map() {
  static const std::vector<VulnerabilityType> map = make_map();
  return map;
}

std::vector<int> map_cwe_to_vt(int cwe) {
  std::vector<int> types;
  for (const auto& type : builtin_vt_map()) {
    if (std::find(type.cwe_ids.begin(), type.cwe_ids.end(), cwe) != type.cwe_ids.end()) {
      types.push_back(type.id);
    }
  }
  return types;
}

nlohmann::json vt_map_json() {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& type : builtin_vt_map()) {
    out.push_back({{"id", type.id},
                   {"name", type.name},
                   {"cwe_ids", type.cwe_ids},
                   {"attack_techniques", type.attack_techniques}});
  }
  return out;
}

corpus::Dataset label_dataset_with_vt(const corpus::Dataset& dataset, LabelStats* stats) {
  LabelStats tally;
  corpus::Dataset out = dataset;
  for (auto& record : out.records) {
    std::set<int> types;
    for (const auto& cwe : record.cwe_ids) {
      if (const auto number = corpus::parse_cwe_id(cwe)) {
        for (int t : map_cwe_to_vt(*number)) types.insert(t);
      }
    }
    record.vt_id.reset();
    if (types.size() == 1) {
      record.vt_id = *types.begin();
      ++tally.labeled;
    } else if (types.empty()) {
      ++tally.unmapped;
    } else {
      ++tally.multi_type;
    }
  }
  if (stats) *stats = tally;
  return out;
}

signature::TaskSpec vt_task_spec() {
  signature::TaskSpec task;
  task.name = "VT";
  for (std::size_t id = 1; id <= kTypeCount; ++id) task.classes.push_back(std::to_string(id));
  task.minority.assign(kTypeCount, false);
  return task;
}

classifier::TrainResult train_vt(std::span<const classifier::Sample> train,
                                 const classifier::FeatureConfig& features,
                                 const classifier::TrainConfig& config) {
  return classifier::train_head(train, vt_task_spec(), features, config);
}

std::vector<std::pair<int, double>> predict_vt(const VtHead& head,
                                               std::span<const double> features,
                                               std::size_t k) {
  if (head.classes() != kTypeCount) {
    throw InputError("VT head must have 27 outputs, has " +
                     std::to_string(head.classes()));
  }
  const auto p = classifier::predict(head, features).probabilities;
  std::vector<std::size_t> order(p.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&p](std::size_t a, std::size_t b) { return p[a] > p[b]; });
  std::vector<std::pair<int, double>> top;
  for (std::size_t i = 0; i < std::min(k, order.size()); ++i) {
    top.emplace_back(std::stoi(head.task.classes[order[i]]), p[order[i]]);
  }
  return top;
}

}  // namespace cvetriage::vt
