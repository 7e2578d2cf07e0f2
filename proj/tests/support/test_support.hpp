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

#ifndef CVETRIAGE_TESTS_SUPPORT_HPP_
#define CVETRIAGE_TESTS_SUPPORT_HPP_

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "cvetriage/cvss.hpp"

namespace cvetriage::testing {

inline std::string data_path(const std::string& name) {
  return std::string(CVETRIAGE_TEST_DATA) + "/" + name;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("missing fixture " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

// Every base vector, odometer order over the allowed values.
inline std::vector<cvss::BaseVector> all_base_vectors() {
  std::vector<cvss::BaseVector> out{cvss::BaseVector{}};
  for (auto metric : cvss::kMetrics) {
    std::vector<cvss::BaseVector> next;
    for (const auto& v : out) {
      for (char value : cvss::allowed_values(metric)) {
        auto copy = v;
        copy.set(metric, value);
        next.push_back(copy);
      }
    }
    out = std::move(next);
  }
  return out;
}

struct ReferenceScore {
  std::string vector;
  std::string score;
  std::string band;
};

// Rows of cvss_reference.csv (header skipped).
inline std::vector<ReferenceScore> reference_scores() {
  std::vector<ReferenceScore> rows;
  const auto lines = split_lines(read_text(data_path("cvss_reference.csv")));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    const auto a = lines[i].find(',');
    const auto b = lines[i].find(',', a + 1);
    rows.push_back({lines[i].substr(0, a), lines[i].substr(a + 1, b - a - 1),
                    lines[i].substr(b + 1)});
  }
  return rows;
}

}  // namespace cvetriage::testing

#endif  // CVETRIAGE_TESTS_SUPPORT_HPP_
