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

#include "cvetriage/cvss.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "cvetriage/error.hpp"

namespace cvetriage::cvss {

namespace {

constexpr std::array<std::string_view, 8> kKeys = {"AV", "AC", "PR", "UI",
                                                   "S",  "C",  "I",  "A"};
constexpr std::array<std::string_view, 8> kValues = {"NALP", "LH", "NLH", "NR",
                                                     "UC",   "NLH", "NLH", "NLH"};

double attack_vector_weight(char v) {
  switch (v) {
    case 'N': return 0.85;
    case 'A': return 0.62;
    case 'L': return 0.55;
    default:  return 0.2;  // P
  }
}

double attack_complexity_weight(char v) { return v == 'L' ? 0.77 : 0.44; }

double user_interaction_weight(char v) { return v == 'N' ? 0.85 : 0.62; }

double privileges_weight(char v, bool scope_changed) {
  switch (v) {
    case 'N': return 0.85;
    case 'L': return scope_changed ? 0.68 : 0.62;
    default:  return scope_changed ? 0.5 : 0.27;  // H
  }
}

double impact_weight(char v) {
  switch (v) {
    case 'H': return 0.56;
    case 'L': return 0.22;
    default:  return 0.0;
  }
}

}  // namespace

std::string_view metric_key(Metric metric) {
  return kKeys[static_cast<std::size_t>(metric)];
}

std::string_view allowed_values(Metric metric) {
  return kValues[static_cast<std::size_t>(metric)];
}

std::size_t value_index(Metric metric, char value) {
  const auto allowed = allowed_values(metric);
  const auto pos = allowed.find(value);
  if (pos == std::string_view::npos) {
    throw InputError("illegal value '" + std::string(1, value) + "' for metric " +
                     std::string(metric_key(metric)));
  }
  return pos;
}

Metric metric_from_key(std::string_view key) {
  for (std::size_t i = 0; i < kKeys.size(); ++i) {
    if (kKeys[i] == key) return static_cast<Metric>(i);
  }
  throw InputError("unknown CVSS metric key '" + std::string(key) + "'");
}

BaseVector::BaseVector() {
  for (Metric m : kMetrics) values_[index(m)] = allowed_values(m).front();
}

std::size_t BaseVector::class_of(Metric metric) const {
  return allowed_values(metric).find(get(metric));
}

void BaseVector::set(Metric metric, char value) {
  value_index(metric, value);
  values_[index(metric)] = value;
}

BaseVector parse_vector(std::string_view text) {
  std::string_view body = text;
  if (body.starts_with("CVSS:")) {
    const auto slash = body.find('/');
    const auto prefix = body.substr(0, slash);
    if (prefix != "CVSS:3.0" && prefix != "CVSS:3.1") {
      throw InputError("unknown CVSS prefix '" + std::string(prefix) + "'");
    }
    if (slash == std::string_view::npos) {
      throw InputError("CVSS vector has no metrics: '" + std::string(text) + "'");
    }
    body.remove_prefix(slash + 1);
  }

  BaseVector vector;
  std::array<bool, 8> seen{};
  while (!body.empty()) {
    const auto slash = body.find('/');
    const auto pair = body.substr(0, slash);
    body = slash == std::string_view::npos ? std::string_view{}
                                           : body.substr(slash + 1);
    const auto colon = pair.find(':');
    if (colon == std::string_view::npos || pair.size() != colon + 2) {
      throw InputError("malformed CVSS component '" + std::string(pair) + "'");
    }
    const Metric metric = metric_from_key(pair.substr(0, colon));
    auto& flag = seen[static_cast<std::size_t>(metric)];
    if (flag) {
      throw InputError("duplicated metric " + std::string(metric_key(metric)));
    }
    flag = true;
    vector.set(metric, pair[colon + 1]);
    if (slash != std::string_view::npos && body.empty()) {
      throw InputError("trailing '/' in CVSS vector");
    }
  }
  for (Metric m : kMetrics) {
    if (!seen[static_cast<std::size_t>(m)]) {
      throw InputError("missing metric " + std::string(metric_key(m)));
    }
  }
  return vector;
}

std::string format_vector(const BaseVector& vector) {
  std::string out = "CVSS:3.1";
  for (Metric m : kMetrics) {
    out += '/';
    out += metric_key(m);
    out += ':';
    out += vector.get(m);
  }
  return out;
}

std::string_view band_name(Band band) {
  switch (band) {
    case Band::None: return "None";
    case Band::Low: return "Low";
    case Band::Medium: return "Medium";
    case Band::High: return "High";
    case Band::Critical: return "Critical";
  }
  return "None";
}

std::string Severity::score_text() const {
  return std::to_string(tenths / 10) + "." + std::to_string(tenths % 10);
}

int roundup_tenths(double value) {
  const auto scaled = static_cast<long long>(std::llround(value * 100000.0));
  if (scaled % 10000 == 0) return static_cast<int>(scaled / 10000);
  return static_cast<int>(scaled / 10000 + 1);
}

Band severity_band(double score) {
  if (!(score >= 0.0 && score <= 10.0)) {
    throw InputError("severity score out of range [0, 10]: " + std::to_string(score));
  }
  if (score == 0.0) return Band::None;
  if (score < 4.0) return Band::Low;
  if (score < 7.0) return Band::Medium;
  if (score < 9.0) return Band::High;
  return Band::Critical;
}

Severity base_score(const BaseVector& v) {
  const bool changed = v.get(Metric::S) == 'C';
  const double iss = 1.0 - (1.0 - impact_weight(v.get(Metric::C))) *
                               (1.0 - impact_weight(v.get(Metric::I))) *
                               (1.0 - impact_weight(v.get(Metric::A)));
  const double impact =
      changed ? 7.52 * (iss - 0.029) - 3.25 * std::pow(iss - 0.02, 15)
              : 6.42 * iss;
  const double exploitability =
      8.22 * attack_vector_weight(v.get(Metric::AV)) *
      attack_complexity_weight(v.get(Metric::AC)) *
      privileges_weight(v.get(Metric::PR), changed) *
      user_interaction_weight(v.get(Metric::UI));

  Severity result;
  if (impact <= 0.0) return result;
  const double raw = changed ? std::min(1.08 * (impact + exploitability), 10.0)
                             : std::min(impact + exploitability, 10.0);
  result.tenths = roundup_tenths(raw);
  result.band = severity_band(result.score());
  return result;
}

}  // namespace cvetriage::cvss
