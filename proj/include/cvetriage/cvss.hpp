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

#ifndef CVETRIAGE_CVSS_HPP_
#define CVETRIAGE_CVSS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

namespace cvetriage::cvss {

// The eight CVSS v3 base metrics, in canonical vector order.
enum class Metric : std::uint8_t { AV, AC, PR, UI, S, C, I, A };

inline constexpr std::array<Metric, 8> kMetrics = {
    Metric::AV, Metric::AC, Metric::PR, Metric::UI,
    Metric::S,  Metric::C,  Metric::I,  Metric::A};

// "AV", "AC", ...
std::string_view metric_key(Metric metric);

// Allowed value letters, e.g. "NALP" for AV. The order is the class order
// used by every classifier trained for the metric.
std::string_view allowed_values(Metric metric);

inline std::size_t class_count(Metric metric) {
  return allowed_values(metric).size();
}

// Position of `value` within allowed_values(metric); throws InputError when
// the letter is not legal for the metric.
std::size_t value_index(Metric metric, char value);

// Throws InputError for an unknown key.
Metric metric_from_key(std::string_view key);

class BaseVector {
 public:
  // All metrics at their first allowed value (AV:N/AC:L/PR:N/UI:N/S:U/C:N/...).
  BaseVector();

  char get(Metric metric) const { return values_[index(metric)]; }
  std::size_t class_of(Metric metric) const;

  // Throws InputError when `value` is not legal for `metric`.
  void set(Metric metric, char value);

  friend bool operator==(const BaseVector&, const BaseVector&) = default;

 private:
  static std::size_t index(Metric m) { return static_cast<std::size_t>(m); }
  std::array<char, 8> values_;
};

// Accepts an optional "CVSS:3.0/" or "CVSS:3.1/" prefix followed by the
// eight KEY:V pairs in any order. Throws InputError on any grammar or value
// violation.
BaseVector parse_vector(std::string_view text);

// Canonical "CVSS:3.1/AV:_/AC:_/PR:_/UI:_/S:_/C:_/I:_/A:_".
std::string format_vector(const BaseVector& vector);

enum class Band { None, Low, Medium, High, Critical };

std::string_view band_name(Band band);

// Score held as an integer count of tenths so formatting is exact.
struct Severity {
  int tenths = 0;
  Band band = Band::None;

  double score() const { return tenths / 10.0; }
  std::string score_text() const;
};

// CVSS v3.1 base score.
Severity base_score(const BaseVector& vector);

// Throws InputError outside [0, 10].
Band severity_band(double score);

// The v3.1 Roundup: smallest one-decimal value >= input, returned in tenths.
int roundup_tenths(double value);

}  // namespace cvetriage::cvss

#endif  // CVETRIAGE_CVSS_HPP_
