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

#ifndef CVETRIAGE_TEXTPREP_HPP_
#define CVETRIAGE_TEXTPREP_HPP_

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cvetriage::textprep {

using TokenList = std::vector<std::string>;
using StopwordSet = std::set<std::string, std::less<>>;

enum class Stemmer { Porter, None };

// The stopword list compiled in from data/stopwords.txt.
std::shared_ptr<const StopwordSet> default_stopwords();

// Parses a one-word-per-line list. Blank lines and '#' comments are skipped.
StopwordSet parse_stopwords(std::string_view content);

struct CleanConfig {
  bool lowercase = true;
  bool strip_digits = true;
  std::shared_ptr<const StopwordSet> stopwords = default_stopwords();
  Stemmer stemmer = Stemmer::Porter;
};

// Classic Porter (1980) suffix stripping of a lowercase ASCII word.
std::string porter_stem(std::string_view word);

// Lowercases, blanks every character that is not a letter (and digits unless
// strip_digits is off), splits on whitespace, drops stopwords, then stems.
// Tokens that stem to the empty string are dropped.
TokenList clean_and_tokenize(std::string_view text, const CleanConfig& config = {});

}  // namespace cvetriage::textprep

#endif  // CVETRIAGE_TEXTPREP_HPP_
