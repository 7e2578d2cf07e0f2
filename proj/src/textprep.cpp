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

#include "cvetriage/textprep.hpp"

#include <cctype>

namespace cvetriage::textprep {

namespace {

constexpr std::string_view kBuiltinStopwords =
#include "stopwords_data.inc"
    ;

bool is_ascii_letter(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

}  // namespace

StopwordSet parse_stopwords(std::string_view content) {
  StopwordSet words;
  while (!content.empty()) {
    const auto newline = content.find('\n');
    auto line = content.substr(0, newline);
    content = newline == std::string_view::npos ? std::string_view{}
                                                : content.substr(newline + 1);
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.remove_suffix(1);
    }
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front()))) {
      line.remove_prefix(1);
    }
    if (line.empty() || line.front() == '#') continue;
    words.emplace(line);
  }
  return words;
}

std::shared_ptr<const StopwordSet> default_stopwords() {
  static const auto words =
      std::make_shared<const StopwordSet>(parse_stopwords(kBuiltinStopwords));
  return words;
}

TokenList clean_and_tokenize(std::string_view text, const CleanConfig& config) {
  std::string cleaned(text.size(), ' ');
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if (is_ascii_letter(c)) {
      cleaned[i] = config.lowercase ? static_cast<char>(std::tolower(c))
                                    : static_cast<char>(c);
    } else if (!config.strip_digits && c >= '0' && c <= '9') {
      cleaned[i] = static_cast<char>(c);
    }
  }

  TokenList tokens;
  std::size_t pos = 0;
  while (pos < cleaned.size()) {
    while (pos < cleaned.size() && cleaned[pos] == ' ') ++pos;
    const std::size_t start = pos;
    while (pos < cleaned.size() && cleaned[pos] != ' ') ++pos;
    if (pos == start) break;
    std::string_view word(cleaned.data() + start, pos - start);
    if (config.stopwords && config.stopwords->contains(word)) continue;
    std::string token = config.stemmer == Stemmer::Porter ? porter_stem(word)
                                                          : std::string(word);
    if (!token.empty()) tokens.push_back(std::move(token));
  }
  return tokens;
}

}  // namespace cvetriage::textprep
