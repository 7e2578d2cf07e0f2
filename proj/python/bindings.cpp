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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <set>
#include <string>
#include <utility>
#include <vector>

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

namespace py = pybind11;
using nlohmann::json;

namespace {

namespace ct = cvetriage;

py::object to_py(const json& value) {
  switch (value.type()) {
    case json::value_t::null:
      return py::none();
    case json::value_t::boolean:
      return py::bool_(value.get<bool>());
    case json::value_t::number_integer:
      return py::int_(value.get<std::int64_t>());
    case json::value_t::number_unsigned:
      return py::int_(value.get<std::uint64_t>());
    case json::value_t::number_float:
      return py::float_(value.get<double>());
    case json::value_t::string:
      return py::str(value.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& item : value) out.append(to_py(item));
      return out;
    }
    default: {
      py::dict out;
      for (const auto& [key, item] : value.items()) out[py::str(key)] = to_py(item);
      return out;
    }
  }
}

py::object records_to_py(const ct::corpus::Dataset& data) {
  json out = json::array();
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.push_back(ct::corpus::record_to_json(data.records[i], data.provenance[i]));
  }
  return to_py(out);
}

py::tuple score_vector(const std::string& text) {
  const auto severity = ct::cvss::base_score(ct::cvss::parse_vector(text));
  return py::make_tuple(severity.score(), std::string(ct::cvss::band_name(severity.band)));
}

ct::textprep::TokenList tokenize(const std::string& text, bool stem) {
  ct::textprep::CleanConfig config;
  config.stemmer = stem ? ct::textprep::Stemmer::Porter : ct::textprep::Stemmer::None;
  return ct::textprep::clean_and_tokenize(text, config);
}

ct::signature::SignatureLexicon build_lexicon(
    const std::vector<std::pair<ct::textprep::TokenList, std::size_t>>& docs,
    const std::vector<std::string>& classes, const std::vector<bool>& minority,
    double threshold, double epsilon, std::size_t top_f) {
  std::vector<ct::signature::LabeledDoc> labeled;
  labeled.reserve(docs.size());
  for (const auto& [tokens, label] : docs) labeled.push_back({tokens, label});
  ct::signature::LexiconParams params;
  params.threshold = threshold;
  params.epsilon = epsilon;
  params.top_f = top_f;
  return ct::signature::build_lexicon(labeled, {"task", classes, minority}, params);
}

py::dict f1_report(const std::vector<std::pair<std::string, std::string>>& pairs,
                   const std::vector<std::string>& classes) {
  const auto matrix = ct::eval::confusion(pairs, classes);
  py::dict out = to_py(ct::eval::to_json(ct::eval::micro_macro_f1(matrix), classes));
  py::list counts;
  for (std::size_t t = 0; t < classes.size(); ++t) {
    py::list row;
    for (std::size_t p = 0; p < classes.size(); ++p) row.append(matrix.at(t, p));
    counts.append(row);
  }
  out["confusion"] = counts;
  return out;
}

py::dict topk(const std::vector<std::pair<std::set<std::string>, std::vector<std::string>>>& rows,
              std::size_t k) {
  std::vector<ct::eval::RankedSample> samples;
  samples.reserve(rows.size());
  for (const auto& [truth, ranked] : rows) samples.push_back({truth, ranked});
  return to_py(ct::eval::to_json(ct::eval::topk_metrics(samples, k)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "CVSS scoring, text preparation, signature lexicons, CWE trees and metrics";
  m.attr("__version__") = "0.1.0";

  py::register_exception<ct::InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ct::InvariantError>(m, "InvariantError", PyExc_RuntimeError);

  // CVSS
  m.def("base_score", &score_vector, py::arg("vector"),
        "Base score and severity band of a CVSS v3.0/v3.1 vector string.");
  m.def(
      "normalize_vector",
      [](const std::string& text) {
        return ct::cvss::format_vector(ct::cvss::parse_vector(text));
      },
      py::arg("vector"), "Canonical CVSS:3.1 form of a vector string.");
  m.def(
      "severity_band",
      [](double score) { return std::string(ct::cvss::band_name(ct::cvss::severity_band(score))); },
      py::arg("score"));

  // Text preparation
  m.def("porter_stem", [](const std::string& w) { return ct::textprep::porter_stem(w); },
        py::arg("word"));
  m.def("tokenize", &tokenize, py::arg("text"), py::arg("stem") = true,
        "Lowercase, strip non-letters, drop stopwords and stem.");

  // Corpus
  m.def(
      "ingest_jsonl",
      [](const std::string& content) { return records_to_py(ct::corpus::ingest_jsonl(content)); },
      py::arg("content"));
  m.def(
      "ingest_nvd_feed",
      [](const std::string& content) {
        const auto result = ct::corpus::ingest_nvd_feed(content);
        py::dict out;
        out["records"] = records_to_py(result.dataset);
        out["rejected"] = result.rejected;
        out["warnings"] = result.warnings;
        return out;
      },
      py::arg("content"));

  // Signature lexicons
  py::class_<ct::signature::SignatureLexicon>(m, "SignatureLexicon")
      .def_static(
          "load", [](const std::string& s) { return ct::signature::load_lexicon(s); },
          py::arg("content"))
      .def("save", [](const ct::signature::SignatureLexicon& l) {
        return ct::signature::save_lexicon(l);
      })
      .def_property_readonly("seed_words",
                             [](const ct::signature::SignatureLexicon& l) { return l.seed_words; })
      .def_property_readonly("words",
                             [](const ct::signature::SignatureLexicon& l) {
                               std::vector<std::string> out;
                               for (const auto& [w, _] : l.entries) out.push_back(w);
                               return out;
                             })
      .def(
          "scores",
          [](const ct::signature::SignatureLexicon& l, const std::string& word) {
            const auto it = l.entries.find(word);
            if (it == l.entries.end()) throw py::key_error(word);
            return it->second.normalized;
          },
          py::arg("word"))
      .def(
          "embed",
          [](const ct::signature::SignatureLexicon& l, const ct::textprep::TokenList& tokens) {
            auto v = ct::signature::embed_description(tokens, l);
            return py::make_tuple(v.values, v.matched);
          },
          py::arg("tokens"), "Signature vector and the matched words.");
  m.def("build_lexicon", &build_lexicon, py::arg("docs"), py::arg("classes"),
        py::arg("minority"), py::arg("threshold") = 0.85, py::arg("epsilon") = 1e-9,
        py::arg("top_f") = 200, "Signature lexicon from (tokens, label) documents.");

  // Features
  m.def("hashed_bow", &ct::classifier::hashed_bow, py::arg("tokens"), py::arg("dim") = 4096);
  m.def("fnv1a64", [](const std::string& s) { return ct::classifier::fnv1a64(s); },
        py::arg("data"));

  // CWE hierarchy
  py::class_<ct::cwe::CweTree>(m, "CweTree")
      .def_static(
          "from_csv", [](const std::string& s) { return ct::cwe::CweTree::from_csv(s); },
          py::arg("content"))
      .def_property_readonly("depth", &ct::cwe::CweTree::depth)
      .def("__len__", &ct::cwe::CweTree::size)
      .def("__contains__", &ct::cwe::CweTree::contains)
      .def("level_of", &ct::cwe::CweTree::level_of)
      .def("nodes_at", &ct::cwe::CweTree::nodes_at, py::arg("level"))
      .def("children", &ct::cwe::CweTree::children, py::arg("cwe"))
      .def("parents", &ct::cwe::CweTree::parents, py::arg("cwe"))
      .def(
          "mask",
          [](const ct::cwe::CweTree& tree, int level, const std::vector<int>& parents) {
            return ct::cwe::build_mask(tree, level, parents).bits;
          },
          py::arg("level"), py::arg("accepted_parents") = std::vector<int>{});

  // Vulnerability types
  m.def("map_cwe_to_vt", &ct::vt::map_cwe_to_vt, py::arg("cwe"));
  m.def("vt_types", [] { return to_py(ct::vt::vt_map_json()); });

  // Metrics
  m.def("f1_report", &f1_report, py::arg("pairs"), py::arg("classes"),
        "Accuracy, micro/macro F1, per-class scores and the confusion matrix.");
  m.def("topk_metrics", &topk, py::arg("samples"), py::arg("k"),
        "HR@K, P@K and R@K over (truth set, ranked list) samples.");
  m.def("multilabel_correct", &ct::eval::multilabel_correct<int>, py::arg("predicted"),
        py::arg("truth"));

  // Run configuration
  m.def(
      "config_hash",
      [](const std::string& text) {
        return ct::config_hash(ct::parse_run_config(text));
      },
      py::arg("config_json"));
}
