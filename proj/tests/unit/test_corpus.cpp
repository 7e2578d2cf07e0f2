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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>

#include "cvetriage/corpus.hpp"
#include "cvetriage/error.hpp"
#include "json.hpp"

using namespace cvetriage;
using corpus::CveRecord;
using corpus::Dataset;
using nlohmann::json;

namespace {

json nvd_item(const std::string& id, const std::string& text,
              const std::vector<std::string>& cwes, const std::string& vector) {
  json problem = json::array();
  for (const auto& c : cwes) problem.push_back({{"lang", "en"}, {"value", c}});
  json item = {
      {"cve",
       {{"CVE_data_meta", {{"ID", id}}},
        {"problemtype", {{"problemtype_data", json::array({{{"description", problem}}})}}},
        {"description",
         {{"description_data", json::array({{{"lang", "en"}, {"value", text}}})}}}}},
      {"impact", json::object()}};
  if (!vector.empty()) {
    item["impact"]["baseMetricV3"]["cvssV3"]["vectorString"] = vector;
  }
  return item;
}

std::string feed(const json& items) {
  return json{{"CVE_data_type", "CVE"}, {"CVE_Items", items}}.dump();
}

CveRecord record(const std::string& id, const std::string& vector = "") {
  CveRecord r;
  r.id = id;
  r.description = "description of " + id;
  if (!vector.empty()) r.cvss_vector = cvss::parse_vector(vector);
  return r;
}

Dataset av_dataset(const std::map<char, std::size_t>& counts) {
  Dataset d;
  std::size_t n = 0;
  for (const auto& [value, count] : counts) {
    for (std::size_t i = 0; i < count; ++i) {
      std::string v = "AV:";
      v += value;
      v += "/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H";
      d.add(record("CVE-2020-" + std::to_string(10000 + n++), v), "test");
    }
  }
  return d;
}

}  // namespace

TEST_CASE("CVE and CWE identifiers") {
  CHECK(corpus::is_valid_cve_id("CVE-2004-0366"));
  CHECK(corpus::is_valid_cve_id("CVE-2021-1234567"));
  CHECK_FALSE(corpus::is_valid_cve_id("CVE-21-0366"));
  CHECK_FALSE(corpus::is_valid_cve_id("CVE-2004-036"));
  CHECK_FALSE(corpus::is_valid_cve_id("cve-2004-0366"));
  CHECK(corpus::parse_cwe_id("CWE-89") == 89);
  CHECK_FALSE(corpus::parse_cwe_id("NVD-CWE-Other"));
  CHECK_FALSE(corpus::parse_cwe_id("CWE-"));
  CHECK_FALSE(corpus::parse_cwe_id("CWE-8x"));
}

TEST_CASE("record invariants") {
  auto r = record("CVE-2020-0001");
  CHECK_NOTHROW(corpus::validate_record(r));
  r.description = "  \t ";
  CHECK_THROWS_AS(corpus::validate_record(r), SchemaError);
  r = record("CVE-2020-0001");
  r.cwe_ids = {"CWE-79", "CWE-79"};
  CHECK_THROWS_AS(corpus::validate_record(r), SchemaError);
  r.cwe_ids = {"CWE-79"};
  r.vt_id = 28;
  CHECK_THROWS_AS(corpus::validate_record(r), SchemaError);
}

TEST_CASE("NVD feed with one item") {
  const auto result = corpus::ingest_nvd_feed(feed(json::array(
      {nvd_item("CVE-2004-0366", "A SQL injection vulnerability in libpq allows execution.",
                {"CWE-89"}, "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")})));
  REQUIRE(result.dataset.size() == 1);
  const auto& r = result.dataset.records[0];
  CHECK(r.id == "CVE-2004-0366");
  CHECK(r.cwe_ids == std::vector<std::string>{"CWE-89"});
  REQUIRE(r.cvss_vector);
  CHECK(cvss::format_vector(*r.cvss_vector) == "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H");
  CHECK(result.dataset.provenance[0] == "nvd");
  CHECK(result.rejected == 0);
  CHECK(result.warnings.empty());
}

TEST_CASE("NVD feed edge cases") {
  SUBCASE("empty item list") {
    CHECK(corpus::ingest_nvd_feed(feed(json::array())).dataset.empty());
  }
  SUBCASE("rejected item is skipped and counted") {
    const auto result = corpus::ingest_nvd_feed(feed(json::array(
        {nvd_item("CVE-2020-0002", "** REJECT ** DO NOT USE THIS CANDIDATE NUMBER.", {}, "")})));
    CHECK(result.dataset.empty());
    CHECK(result.rejected == 1);
  }
  SUBCASE("unparsable vector becomes a warning") {
    const auto result = corpus::ingest_nvd_feed(feed(json::array(
        {nvd_item("CVE-2020-0003", "Overflow.", {"CWE-787", "NVD-CWE-noinfo", "CWE-787"},
                  "CVSS:3.1/AV:Q/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")})));
    REQUIRE(result.dataset.size() == 1);
    CHECK_FALSE(result.dataset.records[0].cvss_vector);
    CHECK(result.dataset.records[0].cwe_ids == std::vector<std::string>{"CWE-787"});
    CHECK(result.warnings.size() == 1);
  }
  SUBCASE("malformed JSON reports the byte offset") {
    try {
      corpus::ingest_nvd_feed("{\"CVE_Items\": [ }");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() > 0);
    }
  }
  SUBCASE("missing CVE_Items is a schema error") {
    CHECK_THROWS_AS(corpus::ingest_nvd_feed("{\"CVE_data_type\": \"CVE\"}"), SchemaError);
  }
}

TEST_CASE("JSONL ingest") {
  const std::string a =
      R"({"id":"CVE-2020-0001","description":"one","cvss_vector":"AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H","cwe_ids":["CWE-79"]})";
  const std::string b = R"({"id":"CVE-2020-0002","description":"two"})";
  SUBCASE("two valid lines") {
    const auto d = corpus::ingest_jsonl(a + "\n" + b + "\n");
    REQUIRE(d.size() == 2);
    CHECK(d.records[0].id == "CVE-2020-0001");
    CHECK(d.records[1].cwe_ids.empty());
  }
  SUBCASE("duplicate id") {
    CHECK_THROWS_AS(corpus::ingest_jsonl(a + "\n" + a + "\n"), DuplicateIdError);
  }
  SUBCASE("missing description names the line") {
    try {
      corpus::ingest_jsonl(a + "\n" + R"({"id":"CVE-2020-0003"})" + "\n");
      FAIL("expected a schema error");
    } catch (const SchemaError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("bad JSON names the line") {
    try {
      corpus::ingest_jsonl(a + "\n{oops\n");
      FAIL("expected a parse error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
  }
  SUBCASE("blank lines are skipped") {
    CHECK(corpus::ingest_jsonl("\n" + a + "\n\n").size() == 1);
  }
}

TEST_CASE("NVD to JSONL round trip") {
  const auto nvd = corpus::ingest_nvd_feed(feed(json::array(
      {nvd_item("CVE-2020-0010", "First.", {"CWE-89"}, "CVSS:3.0/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H"),
       nvd_item("CVE-2020-0011", "Second.", {}, ""),
       nvd_item("CVE-2020-0012", "Third.", {"CWE-79", "CWE-352"},
                "CVSS:3.1/AV:N/AC:L/PR:N/UI:R/S:C/C:L/I:L/A:N")})));
  const auto again = corpus::ingest_jsonl(corpus::to_jsonl(nvd.dataset));
  CHECK(again == nvd.dataset);
}

TEST_CASE("split is a deterministic partition") {
  Dataset d;
  for (int i = 0; i < 10; ++i) d.add(record("CVE-2020-" + std::to_string(1000 + i)), "t");
  const auto s = corpus::split(d, 0.8, 7);
  CHECK(s.train.size() == 8);
  CHECK(s.test.size() == 2);
  std::set<std::string> ids;
  for (const auto& r : s.train.records) ids.insert(r.id);
  for (const auto& r : s.test.records) ids.insert(r.id);
  CHECK(ids.size() == 10);
  const auto again = corpus::split(d, 0.8, 7);
  CHECK(again.train == s.train);
  CHECK(again.test == s.test);
  const auto other = corpus::split(d, 0.8, 8);
  CHECK((other.train != s.train || other.test != s.test));
}

TEST_CASE("split rounding at paper scale") {
  Dataset d;
  for (int i = 0; i < 28090; ++i) d.add(record("CVE-2020-" + std::to_string(100000 + i)), "t");
  const auto s = corpus::split(d, 0.8, 1);
  CHECK(s.test.size() == 5618);
}

TEST_CASE("class distribution") {
  SUBCASE("counts per class") {
    const auto dist = corpus::class_distribution(av_dataset({{'N', 2}, {'L', 1}}),
                                                 corpus::cvss_task(cvss::Metric::AV));
    CHECK(dist.classes == std::vector<std::string>{"N", "A", "L", "P"});
    CHECK(dist.counts == std::vector<std::size_t>{2, 0, 1, 0});
    CHECK(dist.labeled() == 3);
    CHECK(dist.majority_count() == 2);
  }
  SUBCASE("empty dataset") {
    const auto dist = corpus::class_distribution(Dataset{}, corpus::cvss_task(cvss::Metric::AV));
    CHECK(dist.counts == std::vector<std::size_t>{0, 0, 0, 0});
  }
  SUBCASE("unlabeled records are tallied apart") {
    auto d = av_dataset({{'N', 2}});
    d.add(record("CVE-2020-9999"), "t");
    const auto dist = corpus::class_distribution(d, corpus::cvss_task(cvss::Metric::AV));
    CHECK(dist.labeled() == 2);
    CHECK(dist.unlabeled == 1);
  }
}

TEST_CASE("minority resampling target") {
  const auto av = corpus::cvss_task(cvss::Metric::AV);
  auto counts_after = [&](const Dataset& d) { return corpus::class_distribution(d, av).counts; };

  SUBCASE("grows to the majority") {
    const auto d = av_dataset({{'N', 90}, {'A', 10}});
    const auto out = corpus::resample_minority(d, av, {}, 10, 3);
    CHECK(counts_after(out) == std::vector<std::size_t>{90, 90, 0, 0});
    CHECK(out.size() == d.size() + 80);
  }
  SUBCASE("cap binds") {
    const auto d = av_dataset({{'N', 90}, {'A', 5}});
    CHECK(counts_after(corpus::resample_minority(d, av, {}, 10, 3)) ==
          std::vector<std::size_t>{90, 50, 0, 0});
  }
  SUBCASE("balanced data is unchanged") {
    const auto d = av_dataset({{'N', 20}, {'A', 20}});
    CHECK(corpus::resample_minority(d, av, {}, 10, 3) == d);
  }
  SUBCASE("only flagged classes grow") {
    const auto d = av_dataset({{'N', 100}, {'A', 80}, {'L', 4}});
    const auto out = corpus::resample_minority(d, av, {false, false, true, false}, 10, 3);
    CHECK(counts_after(out) == std::vector<std::size_t>{100, 80, 40, 0});
  }
  SUBCASE("originals first, content unchanged, deterministic") {
    const auto d = av_dataset({{'N', 30}, {'P', 3}});
    const auto out = corpus::resample_minority(d, av, {}, 10, 99);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(out.records[i] == d.records[i]);
    for (std::size_t i = d.size(); i < out.size(); ++i) {
      CHECK(out.provenance[i] == "resample");
      CHECK(std::find(d.records.begin(), d.records.end(), out.records[i]) != d.records.end());
    }
    CHECK(corpus::resample_minority(d, av, {}, 10, 99) == out);
  }
  SUBCASE("unlabeled record is rejected") {
    auto d = av_dataset({{'N', 3}});
    d.add(record("CVE-2020-9999"), "t");
    CHECK_THROWS_AS(corpus::resample_minority(d, av, {}, 10, 1), SchemaError);
  }
}

TEST_CASE("embedding sidecar") {
  SUBCASE("one entry") {
    const auto t = corpus::load_embeddings("#dim=3\nCVE-1\t1.0,0.0,2.5\n");
    CHECK(t.dim() == 3);
    REQUIRE(t.find("CVE-1"));
    CHECK(*t.find("CVE-1") == std::vector<double>{1.0, 0.0, 2.5});
    CHECK(t.find("CVE-2") == nullptr);
  }
  SUBCASE("short row names its line") {
    try {
      corpus::load_embeddings("#dim=3\nCVE-1\t1,2,3\nCVE-2\t1,2\n");
      FAIL("expected a dimension error");
    } catch (const DimensionError& e) {
      CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
  }
  SUBCASE("empty body keeps the dimension") {
    const auto t = corpus::load_embeddings("#dim=5\n");
    CHECK(t.dim() == 5);
    CHECK(t.size() == 0);
  }
  SUBCASE("bad input") {
    CHECK_THROWS_AS(corpus::load_embeddings("dim=3\n"), InputError);
    CHECK_THROWS_AS(corpus::load_embeddings("#dim=2\nCVE-1\t1,x\n"), InputError);
    CHECK_THROWS_AS(corpus::load_embeddings("#dim=1\nCVE-1\t1\nCVE-1\t2\n"), DuplicateIdError);
    CHECK_THROWS_AS(corpus::load_embeddings("#dim=1\nCVE-1\tnan\n"), InputError);
  }
}
