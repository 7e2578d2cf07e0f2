# Copyright 2026 The cvetriage Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import json

import pytest

import cvetriage


def test_base_score_and_band():
    assert cvetriage.base_score("CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H") == (9.8, "Critical")
    assert cvetriage.base_score("AV:N/AC:L/PR:N/UI:R/S:C/C:L/I:L/A:N") == (6.1, "Medium")
    assert cvetriage.severity_band(0.0) == "None"


def test_vector_errors_raise_input_error():
    with pytest.raises(cvetriage.InputError):
        cvetriage.base_score("CVSS:3.1/AV:N/AC:L")
    with pytest.raises(ValueError):
        cvetriage.normalize_vector("AV:X/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")


def test_normalize_vector_is_canonical():
    assert (cvetriage.normalize_vector("A:H/I:H/C:H/S:U/UI:N/PR:N/AC:L/AV:N")
            == "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H")


def test_tokenize_and_stem():
    assert cvetriage.porter_stem("connected") == "connect"
    assert cvetriage.tokenize("Buffer overflow in 2 routers") == ["buffer", "overflow", "router"]
    assert cvetriage.tokenize("routers", stem=False) == ["routers"]


def test_ingest_jsonl_roundtrip_fields():
    line = json.dumps({"id": "CVE-2021-0001", "description": "x",
                       "cvss_vector": "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H",
                       "cwe_ids": ["CWE-89"]})
    records = cvetriage.ingest_jsonl(line + "\n")
    assert records[0]["id"] == "CVE-2021-0001"
    assert records[0]["cwe_ids"] == ["CWE-89"]
    with pytest.raises(cvetriage.InputError):
        cvetriage.ingest_jsonl(line + "\n" + line + "\n")


def test_signature_lexicon_keeps_minority_words():
    docs = [(["remot", "network", "server"], 0)] * 20 + [(["bluetooth", "pair", "server"], 1)] * 2
    lexicon = cvetriage.build_lexicon(docs, ["N", "A"], [False, True], top_f=5)
    assert "bluetooth" in lexicon.words
    assert "server" not in lexicon.words
    values, matched = lexicon.embed(["bluetooth", "router"])
    assert matched == ["bluetooth"]
    assert values == lexicon.scores("bluetooth")
    again = cvetriage.SignatureLexicon.load(lexicon.save())
    assert again.words == lexicon.words


def test_hashed_bow_is_unit_length():
    v = cvetriage.hashed_bow(["sql", "inject", "sql"], 64)
    assert len(v) == 64
    assert sum(x * x for x in v) == pytest.approx(1.0)


def test_cwe_tree_mask():
    tree = cvetriage.CweTree.from_csv(
        "child_id,parent_id,child_level\n707,,1\n664,,1\n89,707,2\n79,707,2\n22,664,2\n")
    assert tree.depth == 2
    assert tree.nodes_at(2) == [22, 79, 89]
    assert tree.mask(2, [707]) == [0, 1, 1]
    assert tree.mask(1) == [1, 1]


def test_vt_map():
    assert cvetriage.map_cwe_to_vt(89) == [16]
    assert cvetriage.map_cwe_to_vt(776) == [11, 12]
    assert len(cvetriage.vt_types()) == 27


def test_metrics():
    report = cvetriage.f1_report([("a", "a"), ("a", "b"), ("b", "b")], ["a", "b"])
    assert report["macro_f1"] == pytest.approx(2 / 3)
    assert report["micro_f1"] == pytest.approx(2 / 3)
    assert report["confusion"] == [[1, 1], [0, 1]]
    top = cvetriage.topk_metrics([({"x"}, ["y", "x"])], 2)
    assert (top["hit_rate"], top["precision"], top["recall"]) == (1.0, 0.5, 1.0)
    assert cvetriage.multilabel_correct({89}, {89, 943})
    assert not cvetriage.multilabel_correct(set(), {89})


def test_config_hash_ignores_paths():
    a = cvetriage.config_hash(json.dumps({"output_dir": "/a", "seed": 1}))
    b = cvetriage.config_hash(json.dumps({"output_dir": "/b", "seed": 1}))
    c = cvetriage.config_hash(json.dumps({"seed": 2}))
    assert a == b != c
    with pytest.raises(cvetriage.InputError):
        cvetriage.config_hash(json.dumps({"sede": 1}))
