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
import os
import pathlib
import shutil
import subprocess

import pytest

BIN = os.environ.get("CVETRIAGE_BIN", "cvetriage")
SAMPLE = pathlib.Path(os.environ.get("CVETRIAGE_SAMPLE_DATA", "data/sample"))
CVES = SAMPLE / "sample_cves.jsonl"
TREE = SAMPLE / "sample_cwe_tree.csv"
METRICS = ["AV", "AC", "PR", "UI", "S", "C", "I", "A"]


def run(*args, check=True):
    proc = subprocess.run([BIN, *map(str, args)], capture_output=True, text=True)
    if check and proc.returncode != 0:
        raise AssertionError(f"{args} exited {proc.returncode}: {proc.stderr}")
    return proc


def workflow(out):
    common = ["--output-dir", out, "--epochs", 3, "--tree", TREE]
    run("ingest", "--dataset", CVES, *common)
    run("build-lexicon", *common)
    run("train-cvss", *common)
    run("train-vt", *common)
    run("train-cwe", *common)
    run("evaluate", *common)
    return common


@pytest.fixture(scope="module")
def trained(tmp_path_factory):
    out = tmp_path_factory.mktemp("run")
    return out, workflow(out)


def test_score():
    assert run("score", "CVSS:3.1/AV:N/AC:L/PR:N/UI:N/S:U/C:H/I:H/A:H").stdout.strip() == "9.8 Critical"
    assert run("score", "AV:N/AC:L/PR:N/UI:N/S:U/C:N/I:N/A:N").stdout.strip() == "0.0 None"


def test_bad_input_exits_one(tmp_path):
    assert run("score", "AV:Q", check=False).returncode == 1
    assert run("train-cvss", "--output-dir", tmp_path, check=False).returncode == 1
    assert run("stats", "--epochs", "many", check=False).returncode == 1
    assert run("no-such-command", check=False).returncode != 0


def test_ingest_outputs(trained):
    out, _ = trained
    train = (out / "train.jsonl").read_text().splitlines()
    test = (out / "test.jsonl").read_text().splitlines()
    assert len(train) + len(test) == len((out / "dataset.jsonl").read_text().splitlines())
    assert json.loads((out / "ingest.json").read_text())["config_hash"]
    assert json.loads((out / "run_config.json").read_text())["epochs"] == 3


def test_predict_cvss_one_line_per_record(trained):
    out, common = trained
    lines = run("predict-cvss", *common).stdout.splitlines()
    test_ids = [json.loads(l)["id"] for l in (out / "test.jsonl").read_text().splitlines()]
    assert [json.loads(l)["id"] for l in lines] == test_ids
    for line in lines:
        row = json.loads(line)
        assert sorted(row["metrics"]) == sorted(METRICS)
        assert 0.0 <= row["base_score"] <= 10.0


def test_predict_vt_and_cwe(trained):
    _, common = trained
    vt = [json.loads(l) for l in run("predict-vt", *common).stdout.splitlines()]
    assert vt and all(1 <= t["vt"] <= 27 for row in vt for t in row["top"])
    cwe = [json.loads(l) for l in run("predict-cwe", *common).stdout.splitlines()]
    assert cwe and all("paths" in row["prediction"] for row in cwe)


def test_report(trained):
    out, _ = trained
    report = json.loads((out / "report.json").read_text())
    assert set(report["cvss"]["metrics"]) == set(METRICS)
    assert (out / "report" / "cvss_AV_confusion.csv").read_text().startswith("true\\predicted,")


def test_hash_mismatch_refused(trained, tmp_path):
    out, _ = trained
    copy = tmp_path / "copy"
    shutil.copytree(out, copy)
    common = ["--output-dir", copy, "--tree", TREE, "--epochs", 3]
    assert run("evaluate", *common, "--seed", 43, check=False).returncode == 1
    assert run("evaluate", *common, "--seed", 43, "--force").returncode == 0


def test_deterministic(trained, tmp_path):
    out, _ = trained
    workflow(tmp_path)
    for rel in ["models/cvss/AV.head.jsonl", "models/vt/VT.head.jsonl", "report.json"]:
        assert (out / rel).read_bytes() == (tmp_path / rel).read_bytes(), rel
