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
"""Vulnerability triage: CVSS scoring, signature lexicons, CWE trees, metrics."""

from ._core import (
    CweTree,
    InputError,
    InvariantError,
    SignatureLexicon,
    __version__,
    base_score,
    build_lexicon,
    config_hash,
    f1_report,
    fnv1a64,
    hashed_bow,
    ingest_jsonl,
    ingest_nvd_feed,
    map_cwe_to_vt,
    multilabel_correct,
    normalize_vector,
    porter_stem,
    severity_band,
    tokenize,
    topk_metrics,
    vt_types,
)

__all__ = [
    "CweTree",
    "InputError",
    "InvariantError",
    "SignatureLexicon",
    "__version__",
    "base_score",
    "build_lexicon",
    "config_hash",
    "f1_report",
    "fnv1a64",
    "hashed_bow",
    "ingest_jsonl",
    "ingest_nvd_feed",
    "map_cwe_to_vt",
    "multilabel_correct",
    "normalize_vector",
    "porter_stem",
    "severity_band",
    "tokenize",
    "topk_metrics",
    "vt_types",
]
