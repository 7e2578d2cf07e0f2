#!/usr/bin/env python3
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
"""Writes the synthetic CVE corpus and CWE tree used by the CLI tests."""

import argparse
import json
import pathlib
import random

# (CWE, description template) per weakness family.
FLAWS = [
    (89, "SQL injection in the {comp} login form allows {who} to execute arbitrary SQL commands via the {param} parameter"),
    (79, "Cross-site scripting in the {comp} search page allows {who} to inject arbitrary web script or HTML via the {param} field"),
    (77, "Command injection in the {comp} diagnostic tool allows {who} to execute shell commands via a crafted {param} value"),
    (22, "Directory traversal in the {comp} file download handler allows {who} to read arbitrary files via dot dot sequences in {param}"),
    (400, "Uncontrolled resource consumption in the {comp} parser allows {who} to cause a denial of service via a large {param} payload"),
    (787, "Out-of-bounds write in the {comp} image decoder allows {who} to corrupt memory via a malformed {param} header"),
    (287, "Improper authentication in the {comp} management interface allows {who} to bypass login via a forged {param} token"),
    (352, "Cross-site request forgery in the {comp} settings page allows {who} to change the administrator password via {param}"),
]

TREE = [
    (707, None, 1), (664, None, 1), (284, None, 1),
    (89, 707, 2), (79, 707, 2), (77, 707, 2),
    (22, 664, 2), (400, 664, 2), (787, 664, 2),
    (287, 284, 2), (352, 284, 2),
]

# (AV value, phrase, weight)
VECTORS = [("N", "remote attackers", 60), ("A", "attackers on the adjacent bluetooth network", 15),
           ("L", "local users", 20), ("P", "attackers with physical access through a usb dongle", 5)]
COMPONENTS = ["webmail", "router firmware", "print server", "content manager", "media player",
              "vpn gateway", "billing portal", "camera firmware", "wiki engine", "backup agent"]
PARAMS = ["id", "name", "query", "path", "callback", "session", "upload", "lang"]


def vector_for(flaw_cwe, av, rng):
    ac = "H" if rng.random() < 0.15 else "L"
    pr = rng.choice(["N", "N", "L", "H"])
    ui = "R" if flaw_cwe in (79, 352) else "N"
    scope = "C" if flaw_cwe == 79 else "U"
    if flaw_cwe == 400:
        cia = ("N", "N", "H")
    elif flaw_cwe in (79, 352):
        cia = ("L", "L", "N")
    elif flaw_cwe == 22:
        cia = ("H", "N", "N")
    else:
        cia = ("H", "H", "H")
    return "CVSS:3.1/AV:{}/AC:{}/PR:{}/UI:{}/S:{}/C:{}/I:{}/A:{}".format(av, ac, pr, ui, scope, *cia)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", type=pathlib.Path, required=True)
    parser.add_argument("--count", type=int, default=320)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()
    rng = random.Random(args.seed)
    args.out.mkdir(parents=True, exist_ok=True)

    lines = []
    for i in range(args.count):
        cwe, template = rng.choice(FLAWS)
        av, who, _ = rng.choices(VECTORS, weights=[v[2] for v in VECTORS])[0]
        text = template.format(comp=rng.choice(COMPONENTS), who=who, param=rng.choice(PARAMS))
        if rng.random() < 0.3:
            text += " in versions before {}.{}".format(rng.randint(1, 9), rng.randint(0, 20))
        record = {"id": "CVE-2021-{:05d}".format(10000 + i), "description": text,
                  "cvss_vector": vector_for(cwe, av, rng), "cwe_ids": ["CWE-{}".format(cwe)]}
        lines.append(json.dumps(record, sort_keys=True))
    (args.out / "sample_cves.jsonl").write_text("\n".join(lines) + "\n")

    rows = ["child_id,parent_id,child_level"]
    rows += ["CWE-{},{},{}".format(c, "" if p is None else "CWE-{}".format(p), lvl) for c, p, lvl in TREE]
    (args.out / "sample_cwe_tree.csv").write_text("\n".join(rows) + "\n")


if __name__ == "__main__":
    main()
