#!/usr/bin/env python3
# Copyright 2026 The colm Authors
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
"""Regenerates data/toy: a 60-item choice benchmark and a mock-only config.

Three mock experts each know the answers to one 20-item slice and reply
"I am not sure." to everything else. The server mock concatenates the client
answers it is shown; clients copy whatever guidance they receive.
"""

import json
import pathlib
import random

SLICES = [
    ("arithmetic", "arith", "You are an arithmetic specialist.", ["math", "arithmetic"]),
    ("geography", "geo", "You are a geography specialist.", ["geography", "maps"]),
    ("chemistry", "chem", "You are a chemistry specialist.", ["chemistry", "science"]),
]
PER_SLICE = 20
LETTERS = "ABCD"

SUMMARY_BEGIN = "Here are multiple responses from different perspectives: "
SUMMARY_END = ".\n\nPlease synthesize"
FINAL_BEGIN = "Here is the best answer synthesized from multiple perspectives:\n\n"
FINAL_END = "\n\nNow, refine your original response"


def main():
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "toy"
    out.mkdir(parents=True, exist_ok=True)
    rng = random.Random(20261015)

    items = []
    answers = {name: [] for name, *_ in SLICES}
    for name, tag, _, _ in SLICES:
        for i in range(PER_SLICE):
            marker = f"[{tag}-{i:02d}]"
            gold = rng.choice(LETTERS)
            choices = [{"letter": l, "text": f"option {l.lower()} for {tag} {i}"} for l in LETTERS]
            items.append({
                "id": f"{tag}-{i:02d}",
                "question": f"{marker} Which option is correct for {name} question {i}?",
                "answer_type": "choice",
                "gold": gold,
                "choices": choices,
            })
            answers[name].append((marker, f"The answer is ({gold})."))

    with open(out / "toy_bench.jsonl", "w") as f:
        for item in items:
            f.write(json.dumps(item, sort_keys=True) + "\n")

    mocks = {}
    clients = []
    for name, _, role, tags in SLICES:
        rules = [{"last_user": "refine your original response",
                  "reply": {"between": [FINAL_BEGIN, FINAL_END]}}]
        rules += [{"last_user": marker, "reply": reply} for marker, reply in answers[name]]
        model_id = f"{name}-expert"
        mocks[model_id] = {"rules": rules, "default": "I am not sure."}
        clients.append({"name": f"{name}_expert", "role_prompt": role,
                        "backend": {"kind": "mock", "model_id": model_id},
                        "domain_tags": tags})
    mocks["concat-server"] = {
        "rules": [{"last_user": SUMMARY_BEGIN, "reply": {"between": [SUMMARY_BEGIN, SUMMARY_END]}}],
        "default": "I am not sure.",
    }

    config = {
        "clients": clients,
        "server": {"kind": "mock", "model_id": "concat-server"},
        "scale_map": {"toy_bench": {"divisor": 100}},
        "run": {"k": 3, "max_rounds": 1},
        "mocks": mocks,
    }
    with open(out / "config.json", "w") as f:
        json.dump(config, f, indent=2, sort_keys=True)
        f.write("\n")


if __name__ == "__main__":
    main()
