#!/usr/bin/env python3
"""Runs the CLI on the shipped configs, validates every report against the
printed schema, and checks reruns and exit codes."""

import json
import os
import subprocess
import sys
import tempfile

import jsonschema

CLI, ROOT = sys.argv[1], sys.argv[2]
CONFIGS = [
    ("norm", "norm_ip8.json"),
    ("natprop", "natprop.json"),
    ("learn", "learn_example.json"),
    ("distinguish", "distinguish_xor_maj.json"),
    ("game", "game_example.json"),
]
failures = []


def run(*args):
    return subprocess.run([CLI, *args], capture_output=True, text=True)


def report(command, config, seed, tmp, threads="1"):
    out = os.path.join(tmp, f"{command}-{seed}-{threads}.json")
    r = run(command, "--config", config, "--seed", str(seed), "--threads", threads, "--out", out)
    if r.returncode != 0:
        failures.append(f"{command}: exit {r.returncode}: {r.stderr.strip()}")
        return None
    with open(out) as f:
        return json.load(f)


def strip(doc):
    doc = dict(doc)
    doc.pop("timings", None)
    return json.dumps(doc, sort_keys=True)


schema = json.loads(run("--print-schema").stdout)
jsonschema.Draft7Validator.check_schema(schema)

with tempfile.TemporaryDirectory() as tmp:
    for command, name in CONFIGS:
        config = os.path.join(ROOT, "configs", name)
        a = report(command, config, 11, tmp)
        b = report(command, config, 11, tmp, threads="2")
        if a is None or b is None:
            continue
        try:
            jsonschema.validate(a, schema)
        except jsonschema.ValidationError as e:
            failures.append(f"{command}: schema: {e.message}")
        if a["command"] != command or a["seed"] != 11:
            failures.append(f"{command}: header fields")
        if strip(a) != strip(b):
            failures.append(f"{command}: rerun with a different thread count differs")

    ip = report("norm", os.path.join(ROOT, "configs", "norm_ip8.json"), 1, tmp)
    if ip and ip["results"]["norm"]["r2"]["denominator"] != "16":
        failures.append("norm: IP on 8 bits should give r2 = 1/16")

    bad_table = os.path.join(tmp, "bad.txt")
    with open(bad_table, "w") as f:
        f.write("n=3\n0101\n")
    bad_cfg = os.path.join(tmp, "bad.json")
    with open(bad_cfg, "w") as f:
        json.dump({"table_file": bad_table}, f)
    r = run("norm", "--config", bad_cfg)
    if r.returncode != 4 or "line 2" not in r.stderr:
        failures.append(f"malformed table: exit {r.returncode}, stderr {r.stderr.strip()!r}")

    xm6 = os.path.join(tmp, "xm6.json")
    with open(xm6, "w") as f:
        json.dump({"candidate": "xor-maj", "n": 6}, f)
    r = run("distinguish", "--config", xm6)
    if r.returncode != 1:
        failures.append(f"xor-maj n=6: exit {r.returncode}")

    if run().returncode != 2:
        failures.append("no subcommand should exit 2")

for f in failures:
    print("FAIL", f)
print("ok" if not failures else f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
