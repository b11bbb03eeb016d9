#!/usr/bin/env python3
"""Drive the ordsoft binary end to end and validate every JSON it emits."""

import json
import pathlib
import shutil
import subprocess
import sys

import jsonschema
from referencing import Registry, Resource


def load_registry(schema_dir):
    schemas = {}
    for path in sorted(schema_dir.glob("*.schema.json")):
        doc = json.loads(path.read_text())
        schemas[doc["$id"]] = doc
    registry = Registry().with_resources(
        (sid, Resource.from_contents(doc)) for sid, doc in schemas.items())
    return schemas, registry


class Checker:
    def __init__(self, binary, schema_dir, work):
        self.binary = binary
        self.work = work
        self.schemas, self.registry = load_registry(schema_dir)
        self.failures = []

    def run(self, *args, expect=0):
        proc = subprocess.run([self.binary, *map(str, args)], cwd=self.work,
                              capture_output=True, text=True)
        if proc.returncode != expect:
            self.fail(f"{' '.join(map(str, args))}: exit {proc.returncode}, expected {expect}\n{proc.stderr}")
        return proc.stdout

    def validate(self, name, doc, label):
        schema = self.schemas[f"urn:ordsoft:schema:{name}"]
        validator = jsonschema.Draft202012Validator(schema, registry=self.registry)
        errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.path))
        for e in errors[:5]:
            self.fail(f"{label} vs {name}: {list(e.path)}: {e.message}")
        if not errors:
            print(f"ok   {label} ({name})")

    def fail(self, msg):
        self.failures.append(msg)
        print(f"FAIL {msg}")


def main():
    binary = pathlib.Path(sys.argv[1]).resolve()
    schema_dir = pathlib.Path(sys.argv[2]).resolve()
    work = pathlib.Path(sys.argv[3]).resolve()
    shutil.rmtree(work, ignore_errors=True)
    work.mkdir(parents=True)
    c = Checker(binary, schema_dir, work)

    # softlabels: CSV, rows sum to one.
    rows = [list(map(float, r.split(","))) for r in
            c.run("softlabels", "--classes", 4, "--strategy", "beta").strip().splitlines()]
    if len(rows) != 4 or any(abs(sum(r) - 1) > 1e-12 for r in rows):
        c.fail("softlabels beta matrix malformed")
    c.run("softlabels", "--classes", 4, "--strategy", "nominal", "--alpha", 0.1, expect=1)
    c.run("softlabels", "--classes", 4, "--strategy", "bogus", expect=1)

    c.validate("synth_output", json.loads(c.run(
        "synth", "--classes", 3, "--n-per-class", "30,30,30", "--dims", 4, "--seed", 1, "-o", "single.csv")),
        "synth")
    c.validate("synth_output", json.loads(c.run(
        "synth", "--paired", "--n", 200, "--dims", 4, "--separation", 2, "--seed", 2, "-o", "pair")),
        "synth --paired")

    c.validate("train_output", json.loads(c.run(
        "train", "--data", "single.csv", "--epochs", 20, "--patience", 5, "--strategy", "triangular",
        "-o", "model.json")), "train")
    c.validate("model", json.loads((work / "model.json").read_text()), "model.json")
    c.validate("metric_report", json.loads(c.run("evaluate", "--model", "model.json", "--data", "single.csv")),
               "evaluate --model")

    config = {
        "task": "kl", "dataset": "pair/task_a.csv", "strategies": ["nominal", "beta", "triangular"],
        "n_seeds": 5, "output_dir": "sweep",
        "search_space": {"max_configs": 2}, "train": {"max_epochs": 8, "patience": 4},
        "joint": {"task": "cppd", "dataset": "pair/task_b.csv"},
    }
    (work / "sweep.json").write_text(json.dumps(config))
    c.validate("experiment_config", config, "sweep input config")
    c.run("sweep", "--config", "sweep.json", "--workers", 1)
    out = work / "sweep"
    c.validate("experiment_config", json.loads((out / "config.json").read_text()), "config.json")
    for i, line in enumerate((out / "results.jsonl").read_text().splitlines()):
        c.validate("run_result", json.loads(line), f"results.jsonl line {i + 1}")
    summary = json.loads((out / "summary.json").read_text())
    c.validate("summary", summary, "summary.json")
    recomputed = json.loads(c.run("evaluate", "--results", out / "results.jsonl"))
    c.validate("summary", recomputed, "evaluate --results")
    if recomputed != summary:
        c.fail("summary.json is not reproduced from results.jsonl")
    c.validate("analysis", json.loads(c.run(
        "analyze", "--truth", out / "truth_table.csv", "--predicted", out / "tables" / "*_seed*.csv")), "analyze")

    # Runtime failures exit 2, usage failures exit 1.
    c.run("analyze", "--truth", out / "truth_table.csv", "--predicted", out / "tables" / "beta_seed*.csv", expect=2)
    c.run("analyze", "--truth", out / "truth_table.csv", "--predicted", work / "none_seed*.csv", expect=1)
    c.run("sweep", "--config", "sweep.json", "--n-seeds", 0, expect=1)

    if c.failures:
        print(f"{len(c.failures)} failure(s)")
        return 1
    print("all documents valid")
    return 0


if __name__ == "__main__":
    sys.exit(main())
