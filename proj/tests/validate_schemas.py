#!/usr/bin/env python3
"""Validate shipped scenarios and the reports the CLI writes for them."""

import json
import pathlib
import subprocess
import sys

import jsonschema


def main(schema_dir: str, scenario_dir: str, cli: str) -> int:
    schemas = pathlib.Path(schema_dir)
    scenario_schema = json.loads((schemas / "scenario.schema.json").read_text())
    report_schema = json.loads((schemas / "report.schema.json").read_text())
    for schema in (scenario_schema, report_schema):
        jsonschema.Draft202012Validator.check_schema(schema)
    scenario_validator = jsonschema.Draft202012Validator(scenario_schema)
    report_validator = jsonschema.Draft202012Validator(report_schema)

    failures = 0
    files = sorted(pathlib.Path(scenario_dir).glob("*.json"))
    for path in files:
        errors = list(scenario_validator.iter_errors(json.loads(path.read_text())))
        for e in errors:
            print(f"{path.name}: {e.json_path}: {e.message}")
        failures += bool(errors)
        for sub in ("verify", "compat"):
            run = subprocess.run([cli, sub, str(path)], capture_output=True, text=True)
            if run.returncode not in (0, 1):
                print(f"{path.name} {sub}: exit {run.returncode}: {run.stderr.strip()}")
                failures += 1
                continue
            errors = list(report_validator.iter_errors(json.loads(run.stdout)))
            for e in errors:
                print(f"{path.name} {sub} report: {e.json_path}: {e.message}")
            failures += bool(errors)

    bad = {"checks": ["no_such_check"], "seed": "1", "samples": "1", "field": {"kind": "prime", "p": "2"}}
    if scenario_validator.is_valid(bad):
        print("schema accepted an unknown check name")
        failures += 1
    if scenario_validator.is_valid({**bad, "checks": ["gp_axioms"], "seed": 1}):
        print("schema accepted a numeric seed")
        failures += 1

    print(f"{len(files)} scenarios, {failures} failures")
    return 1 if failures else 0


if __name__ == "__main__":
    if len(sys.argv) != 4:
        sys.exit("usage: validate_schemas.py SCHEMA_DIR SCENARIO_DIR CLI")
    sys.exit(main(*sys.argv[1:]))
