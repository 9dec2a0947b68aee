"""Runs the ljscat executable and checks its JSON against the shipped schemas and its CSV shape."""

import csv
import io
import json
import math
import pathlib
import subprocess
import sys

import jsonschema


def run(exe, *args, expect=0):
    proc = subprocess.run([exe, *args], capture_output=True, text=True, check=False)
    if proc.returncode != expect:
        sys.exit(f"{' '.join(args)}: exit {proc.returncode}, expected {expect}\n{proc.stderr}")
    return proc.stdout


def main():
    exe, schema_dir = sys.argv[1], pathlib.Path(sys.argv[2])
    schemas = {p.stem.split(".")[0]: json.loads(p.read_text()) for p in schema_dir.glob("*.schema.json")}
    for schema in schemas.values():
        jsonschema.Draft202012Validator.check_schema(schema)

    documents = [
        ("compute", run(exe, "compute", "--s", "6", "--sqrt-lambda", "10"), 0),
        ("compute", run(exe, "compute", "--s", "5", "--lambda", "20", "--method", "both"), 0),
        ("compute", run(exe, "compute", "--s", "4", "--sqrt-lambda", "3", "--method", "oracle"), 0),
        ("compute", run(exe, "compute", "--s", "6", "--sqrt-lambda", "4.728696", "--digits", "6", expect=2), 2),
        ("roots", run(exe, "roots", "--s", "6", "--count", "2"), 0),
        ("roots", run(exe, "roots", "--s", "7", "--kind", "zeros", "--count", "11", "--digits", "3", expect=1), 1),
        ("fit", run(exe, "fit", "--s", "7", "--count", "4"), 0),
    ]
    for name, text, _ in documents:
        jsonschema.validate(json.loads(text), schemas[name], cls=jsonschema.Draft202012Validator)

    scan = run(exe, "scan", "--s", "6", "--sqrt-lambda-min", "1", "--sqrt-lambda-max", "13", "--steps", "24")
    rows = list(csv.reader(io.StringIO(scan)))
    assert rows[0] == ["sqrt_lambda", "a_over_r0", "atan_a"], rows[0]
    assert len(rows) == 26, len(rows)
    poles = 0
    for x, a, t in rows[1:]:
        float(x)
        if a == "pole":
            poles += 1
            assert t in ("1.5707963", "-1.5707963"), t
        else:
            assert abs(float(t)) < math.pi / 2
            assert abs(float(t) - math.atan(float(a))) < 1e-12
    assert poles == 2, poles
    assert "\r" not in scan

    table = list(csv.reader(io.StringIO(run(exe, "roots", "--s", "4", "--count", "2", "--format", "csv"))))
    assert table[0] == ["kind", "index", "sqrt_lambda", "certified_err"], table[0]
    assert [r[0] for r in table[1:]] == ["zero", "pole", "zero", "pole"], table
    print(f"{len(documents)} JSON documents and 2 CSV tables conform")


if __name__ == "__main__":
    main()
