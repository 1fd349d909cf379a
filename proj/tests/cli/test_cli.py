"""Drives the relpos executable: exit codes, round trips, byte-stable output.

Usage: test_cli.py RELPOS_BINARY FIXTURE_DIR
"""

import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path

BINARY = sys.argv[1]
FIXTURES = Path(sys.argv[2])
failures = []


def run(*args, env=None):
    merged = dict(os.environ, **(env or {}))
    return subprocess.run([BINARY, *map(str, args)], capture_output=True, text=True, env=merged)


def expect(name, ok, detail=""):
    print(f"{'ok  ' if ok else 'FAIL'} {name} {detail}")
    if not ok:
        failures.append(name)


def main():
    r = run("decompose", FIXTURES / "remark.json")
    report = json.loads(r.stdout)
    expect("decompose remark", r.returncode == 0 and report["invariant_vector"] == [0, 0, 0, 1, 0, 0, 0, 1, 0])

    r = run("analyze", FIXTURES / "atom9.json", "--text")
    expect("analyze text", r.returncode == 0 and "double_triangle: true" in r.stdout)

    r = run("analyze", FIXTURES / "malformed.json")
    expect("malformed input exits 2", r.returncode == 2 and "spanning_vectors[0]" in r.stderr, r.stderr.strip())

    r = run("decompose", FIXTURES / "tilted_pair.json")
    expect("wrong arity exits 2", r.returncode == 2)

    r = run("pentagon", FIXTURES / "e2_equals_e3.json")
    expect("failed hypothesis exits 2", r.returncode == 2 and json.loads(r.stdout)["hypothesis"] == "E2 ≠ E3")

    r = run("pentagon", FIXTURES / "case_i.json")
    expect("pentagon case_i", r.returncode == 0 and json.loads(r.stdout)["case"] == "case_i")

    r = run("pentagon", "--example9", 40)
    rows = json.loads(r.stdout)["margins"] if r.returncode == 0 else []
    expect("example9 table", len(rows) > 1 and rows[-1]["n"] == 40 and float(rows[-1]["deviation"]) < 1e-9)

    r = run("generate", "--mult", "1,2,3", "-o", "/dev/null")
    expect("bad multiplicities exit 2", r.returncode == 2)

    r = run("frobnicate")
    expect("unknown subcommand exits 2", r.returncode == 2)

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        mult = "1,0,2,0,1,0,1,2,1"
        for tag in ("a", "b"):
            r = run("--seed", 17, "generate", "--mult", mult, "--cond", 20, "-o", tmp / f"{tag}.json")
            expect(f"generate {tag}", r.returncode == 0)
        expect("generate is byte-stable", (tmp / "a.json").read_bytes() == (tmp / "b.json").read_bytes())
        truth = json.loads((tmp / "a.truth.json").read_text())
        expect("sidecar vector", truth["vector"] == [int(x) for x in mult.split(",")])

        first = run("decompose", tmp / "a.json")
        second = run("decompose", tmp / "a.json")
        expect("decompose recovers sidecar", json.loads(first.stdout)["invariant_vector"] == truth["vector"])
        expect("decompose is byte-stable", first.stdout == second.stdout)

        r = run("isomorphic", tmp / "a.json", tmp / "b.json", "--emit-map")
        out = json.loads(r.stdout)
        expect("isomorphic copies", r.returncode == 0 and out["isomorphic"] and "map" in out)

        r = run("analyze", tmp / "a.json", env={"RELPOS_RANK_RTOL": "1e-7"})
        expect("environment tolerance", json.loads(r.stdout)["tolerance"]["rank_rtol"] == 1e-7)
        r = run("--rank-rtol", "1e-6", "analyze", tmp / "a.json", env={"RELPOS_RANK_RTOL": "1e-7"})
        expect("flag beats environment", json.loads(r.stdout)["tolerance"]["rank_rtol"] == 1e-6)

    if failures:
        print(f"{len(failures)} failing: {', '.join(failures)}")
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
