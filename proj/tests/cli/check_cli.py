"""End-to-end checks of the qswitch executable: exit codes, output bundle
layout, byte-identical reruns and the summary schema."""

import csv
import json
import os
import subprocess
import sys
import tempfile
from pathlib import Path

QSWITCH, SOURCE = Path(sys.argv[1]), Path(sys.argv[2])
CONFIG = SOURCE / "configs" / "default.toml"
SCHEMA = json.loads((SOURCE / "schemas" / "summary.schema.json").read_text())

failures = []


def run(*args, env=None, expect=0):
    full_env = {k: v for k, v in os.environ.items() if k != "SWITCH_SEED"}
    full_env.update(env or {})
    proc = subprocess.run([str(QSWITCH), *map(str, args)], capture_output=True, text=True, env=full_env)
    if proc.returncode != expect:
        failures.append(f"{' '.join(map(str, args))}: exit {proc.returncode}, expected {expect}\n{proc.stderr}")
    return proc


def check(cond, message):
    if not cond:
        failures.append(message)


def validate(path):
    try:
        import jsonschema
    except ImportError:
        print(f"jsonschema not available, skipped validating {path}")
        return
    try:
        jsonschema.validate(json.loads(path.read_text()), SCHEMA)
    except jsonschema.ValidationError as e:
        failures.append(f"{path}: {e.message}")


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)

    out = run("synth", "--axis", "x", "--angle", "180").stdout
    check("theta1" in out and "train" in out, "synth prints reduced angles and the train")
    run("synth", "--matrix", "1,0;0,1")
    run("synth", "--gate", "4")
    out = run("verify", "--gate", "4").stdout
    check("PASS" in out, "verify --gate 4 passes")
    run("verify", "--axis", "x", "--angle", "180", "--train", "HWP:0", expect=4)
    run("synth", "--matrix", "1,1;0,1", expect=2)
    run("synth", "--matrix", "1,0;0", expect=2)
    run("synth", expect=2)
    run("synth", "--gate", "12", expect=2)
    run("frobnicate", expect=2)
    run("discriminate", "--runs", "0", "--seed", "1", expect=2)
    run("discriminate", "--noise", CONFIG, "--ideal", expect=2)
    run("discriminate", expect=2)
    bad = tmp / "bad.toml"
    bad.write_text("tdc_splitting = 1.5\n")
    run("discriminate", "--noise", bad, "--seed", "1", "--out", tmp / "bad", expect=3)
    bad.write_text("unknown_key = 1\n")
    run("discriminate", "--noise", bad, "--seed", "1", "--out", tmp / "bad", expect=3)
    run("discriminate", "--noise", tmp / "missing.toml", "--seed", "1", expect=3)

    ideal = tmp / "ideal"
    run("discriminate", "--ideal", "--out", ideal)
    rows = read_csv(ideal / "success.csv")
    check(rows[0] == ["i", "j", "class", "p_s"], "success.csv header")
    check(len(rows) == 53 and all(r[3] == "1.000000000" for r in rows[1:]), "ideal p_s all 1")
    validate(ideal / "summary.json")

    a, b, c = tmp / "a", tmp / "b", tmp / "c"
    run("discriminate", "--noise", CONFIG, "--runs", "6", "--seed", "7", "--out", a)
    run("discriminate", "--noise", CONFIG, "--runs", "6", "--seed", "7", "--out", b)
    run("discriminate", "--noise", CONFIG, "--runs", "6", "--out", c, env={"SWITCH_SEED": "7"})
    for name in ["counts.csv", "success.csv", "success_runs.csv", "efficiency_fit.csv", "summary.json",
                 "config-echo.toml"]:
        check((a / name).read_bytes() == (b / name).read_bytes(), f"discriminate {name} differs across reruns")
        check((a / name).read_bytes() == (c / name).read_bytes(), f"discriminate {name} differs via SWITCH_SEED")
    counts = read_csv(a / "counts.csv")
    check(counts[0] == ["run", "i", "j", "class", "n_plus_H", "n_plus_V", "n_minus_H", "n_minus_V"],
          "counts.csv header")
    runs = read_csv(a / "success_runs.csv")
    check(len(runs) == 1 + 6 * 52, "6 x 52 per-run rows")
    summary = json.loads((a / "summary.json").read_text())
    check(0.98 <= summary["mean"] <= 1.0, f"noisy mean {summary['mean']} outside [0.98, 1]")
    validate(a / "summary.json")

    d = tmp / "d"
    run("discriminate", "--noise", CONFIG, "--runs", "6", "--seed", "8", "--out", d)
    check((a / "counts.csv").read_bytes() != (d / "counts.csv").read_bytes(), "different seeds give different counts")

    w = tmp / "w"
    out = run("witness", "--out", w).stdout
    check("1.000000000" in out and "0.538461538" in out, "witness values printed")
    validate(w / "summary.json")

    t1, t2 = tmp / "t1", tmp / "t2"
    run("tomo", "--unitaries", "100", "--seed", "3", "--out", t1)
    run("tomo", "--unitaries", "100", "--seed", "3", "--out", t2)
    for name in ["fidelity.csv", "reciprocity.csv", "histogram.csv", "summary.json", "config-echo.toml"]:
        check((t1 / name).read_bytes() == (t2 / name).read_bytes(), f"tomo {name} differs across reruns")
    check(read_csv(t1 / "fidelity.csv")[0] == ["index", "direction", "fidelity"], "fidelity.csv header")
    tomo = json.loads((t1 / "summary.json").read_text())
    for key in ["gate_fidelity_fw", "gate_fidelity_bw", "reciprocity"]:
        check(0.99 <= tomo[key]["mean"] <= 1.0, f"tomo {key} mean outside [0.99, 1]")
    validate(t1 / "summary.json")
    run("tomo", "--unitaries", "5", expect=2)

    t3 = tmp / "t3"
    run("tomo", "--noiseless", "--unitaries", "20", "--out", t3)
    fids = [float(r[2]) for r in read_csv(t3 / "fidelity.csv")[1:]]
    check(min(fids) >= 1 - 1e-9, "noiseless tomo fidelities are 1")
    validate(t3 / "summary.json")

for f in failures:
    print("FAIL:", f)
print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
