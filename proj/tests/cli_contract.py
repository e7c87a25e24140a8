"""Exit-code matrix and report schema checks for the bzcert executable."""
import csv
import json
import subprocess
import sys
import tempfile
from pathlib import Path

import jsonschema

BIN, SCHEMA = sys.argv[1], Path(sys.argv[2])
validator = jsonschema.Draft202012Validator(json.loads(SCHEMA.read_text()))
failures = []


def run(*args):
    proc = subprocess.run([BIN, *args], capture_output=True, text=True, timeout=900)
    return proc.returncode, proc.stdout, proc.stderr


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name + (f" ({detail})" if detail and not cond else ""))
    if not cond:
        failures.append(name)


def check_report(name, text, code):
    try:
        report = json.loads(text)
    except json.JSONDecodeError as e:
        check(name + ": report is JSON", False, str(e))
        return None
    errors = sorted(validator.iter_errors(report), key=lambda e: list(e.path))
    check(name + ": report matches schema", not errors, errors[0].message if errors else "")
    check(name + ": report exit code", report.get("exit_code") == code, report.get("exit_code"))
    check(name + ": verdict", report.get("verdict") == ("PASS" if code == 0 else "FAIL"))
    return report


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    table = tmp / "table.txt"
    table.write_text("# a_d for d = 1, 2, 3\n1 4 9\nextend: d^2\n")

    matrix = [
        ("small pass", ["--stages", "3"], 0),
        ("table sequence", ["--stages", "3", "--sequence", f"@{table}"], 0),
        ("corrupt stage 2", ["--stages", "3", "--corrupt-stage", "2"], 2),
        ("precision cap 64", ["--precision-max", "64"], 3),
        ("one stage", ["--stages", "1"], 4),
        ("bad sequence", ["--sequence", "d^"], 4),
        ("small lambda", ["--lambda", "0.5"], 4),
        ("negative epsilon", ["--epsilon", "-1"], 4),
        ("start above cap", ["--precision", "512", "--precision-max", "256"], 4),
        ("ramified curve", ["--stages", "3", "--general-curve", "w2^2-w1"], 4),
        ("missing table", ["--sequence", f"@{tmp}/missing.txt"], 5),
        ("unwritable samples", ["--stages", "3", "--samples", "/nonexistent/dir/s.csv"], 5),
    ]
    for name, args, code in matrix:
        rc, out, err = run(*args)
        check(name + ": exit code", rc == code, f"got {rc}: {err.strip()[-200:]}")
        check_report(name, out, code)

    rc, out, err = run("--no-such-flag")
    check("unknown flag: exit code", rc == 4, rc)

    rc, out, err = run("--stages", "3", "--report", "/nonexistent/dir/r.json")
    check("unwritable report: exit code", rc == 5, rc)

    report_path, samples_path = tmp / "r.json", tmp / "s.csv"
    rc, out, err = run("--stages", "3", "--report", str(report_path), "--samples", str(samples_path),
                       "--resolution", "9")
    check("file outputs: exit code", rc == 0, err)
    check("file outputs: stdout empty", out == "")
    check("file outputs: summary on stderr", "PASS" in err)
    first = check_report("file outputs", report_path.read_text(), 0)
    with samples_path.open(newline="") as f:
        rows = list(csv.reader(f))
    check("samples header", rows[0] == ["kind", "w1_re", "w1_im", "w2_re", "w2_im"])
    kinds = [r[0] for r in rows[1:]]
    check("samples intersections", kinds.count("intersection") == 9)
    check("samples slice", kinds.count("curve-slice") == 9)

    args = ["--stages", "3", "--resolution", "9", "--report", "-"]
    runs = [json.loads(run(*args)[1]) for _ in range(2)]
    for r in runs:
        r.pop("timing")
    check("determinism apart from timing", json.dumps(runs[0]) == json.dumps(runs[1]))
    if first is not None:
        first.pop("timing")
        check("file report equals stdout report", first == runs[0])

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
