#!/usr/bin/env python3
"""End-to-end checks of the semistab command-line tool: outputs, exit codes, determinism."""
import json
import os
import subprocess
import sys
import tempfile

BIN, FIX = sys.argv[1], sys.argv[2]
failures = []


def run(*args):
    p = subprocess.run([BIN, *args], capture_output=True, text=True, timeout=240)
    return p.returncode, p.stdout, p.stderr


def fx(name):
    return os.path.join(FIX, name)


def check(name, cond, detail=""):
    print(("ok   " if cond else "FAIL ") + name + ("" if cond else ": " + detail))
    if not cond:
        failures.append(name)


def field(out, key):
    for line in out.splitlines():
        if line.startswith(key + " ") and len(line) > 16 and line[:16].strip() == key:
            return line[16:].strip()
    return None


code, out, err = run("gitnorm", "--input", fx("t2.json"), "--sigma", "1")
check("gitnorm value", code == 0 and field(out, "value") == "2.000000", out + err)

code, out, err = run("hsnorm", "--input", fx("square.json"))
check("hsnorm", code == 0 and field(out, "hs_norm") == "1.414214", out + err)

code, out, err = run("blockdecomp", "--verify", fx("intro.json"))
check("blockdecomp verify", code == 0 and out.splitlines()[0] == "PASS" and field(out, "D") == "[[0,1,1],[0,2,3]]", out + err)

code, out, err = run("blockdecomp", "--input", fx("sec61.json"))
check("blockdecomp eliminate", code == 0 and field(out, "D") == "[[0,1,2],[0,1,3]]", out + err)

code, out, err = run("radon", "--exponents", "--n", "3", "--n1", "3", "--k", "2")
check("radon exponents", code == 0 and out.splitlines()[0] == "5/3 5/3", out + err)

code, out, err = run("radon", "--exponents", "--n", "2", "--n1", "3", "--k", "2")
check("radon exponents invalid", code == 1, out + err)

code, out, err = run("radon", "--input", fx("parabola.json"))
check("radon parabola positive", code == 0 and field(out, "verdict") == "positive", out + err)

code, out, err = run("radon", "--input", fx("flat.json"))
check("radon flat unstable", code == 0 and field(out, "verdict") == "unstable", out + err)

code, out, err = run("radon", "--input", fx("parabola_set.json"))
check("radon balanced set", code == 0 and field(out, "r") == "3/2" and field(out, "target") == "3", out + err)

code, out, err = run("semistable", "--input", fx("unit111.json"))
check("semistable unit", code == 0 and field(out, "state") == "positive", out + err)

code, out, err = run("destabilize", "--input", fx("sec63_subtile.json"), "--sigma", "1/5")
check("destabilize subtile", code == 0 and field(out, "margin") is not None, out + err)

code, out, err = run("polytope", "--input", fx("t2.json"), "--sigma", "1")
check("polytope member", code == 0 and field(out, "member") == "yes", out + err)

code, out, err = run("tiles", "--input", fx("sec61.json"))
check("tiles", code == 0, out + err)

code, out, err = run("plan", "--input", fx("sec61.json"))
check("plan", code == 0 and field(out, "tau") is not None, out + err)

code, out, err = run("sublevel", "--input", fx("sec61.json"), "--tau", "9/13", "--samples", "2000", "--omegas", "2", "--scale-max", "8")
check("sublevel", code == 0 and field(out, "max estimate") is not None, out + err)

# Determinism: identical flags give byte-identical reports and tables.
with tempfile.TemporaryDirectory() as tmp:
    for verb, args in [
        ("gitnorm", ["--input", fx("sec63_subtile.json"), "--sigma", "1/3", "--restarts", "8"]),
        ("sublevel", ["--input", fx("sec61.json"), "--tau", "9/13", "--samples", "3000", "--omegas", "2", "--scale-max", "4"]),
        ("semistable", ["--input", fx("sec63_subtile.json"), "--sigma", "1/5"]),
    ]:
        outs = []
        for k in range(2):
            path = os.path.join(tmp, f"{verb}{k}.json")
            code, out, err = run(verb, *args, "--out", path)
            with open(path, "rb") as f:
                outs.append((code, out, f.read()))
        check(f"{verb} byte-identical", outs[0] == outs[1], "reports differ")
        json.loads(outs[0][2])

    bad = os.path.join(tmp, "bad.json")
    with open(bad, "w") as f:
        f.write('{"p": 1, "q": 1,\n "d": 1, "entries": [[[{"alpha": [1], "num": 1,, "den": 1}]]]}\n')
    code, out, err = run("hsnorm", "--input", bad)
    check("malformed json exit 1", code == 1, out + err)
    check("malformed json position", "line 2" in err and "column" in err, err)

    wrong = os.path.join(tmp, "wrong.json")
    with open(wrong, "w") as f:
        json.dump({"p": 1, "q": 1, "d": 1, "entries": [[[{"alpha": [1, 2], "num": 1, "den": 1}]]]}, f)
    code, out, err = run("hsnorm", "--input", wrong)
    check("schema error exit 1", code == 1 and "/entries/0/0/0" in err, err)

    closed = os.path.join(tmp, "notclosed.json")
    with open(closed, "w") as f:
        json.dump({"M": {"p": 1, "q": 2, "d": 1, "entries": [[[{"alpha": [1], "num": 1, "den": 1}], [{"alpha": [0], "num": 1, "den": 1}]]]}}, f)
    code, out, err = run("blockdecomp", "--input", closed)
    check("not derivative-closed exit 1", code == 1 and "column 0" in err, err)

code, out, err = run("gitnorm", "--input", fx("t2.json"), "--sigma", "1", "--bogus")
check("unknown option exit 1", code == 1, out + err)

code, out, err = run("frobnicate")
check("unknown verb exit 1", code == 1, out + err)

code, out, err = run("gitnorm", "--input", fx("t2.json"))
check("missing sigma exit 1", code == 1, out + err)

code, out, err = run("gitnorm", "--input", fx("does-not-exist.json"), "--sigma", "1")
check("missing file exit 1", code == 1, out + err)

print(f"{len(failures)} failure(s)")
sys.exit(1 if failures else 0)
