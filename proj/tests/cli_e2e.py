#!/usr/bin/env python3
"""End-to-end checks for the command-line tool: exit codes, JSON shapes,
error documents, preset handling, and byte determinism."""

import json
import subprocess
import sys
import tempfile
import os

BIN = sys.argv[1]
failures = 0


def run(args, text=""):
    proc = subprocess.run([BIN] + args, input=text.encode(), capture_output=True)
    return proc.returncode, proc.stdout.decode(), proc.stderr.decode()


def check(name, cond, context=""):
    global failures
    if cond:
        print(f"ok   {name}")
    else:
        failures += 1
        print(f"FAIL {name}  {context}")


STD2 = {
    "v": 1,
    "n": 2,
    "A": [[0, 0], [0, 0]],
    "B": [[0, 1], [-1, 0]],
}

ZERO2 = {"v": 1, "n": 2, "A": [[0, 0], [0, 0]], "B": [[0, 0], [0, 0]]}

# disc of the standard rank-2 form is the unit 1.
code, out, err = run(["disc", "--ring-preset", "q2i"], json.dumps(STD2))
check("disc exit 0", code == 0, err)
doc = json.loads(out)
check("disc value", doc.get("disc") == "1", out)
check("disc divided null for even rank", doc.get("disc_divided") is None, out)
check("disc nondegenerate", doc.get("nondegenerate") is True, out)

# Determinism: identical bytes on a second run.
code2, out2, _ = run(["disc", "--ring-preset", "q2i"], json.dumps(STD2))
check("disc deterministic", code2 == 0 and out2 == out)

# Output file matches stdout output.
with tempfile.TemporaryDirectory() as td:
    path = os.path.join(td, "out.json")
    code3, _, _ = run(["disc", "--ring-preset", "q2i", "-o", path], json.dumps(STD2))
    with open(path) as fh:
        check("disc -o file", code3 == 0 and fh.read() == out)

# validate: accepts the standard form, rejects a constraint violation.
code, out, err = run(["validate", "--ring-preset", "q2i"], json.dumps(STD2))
check("validate exit 0", code == 0, err)
check("validate true", json.loads(out).get("valid") is True, out)

bad = dict(STD2)
bad["B"] = [[1, 1], [-1, 0]]  # B_11 must equal t * A_11 = 0
code, out, err = run(["validate", "--ring-preset", "q2i"], json.dumps(bad))
check("validate exit 2 on constraint violation", code == 2, out + err)
check("validate error kind", json.loads(out)["error"]["kind"] == "ConstraintViolation", out)

# reduce: the zero form is degenerate -> exit 2 with a machine-readable error.
code, out, err = run(["reduce", "--ring-preset", "q2i"], json.dumps(ZERO2))
check("reduce exit 2 on zero form", code == 2, out + err)
check("reduce error kind", json.loads(out)["error"]["kind"] == "Degenerate", out)

# reduce on a real form emits a verified similitude.
code, out, err = run(["reduce", "--ring-preset", "q2i"], json.dumps(STD2))
check("reduce exit 0", code == 0, err)
doc = json.loads(out)
check("reduce checks", doc["checks"]["matrix_identity"] is True
      and doc["checks"]["basis_identity"] is True, out)

# malformed JSON -> exit 1.
code, out, err = run(["disc", "--ring-preset", "q2i"], "{ not json")
check("parse error exit 1", code == 1, out + err)

# unknown subcommand / missing subcommand -> exit 1.
code, out, err = run(["frobnicate"])
check("bad subcommand exit 1", code == 1)

# preset conflicts with an explicit ring field.
conflicted = dict(STD2)
conflicted["ring"] = {"kind": "zmod", "p": 2, "N": 6, "t": "2", "pi": "2"}
code, out, err = run(["disc", "--ring-preset", "q2i"], json.dumps(conflicted))
check("preset conflict exit 1", code == 1, out + err)

# Explicit ring without preset works.
code, out, err = run(["disc"], json.dumps(conflicted))
check("explicit ring exit 0", code == 0, out + err)

# similar: a form is similar to itself; rank mismatch is a domain error.
code, out, err = run(["similar", "--ring-preset", "q2i"],
                     json.dumps({"v": 1, "form1": dict(n=STD2["n"], A=STD2["A"], B=STD2["B"]),
                                 "form2": dict(n=STD2["n"], A=STD2["A"], B=STD2["B"])}))
check("similar exit 0", code == 0, out + err)
doc = json.loads(out)
check("similar true with witness", doc["similar"] is True and doc["similitude"] is not None, out)

ONE = {"n": 1, "A": [[1]], "B": [[2]]}
code, out, err = run(["similar", "--ring-preset", "q2i"],
                     json.dumps({"v": 1, "form1": ONE,
                                 "form2": dict(n=STD2["n"], A=STD2["A"], B=STD2["B"])}))
check("similar rank mismatch exit 2", code == 2, out + err)
check("similar rank mismatch kind", json.loads(out)["error"]["kind"] == "RankMismatch", out)

# series: pi - [t] over the F9 model is primitive of degree 1.
SER = {
    "v": 1, "q": 9, "p": 3, "maxden": 1, "prec": 3,
    "coeffs": [[["2", "1/1"]], [["1", "0/1"]], []],
}
code, out, err = run(["series"], json.dumps(SER))
check("series exit 0", code == 0, err)
doc = json.loads(out)
check("series primitive degree", doc["primitive_degree"] == 1, out)
check("series distinguished", doc["distinguished_deg1"] is True, out)
check("series weierstrass present", doc["weierstrass"] is not None, out)
check("series polygon", doc["newton_polygon"]["segments"] == [["1/1", 1]], out)

# factor: the worked quadratic splits into roots t and t^2.
QUAD = {
    "v": 1, "q": 9, "p": 3, "maxden": 1, "prec": 4,
    "coeffs": [
        [["1", "3/1"]],                  # [t^3]
        [["2", "1/1"], ["2", "2/1"]],    # -([t] + [t^2])
        [["1", "0/1"]],                  # 1
        [],
    ],
}
code, out, err = run(["factor"], json.dumps(QUAD))
check("factor exit 0", code == 0, err)
doc = json.loads(out)
check("factor complete", doc["complete"] is True, out)
roots = [r["root"] for r in doc["roots"]]
check("factor roots", roots == [[["1", "1/1"]], [["1", "2/1"]]], out)

# factor on a crystalline series is a domain error.
CRYS = {"v": 1, "q": 9, "p": 3, "maxden": 1, "prec": 3,
        "coeffs": [[["1", "1/1"]], [["1", "1/1"]], []]}
code, out, err = run(["factor"], json.dumps(CRYS))
check("factor not primitive exit 2", code == 2, out + err)
check("factor not primitive kind", json.loads(out)["error"]["kind"] == "NotPrimitive", out)

# cochar-sp: the coordinate swap has coinvariants Z, sp adds the coordinates.
code, out, err = run(["cochar-sp"],
                     json.dumps({"v": 1, "rank": 2,
                                 "generators": [[[0, 1], [1, 0]]], "mu": [3, 4]}))
check("cochar-sp exit 0", code == 0, err)
doc = json.loads(out)
check("cochar-sp free rank", doc["free_rank"] == 1, out)
check("cochar-sp torsion", doc["torsion"] == [], out)
check("cochar-sp class", [abs(v) for v in doc["sp"]["free"]] == [7], out)

# Missing version field -> exit 1.
code, out, err = run(["disc", "--ring-preset", "q2i"],
                     json.dumps({k: v for k, v in STD2.items() if k != "v"}))
check("missing v exit 1", code == 1, out + err)

print(f"\n{failures} failure(s)")
sys.exit(1 if failures else 0)
