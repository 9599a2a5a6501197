"""The JSON command line, driven from Python.

Every command reads and writes JSON and reports through its exit code.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path


def run(*args):
    proc = subprocess.run([sys.executable, "-m", "sylvlike", *args],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout


with tempfile.TemporaryDirectory() as d:
    d = Path(d)
    code, out = run("--seed", "11", "gen", "--m", "3", "--kind", "condition_b",
                    "--operator", "transpose")
    (d / "p.json").write_text(out)
    print("gen -> exit", code)

    code, out = run("analyze", str(d / "p.json"))
    rep = json.loads(out)
    print(f"analyze -> exit {code}: {rep['condition_name']} holds={rep['holds']}")

    code, out = run("solve", "--method", "closed-form", str(d / "p.json"))
    rep = json.loads(out)
    print(f"solve -> exit {code}: method {rep['method']}, residual {rep['residual']:.1e}")

    one = {"rows": 1, "cols": 1, "re": [[1.0]]}
    (d / "x.json").write_text(json.dumps({"A": one, "B": one, "C": one,
                                          "operator": {"kind": "identity"}}))
    code, _ = run("analyze", str(d / "x.json"))
    print(f"analyze x + x = 1 -> exit {code} (condition fails, still solvable)")

    (d / "q.json").write_text(json.dumps({
        "A2": one, "A1": {"rows": 1, "cols": 1, "re": [[-2.5]]},
        "operator": {"kind": "transpose"}}))
    code, out = run("qep", str(d / "q.json"))
    print(f"qep -> exit {code}: pairs {json.loads(out)['pairs']}")
