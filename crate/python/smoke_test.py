#!/usr/bin/env python3
"""Smoke test of the attractor_py extension module.

Build the module and place it next to this file first:

    cargo build -p attractor-py
    cp target/debug/libattractor_py.so python/attractor_py.so
"""

import json
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import attractor_py

UNIT_CHARGE = json.dumps(
    {
        "p0": "1",
        "P": [["0", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]],
        "Q": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        "q0": "0",
    }
)


def check(name, ok):
    print(f"{'ok' if ok else 'FAIL'}  {name}")
    if not ok:
        sys.exit(1)


# symmetric solve of the unit charge: T = i * Id, D = 4
rep = json.loads(attractor_py.solve_torus(UNIT_CHARGE))
sol = rep["solutions"][0]
diag = all(
    sol["A"][i][j] == {"a": "0", "b": "1" if i == j else "0", "D": 1}
    for i in range(3)
    for j in range(3)
)
check("solve_torus unit charge gives T = i*Id", diag)
check("invariant D = 4", rep["invariants"]["D"] == "4")
check("exact residuals vanish", all(r == ["0"] * 4 for r in rep["residuals"]))

# a charge with R negative definite has no attractor
bad = json.loads(UNIT_CHARGE)
bad["Q"] = [["-1", "0", "0"], ["0", "-1", "0"], ["0", "0", "-1"]]
try:
    attractor_py.solve_torus(json.dumps(bad))
    check("negated charge raises", False)
except ValueError:
    check("negated charge raises", True)

# period roundtrip
period = json.dumps(
    {
        "R": [["1", "0", "0"], ["0", "1", "0"], ["0", "0", "1"]],
        "D": 4,
        "N": [["0", "0", "0"], ["0", "0", "0"], ["0", "0", "0"]],
    }
)
rep = json.loads(attractor_py.invert_picard9(period))
check("invert_picard9 reproduces the period", rep["period_reproduced"] is True)

# E x S solve on a rank-2 lattice
lattice = json.dumps({"gram": [[2, 1], [1, 2]]})
vectors = json.dumps({"u1": [1, 0], "u2": [0, 1]})
rep = json.loads(attractor_py.solve_exs(lattice, vectors))
check("solve_exs isotropy", rep["self_pairing"] == {"a": "0", "b": "0", "D": rep["self_pairing"]["D"]})

# mass minimization lands on the exact attractor point
rep = json.loads(attractor_py.minimize_mass(UNIT_CHARGE, starts=8, seed=0))
t = rep["minimum"]["T"]
dist = max(
    abs(t[i][j]["re"]) + abs(t[i][j]["im"] - (1.0 if i == j else 0.0))
    for i in range(3)
    for j in range(3)
)
check("minimize_mass converges to T = i*Id", dist < 1e-6)

# A-model potentials
k = attractor_py.elliptic_potential(0.0, 1.0)
check("elliptic potential at tau = i is -log 2", abs(k + math.log(2.0)) < 1e-15)
k = attractor_py.quintic_potential(0.0, 50.0)
check("quintic potential is finite", math.isfinite(k))

# constellation points
points = json.loads(attractor_py.tau_set(lattice, 3))
check("tau_set returns points", len(points) > 0 and all(p["im"] > 0 for p in points))

# a fast verification suite
outcome = json.loads(attractor_py.verify("legendrian", seed=0))
check("legendrian suite passes", outcome["passed"] is True)

print("all smoke tests passed")
