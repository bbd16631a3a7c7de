"""Regenerate tests/fixtures/equicut_duals.json.

Solves the dual of the equicut relaxation

    max sum(y[:n])  s.t.  L/4 - Diag(y[:n]) - y[n] e e^T  psd

with an off-the-shelf SDP solver for the test graphs, and stores the
approximate maximizers as hexadecimal floats.  Needs cvxpy (not a runtime
dependency).  Run from the repository root:

    python tools/make_equicut_fixtures.py
"""

import json
from pathlib import Path

import cvxpy as cp
import numpy as np

from certicone.equicut import laplacian, random_graph

SIZES = (4, 6, 8, 10, 12)
SEEDS = range(40)
OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "equicut_duals.json"


def solve_dual(g) -> np.ndarray:
    n = g.n
    L = laplacian(g).mid()
    y = cp.Variable(n)
    t = cp.Variable()
    D = L / 4 - cp.diag(y) - t * np.ones((n, n))
    prob = cp.Problem(cp.Maximize(cp.sum(y)), [(D + D.T) / 2 >> 0])
    prob.solve(solver=cp.CLARABEL)
    return np.append(y.value, t.value)


def main() -> None:
    records = []
    for n in SIZES:
        for seed in SEEDS:
            y = solve_dual(random_graph(n, seed))
            records.append({"n": n, "seed": seed, "y": [float(v).hex() for v in y]})
    OUT.write_text(json.dumps({"generator": "random_graph(n, seed)", "duals": records}, indent=1) + "\n")
    print(f"wrote {len(records)} duals to {OUT}")


if __name__ == "__main__":
    main()
