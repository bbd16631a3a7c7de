"""Minimum equicut: a certified lower bound from an ill-posed relaxation.

The semidefinite relaxation has no interior, so no finite upper bound can be
certified from it.  The lower bound survives, because every feasible matrix
has its largest eigenvalue at most n.
"""

import numpy as np

from certicone.bounds import upper_bound
from certicone.cones import UpperBoundY
from certicone.equicut import (brute_force, cut_value, heuristic_partition, laplacian, random_graph,
                               relaxation, rigorous_lower)
from certicone.sdpmat import SymMatrix

g = random_graph(10, seed=4)
best, part = brute_force(g)
print("optimum by enumeration:", best, " partition:", part.x)

n = g.n
# a cheap dual guess: penalize the all-ones direction, then shift by the
# smallest eigenvalue so the slack is (nearly) semidefinite
L = laplacian(g).mid()
t = float(L.sum()) + 1.0
shift = float(np.linalg.eigvalsh(L / 4 + t * np.ones((n, n)))[0])
guess = np.append(np.full(n, shift), -t)
for label, y in (("zero dual", np.zeros(n + 1)), ("eigenvalue dual", guess)):
    print(f"{label:>15}: lower bound {rigorous_lower(g, y):.6f}")
print("heuristic cut:", cut_value(g, heuristic_partition(g)))

p = relaxation(g)
X = SymMatrix.from_dense(np.eye(n)).data
print("relaxation upper bound:", upper_bound(p, X, UpperBoundY(np.full(n + 1, 1e3))).value)
