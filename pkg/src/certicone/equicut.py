"""Minimum equicut: its semidefinite relaxation and rigorous bounds.

For a graph with even vertex count ``n`` and weight matrix ``W`` the equicut
problem is

    min  sum_{i<j} w_ij (1 - x_i x_j) / 2   over  x in {-1, +1}^n,  sum x = 0.

With ``X = x x^T`` and the Laplacian ``L = Diag(W e) - W`` this relaxes to

    min <L/4, X>  s.t.  diag(X) = e,  <e e^T, X> = 0,  X psd.

The relaxation has no interior point (``e e^T`` kills every feasible ``X`` in
direction ``e``), so its upper bound is useless, while the lower bound with
the natural cap ``lambda_max(X) <= n`` stays finite for every dual guess.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .bounds import ConicProblem
from .cones import ConeSpec
from .errors import ShapeError
from .interval import Interval, add_rd, as_interval, mul_rd, sum_rd, sum_ru
from .sdpmat import pack_indices

__all__ = ["WeightedGraph", "Partition", "laplacian", "relaxation", "rigorous_lower",
           "default_xbar", "cut_value", "brute_force", "heuristic_partition", "accuracy_mu",
           "random_graph"]

MAX_BRUTE_FORCE = 20


@dataclass(frozen=True, eq=False)
class WeightedGraph:
    """Undirected graph on ``n`` (even) vertices with symmetric weights.

    ``w`` is an :class:`Interval` matrix so that decimal weights can be held
    as enclosures; integer or float weights are stored as points.
    """

    n: int
    w: Interval

    def __post_init__(self):
        w = as_interval(self.w)
        object.__setattr__(self, "w", w)
        n = int(self.n)
        if n < 2 or n % 2:
            raise ValueError(f"vertex count must be even and positive, got {n}")
        if w.shape != (n, n):
            raise ShapeError(f"weight matrix has shape {w.shape}, expected ({n}, {n})")
        if not (np.array_equal(w.lo, w.lo.T) and np.array_equal(w.hi, w.hi.T)):
            raise ValueError("weight matrix is not symmetric")
        if np.any(np.diag(w.lo) != 0) or np.any(np.diag(w.hi) != 0):
            raise ValueError("weight matrix must have a zero diagonal")
        if not (np.all(np.isfinite(w.lo)) and np.all(np.isfinite(w.hi))):
            raise ValueError("weights must be finite")

    @classmethod
    def from_edges(cls, n: int, edges) -> "WeightedGraph":
        """Build from ``(i, j, weight)`` triples, 0-based; weights may be Intervals."""
        lo = np.zeros((n, n))
        hi = np.zeros((n, n))
        for i, j, wt in edges:
            wi = as_interval(wt)
            lo[i, j] = lo[j, i] = float(wi.lo)
            hi[i, j] = hi[j, i] = float(wi.hi)
        return cls(n, Interval(lo, hi))

    @property
    def is_point(self) -> bool:
        return self.w.is_point


@dataclass(frozen=True, eq=False)
class Partition:
    """A balanced bipartition as a sign vector."""

    x: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.int64).reshape(-1)
        if not np.all(np.abs(x) == 1):
            raise ValueError("partition entries must be +1 or -1")
        if int(x.sum()) != 0:
            raise ValueError("partition violates the parity condition sum(x) = 0")
        x.setflags(write=False)
        object.__setattr__(self, "x", x)


def random_graph(n: int, seed: int, wmax: int = 10, density: float = 0.6) -> WeightedGraph:
    """Random graph with integer weights in ``[1, wmax]`` on a random edge set."""
    rng = np.random.default_rng([5, n, int(seed)])
    W = rng.integers(1, wmax + 1, size=(n, n)) * (rng.random((n, n)) < density)
    W = np.triu(W, 1)
    W = W + W.T
    return WeightedGraph(n, Interval(W.astype(np.float64)))


def laplacian(g: WeightedGraph) -> Interval:
    """``Diag(W e) - W`` as a dense interval matrix (exact for modest integers)."""
    W = g.w
    degrees = W.sum(axis=1)
    L = -W
    for i in range(g.n):
        L = L.set((i, i), degrees[i])
    return L


def _packed(M: Interval) -> Interval:
    rows, cols = pack_indices(M.shape[0])
    return M[rows, cols]


def relaxation(g: WeightedGraph) -> ConicProblem:
    """The SDP relaxation as a :class:`ConicProblem` (flagged ill-posed)."""
    n = g.n
    spec = ConeSpec(sdp_orders=(n,))
    rows, cols = pack_indices(n)
    A = np.zeros((n + 1, spec.dim))
    for i in range(n):
        A[i, np.flatnonzero((rows == i) & (cols == i))] = 1.0
    A[n, :] = 1.0
    b = np.append(np.ones(n), 0.0)
    c = _packed(laplacian(g) * 0.25)
    return ConicProblem(spec, Interval(A), Interval(b), c, ill_posed=True,
                        name=f"equicut-relaxation-n{n}")


def default_xbar(g: WeightedGraph) -> float:
    """The cap ``lambda_max(X) <= n`` valid for every feasible ``X``."""
    return float(g.n)


def rigorous_lower(g: WeightedGraph, y) -> float:
    """Rigorous lower bound on the equicut optimum from a dual guess ``y``.

    ``sum(y[:n]) + l * n * d_neg`` rounded downward, where ``d_neg`` bounds
    the smallest eigenvalue of ``D = L/4 - Diag(y[:n]) - y[n] e e^T`` from
    below and ``l`` counts the possibly negative eigenvalues.  Valid for any
    finite ``y``.
    """
    n = g.n
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.shape != (n + 1,):
        raise ShapeError(f"dual guess has length {y.size}, expected {n + 1}")
    if not np.all(np.isfinite(y)):
        raise ValueError("dual guess has non-finite entries")
    D = laplacian(g) * 0.25 - Interval(np.full((n, n), y[n])) - Interval(np.diag(y[:n]))
    enc = linalg.eig_enclose(D)
    base = float(sum_rd(y[:n]))
    if enc.d_neg == 0.0:
        return base
    term = float(mul_rd(mul_rd(float(enc.l), float(n)), enc.d_neg))
    return float(add_rd(base, term))


def cut_value(g: WeightedGraph, p: Partition) -> float:
    """Weight of the cut, rounded upward (exact for integer weights)."""
    x = p.x
    if x.shape != (g.n,):
        raise ShapeError(f"partition has length {x.size}, expected {g.n}")
    cut = np.triu(np.not_equal.outer(x, x), 1)
    return float(sum_ru(g.w.hi[cut]))


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("CERTICONE_THREADS", "1")))
    except ValueError:
        return 1


def _chunk_best(W: np.ndarray, combos: np.ndarray, n: int, tol: float):
    x = -np.ones((len(combos), n))
    x[:, 0] = 1.0
    x[np.arange(len(combos))[:, None], combos] = 1.0
    # sum over cut edges = (total - x^T W x / 2) / 2
    quad = np.einsum("ki,ij,kj->k", x, W, x)
    vals = (W.sum() / 2 - quad / 2) / 2
    keep = vals <= vals.min() + 2 * tol
    return x[keep].astype(np.int64)


def brute_force(g: WeightedGraph) -> tuple[Fraction, Partition]:
    """Exact optimum over all balanced partitions (``n <= 20``).

    Vertex 0 is fixed to ``+1`` (the objective is symmetric under ``x -> -x``).
    Candidates surviving a floating-point filter are re-evaluated in exact
    rational arithmetic; ties go to the lexicographically smallest vector.
    """
    n = g.n
    if n > MAX_BRUTE_FORCE:
        raise ValueError(f"brute force is limited to n <= {MAX_BRUTE_FORCE}, got {n}")
    if not g.is_point:
        raise ValueError("brute force needs point weights")
    W = g.w.lo
    combos = np.array(list(itertools.combinations(range(1, n), n // 2 - 1)), dtype=np.int64)
    if combos.size == 0:
        combos = np.zeros((1, 0), dtype=np.int64)
    tol = 4.0 * n * n * np.finfo(float).eps * float(np.abs(W).sum()) + 1e-300
    workers = min(_threads(), max(1, len(combos) // 2048))
    chunks = np.array_split(combos, workers) if workers > 1 else [combos]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _chunk_best(W, c, n, tol), chunks))
    else:
        parts = [_chunk_best(W, chunks[0], n, tol)]
    exact_w = [[Fraction(float(W[i, j])) for j in range(n)] for i in range(n)]
    best = None
    for cand in itertools.chain.from_iterable(parts):
        val = sum((exact_w[i][j] for i in range(n) for j in range(i + 1, n) if cand[i] != cand[j]),
                  Fraction(0))
        key = (val, tuple(int(v) for v in cand))
        if best is None or key < best:
            best = key
    return best[0], Partition(np.array(best[1]))


def accuracy_mu(a: float, b: float) -> float:
    """Relative accuracy ``(a - b) / max(1, (|a| + |b|) / 2)``."""
    a, b = float(a), float(b)
    if not (math.isfinite(a) and math.isfinite(b)):
        diff = a - b
        return 0.0 if math.isnan(diff) else diff
    return (a - b) / max(1.0, (abs(a) + abs(b)) / 2.0)


def heuristic_partition(g: WeightedGraph, max_rounds: int = 200) -> Partition:
    """A good balanced partition for graphs too large to enumerate.

    Splits at the median of the Fiedler vector, then applies best-improving
    pair swaps until none helps.  Deterministic; no optimality claim.
    """
    n = g.n
    W = g.w.mid()
    L = np.diag(W.sum(axis=1)) - W
    _, vecs = np.linalg.eigh(L)
    order = np.argsort(vecs[:, 1], kind="stable")
    x = np.ones(n)
    x[order[: n // 2]] = -1.0
    for _ in range(max_rounds):
        # moving i alone changes the cut by x_i (W x)_i; a swap keeps edge ij cut
        g1 = x * (W @ x)
        gain = -(g1[:, None] + g1[None, :]) + 2 * W * np.outer(x, x)
        gain[np.equal.outer(x, x)] = -np.inf
        i, j = np.unravel_index(np.argmax(gain), gain.shape)
        if not gain[i, j] > 1e-12 * max(1.0, float(np.abs(W).sum())):
            break
        x[i], x[j] = x[j], x[i]
    if x[0] < 0:
        x = -x
    return Partition(x.astype(np.int64))
