"""Deterministic generator of small conic instances with known answers.

All data are small integers, so every product and sum the construction needs
is exact in binary64 (magnitudes stay below ``2**20``).  Optimal instances are
built from a strictly complementary pair ``x* in K``, ``s* in K*`` with
``<s*, x*> = 0``; infeasible instances are built backwards from an integer
witness ray.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import ConicProblem
from .cones import BlockVector, ConeSpec, UpperBoundX, UpperBoundY
from .interval import norm2_upper
from .linalg import eig_enclose
from .sdpmat import SymMatrix

__all__ = ["GeneratedInstance", "gen_optimal", "gen_primal_infeasible",
           "gen_dual_infeasible", "perturb", "random_spec"]

OPTIMAL = "optimal"
PRIMAL_INFEASIBLE = "primal_infeasible"
DUAL_INFEASIBLE = "dual_infeasible"

_BUDGET = 2.0 ** 20


@dataclass
class GeneratedInstance:
    problem: ConicProblem
    x_star: BlockVector | None
    y_star: np.ndarray | None
    s_star: BlockVector | None
    f_star: float | None
    status: str
    witness: np.ndarray | None = None
    seed: int = 0

    def xbar(self, factor: float = 1.0) -> UpperBoundX:
        """Caps covering ``x*`` in the cone order, scaled by ``factor``."""
        spec = self.problem.spec
        x = self.x_star
        sdp = [factor * max(1.0, eig_enclose(x.sdp(k)).upper) for k in range(len(spec.sdp_orders))]
        soc = []
        for j in range(len(spec.soc_dims)):
            v = x.soc(j)
            soc.append(factor * max(1.0, norm2_upper(v[:-1]) + float(v[-1])))
        lin = factor * np.maximum(1.0, x.lin)
        return UpperBoundX(sdp, soc, lin)

    def ybar(self, factor: float = 1.0) -> UpperBoundY:
        return UpperBoundY(factor * np.maximum(1.0, np.abs(self.y_star)))


def _rng(spec: ConeSpec, seed: int, salt: int) -> np.random.Generator:
    key = [salt, int(seed)] + [len(spec.sdp_orders), *spec.sdp_orders,
                               len(spec.soc_dims), *spec.soc_dims, spec.lin_dim]
    return np.random.default_rng(key)


def random_spec(rng: np.random.Generator, kind: str) -> ConeSpec:
    """A random desk-scale spec of the given class (``lp``, ``soc``, ``sdp``, ``mixed``)."""
    if kind == "lp":
        return ConeSpec(lin_dim=int(rng.integers(1, 51)))
    if kind == "soc":
        nb = int(rng.integers(1, 6))
        return ConeSpec(soc_dims=tuple(int(v) for v in rng.integers(2, 11, size=nb)))
    if kind == "sdp":
        nb = int(rng.integers(1, 3))
        return ConeSpec(sdp_orders=tuple(int(v) for v in rng.integers(1, 13, size=nb)))
    if kind == "mixed":
        sdp = tuple(int(v) for v in rng.integers(1, 7, size=int(rng.integers(0, 3))))
        soc = tuple(int(v) for v in rng.integers(2, 8, size=int(rng.integers(0, 3))))
        lin = int(rng.integers(0, 15))
        if not sdp and not soc and lin == 0:
            lin = 3
        return ConeSpec(sdp, soc, lin)
    raise ValueError(f"unknown spec kind {kind!r}")


def _sym_from_dense(M: np.ndarray) -> np.ndarray:
    return SymMatrix.from_dense(M).data


def _rand_sym(rng, s: int, lo: int = -5, hi: int = 5, density: float = 0.7) -> np.ndarray:
    M = rng.integers(lo, hi + 1, size=(s, s)) * (rng.random((s, s)) < density)
    M = np.tril(M) + np.tril(M, -1).T
    return M.astype(np.float64)


def _random_row(rng, spec: ConeSpec, density: float = 0.7) -> np.ndarray:
    """One constraint row in packed layout, integer entries in [-5, 5]."""
    row = np.zeros(spec.dim)
    for k, s in enumerate(spec.sdp_orders):
        row[spec.sdp_slice(k)] = _sym_from_dense(_rand_sym(rng, s, density=density))
    tail = slice(spec.sdp_slice(len(spec.sdp_orders) - 1).stop if spec.sdp_orders else 0, spec.dim)
    n = tail.stop - tail.start
    row[tail] = rng.integers(-5, 6, size=n) * (rng.random(n) < density)
    return row


def _soc_interior(rng, n: int) -> np.ndarray:
    v = rng.integers(-3, 4, size=n - 1)
    sq = int(np.dot(v, v))
    apex = math.isqrt(sq) + 1 + int(rng.integers(0, 3))
    return np.append(v, apex).astype(np.float64)


def _psd_pair(rng, s: int) -> tuple[np.ndarray, np.ndarray]:
    """Integer PSD ``(X, S)`` with ``X S = 0`` and ``rank X + rank S = s``."""
    if s >= 2 and rng.random() < 0.5:
        v = rng.integers(-3, 4, size=s)
        if not v.any():
            v[0] = 1
        nv = int(np.dot(v, v))
        one = np.outer(v, v)
        rest = nv * np.eye(s, dtype=np.int64) - one
        if rng.random() < 0.5:
            return one.astype(np.float64), rest.astype(np.float64)
        return rest.astype(np.float64), one.astype(np.float64)
    mask = rng.random(s) < 0.5
    xd = np.where(mask, rng.integers(1, 6, size=s), 0)
    sd = np.where(mask, 0, rng.integers(1, 6, size=s))
    return np.diag(xd).astype(np.float64), np.diag(sd).astype(np.float64)


def _assert_budget(*arrays) -> None:
    for a in arrays:
        if np.max(np.abs(a), initial=0.0) > _BUDGET:
            raise AssertionError("generated data exceed the exactness budget")


def _choose_m(rng, spec: ConeSpec, cap: int) -> int:
    return int(rng.integers(1, max(1, min(spec.dim, cap)) + 1))


def gen_optimal(spec: ConeSpec, seed: int, m: int | None = None) -> GeneratedInstance:
    """An instance with known optimal pair ``(x*, y*)`` and exact value ``f*``."""
    rng = _rng(spec, seed, 1)
    if m is None:
        m = _choose_m(rng, spec, 10)
    x = np.zeros(spec.dim)
    s = np.zeros(spec.dim)
    for k, order in enumerate(spec.sdp_orders):
        X, S = _psd_pair(rng, order)
        x[spec.sdp_slice(k)] = _sym_from_dense(X)
        s[spec.sdp_slice(k)] = _sym_from_dense(S)
    for j, n in enumerate(spec.soc_dims):
        sl = spec.soc_slice(j)
        if rng.random() < 0.5:
            x[sl] = _soc_interior(rng, n)
        else:
            s[sl] = _soc_interior(rng, n)
    if spec.lin_dim:
        r = rng.integers(0, 3, size=spec.lin_dim)
        vals = rng.integers(1, 6, size=spec.lin_dim)
        x[spec.lin_slice] = np.where(r == 0, vals, 0)
        s[spec.lin_slice] = np.where(r == 1, vals, 0)
    A = np.array([_random_row(rng, spec) for _ in range(m)])
    y = rng.integers(-5, 6, size=m).astype(np.float64)
    w = spec.weights
    b = A @ (w * x)
    c = A.T @ y + s
    _assert_budget(A, b, c, x, s)
    # integer data: these evaluations are exact
    f_primal = float(np.dot(c * w, x))
    f_dual = float(np.dot(b, y))
    if f_primal != f_dual:
        raise AssertionError("complementarity construction is inconsistent")
    p = ConicProblem(spec, A, b, c, name=f"optimal-{seed}")
    return GeneratedInstance(p, BlockVector(spec, x), y, BlockVector(spec, s),
                             f_primal, OPTIMAL, seed=seed)


def _dual_cone_interior(rng, spec: ConeSpec) -> np.ndarray:
    z = np.zeros(spec.dim)
    for k, order in enumerate(spec.sdp_orders):
        u = rng.integers(-2, 3, size=order)
        Z = np.diag(rng.integers(1, 4, size=order)) + np.outer(u, u)
        z[spec.sdp_slice(k)] = _sym_from_dense(Z.astype(np.float64))
    for j, n in enumerate(spec.soc_dims):
        z[spec.soc_slice(j)] = _soc_interior(rng, n)
    if spec.lin_dim:
        z[spec.lin_slice] = rng.integers(0, 4, size=spec.lin_dim)
    return z


def gen_primal_infeasible(spec: ConeSpec, seed: int, m: int | None = None) -> GeneratedInstance:
    """An instance whose primal constraints are infeasible, with an exact ray ``y``.

    The ray satisfies ``A^T y in K*`` and ``b^T y < 0`` exactly.
    """
    rng = _rng(spec, seed, 2)
    if m is None:
        m = _choose_m(rng, spec, 8)
    z = _dual_cone_interior(rng, spec)
    y = rng.integers(-3, 4, size=m).astype(np.float64)
    i0 = int(rng.integers(0, m))
    y[i0] = 1.0
    A = np.array([_random_row(rng, spec) for _ in range(m)])
    others = np.arange(m) != i0
    A[i0] = z - y[others] @ A[others]
    b = rng.integers(-5, 6, size=m).astype(np.float64)
    b[i0] = -float(rng.integers(1, 6)) - float(np.dot(y[others], b[others]))
    c = _random_row(rng, spec)
    _assert_budget(A, b, c)
    if not np.dot(b, y) < 0 or not np.array_equal(A.T @ y, z):
        raise AssertionError("witness construction is inconsistent")
    p = ConicProblem(spec, A, b, c, name=f"primal-infeasible-{seed}")
    return GeneratedInstance(p, None, None, None, None, PRIMAL_INFEASIBLE, witness=y, seed=seed)


def _cone_interior_with_unit(rng, spec: ConeSpec) -> tuple[np.ndarray, int]:
    """Integer interior point of ``K`` and a flat index holding the value 1 (weight 1)."""
    x = np.zeros(spec.dim)
    for k, order in enumerate(spec.sdp_orders):
        u = rng.integers(-2, 3, size=order)
        u[0] = 0
        X = np.eye(order) + np.diag(rng.integers(0, 3, size=order)) * (np.arange(order) > 0) + np.outer(u, u)
        x[spec.sdp_slice(k)] = _sym_from_dense(X.astype(np.float64))
    for j, n in enumerate(spec.soc_dims):
        x[spec.soc_slice(j)] = _soc_interior(rng, n)
    if spec.lin_dim:
        x[spec.lin_slice] = rng.integers(1, 5, size=spec.lin_dim)
    if spec.lin_dim:
        pivot = spec.lin_slice.start
    elif spec.sdp_orders:
        pivot = spec.sdp_slice(0).start  # (0, 0) entry of the first block
    else:
        sl = spec.soc_slice(0)
        x[sl] = 0.0
        x[sl.stop - 1] = 1.0
        pivot = sl.stop - 1
    x[pivot] = 1.0
    return x, pivot


def gen_dual_infeasible(spec: ConeSpec, seed: int, m: int | None = None) -> GeneratedInstance:
    """An instance whose dual constraints are infeasible, with an exact ray ``x``.

    The ray lies in the interior of ``K`` and satisfies ``A x = 0`` and
    ``<c, x> = -1`` exactly.
    """
    rng = _rng(spec, seed, 3)
    if m is None:
        m = int(rng.integers(1, max(1, min(spec.dim - 1, 8)) + 1))
    x, pivot = _cone_interior_with_unit(rng, spec)
    w = spec.weights
    wx = w * x
    A = np.array([_random_row(rng, spec) for _ in range(m)])
    A[:, pivot] = 0.0
    A[:, pivot] = -(A @ wx)
    c = _random_row(rng, spec)
    c[pivot] = 0.0
    c[pivot] = -1.0 - float(np.dot(c, wx))
    x0 = _cone_interior_with_unit(rng, spec)[0]
    b = A @ (w * x0)
    _assert_budget(A, b, c)
    if np.any(A @ wx != 0) or float(np.dot(c, wx)) != -1.0:
        raise AssertionError("ray construction is inconsistent")
    p = ConicProblem(spec, A, b, c, name=f"dual-infeasible-{seed}")
    return GeneratedInstance(p, None, None, None, None, DUAL_INFEASIBLE, witness=x, seed=seed)


def perturb(x, eps: float, seed: int):
    """Add uniform noise of magnitude at most ``eps`` to every component.

    Works on :class:`BlockVector` and plain arrays; ``eps = 0`` returns the
    input bits unchanged.  For SDP blocks the packed triangle is perturbed, so
    the matrix stays symmetric.
    """
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    spec = x.spec if isinstance(x, BlockVector) else None
    base = np.array(x.data if spec is not None else x, dtype=np.float64)
    if eps > 0:
        rng = np.random.default_rng([4, int(seed)])
        cand = base + rng.uniform(-eps, eps, size=base.shape)
        over = np.abs(cand - base) > eps
        cand = np.where(over, np.nextafter(cand, base), cand)
        base = cand
    return BlockVector(spec, base) if spec is not None else base
