"""Verified certificates of primal and dual infeasibility.

A primal infeasibility certificate is a ray ``y`` with ``b^T y < 0`` and
``A^T y`` in the dual cone; it is checked as a zero-width point.  A dual
infeasibility certificate is a box that provably contains an ``x`` in the cone
with ``A x = 0`` and ``<c, x> < 0``; the box is obtained by enclosing a
solution of ``A x = 0, <c, x> = beta`` close to an approximate ray.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .bounds import ConicProblem
from .cones import BlockVector, verify_membership
from .interval import Interval, as_interval, dot, matvec

__all__ = ["Certificate", "check_primal_infeasible", "check_dual_infeasible",
           "refusal_reason", "recheck"]

log = logging.getLogger(__name__)

PRIMAL = "primal_infeasible"
DUAL = "dual_infeasible"


@dataclass
class Certificate:
    """A verified infeasibility witness.

    ``approx`` is the ray the check started from; ``witness`` is the ray itself
    (primal case, zero width) or the verified enclosure (dual case).
    """

    kind: str
    approx: np.ndarray
    witness: Interval
    checks: dict = field(default_factory=dict)


class _Refusal(Exception):
    pass


def _primal_checks(p: ConicProblem, y: np.ndarray) -> dict:
    by = dot(p.b, y)
    if not by.hi < 0:
        raise _Refusal(f"b^T y not proven negative (upper bound {float(by.hi)!r})")
    z = BlockVector(p.spec, matvec_t(p, y))
    if not verify_membership(p.spec, z):
        raise _Refusal("A^T y not proven in the dual cone")
    return {"b_dot_y_upper": float(by.hi), "dual_cone_membership": True}


def matvec_t(p: ConicProblem, y) -> Interval:
    """Enclosure of ``A^T y`` in the packed layout."""
    return matvec(p.A.T, as_interval(y))


def check_primal_infeasible(p: ConicProblem, y) -> Certificate | None:
    """Certificate that ``A x = b, x in K`` has no solution, or ``None``."""
    try:
        return _primal(p, y)
    except _Refusal as exc:
        log.info("primal infeasibility refused: %s", exc)
        return None


def _primal(p: ConicProblem, y) -> Certificate:
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.shape != (p.m,):
        raise _Refusal(f"ray has length {y.size}, expected {p.m}")
    if not np.all(np.isfinite(y)):
        raise _Refusal("ray has non-finite entries")
    checks = _primal_checks(p, y)
    return Certificate(PRIMAL, y.copy(), Interval(y), checks)


def check_dual_infeasible(p: ConicProblem, x) -> Certificate | None:
    """Certificate that ``c - A^T y in K*`` has no solution, or ``None``."""
    try:
        return _dual(p, x)
    except _Refusal as exc:
        log.info("dual infeasibility refused: %s", exc)
        return None


def _dual(p: ConicProblem, x) -> Certificate:
    spec = p.spec
    xv = x if isinstance(x, BlockVector) else BlockVector(spec, x)
    xt = np.array(xv.mid().data, dtype=np.float64)
    if not np.all(np.isfinite(xt)):
        raise _Refusal("ray has non-finite entries")
    w = spec.weights
    beta = float(np.dot(p.c.mid() * w, xt))
    if not beta < 0:
        raise _Refusal(f"<c, x> approximation {beta!r} is not negative")
    # rows that are exactly zero with zero right-hand side hold for every x
    M = Interval.concatenate([p.A * w, (p.c * w).reshape(1, -1)])
    rhs = np.zeros(p.m + 1)
    rhs[-1] = beta
    keep = ~(np.all(M.lo == 0, axis=1) & np.all(M.hi == 0, axis=1) & (rhs == 0))
    M = M[keep]
    rhs = rhs[keep]
    k, n = M.shape
    if k > n:
        raise _Refusal("more independent equations than unknowns")
    if k == n:
        box = linalg.enclose_square(M, rhs, xt)
    else:
        box = linalg.enclose_underdetermined(M, rhs, xt)
    if box is None:
        raise _Refusal("enclosure refused: linear system not verified")
    if not verify_membership(spec, box):
        raise _Refusal("enclosure not proven inside the cone")
    cx = dot(p.c, box * w)
    if not cx.hi < 0:
        raise _Refusal(f"<c, x> not proven negative on the enclosure (upper {float(cx.hi)!r})")
    checks = {"beta": beta, "c_dot_x_upper": float(cx.hi), "cone_membership": True,
              "equations": int(k)}
    return Certificate(DUAL, xt, box, checks)


def refusal_reason(p: ConicProblem, kind: str, ray) -> str | None:
    """Why a check refuses (``None`` if it succeeds)."""
    try:
        (_primal if kind == PRIMAL else _dual)(p, ray)
    except _Refusal as exc:
        return str(exc)
    return None


def recheck(p: ConicProblem, cert: Certificate) -> bool:
    """Re-run the verification from the stored ray and compare bit for bit."""
    fresh = (check_primal_infeasible if cert.kind == PRIMAL else check_dual_infeasible)(p, cert.approx)
    if fresh is None:
        return False
    return fresh.kind == cert.kind and fresh.witness.identical(cert.witness)
