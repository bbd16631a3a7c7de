"""Rigorous lower and upper bounds on the optimal value of a conic program.

The primal problem is ``min <c, x>  s.t.  A x = b,  x in K`` and its dual is
``max b^T y  s.t.  c - A^T y in K*``.  Given an approximate dual point ``y``
and a simple cap ``x <= xbar`` on near-optimal primal points, the lower bound
is

    b^T y + sum over blocks of <d^-, xbar>,     d = c - A^T y,

where each block contributes a rigorous lower bound of its negative part
evaluated at the cap.  Given an approximate primal point ``x`` and a cap
``|y| <= ybar`` on near-optimal dual points, the upper bound is

    <c, x+> + ybar^T r,     |A x+ - b| <= r,

with ``x+`` a verified member of ``K`` close to the positive part of ``x``.
All accumulation is outward-rounded; intermediate quantities are intervals.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .cones import (BlockVector, ConeSpec, UpperBoundX, UpperBoundY,
                    orthant_neg_lower, pos_part_upper, soc_neg_last_lower)
from .errors import ShapeError, VerificationError
from .interval import Interval, as_interval, dot, matvec, mul_rd, sum_rd, sum_ru, mul_ru, add_ru

__all__ = ["ConicProblem", "BoundReport", "lower_bound", "upper_bound", "weak_duality_check"]

log = logging.getLogger(__name__)


@dataclass
class ConicProblem:
    """``min <c, x> s.t. A x = b, x in K`` over a block cone.

    ``A`` is an ``m x N`` interval matrix whose row ``i`` holds the packed
    blocks of the i-th constraint (SDP blocks as packed lower triangles, see
    :mod:`certicone.sdpmat`).  ``ill_posed`` marks problems known to admit no
    finite dual bound ``ybar`` (zero distance to primal infeasibility); their
    upper bound is finite only when the residual is verified to be zero.
    """

    spec: ConeSpec
    A: Interval
    b: Interval
    c: Interval
    ill_posed: bool = False
    name: str = ""

    def __post_init__(self):
        self.A = as_interval(self.A)
        self.b = as_interval(self.b)
        self.c = as_interval(self.c)
        N = self.spec.dim
        if self.A.ndim != 2 or self.A.shape[1] != N:
            raise ShapeError(f"A has shape {self.A.shape}, expected (m, {N})")
        m = self.A.shape[0]
        if m < 1:
            raise ShapeError("at least one constraint is required")
        if self.b.shape != (m,):
            raise ShapeError(f"b has shape {self.b.shape}, expected ({m},)")
        if self.c.shape != (N,):
            raise ShapeError(f"c has shape {self.c.shape}, expected ({N},)")
        for name, v in (("A", self.A), ("b", self.b), ("c", self.c)):
            if not (np.all(np.isfinite(v.lo)) and np.all(np.isfinite(v.hi))):
                raise ValueError(f"{name} has non-finite entries")

    @property
    def m(self) -> int:
        return self.A.shape[0]

    def dual_slack(self, y) -> BlockVector:
        """Enclosure of ``c - A^T y``."""
        y = as_interval(np.asarray(y, dtype=np.float64) if not isinstance(y, Interval) else y)
        if y.shape != (self.m,):
            raise ShapeError(f"y has shape {y.shape}, expected ({self.m},)")
        return BlockVector(self.spec, self.c - matvec(self.A.T, y))

    def objective(self, x) -> Interval:
        """Enclosure of ``<c, x>`` (trace inner product on SDP blocks)."""
        xd = x.data if isinstance(x, BlockVector) else x
        return dot(self.c, as_interval(xd) * self.spec.weights)

    def row(self, i: int) -> BlockVector:
        return BlockVector(self.spec, self.A[i])


@dataclass
class BoundReport:
    """A rigorous bound together with what was proved on the way."""

    value: float
    kind: str
    dual_feasible_proved: bool = False
    primal_feasible_proved: bool = False
    diagnostics: dict = field(default_factory=dict)

    @property
    def finite(self) -> bool:
        return math.isfinite(self.value)


def _check_y(p: ConicProblem, y) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64).reshape(-1)
    if y.shape != (p.m,):
        raise ShapeError(f"dual approximation has length {y.size}, expected {p.m}")
    if not np.all(np.isfinite(y)):
        raise ValueError("dual approximation has non-finite entries")
    return y


def lower_bound(p: ConicProblem, y, xbar: UpperBoundX | None = None) -> BoundReport:
    """Rigorous lower bound on the primal optimal value from an approximate dual point.

    Valid whenever ``xbar`` caps near-optimal primal solutions in the cone
    order (the caller's responsibility).  A block whose negative part is not
    proven zero and has no cap makes the bound ``-inf``.

    >>> import numpy as np
    >>> from certicone.cones import ConeSpec
    >>> p = ConicProblem(ConeSpec(lin_dim=1), np.ones((1, 1)), np.ones(1), np.ones(1))
    >>> lower_bound(p, [1.0]).value
    1.0
    """
    y = _check_y(p, y)
    spec = p.spec
    if xbar is not None:
        xbar.check(spec)
    d = p.dual_slack(y)
    terms: list[float] = []
    proved = True
    missing: list[str] = []
    diag: dict = {}

    by = dot(p.b, y)
    terms.append(float(by.lo))
    diag["b_dot_y"] = float(by.lo)

    for k in range(len(spec.sdp_orders)):
        enc = linalg.eig_enclose(d.sdp(k))
        diag.setdefault("sdp_l", []).append(enc.l)
        diag.setdefault("sdp_d_neg", []).append(enc.d_neg)
        diag.setdefault("sdp_radius", []).append(float(np.max(enc.radius)))
        if enc.d_neg == 0.0:
            continue
        proved = False
        cap = xbar.sdp_cap(k) if xbar is not None else None
        if cap is None:
            missing.append(f"s{k + 1}")
            continue
        terms.append(float(mul_rd(mul_rd(float(enc.l), enc.d_neg), cap)))

    for j in range(len(spec.soc_dims)):
        dn = soc_neg_last_lower(d.soc(j))
        diag.setdefault("soc_d_neg", []).append(dn)
        if dn == 0.0:
            continue
        proved = False
        cap = xbar.soc_cap(j) if xbar is not None else None
        if cap is None:
            missing.append(f"q{j + 1}")
            continue
        terms.append(float(mul_rd(dn, cap)))

    if spec.lin_dim:
        dneg = orthant_neg_lower(d.lin)
        diag["lin_d_neg_min"] = float(np.min(dneg))
        if np.any(dneg < 0):
            proved = False
            if xbar is None or xbar.lin is None:
                missing.append("l")
            else:
                terms.append(float(sum_rd(mul_rd(dneg, xbar.lin))))

    if missing:
        diag["missing_xbar"] = missing
        value = -math.inf
    else:
        value = float(sum_rd(np.array(terms)))
    return BoundReport(value, "lower", dual_feasible_proved=proved, diagnostics=diag)


def upper_bound(p: ConicProblem, x, ybar: UpperBoundY | None = None) -> BoundReport:
    """Rigorous upper bound on the dual optimal value from an approximate primal point.

    ``x`` is first replaced by a verified cone member close to its positive
    part, so only the residual correction ``ybar^T r`` remains.  Returns
    ``+inf`` when an SDP block cannot be certified, or when the residual is
    not verified zero and no valid ``ybar`` is available (always the case for
    problems flagged ``ill_posed``).
    """
    spec = p.spec
    xv = x if isinstance(x, BlockVector) else BlockVector(spec, x)
    if xv.spec != spec:
        raise ShapeError("approximate primal point belongs to a different cone spec")
    if not np.all(np.isfinite(xv.mid().data)):
        raise ValueError("primal approximation has non-finite entries")
    if ybar is not None and ybar.values.shape != (p.m,):
        raise ShapeError(f"ybar has length {ybar.values.size}, expected {p.m}")
    diag: dict = {}
    try:
        xp = pos_part_upper(spec, xv, info=diag)
    except VerificationError as exc:
        diag["failure"] = str(exc)
        return BoundReport(math.inf, "upper", diagnostics=diag)

    r = linalg.residual(p.A, xp, p.b)
    cx = float(p.objective(xp).hi)
    diag["c_dot_x"] = cx
    diag["residual_max"] = float(np.max(r))
    if not np.any(r > 0):
        return BoundReport(cx, "upper", primal_feasible_proved=True, diagnostics=diag)
    if p.ill_posed:
        diag["failure"] = "residual not verified zero on an ill-posed problem"
        return BoundReport(math.inf, "upper", diagnostics=diag)
    if ybar is None:
        diag["failure"] = "residual not verified zero and no ybar supplied"
        return BoundReport(math.inf, "upper", diagnostics=diag)
    correction = float(sum_ru(mul_ru(ybar.values, r)))
    if math.isnan(correction):
        correction = math.inf
    diag["correction"] = correction
    value = float(add_ru(cx, correction))
    return BoundReport(value, "upper", diagnostics=diag)


def weak_duality_check(p: ConicProblem, lower: BoundReport, upper: BoundReport) -> bool:
    """``lower.value <= upper.value``; a violation means a soundness bug (or invalid caps)."""
    ok = lower.value <= upper.value
    if not ok:
        log.error("weak duality violated on %s: lower %r > upper %r",
                  p.name or "problem", lower.value, upper.value)
    return bool(ok)
