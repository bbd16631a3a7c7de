"""Cone structure and verified lattice operations.

A :class:`ConeSpec` describes the Cartesian product of semidefinite blocks,
second-order (ice-cream) cones and one nonnegative orthant.  Every block
vector is stored flat in that order: packed SDP triangles first, then SOC
blocks (vector part followed by the apex coordinate), then the orthant.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg
from .errors import ShapeError
from .interval import Interval, as_interval, mul_rd, add_rd, norm2_upper
from .sdpmat import SymMatrix, packed_size, packed_weights

__all__ = [
    "ConeSpec", "BlockVector", "UpperBoundX", "UpperBoundY",
    "orthant_neg_lower", "soc_pos_part", "soc_neg_part", "soc_neg_last_lower",
    "soc_pos_part_upper", "verify_membership", "pos_part_upper",
]


@dataclass(frozen=True)
class ConeSpec:
    """Orders of SDP blocks, dimensions of SOC blocks, orthant length."""

    sdp_orders: tuple[int, ...] = ()
    soc_dims: tuple[int, ...] = ()
    lin_dim: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sdp_orders", tuple(int(s) for s in self.sdp_orders))
        object.__setattr__(self, "soc_dims", tuple(int(n) for n in self.soc_dims))
        object.__setattr__(self, "lin_dim", int(self.lin_dim))
        if any(s < 1 for s in self.sdp_orders):
            raise ValueError("SDP block orders must be positive")
        if any(n < 2 for n in self.soc_dims):
            raise ValueError("SOC block dimensions must be at least 2")
        if self.lin_dim < 0:
            raise ValueError("orthant length must be nonnegative")
        if self.dim == 0:
            raise ValueError("cone has total dimension 0")

    @property
    def dim(self) -> int:
        return (sum(packed_size(s) for s in self.sdp_orders)
                + sum(self.soc_dims) + self.lin_dim)

    @cached_property
    def _offsets(self) -> tuple[list[slice], list[slice], slice]:
        pos = 0
        sdp, soc = [], []
        for s in self.sdp_orders:
            sdp.append(slice(pos, pos + packed_size(s)))
            pos += packed_size(s)
        for n in self.soc_dims:
            soc.append(slice(pos, pos + n))
            pos += n
        return sdp, soc, slice(pos, pos + self.lin_dim)

    def sdp_slice(self, k: int) -> slice:
        return self._offsets[0][k]

    def soc_slice(self, j: int) -> slice:
        return self._offsets[1][j]

    @property
    def lin_slice(self) -> slice:
        return self._offsets[2]

    @cached_property
    def weights(self) -> np.ndarray:
        """Inner-product weight of each flat coordinate (2 on SDP off-diagonals)."""
        w = np.ones(self.dim)
        for k, s in enumerate(self.sdp_orders):
            w[self.sdp_slice(k)] = packed_weights(s)
        w.flags.writeable = False
        return w

    @classmethod
    def parse(cls, text: str) -> "ConeSpec":
        """Parse ``"sdp 3 2 | soc 3 | lin 4"`` (parts optional, any order)."""
        sdp: list[int] = []
        soc: list[int] = []
        lin = 0
        seen = set()
        for part in text.split("|"):
            tokens = part.split()
            if not tokens:
                continue
            kind, nums = tokens[0].lower(), tokens[1:]
            if kind in seen or kind not in ("sdp", "soc", "lin"):
                raise ValueError(f"bad cone part {part.strip()!r}")
            seen.add(kind)
            if not all(re.fullmatch(r"\d+", t) for t in nums):
                raise ValueError(f"bad cone sizes in {part.strip()!r}")
            vals = [int(t) for t in nums]
            if kind == "sdp":
                sdp = vals
            elif kind == "soc":
                soc = vals
            else:
                if len(vals) != 1:
                    raise ValueError("lin takes exactly one size")
                lin = vals[0]
        return cls(tuple(sdp), tuple(soc), lin)

    def __str__(self) -> str:
        parts = []
        if self.sdp_orders:
            parts.append("sdp " + " ".join(map(str, self.sdp_orders)))
        if self.soc_dims:
            parts.append("soc " + " ".join(map(str, self.soc_dims)))
        if self.lin_dim:
            parts.append(f"lin {self.lin_dim}")
        return " | ".join(parts)


class BlockVector:
    """A point (float array) or box (:class:`Interval`) in the space of a spec."""

    __slots__ = ("spec", "data")

    def __init__(self, spec: ConeSpec, data):
        if isinstance(data, Interval):
            if data.shape != (spec.dim,):
                raise ShapeError(f"block vector has shape {data.shape}, spec needs ({spec.dim},)")
        else:
            data = np.array(data, dtype=np.float64).reshape(-1)
            if data.shape != (spec.dim,):
                raise ShapeError(f"block vector has shape {data.shape}, spec needs ({spec.dim},)")
            data.flags.writeable = False
        object.__setattr__(self, "spec", spec)
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("BlockVector is immutable")

    @classmethod
    def zeros(cls, spec: ConeSpec) -> "BlockVector":
        return cls(spec, np.zeros(spec.dim))

    @classmethod
    def from_blocks(cls, spec: ConeSpec, sdp: Sequence = (), soc: Sequence = (),
                    lin=None) -> "BlockVector":
        """Assemble from per-block pieces.

        SDP pieces may be :class:`SymMatrix` or dense symmetric arrays.
        Missing trailing pieces are zero.
        """
        if len(sdp) > len(spec.sdp_orders) or len(soc) > len(spec.soc_dims):
            raise ShapeError("more blocks than the spec provides")
        parts = []
        for k, s in enumerate(spec.sdp_orders):
            if k < len(sdp):
                M = sdp[k] if isinstance(sdp[k], SymMatrix) else SymMatrix.from_dense(sdp[k])
                if M.order != s:
                    raise ShapeError(f"SDP block {k} has order {M.order}, expected {s}")
                parts.append(as_interval(M.data))
            else:
                parts.append(Interval.zeros(packed_size(s)))
        for j, n in enumerate(spec.soc_dims):
            v = as_interval(soc[j]) if j < len(soc) else Interval.zeros(n)
            if v.shape != (n,):
                raise ShapeError(f"SOC block {j} has shape {v.shape}, expected ({n},)")
            parts.append(v)
        v = as_interval(lin) if lin is not None else Interval.zeros(spec.lin_dim)
        if v.shape != (spec.lin_dim,):
            raise ShapeError(f"orthant block has shape {v.shape}, expected ({spec.lin_dim},)")
        parts.append(v)
        flat = Interval.concatenate(parts)
        return cls(spec, flat.lo.copy() if flat.is_point else flat)

    @property
    def is_interval(self) -> bool:
        return isinstance(self.data, Interval)

    def as_interval(self) -> "BlockVector":
        return self if self.is_interval else BlockVector(self.spec, Interval(self.data))

    def mid(self) -> "BlockVector":
        return BlockVector(self.spec, self.data.mid()) if self.is_interval else self

    def sdp(self, k: int) -> SymMatrix:
        return SymMatrix(self.spec.sdp_orders[k], self.data[self.spec.sdp_slice(k)])

    def soc(self, j: int):
        return self.data[self.spec.soc_slice(j)]

    @property
    def lin(self):
        return self.data[self.spec.lin_slice]

    def identical(self, other) -> bool:
        if not isinstance(other, BlockVector) or other.spec != self.spec:
            return False
        if self.is_interval != other.is_interval:
            return False
        if self.is_interval:
            return self.data.identical(other.data)
        return bool(np.array_equal(self.data, other.data))

    def __repr__(self) -> str:
        return f"BlockVector(spec='{self.spec}', data={self.data!r})"


def _optional_cap(v) -> float | None:
    if v is None:
        return None
    v = float(v)
    if not v >= 0:
        raise ValueError("upper bounds must be nonnegative")
    return v


@dataclass
class UpperBoundX:
    """Caps ``x <= xbar`` (cone order) assumed valid for near-optimal primal points.

    ``sdp[k]`` bounds the largest eigenvalue of SDP block ``k``; ``soc[j]`` is
    the apex of ``(0; xbar)`` so that ``|x_:| + x_n <= xbar``; ``lin`` caps each
    orthant coordinate.  ``None`` marks a block without a known cap.
    """

    sdp: list = field(default_factory=list)
    soc: list = field(default_factory=list)
    lin: np.ndarray | None = None

    def __post_init__(self):
        self.sdp = [_optional_cap(v) for v in self.sdp]
        self.soc = [_optional_cap(v) for v in self.soc]
        if self.lin is not None:
            lin = np.array(self.lin, dtype=np.float64).reshape(-1)
            if not np.all(lin >= 0):
                raise ValueError("upper bounds must be nonnegative")
            self.lin = lin

    @classmethod
    def uniform(cls, spec: ConeSpec, value: float) -> "UpperBoundX":
        return cls([value] * len(spec.sdp_orders), [value] * len(spec.soc_dims),
                   np.full(spec.lin_dim, float(value)))

    def check(self, spec: ConeSpec) -> None:
        if len(self.sdp) not in (0, len(spec.sdp_orders)) or len(self.soc) not in (0, len(spec.soc_dims)):
            raise ShapeError("xbar block count does not match the cone spec")
        if self.lin is not None and self.lin.shape != (spec.lin_dim,):
            raise ShapeError("xbar orthant length does not match the cone spec")

    def sdp_cap(self, k: int) -> float | None:
        return self.sdp[k] if k < len(self.sdp) else None

    def soc_cap(self, j: int) -> float | None:
        return self.soc[j] if j < len(self.soc) else None


@dataclass
class UpperBoundY:
    """Component-wise cap ``|y| <= ybar`` for near-optimal dual points."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=np.float64).reshape(-1)
        if not np.all(v >= 0):
            raise ValueError("ybar must be nonnegative")
        self.values = v


# ---------------------------------------------------------------------------
# orthant
# ---------------------------------------------------------------------------

def orthant_neg_lower(d) -> np.ndarray:
    """Lower bound of ``min(0, d_j)`` over the box ``d`` (exact, no rounding)."""
    return np.minimum(0.0, as_interval(d).lo)


# ---------------------------------------------------------------------------
# second-order cone
# ---------------------------------------------------------------------------

def _split_soc(x) -> tuple[np.ndarray, float, float]:
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ShapeError("SOC vectors need dimension >= 2")
    xs, xn = x[:-1], float(x[-1])
    return xs, xn, float(np.linalg.norm(xs))


def soc_pos_part(x) -> np.ndarray:
    """Projection onto the ice-cream cone, by the three-case formula (floating point)."""
    xs, xn, nrm = _split_soc(x)
    if xn >= nrm:
        return np.array(x, dtype=np.float64)
    if xn <= -nrm:
        return np.zeros(xs.size + 1)
    alpha = (nrm + xn) / (2.0 * nrm)
    return alpha * np.append(xs, nrm)


def soc_neg_part(x) -> np.ndarray:
    """``inf{x, 0}`` in the ice-cream order, by the three-case formula (floating point)."""
    xs, xn, nrm = _split_soc(x)
    if xn <= -nrm:
        return np.array(x, dtype=np.float64)
    if xn >= nrm:
        return np.zeros(xs.size + 1)
    beta = (nrm - xn) / (2.0 * nrm)
    return beta * np.append(xs, -nrm)


def soc_neg_last_lower(d) -> float:
    """Rigorous lower bound of the apex coordinate of ``d^-`` over the box ``d``.

    Uses ``min{0, d_n, (d_n - |d_:|)/2}``, which is valid whichever of the
    three lattice cases applies, so no case decision is needed.
    """
    d = as_interval(d)
    if d.ndim != 1 or d.shape[0] < 2:
        raise ShapeError("SOC vectors need dimension >= 2")
    dn = float(d.lo[-1])
    nrm = norm2_upper(d[:-1])
    half_gap = float(mul_rd(add_rd(dn, -nrm), 0.5))
    return min(0.0, dn, half_gap)


def soc_is_member(x) -> bool:
    """True only if every point of the box ``x`` lies in the ice-cream cone."""
    x = as_interval(x)
    return bool(x.lo[-1] >= norm2_upper(x[:-1]))


def soc_pos_part_upper(x) -> np.ndarray:
    """A point of the cone close to the projection of ``x``, membership verified.

    The projection is evaluated in floating point and its apex coordinate is
    then raised to an upward-rounded norm of the vector part, which places the
    result in the cone regardless of which case the rounding picked.
    """
    x = np.asarray(x, dtype=np.float64)
    if soc_is_member(x):
        return x.copy()
    p = soc_pos_part(x)
    p[-1] = max(p[-1], norm2_upper(p[:-1]))
    return p


# ---------------------------------------------------------------------------
# whole-spec operations
# ---------------------------------------------------------------------------

def verify_membership(spec: ConeSpec, x) -> bool:
    """True only if every point of the enclosure lies in the cone.

    ``False`` means "not proven", never "proven outside".
    """
    xv = x if isinstance(x, BlockVector) else BlockVector(spec, x)
    if xv.spec != spec:
        raise ShapeError("block vector belongs to a different cone spec")
    xv = xv.as_interval()
    if spec.lin_dim and not np.all(xv.lin.lo >= 0):
        return False
    for j in range(len(spec.soc_dims)):
        if not soc_is_member(xv.soc(j)):
            return False
    for k in range(len(spec.sdp_orders)):
        enc = linalg.eig_enclose(xv.sdp(k))
        if not np.all(enc.intervals.lo >= 0):
            return False
    return True


def pos_part_upper(spec: ConeSpec, x, info: dict | None = None) -> BlockVector:
    """A verified member of the cone that approximates the positive part of ``x``.

    Orthant: ``max(0, x)``.  SOC: :func:`soc_pos_part_upper`.  SDP: the
    verified shift ``X - x_lo I`` of :func:`linalg.psd_shift`.

    Raises :class:`~certicone.errors.VerificationError` if an SDP block cannot
    be certified.
    """
    xv = x if isinstance(x, BlockVector) else BlockVector(spec, x)
    xv = xv.mid()
    out = np.array(xv.data, dtype=np.float64)
    shifts = []
    for k in range(len(spec.sdp_orders)):
        shifted, lo = linalg.psd_shift(xv.sdp(k))
        out[spec.sdp_slice(k)] = shifted.data
        shifts.append(lo)
    lifts = []
    for j in range(len(spec.soc_dims)):
        sl = spec.soc_slice(j)
        p = soc_pos_part_upper(out[sl])
        lifts.append(float(np.max(np.abs(p - out[sl]))))
        out[sl] = p
    out[spec.lin_slice] = np.maximum(0.0, out[spec.lin_slice])
    if info is not None:
        info["sdp_shift"] = shifts
        info["soc_move"] = lifts
    return BlockVector(spec, out)
