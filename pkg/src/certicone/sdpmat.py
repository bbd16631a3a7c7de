"""Packed symmetric matrices.

A symmetric ``s x s`` matrix is stored as its lower triangle, packed column by
column: ``(0,0), (1,0), ..., (s-1,0), (1,1), (2,1), ...``.  Off-diagonal
entries are stored unscaled; the factor 2 they carry in the trace inner
product is applied inside :func:`sym_inner`, so no irrational ``sqrt(2)`` ever
enters the data.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import ShapeError
from .interval import Interval, as_interval, dot

__all__ = [
    "SymMatrix", "packed_size", "pack_indices", "packed_weights", "diag_positions",
    "sym_inner", "add_scaled_identity", "lincomb",
]


def packed_size(s: int) -> int:
    return s * (s + 1) // 2


@lru_cache(maxsize=None)
def pack_indices(s: int) -> tuple[np.ndarray, np.ndarray]:
    """Row and column index of every packed position (rows >= cols)."""
    cols, rows = np.triu_indices(s)
    rows.flags.writeable = False
    cols.flags.writeable = False
    return rows, cols


@lru_cache(maxsize=None)
def packed_weights(s: int) -> np.ndarray:
    """1 on diagonal positions, 2 elsewhere."""
    rows, cols = pack_indices(s)
    w = np.where(rows == cols, 1.0, 2.0)
    w.flags.writeable = False
    return w


@lru_cache(maxsize=None)
def diag_positions(s: int) -> np.ndarray:
    rows, cols = pack_indices(s)
    d = np.flatnonzero(rows == cols)
    d.flags.writeable = False
    return d


class SymMatrix:
    """A symmetric matrix held as a packed lower triangle.

    ``data`` is either a float array or an :class:`Interval` of length
    ``s(s+1)/2``.
    """

    __slots__ = ("order", "data")

    def __init__(self, order: int, data):
        if isinstance(data, Interval):
            if data.shape != (packed_size(order),):
                raise ShapeError(f"packed length {data.shape} does not match order {order}")
        else:
            data = np.array(data, dtype=np.float64).reshape(-1)
            if data.shape != (packed_size(order),):
                raise ShapeError(f"packed length {data.shape} does not match order {order}")
            data.flags.writeable = False
        object.__setattr__(self, "order", int(order))
        object.__setattr__(self, "data", data)

    def __setattr__(self, name, value):
        raise AttributeError("SymMatrix is immutable")

    @classmethod
    def from_dense(cls, M) -> "SymMatrix":
        if isinstance(M, Interval):
            if M.ndim != 2 or M.shape[0] != M.shape[1]:
                raise ShapeError("from_dense expects a square matrix")
            if not (np.array_equal(M.lo, M.lo.T) and np.array_equal(M.hi, M.hi.T)):
                raise ValueError("matrix is not symmetric")
            rows, cols = pack_indices(M.shape[0])
            return cls(M.shape[0], M[rows, cols])
        M = np.asarray(M, dtype=np.float64)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ShapeError("from_dense expects a square matrix")
        if not np.array_equal(M, M.T):
            raise ValueError("matrix is not symmetric")
        rows, cols = pack_indices(M.shape[0])
        return cls(M.shape[0], M[rows, cols])

    @classmethod
    def identity(cls, s: int) -> "SymMatrix":
        data = np.zeros(packed_size(s))
        data[diag_positions(s)] = 1.0
        return cls(s, data)

    @classmethod
    def zeros(cls, s: int) -> "SymMatrix":
        return cls(s, np.zeros(packed_size(s)))

    @property
    def is_interval(self) -> bool:
        return isinstance(self.data, Interval)

    def as_interval(self) -> "SymMatrix":
        return self if self.is_interval else SymMatrix(self.order, Interval(self.data))

    def to_dense(self):
        """Dense ``s x s`` array (or :class:`Interval` matrix)."""
        s = self.order
        rows, cols = pack_indices(s)
        if self.is_interval:
            lo = np.zeros((s, s))
            hi = np.zeros((s, s))
            lo[rows, cols] = self.data.lo
            lo[cols, rows] = self.data.lo
            hi[rows, cols] = self.data.hi
            hi[cols, rows] = self.data.hi
            return Interval(lo, hi)
        M = np.zeros((s, s))
        M[rows, cols] = self.data
        M[cols, rows] = self.data
        return M

    def mid(self) -> np.ndarray:
        """Dense midpoint matrix (exactly symmetric)."""
        if self.is_interval:
            return SymMatrix(self.order, self.data.mid()).to_dense()
        return self.to_dense()

    def diag(self):
        return self.data[diag_positions(self.order)]

    def identical(self, other) -> bool:
        if not isinstance(other, SymMatrix) or other.order != self.order:
            return False
        if self.is_interval != other.is_interval:
            return False
        if self.is_interval:
            return self.data.identical(other.data)
        return bool(np.array_equal(self.data, other.data))

    def __repr__(self) -> str:
        return f"SymMatrix(order={self.order}, data={self.data!r})"


def _check_order(X: SymMatrix, Y: SymMatrix) -> None:
    if X.order != Y.order:
        raise ShapeError(f"order mismatch: {X.order} vs {Y.order}")


def sym_inner(X: SymMatrix, Y: SymMatrix) -> Interval:
    """Enclosure of ``trace(X Y)``.

    Computed as ``sum_i X_ii Y_ii + 2 sum_{i>j} X_ij Y_ij``; the doubling is
    exact, so the result is symmetric in its arguments bit for bit.
    """
    _check_order(X, Y)
    w = packed_weights(X.order)
    x, y = as_interval(X.data), as_interval(Y.data)
    return dot(x, y * w)


def add_scaled_identity(X: SymMatrix, t) -> SymMatrix:
    """Enclosure of ``X + t I``."""
    t = as_interval(t)
    if t.ndim != 0:
        raise ShapeError("add_scaled_identity expects a scalar interval")
    d = diag_positions(X.order)
    data = as_interval(X.data)
    return SymMatrix(X.order, data.set(d, data[d] + t))


def lincomb(coeffs, mats: Sequence[SymMatrix]) -> SymMatrix:
    """Enclosure of ``sum_i coeffs[i] * mats[i]`` as an interval matrix."""
    if len(mats) == 0:
        raise ShapeError("lincomb needs at least one matrix")
    s = mats[0].order
    for M in mats:
        _check_order(mats[0], M)
    coeffs = as_interval(np.asarray(coeffs, dtype=np.float64) if not isinstance(coeffs, Interval) else coeffs)
    if coeffs.shape != (len(mats),):
        raise ShapeError("one coefficient per matrix required")
    stacked = Interval.stack([as_interval(M.data) for M in mats])
    return SymMatrix(s, (stacked * coeffs.reshape(-1, 1)).sum(axis=0))
