"""Interval arithmetic over binary64 with outward rounding.

Every operation returns an enclosure of the exact real result.  Rounding is
realized without touching the FPU rounding mode: each round-to-nearest result
is corrected with an error-free transformation (TwoSum for additions, Dekker's
TwoProduct for multiplications).  The sign of the exact rounding error decides
whether the result has to be moved to its floating-point neighbour, so

* ``+``, ``-`` and ``*`` are *exactly* directed (0 ulp overestimation) whenever
  no overflow or gradual underflow is involved, and
* ``/``, ``sqrt`` and the overflow/underflow fallbacks widen the nearest
  result by one ulp per endpoint.

The state touched is purely local, so every function here is thread-safe and
independent of FMA contraction (numpy never contracts ``a*b - c``).

An :class:`Interval` wraps two read-only numpy arrays ``lo`` and ``hi`` of the
same shape; a scalar interval has shape ``()``.  Vectors and matrices of
intervals are the same class with ``ndim`` 1 or 2.
"""

from __future__ import annotations

import math
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from typing import Iterator, Union

import numpy as np

from .errors import IntervalDivisionError, ShapeError

__all__ = [
    "Interval", "add", "sub", "mul", "div", "from_decimal", "from_fraction",
    "dot", "matvec", "matmul", "norm_inf_upper", "mag_upper", "norm2_upper",
    "norm2_lower", "add_rd", "add_ru", "mul_rd", "mul_ru", "sum_rd", "sum_ru",
    "sqrt_rd", "sqrt_ru", "div_rd", "div_ru",
]

_INF = np.inf
_MAX = np.finfo(np.float64).max
_SPLITTER = 134217729.0  # 2**27 + 1
_SPLIT_LIMIT = 2.0 ** 995
_PRODUCT_FLOOR = 2.0 ** -960  # below this the TwoProduct error may be inexact
_PRODUCT_CEIL = 2.0 ** 1021  # above this the split partial products may overflow

Number = Union[int, float, np.floating, np.integer]


# ---------------------------------------------------------------------------
# directed primitives on float arrays
# ---------------------------------------------------------------------------

def _asf(a) -> np.ndarray:
    return np.asarray(a, dtype=np.float64)


def add_rd(a, b) -> np.ndarray:
    """``a + b`` rounded toward -inf."""
    a, b = _asf(a), _asf(b)
    with np.errstate(all="ignore"):
        s = a + b
        bb = s - a
        err = (a - (s - bb)) + (b - bb)
        out = np.where(err < 0, np.nextafter(s, -_INF), s)
        overflow = np.isposinf(s) & np.isfinite(a) & np.isfinite(b)
        return np.where(overflow, _MAX, out)


def add_ru(a, b) -> np.ndarray:
    """``a + b`` rounded toward +inf."""
    a, b = _asf(a), _asf(b)
    with np.errstate(all="ignore"):
        s = a + b
        bb = s - a
        err = (a - (s - bb)) + (b - bb)
        out = np.where(err > 0, np.nextafter(s, _INF), s)
        overflow = np.isneginf(s) & np.isfinite(a) & np.isfinite(b)
        return np.where(overflow, -_MAX, out)


def _product_bounds(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # zero times anything (including an infinite endpoint) is exactly zero
    with np.errstate(all="ignore"):
        p = a * b
        c = _SPLITTER * a
        ah = c - (c - a)
        al = a - ah
        c = _SPLITTER * b
        bh = c - (c - b)
        bl = b - bh
        err = al * bl - (((p - ah * bh) - al * bh) - ah * bl)
        lo = np.where(err < 0, np.nextafter(p, -_INF), p)
        hi = np.where(err > 0, np.nextafter(p, _INF), p)
        zero = (a == 0) | (b == 0)
        safe = ((np.abs(a) <= _SPLIT_LIMIT) & (np.abs(b) <= _SPLIT_LIMIT)
                & (np.abs(p) >= _PRODUCT_FLOOR) & (np.abs(p) <= _PRODUCT_CEIL)
                & np.isfinite(err))
        unsafe = ~zero & ~safe
        lo = np.where(unsafe, np.nextafter(p, -_INF), lo)
        hi = np.where(unsafe, np.nextafter(p, _INF), hi)
        lo = np.where(zero, 0.0, lo)
        hi = np.where(zero, 0.0, hi)
    return lo, hi


def mul_rd(a, b) -> np.ndarray:
    """``a * b`` rounded toward -inf (``0 * inf`` is taken as 0)."""
    return _product_bounds(_asf(a), _asf(b))[0]


def mul_ru(a, b) -> np.ndarray:
    """``a * b`` rounded toward +inf (``0 * inf`` is taken as 0)."""
    return _product_bounds(_asf(a), _asf(b))[1]


def _quotient_bounds(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    with np.errstate(all="ignore"):
        q = a / b
        plo, phi = _product_bounds(q, b)
        exact = (plo == a) & (phi == a) & np.isfinite(q)
        exact |= (a == 0) & (b != 0)
        lo = np.where(exact, q, np.nextafter(q, -_INF))
        hi = np.where(exact, q, np.nextafter(q, _INF))
    return lo, hi


def div_rd(a, b) -> np.ndarray:
    """``a / b`` rounded downward (at most one ulp below the exact quotient)."""
    return _quotient_bounds(_asf(a), _asf(b))[0]


def div_ru(a, b) -> np.ndarray:
    """``a / b`` rounded upward (at most one ulp above the exact quotient)."""
    return _quotient_bounds(_asf(a), _asf(b))[1]


def _sqrt_bounds(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    with np.errstate(all="ignore"):
        x = np.maximum(x, 0.0)
        s = np.sqrt(x)
        plo, phi = _product_bounds(s, s)
        exact = ((plo == x) & (phi == x)) | (x == 0) | np.isposinf(x)
        lo = np.where(exact, s, np.maximum(np.nextafter(s, -_INF), 0.0))
        hi = np.where(exact, s, np.nextafter(s, _INF))
    return lo, hi


def sqrt_rd(x) -> np.ndarray:
    """Lower bound of ``sqrt(max(x, 0))``."""
    return _sqrt_bounds(_asf(x))[0]


def sqrt_ru(x) -> np.ndarray:
    """Upper bound of ``sqrt(max(x, 0))``."""
    return _sqrt_bounds(_asf(x))[1]


def _pairwise(a: np.ndarray, op, axis: int | None) -> np.ndarray:
    """Fixed-order pairwise reduction; the order never depends on the data."""
    if axis is None:
        a = a.reshape(-1)
        axis = 0
    a = np.moveaxis(a, axis, 0)
    if a.shape[0] == 0:
        return np.zeros(a.shape[1:])
    while a.shape[0] > 1:
        n = a.shape[0]
        half = n // 2
        s = op(a[0:2 * half:2], a[1:2 * half:2])
        if n % 2:
            s = np.concatenate([s, a[n - 1:n]], axis=0)
        a = s
    return a[0]


def sum_rd(a, axis: int | None = None) -> np.ndarray:
    """Sum rounded downward (pairwise, deterministic order)."""
    return _pairwise(_asf(a), add_rd, axis)


def sum_ru(a, axis: int | None = None) -> np.ndarray:
    """Sum rounded upward (pairwise, deterministic order)."""
    return _pairwise(_asf(a), add_ru, axis)


# ---------------------------------------------------------------------------
# the interval type
# ---------------------------------------------------------------------------

def _freeze(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


def _exact_float_array(x) -> np.ndarray:
    arr = np.asarray(x)
    if arr.dtype.kind in "iu":
        if arr.size and np.max(np.abs(arr.astype(object))) > 2 ** 53:
            raise ValueError("integer too large for an exact binary64 conversion")
        return arr.astype(np.float64)
    if arr.dtype.kind == "b":
        return arr.astype(np.float64)
    if arr.dtype.kind == "O":
        out = np.empty(arr.shape)
        flat = arr.reshape(-1)
        for k, v in enumerate(flat):
            if isinstance(v, int) and abs(v) > 2 ** 53:
                raise ValueError("integer too large for an exact binary64 conversion")
            out.reshape(-1)[k] = float(v)
        return out
    return np.asarray(arr, dtype=np.float64)


class Interval:
    """Closed interval ``[lo, hi]`` (element-wise for array shapes).

    Endpoints are binary64; ``lo`` may be ``-inf`` and ``hi`` may be
    ``+inf``.  NaN never survives construction: an element with a NaN
    endpoint becomes the whole real line.

    >>> Interval(1, 2) + Interval(3, 4)
    Interval([4.0, 6.0])
    """

    __slots__ = ("lo", "hi")
    __array_priority__ = 1000
    __hash__ = None  # type: ignore[assignment]

    def __init__(self, lo, hi=None):
        lo_arr = np.array(_exact_float_array(lo), dtype=np.float64)
        hi_arr = lo_arr.copy() if hi is None else np.array(_exact_float_array(hi), dtype=np.float64)
        if lo_arr.shape != hi_arr.shape:
            lo_arr, hi_arr = np.broadcast_arrays(lo_arr, hi_arr)
            lo_arr, hi_arr = lo_arr.copy(), hi_arr.copy()
        nan = np.isnan(lo_arr) | np.isnan(hi_arr)
        if np.any(lo_arr[~nan] > hi_arr[~nan]):
            raise ValueError("interval lower endpoint exceeds upper endpoint")
        if np.any(np.isposinf(lo_arr[~nan])) or np.any(np.isneginf(hi_arr[~nan])):
            raise ValueError("interval endpoint infinite on the wrong side")
        self._set(lo_arr, hi_arr)

    def _set(self, lo: np.ndarray, hi: np.ndarray) -> None:
        nan = np.isnan(lo) | np.isnan(hi)
        if nan.any():
            lo = np.where(nan, -_INF, lo)
            hi = np.where(nan, _INF, hi)
        object.__setattr__(self, "lo", _freeze(np.asarray(lo, dtype=np.float64)))
        object.__setattr__(self, "hi", _freeze(np.asarray(hi, dtype=np.float64)))

    def __setattr__(self, name, value):
        raise AttributeError("Interval is immutable")

    @classmethod
    def _raw(cls, lo, hi) -> "Interval":
        obj = cls.__new__(cls)
        obj._set(np.asarray(lo, dtype=np.float64), np.asarray(hi, dtype=np.float64))
        return obj

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x)

    @classmethod
    def whole(cls, shape=()) -> "Interval":
        return cls._raw(np.full(shape, -_INF), np.full(shape, _INF))

    @classmethod
    def zeros(cls, shape) -> "Interval":
        z = np.zeros(shape)
        return cls._raw(z, z.copy())

    # -- shape handling ----------------------------------------------------
    @property
    def shape(self) -> tuple:
        return self.lo.shape

    @property
    def ndim(self) -> int:
        return self.lo.ndim

    @property
    def size(self) -> int:
        return self.lo.size

    def __len__(self) -> int:
        return len(self.lo)

    def __iter__(self) -> Iterator["Interval"]:
        for k in range(len(self)):
            yield self[k]

    def __getitem__(self, idx) -> "Interval":
        return Interval._raw(self.lo[idx], self.hi[idx])

    @property
    def T(self) -> "Interval":
        return Interval._raw(self.lo.T, self.hi.T)

    def reshape(self, *shape) -> "Interval":
        return Interval._raw(self.lo.reshape(*shape), self.hi.reshape(*shape))

    def copy(self) -> "Interval":
        return Interval._raw(self.lo.copy(), self.hi.copy())

    @staticmethod
    def concatenate(parts, axis: int = 0) -> "Interval":
        parts = [as_interval(p) for p in parts]
        return Interval._raw(np.concatenate([p.lo for p in parts], axis=axis),
                             np.concatenate([p.hi for p in parts], axis=axis))

    @staticmethod
    def stack(parts, axis: int = 0) -> "Interval":
        parts = [as_interval(p) for p in parts]
        return Interval._raw(np.stack([p.lo for p in parts], axis=axis),
                             np.stack([p.hi for p in parts], axis=axis))

    def set(self, idx, value) -> "Interval":
        """Copy with ``self[idx]`` replaced by ``value``."""
        v = as_interval(value)
        lo, hi = self.lo.copy(), self.hi.copy()
        lo[idx] = v.lo
        hi[idx] = v.hi
        return Interval._raw(lo, hi)

    # -- predicates and measures ------------------------------------------
    @property
    def is_point(self) -> bool:
        return bool(np.array_equal(self.lo, self.hi))

    def mid(self) -> np.ndarray:
        """Approximate midpoint (not rigorous, always inside the interval)."""
        with np.errstate(all="ignore"):
            m = 0.5 * self.lo + 0.5 * self.hi
        m = np.where(np.isfinite(m), m, np.where(np.isfinite(self.lo), self.lo,
                                                 np.where(np.isfinite(self.hi), self.hi, 0.0)))
        return np.clip(m, self.lo, self.hi)

    def width(self) -> np.ndarray:
        """Upper bound of ``hi - lo``."""
        return add_ru(self.hi, -self.lo)

    def rad(self) -> np.ndarray:
        """Upper bound of the radius about :meth:`mid`."""
        m = self.mid()
        return np.maximum(add_ru(self.hi, -m), add_ru(m, -self.lo))

    def mag(self) -> np.ndarray:
        """``max |x|`` over the interval (exact)."""
        return np.maximum(np.abs(self.lo), np.abs(self.hi))

    def mig(self) -> np.ndarray:
        """``min |x|`` over the interval (exact)."""
        straddle = (self.lo <= 0) & (self.hi >= 0)
        return np.where(straddle, 0.0, np.minimum(np.abs(self.lo), np.abs(self.hi)))

    def contains(self, x) -> np.ndarray | bool:
        """Element-wise ``lo <= x <= hi`` for binary64 points ``x``."""
        x = _asf(x)
        r = (self.lo <= x) & (x <= self.hi)
        return bool(r) if r.ndim == 0 else r

    def contains_zero(self) -> np.ndarray | bool:
        return self.contains(0.0)

    def issubset(self, other: "Interval") -> bool:
        other = as_interval(other)
        return bool(np.all(other.lo <= self.lo) and np.all(self.hi <= other.hi))

    def in_interior(self, other: "Interval") -> bool:
        """True if every element lies strictly inside ``other``."""
        other = as_interval(other)
        return bool(np.all(other.lo < self.lo) and np.all(self.hi < other.hi))

    def hull(self, other) -> "Interval":
        other = as_interval(other)
        return Interval._raw(np.minimum(self.lo, other.lo), np.maximum(self.hi, other.hi))

    def identical(self, other) -> bool:
        """Bitwise equality of both endpoint arrays."""
        if not isinstance(other, Interval) or self.shape != other.shape:
            return False
        return bool(np.array_equal(self.lo, other.lo) and np.array_equal(self.hi, other.hi))

    __eq__ = identical  # type: ignore[assignment]

    # -- arithmetic --------------------------------------------------------
    def __neg__(self) -> "Interval":
        return Interval._raw(-self.hi, -self.lo)

    def __pos__(self) -> "Interval":
        return self

    def __add__(self, other) -> "Interval":
        other = as_interval(other)
        return Interval._raw(add_rd(self.lo, other.lo), add_ru(self.hi, other.hi))

    __radd__ = __add__

    def __sub__(self, other) -> "Interval":
        other = as_interval(other)
        return Interval._raw(add_rd(self.lo, -other.hi), add_ru(self.hi, -other.lo))

    def __rsub__(self, other) -> "Interval":
        return as_interval(other) - self

    def __mul__(self, other) -> "Interval":
        other = as_interval(other)
        a_pt = np.array_equal(self.lo, self.hi)
        b_pt = np.array_equal(other.lo, other.hi)
        if a_pt and b_pt:
            lo, hi = _product_bounds(*np.broadcast_arrays(self.lo, other.lo))
            return Interval._raw(lo, hi)
        if a_pt:
            corners = [(self.lo, other.lo), (self.lo, other.hi)]
        elif b_pt:
            corners = [(self.lo, other.lo), (self.hi, other.lo)]
        else:
            corners = [(self.lo, other.lo), (self.lo, other.hi),
                       (self.hi, other.lo), (self.hi, other.hi)]
        los, his = zip(*(_product_bounds(*np.broadcast_arrays(x, y)) for x, y in corners))
        return Interval._raw(np.minimum.reduce(los), np.maximum.reduce(his))

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Interval":
        other = as_interval(other)
        if np.any((other.lo <= 0) & (other.hi >= 0)):
            raise IntervalDivisionError()
        corners = [(self.lo, other.lo), (self.lo, other.hi),
                   (self.hi, other.lo), (self.hi, other.hi)]
        los, his = zip(*(_quotient_bounds(*np.broadcast_arrays(x, y)) for x, y in corners))
        return Interval._raw(np.minimum.reduce(los), np.maximum.reduce(his))

    def __rtruediv__(self, other) -> "Interval":
        return as_interval(other) / self

    def __matmul__(self, other) -> "Interval":
        other = as_interval(other)
        if other.ndim == 1:
            return matvec(self, other)
        return matmul(self, other)

    def __rmatmul__(self, other) -> "Interval":
        return as_interval(other) @ self

    def sqr(self) -> "Interval":
        """Element-wise square, tighter than ``x * x`` when 0 is inside."""
        m_lo, m_hi = self.mig(), self.mag()
        lo = _product_bounds(m_lo, m_lo)[0]
        hi = _product_bounds(m_hi, m_hi)[1]
        return Interval._raw(lo, hi)

    def sqrt(self) -> "Interval":
        if np.any(self.hi < 0):
            raise ValueError("sqrt of a negative interval")
        return Interval._raw(sqrt_rd(self.lo), sqrt_ru(self.hi))

    def abs(self) -> "Interval":
        return Interval._raw(self.mig(), self.mag())

    def sum(self, axis: int | None = None) -> "Interval":
        return Interval._raw(sum_rd(self.lo, axis), sum_ru(self.hi, axis))

    def __repr__(self) -> str:
        if self.ndim == 0:
            return f"Interval([{float(self.lo)!r}, {float(self.hi)!r}])"
        pairs = np.stack([self.lo, self.hi], axis=-1).tolist()
        return f"Interval({pairs!r})"


def as_interval(x) -> Interval:
    """Return ``x`` as an :class:`Interval` (point interval for numbers).

    Floats are taken as exact binary64 values.  Use :func:`from_decimal` for
    decimal literals that may not be representable.
    """
    if isinstance(x, Interval):
        return x
    if isinstance(x, Fraction):
        return from_fraction(x)
    return Interval(x)


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def add(a, b) -> Interval:
    return as_interval(a) + as_interval(b)


def sub(a, b) -> Interval:
    return as_interval(a) - as_interval(b)


def mul(a, b) -> Interval:
    return as_interval(a) * as_interval(b)


def div(a, b) -> Interval:
    """Quotient enclosure; raises :class:`IntervalDivisionError` if ``0 in b``."""
    return as_interval(a) / as_interval(b)


def from_fraction(q: Fraction) -> Interval:
    """Tightest binary64 enclosure of an exact rational."""
    q = Fraction(q)
    try:
        f = q.numerator / q.denominator  # correctly rounded int division
    except OverflowError:
        return Interval._raw(_MAX, _INF) if q > 0 else Interval._raw(-_INF, -_MAX)
    if math.isinf(f):
        return Interval._raw(_MAX, _INF) if q > 0 else Interval._raw(-_INF, -_MAX)
    exact = Fraction(f)
    if exact == q:
        return Interval._raw(f, f)
    if exact > q:
        return Interval._raw(math.nextafter(f, -math.inf), f)
    return Interval._raw(f, math.nextafter(f, math.inf))


def parse_exact(s: str) -> Fraction:
    """Exact rational value of a decimal or hexadecimal-float literal."""
    t = s.strip()
    if not t:
        raise ValueError(f"malformed numeric literal {s!r}")
    if "x" in t.lower():
        try:
            f = float.fromhex(t)
        except (ValueError, OverflowError):
            raise ValueError(f"malformed numeric literal {s!r}") from None
        if not math.isfinite(f):
            raise ValueError(f"malformed numeric literal {s!r}")
        return Fraction(f)
    if "_" in t:
        raise ValueError(f"malformed numeric literal {s!r}")
    try:
        d = Decimal(t)
    except InvalidOperation:
        raise ValueError(f"malformed numeric literal {s!r}") from None
    if not d.is_finite():
        raise ValueError(f"malformed numeric literal {s!r}")
    return Fraction(d)


def from_decimal(s: str) -> Interval:
    """Enclose the exact value of a decimal (or hex-float) literal.

    The result is the tightest enclosure: a point when the literal is a
    binary64 number, otherwise the two neighbouring floats.

    >>> from_decimal("0.5")
    Interval([0.5, 0.5])
    """
    return from_fraction(parse_exact(s))


def dot(x, y) -> Interval:
    """Enclosure of the inner product over the last axis."""
    x, y = as_interval(x), as_interval(y)
    if x.shape[-1:] != y.shape[-1:]:
        raise ShapeError(f"dot: length mismatch {x.shape} vs {y.shape}")
    return (x * y).sum(axis=-1)


def matvec(A, x) -> Interval:
    A, x = as_interval(A), as_interval(x)
    if A.ndim != 2 or x.ndim != 1 or A.shape[1] != x.shape[0]:
        raise ShapeError(f"matvec: dimension mismatch {A.shape} @ {x.shape}")
    return (A * x.reshape(1, -1)).sum(axis=1)


def matmul(A, B) -> Interval:
    A, B = as_interval(A), as_interval(B)
    if A.ndim != 2 or B.ndim != 2 or A.shape[1] != B.shape[0]:
        raise ShapeError(f"matmul: dimension mismatch {A.shape} @ {B.shape}")
    n, k = A.shape
    p = B.shape[1]
    prod = A.reshape(n, k, 1) * B.reshape(1, k, p)
    return prod.sum(axis=1)


def mag_upper(a) -> np.ndarray | float:
    """Upper bound of ``|x|`` over the interval (exact: ``max(|lo|, |hi|)``)."""
    m = as_interval(a).mag()
    return float(m) if m.ndim == 0 else m


def norm_inf_upper(A) -> float:
    """Upper bound of the infinity norm of every point matrix in ``A``."""
    A = as_interval(A)
    if A.ndim != 2:
        raise ShapeError("norm_inf_upper expects a matrix")
    if A.size == 0:
        return 0.0
    return float(np.max(sum_ru(A.mag(), axis=1)))


def norm2_upper(v) -> float:
    """Upper bound of the Euclidean norm of every point in the box ``v``."""
    m = as_interval(v).mag().reshape(-1)
    return float(sqrt_ru(sum_ru(mul_ru(m, m))))


def norm2_lower(v) -> float:
    """Lower bound of the Euclidean norm of every point in the box ``v``."""
    m = as_interval(v).mig().reshape(-1)
    return float(sqrt_rd(sum_rd(mul_rd(m, m))))
