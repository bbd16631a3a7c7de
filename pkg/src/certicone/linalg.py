"""Verified linear algebra.

Eigenvalue enclosures of symmetric (interval) matrices rest on Weyl's
perturbation theorem: with an approximate decomposition ``Q diag(lam) Q^T``
and an interval residual ``E`` containing ``D - Q diag(lam) Q^T``, the i-th
eigenvalue of ``D`` lies within ``||E||_inf`` of the i-th eigenvalue of
``Q diag(lam) Q^T``.  Because a computed ``Q`` is never exactly orthogonal,
the latter differs from ``lam_i`` by at most ``alpha |lam_i|`` with
``alpha >= ||Q^T Q - I||`` (Ostrowski); both terms go into the radius.

Linear systems are enclosed with a residual Krawczyk iteration and epsilon
inflation.  Everything here either returns a verified result or refuses.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import ShapeError, VerificationError
from .interval import (Interval, as_interval, add_rd, add_ru, matmul, matvec,
                       mul_ru, norm_inf_upper)
from .sdpmat import SymMatrix, diag_positions

__all__ = [
    "EigEnclosure", "eig_approx", "eig_enclose", "psd_shift", "enclose_square",
    "enclose_underdetermined", "residual",
]


@dataclass(frozen=True)
class EigEnclosure:
    """Enclosures of all eigenvalues, sorted by midpoint.

    Attributes:
        intervals: the i-th interval contains the i-th smallest eigenvalue of
            every point matrix in the input.
        approx: the approximate eigenvalues (midpoints).
        radius: per-eigenvalue radius actually used.
        l: number of intervals whose lower endpoint is negative, an upper
            bound on the number of negative eigenvalues.
        d_neg: ``min(0, smallest lower endpoint)``, a lower bound of
            ``min(lambda_min, 0)``.
    """

    intervals: Interval
    approx: np.ndarray
    radius: np.ndarray
    l: int
    d_neg: float

    @property
    def lower(self) -> float:
        return float(np.min(self.intervals.lo)) if self.intervals.size else 0.0

    @property
    def upper(self) -> float:
        return float(np.max(self.intervals.hi)) if self.intervals.size else 0.0


def _dense(D) -> Interval:
    if isinstance(D, SymMatrix):
        M = D.to_dense()
        return M if isinstance(M, Interval) else Interval(M)
    M = as_interval(D)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError("expected a square matrix")
    if not (np.array_equal(M.lo, M.lo.T) and np.array_equal(M.hi, M.hi.T)):
        raise ValueError("matrix is not symmetric")
    return M


def eig_approx(D) -> tuple[np.ndarray, np.ndarray]:
    """Approximate eigen-decomposition ``D ~ Q diag(lam) Q^T`` of the midpoint.

    Eigenvalues come back in ascending order.  No accuracy is claimed.
    """
    M = _dense(D).mid()
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    lam, Q = np.linalg.eigh(M)
    return Q, lam


def eig_enclose(D) -> EigEnclosure:
    """Verified enclosures of all eigenvalues of a symmetric (interval) matrix."""
    M = _dense(D)
    n = M.shape[0]
    if n == 0:
        empty = np.zeros(0)
        return EigEnclosure(Interval(empty), empty, empty, 0, 0.0)
    if not (np.all(np.isfinite(M.lo)) and np.all(np.isfinite(M.hi))):
        raise ValueError("matrix has non-finite entries")
    Q, lam = eig_approx(M)
    Qi = Interval(Q)
    approx_matrix = matmul(Qi * lam.reshape(1, -1), Qi.T)
    r = norm_inf_upper(M - approx_matrix)
    alpha = norm_inf_upper(matmul(Qi.T, Qi) - np.eye(n))
    if alpha >= 1.0 or not np.isfinite(r):
        radius = np.full(n, np.inf)
    else:
        radius = add_ru(r, mul_ru(alpha, np.abs(lam)))
    intervals = Interval(add_rd(lam, -radius), add_ru(lam, radius))
    l = int(np.count_nonzero(intervals.lo < 0))
    d_neg = float(min(0.0, np.min(intervals.lo)))
    return EigEnclosure(intervals, lam, radius, l, d_neg)


def psd_shift(X: SymMatrix) -> tuple[SymMatrix, float]:
    """Shift a nearly semidefinite matrix into the cone, with proof.

    Returns ``(X - x_lo I, x_lo)`` where ``x_lo <= min(lambda_min(X), 0)`` and
    the shifted matrix (rounded upward on the diagonal) is verified positive
    semidefinite by :func:`eig_enclose`.  ``x_lo = 0`` and ``X`` itself come
    back when ``X`` is already verified.

    Raises:
        VerificationError: if the shifted matrix cannot be certified after one
            enlarged retry.
    """
    if X.is_interval:
        raise TypeError("psd_shift expects a point matrix")
    enc = eig_enclose(X)
    if enc.lower >= 0:
        return X, 0.0
    margin = float(2.0 * np.max(enc.radius))
    d = diag_positions(X.order)
    for attempt in range(2):
        x_lo = float(add_rd(enc.lower, -margin))
        data = np.array(X.data)
        data[d] = add_ru(data[d], -x_lo)
        shifted = SymMatrix(X.order, data)
        check = eig_enclose(shifted)
        if check.lower >= 0:
            return shifted, x_lo
        margin = max(4.0 * margin, 4.0 * float(np.max(check.radius)), 2.0 ** -1022)
    raise VerificationError("could not certify the shifted matrix as positive semidefinite")


def enclose_square(A, b, xt=None, max_sweeps: int = 10) -> Interval | None:
    """Enclose the solution of ``A x = b`` for every point ``(A, b)`` in the data.

    Residual Krawczyk iteration: with ``R ~ inv(mid A)``, ``z = R (b - A xt)``
    and ``C = I - R A``, a box ``Y`` with ``z + C Y`` strictly inside ``Y``
    proves that every ``A`` is nonsingular and ``A^{-1} b in xt + z + C Y``.

    Returns ``None`` when verification fails (singular, too ill-conditioned).
    """
    A, b = as_interval(A), as_interval(b)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError("enclose_square expects a square matrix")
    n = A.shape[0]
    if b.shape != (n,):
        raise ShapeError("right-hand side length mismatch")
    if n == 0:
        return Interval(np.zeros(0))
    Am, bm = A.mid(), b.mid()
    try:
        with np.errstate(all="ignore"):
            R = np.linalg.inv(Am)
    except np.linalg.LinAlgError:
        return None
    if not np.all(np.isfinite(R)):
        return None
    with np.errstate(all="ignore"):
        x0 = R @ bm if xt is None else np.asarray(xt, dtype=np.float64).copy()
        if not np.all(np.isfinite(x0)):
            x0 = R @ bm
        x0 = x0 + R @ (bm - Am @ x0)
    if not np.all(np.isfinite(x0)):
        return None
    Ri = Interval(R)
    z = matvec(Ri, b - matvec(A, Interval(x0)))
    C = Interval(np.eye(n)) - matmul(Ri, A)
    inflate = Interval(0.99, 1.01)
    tiny = Interval(-1e-300, 1e-300)
    X = z
    for _ in range(max_sweeps):
        Y = X * inflate + tiny
        Xn = z + matvec(C, Y)
        if Xn.in_interior(Y):
            return Interval(x0) + Xn
        if not (np.all(np.isfinite(Xn.lo)) and np.all(np.isfinite(Xn.hi))):
            return None
        X = Xn
    return None


def enclose_underdetermined(A, b, xt) -> Interval | None:
    """Enclose *some* solution of a ``k x n`` system (``k < n``) near ``xt``.

    Column-pivoted QR of ``mid(A)`` selects ``k`` basis columns; the other
    components are frozen at ``xt`` (zero-width) and the square remainder goes
    to :func:`enclose_square`.
    """
    A, b = as_interval(A), as_interval(b)
    if A.ndim != 2:
        raise ShapeError("expected a matrix")
    k, n = A.shape
    if k >= n:
        raise ShapeError("enclose_underdetermined needs fewer rows than columns")
    if b.shape != (k,):
        raise ShapeError("right-hand side length mismatch")
    xt = np.asarray(xt, dtype=np.float64)
    if xt.shape != (n,):
        raise ShapeError("approximate solution length mismatch")
    if k == 0:
        return Interval(xt)
    Am = A.mid()
    if not np.all(np.isfinite(Am)):
        return None
    _, _, piv = scipy.linalg.qr(Am, mode="economic", pivoting=True)
    basis = np.sort(piv[:k])
    frozen = np.setdiff1d(np.arange(n), basis)
    rhs = b - matvec(A[:, frozen], Interval(xt[frozen]))
    sub = enclose_square(A[:, basis], rhs, xt[basis])
    if sub is None:
        return None
    lo, hi = xt.copy(), xt.copy()
    lo[basis] = sub.lo
    hi[basis] = sub.hi
    return Interval(lo, hi)


def residual(A, x, b, weights=None) -> np.ndarray:
    """Upper bounds ``r`` with ``|(A x)_i - b_i| <= r_i`` for all data points.

    ``x`` is a :class:`~certicone.cones.BlockVector` (its spec supplies the
    inner-product weights) or a flat vector together with ``weights``.
    """
    if hasattr(x, "spec"):
        weights = x.spec.weights
        x = x.data
    A, b, x = as_interval(A), as_interval(b), as_interval(x)
    if weights is not None:
        x = x * np.asarray(weights, dtype=np.float64)
    if A.ndim != 2 or A.shape[1] != x.shape[0] or b.shape != (A.shape[0],):
        raise ShapeError(f"residual: shapes {A.shape}, {x.shape}, {b.shape} do not conform")
    return (matvec(A, x) - b).mag()
