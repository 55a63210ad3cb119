"""Distance from the origin to the convex hull of a finite set in l_p.

The primal problem ``min ||sum lam_i x_i||_p`` over the simplex is solved by
away-step Frank-Wolfe (compiled kernel) interleaved with a Newton polish on
the active face. The normalised gradient at the primal point is a dual
functional ``f`` with ``||f||_q = 1``, and ``min_i <f, x_i>`` is a certified
lower bound, so every result carries its own primal-dual gap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, NumericError
from .lp import SparseVector, SpaceSpec, norm
from .sets import FinitePointSet

MAX_ITER = 50_000
CHUNK = 100


@dataclass(frozen=True)
class HullDistanceResult:
    value: float
    primal_point: SparseVector
    dual_functional: SparseVector
    gap: float
    iterations: int = 0

    @property
    def dual_value(self) -> float:
        return self.value - self.gap


def _power_sum(y: np.ndarray, p: float) -> float:
    return float(np.sum(np.abs(y) ** p))


def _polish(X: np.ndarray, lam: np.ndarray, p: float, iters: int = 30) -> np.ndarray:
    """Projected Newton on the face spanned by the current support of ``lam``."""
    lam = lam.copy()
    for _ in range(iters):
        A = np.flatnonzero(lam > 0)
        XA = X[A]
        la = lam[A]
        y = la @ XA
        g = XA @ (p * np.sign(y) * np.abs(y) ** (p - 1.0))
        with np.errstate(divide="ignore", invalid="ignore"):
            w = p * (p - 1.0) * np.abs(y) ** (p - 2.0)
        if not np.all(np.isfinite(w)):
            break  # p < 2 with a zero coordinate: Hessian undefined
        m = len(A)
        kkt = np.zeros((m + 1, m + 1))
        kkt[:m, :m] = (XA * w) @ XA.T
        kkt[:m, m] = 1.0
        kkt[m, :m] = 1.0
        step = np.linalg.lstsq(kkt, np.concatenate([-g, [0.0]]), rcond=None)[0][:m]
        slope = float(g @ step)
        if not np.all(np.isfinite(step)) or slope >= 0:
            break
        neg = step < 0
        ratios = np.where(neg, -la / np.where(neg, step, -1.0), np.inf)
        tmax = float(ratios.min())
        t = min(1.0, tmax)
        f0 = _power_sum(y, p)
        while t > 1e-12 and _power_sum((la + t * step) @ XA, p) > f0 + 1e-4 * t * slope:
            t *= 0.5
        if t <= 1e-12:
            break
        new = la + t * step
        if t == tmax:
            new[int(np.argmin(ratios))] = 0.0
        np.clip(new, 0.0, None, out=new)
        lam[A] = new / new.sum()
        if float(np.max(np.abs(t * step))) < 1e-15:
            break
    return lam


def _to_sparse(vec: np.ndarray, coords: list[int]) -> SparseVector:
    return SparseVector((c, float(x)) for c, x in zip(coords, vec))


def hull_distance(
    P: FinitePointSet, space: SpaceSpec, tol: float = 1e-6, max_iter: int = MAX_ITER
) -> HullDistanceResult:
    """``d(0, co(P))`` with a dual certificate; raises :class:`NumericError` on stall."""
    X, coords = P.to_dense()
    return hull_distance_dense(X, coords, space, tol, max_iter)


def hull_distance_dense(
    X: np.ndarray, coords: list[int], space: SpaceSpec, tol: float = 1e-6, max_iter: int = MAX_ITER
) -> HullDistanceResult:
    """As :func:`hull_distance` for points given as rows of ``X`` over ``coords``."""
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    p = space.p
    if not coords:  # every point is the origin
        zero = SparseVector()
        return HullDistanceResult(0.0, zero, zero, 0.0)
    lam = None
    total = 0
    ok = False
    while True:
        chunk = min(CHUNK, max_iter - total)
        lam, y, gap, it, ok = kernels.hull_fw(X, p, tol, chunk, lam)
        total += it
        if ok or total >= max_iter:
            break
        lam = _polish(X, np.asarray(lam), p)
    lam = np.asarray(lam)
    y = lam @ X
    primal = _to_sparse(y, coords)
    value = norm(primal, p)
    if value <= tol:
        # origin (almost) in the hull: no certificate beyond the trivial one
        return HullDistanceResult(value, primal, SparseVector(), value, total)
    f = np.sign(y) * (np.abs(y) / value) ** (p - 1.0)
    f /= np.sum(np.abs(f) ** space.q) ** (1.0 / space.q)
    dual = float(np.min(X @ f))
    dual = min(dual, value)  # weak duality; only rounding can break it
    res = HullDistanceResult(value, primal, _to_sparse(f, coords), value - dual, total)
    if not ok and res.gap > tol:
        raise NumericError("hull distance did not converge", dual, value, best=res)
    return res


def dual_bound(f: SparseVector, P: FinitePointSet, space: SpaceSpec) -> float:
    """``min_i <f, x_i>`` after scaling ``f`` onto the dual unit sphere."""
    if f.is_zero():
        raise DomainError("the zero functional certifies nothing")
    fn = norm(f, space.q)
    return min(f.dot(x) for x in P.points) / fn
