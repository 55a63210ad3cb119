"""Finite combinatorial analogues of the Kuratowski, Hausdorff and
Istratescu measures.

Every infinite-set formula in :mod:`noncompact.sets` is checked against
these: cover-by-diameter (``alpha_k``), cover-by-balls (``chi_k``) and best
``m``-point separation (``beta_m``) on explicit point sets.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BudgetError, DomainError, NumericError
from .lp import SparseVector, SpaceSpec
from .sets import FinitePointSet

PARTITION_LIMIT = 16


@dataclass(frozen=True)
class OracleBudget:
    max_points: int = 12
    max_parts: int = 4
    solver_tolerance: float = 1e-8

    def __post_init__(self):
        if self.max_points < 1 or self.max_parts < 1 or not self.solver_tolerance > 0:
            raise DomainError("budget fields must be positive")
        if self.max_points > PARTITION_LIMIT:
            raise DomainError(f"max_points is capped at {PARTITION_LIMIT}")


DEFAULT_BUDGET = OracleBudget()


def pairwise_distances(P: FinitePointSet, space: SpaceSpec) -> np.ndarray:
    X, _ = P.to_dense()
    diff = np.abs(X[:, None, :] - X[None, :, :])
    return np.sum(diff**space.p, axis=2) ** (1.0 / space.p)


def _check_cover(P: FinitePointSet, k: int, budget: OracleBudget) -> bool:
    """True when the answer is trivially 0."""
    if int(k) != k or k < 1:
        raise DomainError(f"k must be a positive integer, got {k!r}")
    if k >= len(P):
        return True
    if len(P) > budget.max_points:
        raise BudgetError(f"{len(P)} points exceed the budget of {budget.max_points}")
    if k > budget.max_parts:
        raise BudgetError(f"k={k} exceeds the budget of {budget.max_parts} parts")
    return False


def _blocks(masks: list[int], n: int) -> list[tuple[int, ...]]:
    return sorted(tuple(i for i in range(n) if m >> i & 1) for m in masks)


def alpha_cover(P: FinitePointSet, k: int, space: SpaceSpec, budget: OracleBudget = DEFAULT_BUDGET):
    """Best partition into at most ``k`` parts by largest part diameter.

    Returns ``(value, parts)`` with parts as tuples of point indices.
    """
    n = len(P)
    if _check_cover(P, k, budget):
        return 0.0, [(i,) for i in range(n)]
    cost = kernels.subset_costs_diameter(pairwise_distances(P, space))
    value, masks = kernels.partition_minmax(cost, n, int(k))
    return value, _blocks(masks, n)


def alpha_k(P: FinitePointSet, k: int, space: SpaceSpec, budget: OracleBudget = DEFAULT_BUDGET) -> float:
    return alpha_cover(P, k, space, budget)[0]


def _cheb_dense(X: np.ndarray, p: float, tol: float, max_iter: int):
    if X.shape[0] == 1:
        return X[0].copy(), 0.0, 0.0
    c, upper, lower, _, ok = kernels.cheb_dual_fw(X, p, tol, max_iter)
    if not ok:
        raise NumericError("Chebyshev centre did not converge", lower, upper, best=c)
    return c, upper, lower


def chebyshev_radius(
    P: FinitePointSet, space: SpaceSpec, tol: float = 1e-8, max_iter: int = 20_000
) -> tuple[SparseVector, float]:
    """Smallest enclosing l_p ball of ``P``: ``(center, radius)``.

    The radius is certified to ``tol`` by the dual bracket; it is also
    checked against half the diameter, which any enclosing ball must reach.
    """
    X, coords = P.to_dense()
    c, upper, lower = _cheb_dense(X, space.p, tol, max_iter)
    half_diam = float(pairwise_distances(P, space).max()) / 2.0
    if upper < half_diam - max(tol, 1e-12):
        raise NumericError("radius below half the diameter", half_diam, upper, best=c)
    center = SparseVector((i, float(x)) for i, x in zip(coords, c))
    return center, float(upper)


def chi_cover(P: FinitePointSet, k: int, space: SpaceSpec, budget: OracleBudget = DEFAULT_BUDGET):
    """Best grouping into at most ``k`` balls by largest Chebyshev radius.

    Exact subset costs are computed lazily: the partition programme first
    runs on certified lower bounds, and only blocks of the current optimum
    that are not yet tight get a full Chebyshev solve. When every block of
    the optimum is tight the value is exact to the solver tolerance.
    """
    n = len(P)
    if _check_cover(P, k, budget):
        return 0.0, [(i,) for i in range(n)]
    tol = budget.solver_tolerance
    X, _ = P.to_dense()
    p = space.p
    lower, upper = kernels.uniform_bounds(X, p)
    lower = np.maximum(lower, kernels.subset_costs_diameter(pairwise_distances(P, space)) / 2.0)
    exact = upper - lower <= tol
    table = np.where(exact, upper, lower)
    while True:
        value, masks = kernels.partition_minmax(table, n, int(k))
        todo = [m for m in masks if not exact[m]]
        if not todo:
            return value, _blocks(masks, n)
        for m in todo:
            rows = [i for i in range(n) if m >> i & 1]
            _, up, _ = _cheb_dense(X[rows], p, tol, 20_000)
            table[m] = max(up, lower[m])
            exact[m] = True


def chi_k(P: FinitePointSet, k: int, space: SpaceSpec, budget: OracleBudget = DEFAULT_BUDGET) -> float:
    return chi_cover(P, k, space, budget)[0]


def beta_subset(P: FinitePointSet, m: int, space: SpaceSpec, budget: OracleBudget = DEFAULT_BUDGET):
    """Best ``m``-point separation: ``(value, indices)``."""
    if int(m) != m or m < 2:
        raise DomainError(f"m must be an integer >= 2, got {m!r}")
    if m > len(P):
        raise DomainError(f"m={m} exceeds the {len(P)} available points")
    if len(P) > budget.max_points:
        raise BudgetError(f"{len(P)} points exceed the budget of {budget.max_points}")
    return kernels.max_min_dispersion(pairwise_distances(P, space), int(m))


def beta_m(P: FinitePointSet, m: int, space: SpaceSpec, budget: OracleBudget = DEFAULT_BUDGET) -> float:
    return beta_subset(P, m, space, budget)[0]
