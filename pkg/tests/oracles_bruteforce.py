"""Slow, independent reference implementations used only by the tests."""

from __future__ import annotations

import itertools

import numpy as np
from scipy.optimize import minimize


def set_partitions(items, k):
    """All partitions of ``items`` into at most ``k`` nonempty blocks."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest, k):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        if len(part) < k:
            yield [[first]] + part


def dist_matrix(X, p):
    return np.sum(np.abs(X[:, None, :] - X[None, :, :]) ** p, axis=2) ** (1 / p)


def diameter(X, rows, p):
    D = dist_matrix(X[list(rows)], p)
    return float(D.max()) if len(rows) > 1 else 0.0


def cheb_radius(X, p):
    """Smallest enclosing l_p ball by Nelder-Mead on the max distance, several starts."""
    if len(X) == 1:
        return 0.0

    def f(c):
        return float(np.max(np.sum(np.abs(X - c) ** p, axis=1) ** (1 / p)))

    starts = [X.mean(axis=0), (X.max(axis=0) + X.min(axis=0)) / 2]
    best = np.inf
    for c0 in starts:
        res = minimize(f, c0, method="Nelder-Mead", options={"xatol": 1e-11, "fatol": 1e-12, "maxiter": 40000})
        res = minimize(f, res.x, method="Nelder-Mead", options={"xatol": 1e-12, "fatol": 1e-13, "maxiter": 40000})
        best = min(best, res.fun)
    return best


def alpha_brute(X, k, p):
    return min(max(diameter(X, b, p) for b in part) for part in set_partitions(range(len(X)), k))


def chi_brute(X, k, p):
    cache = {}

    def rad(block):
        key = tuple(block)
        if key not in cache:
            cache[key] = cheb_radius(X[list(block)], p)
        return cache[key]

    return min(max(rad(sorted(b)) for b in part) for part in set_partitions(range(len(X)), k))


def beta_brute(X, m, p):
    D = dist_matrix(X, p)
    return max(
        min(D[i, j] for i, j in itertools.combinations(sub, 2)) for sub in itertools.combinations(range(len(X)), m)
    )


def hull_distance_brute(X, p):
    """SLSQP over the simplex from several starts."""
    n = X.shape[0]

    def f(lam):
        return float(np.sum(np.abs(lam @ X) ** p))

    cons = ({"type": "eq", "fun": lambda lam: lam.sum() - 1.0},)
    best = np.inf
    rng = np.random.default_rng(0)
    for start in [np.full(n, 1 / n)] + [rng.dirichlet(np.ones(n)) for _ in range(4)]:
        res = minimize(f, start, method="SLSQP", bounds=[(0, 1)] * n, constraints=cons,
                       options={"ftol": 1e-15, "maxiter": 2000})
        best = min(best, res.fun)
    return best ** (1 / p)
