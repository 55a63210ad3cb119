from __future__ import annotations

import itertools

import numpy as np
import pytest

from noncompact import _pykernels, kernels
from oracles_bruteforce import beta_brute, cheb_radius, diameter, dist_matrix, set_partitions

try:
    from noncompact import _ckernels
except ImportError:  # extension not built
    _ckernels = None

BACKENDS = [_pykernels] + ([_ckernels] if _ckernels is not None else [])
ids = [b.__name__.rsplit(".", 1)[-1] for b in BACKENDS]
needs_ext = pytest.mark.skipif(_ckernels is None, reason="compiled extension not built")


def points(seed, n, d):
    return np.random.default_rng(seed).uniform(-1, 1, size=(n, d))


def test_backend_flag():
    assert kernels.BACKEND in ("compiled", "python")


@pytest.mark.parametrize("be", BACKENDS, ids=ids)
@pytest.mark.parametrize("p", [2.0, 3.0])
def test_subset_diameters(be, p):
    X = points(1, 7, 3)
    D = dist_matrix(X, p)
    cost = be.subset_costs_diameter(D)
    for S in range(1, 1 << 7):
        rows = [i for i in range(7) if S >> i & 1]
        assert cost[S] == pytest.approx(diameter(X, rows, p), abs=1e-12)


@pytest.mark.parametrize("be", BACKENDS, ids=ids)
@pytest.mark.parametrize("seed,k", [(2, 2), (3, 3), (4, 4)])
def test_partition_minmax_vs_enumeration(be, seed, k):
    n = 7
    X = points(seed, n, 2)
    cost = _pykernels.subset_costs_diameter(dist_matrix(X, 2.0))
    value, blocks = be.partition_minmax(cost, n, k)
    want = min(max(cost[sum(1 << i for i in b)] for b in part) for part in set_partitions(range(n), k))
    assert value == pytest.approx(want, abs=1e-12)
    assert sum(blocks) == (1 << n) - 1 and len(blocks) <= k
    assert max(cost[b] for b in blocks) == pytest.approx(value, abs=1e-12)


@pytest.mark.parametrize("be", BACKENDS, ids=ids)
@pytest.mark.parametrize("m", [2, 3, 5])
def test_dispersion_vs_combinations(be, m):
    X = points(5, 9, 3)
    D = dist_matrix(X, 2.5)
    value, chosen = be.max_min_dispersion(D, m)
    assert value == pytest.approx(beta_brute(X, m, 2.5), abs=1e-12)
    assert len(chosen) == m
    assert min(D[i, j] for i, j in itertools.combinations(chosen, 2)) == pytest.approx(value)


@pytest.mark.parametrize("be", BACKENDS, ids=ids)
@pytest.mark.parametrize("p", [2.0, 2.5, 4.0])
def test_chebyshev_bracket_contains_reference(be, p):
    X = points(6, 6, 3)
    c, upper, lower, _, ok = be.cheb_dual_fw(X, p, 1e-9, 20000)
    assert ok and upper - lower <= 1e-9
    ref = cheb_radius(X, p)
    assert lower - 1e-9 <= ref <= upper + 1e-7
    assert np.max(np.sum(np.abs(X - np.asarray(c)) ** p, axis=1) ** (1 / p)) == pytest.approx(upper, abs=1e-12)


@pytest.mark.parametrize("be", BACKENDS, ids=ids)
def test_uniform_bounds_bracket(be):
    X = points(7, 5, 2)
    lower, upper = be.uniform_bounds(X, 3.0)
    for S in range(1, 1 << 5):
        rows = [i for i in range(5) if S >> i & 1]
        r = cheb_radius(X[rows], 3.0)
        assert lower[S] <= r + 1e-9
        assert r <= upper[S] + 1e-9


@pytest.mark.parametrize("be", BACKENDS, ids=ids)
def test_coord_center_minimises_weighted_sum(be):
    X = points(8, 6, 4)
    lam = np.random.default_rng(8).dirichlet(np.ones(6))
    for p in (2.0, 3.0):
        c = np.asarray(be.coord_center(X, lam, p))
        f = lambda z: float(lam @ np.sum(np.abs(X - z) ** p, axis=1))  # noqa: E731
        for j in range(4):
            for h in (1e-4, -1e-4):
                z = c.copy()
                z[j] += h
                assert f(z) >= f(c) - 1e-14


@needs_ext
@pytest.mark.parametrize("p", [2.0, 2.5, 3.0])
def test_backends_agree_on_hull(p):
    for seed in range(5):
        X = points(seed, 20, 16)
        a = _pykernels.hull_fw(X, p, 1e-8, 3000)
        b = _ckernels.hull_fw(X, p, 1e-8, 3000)
        assert a[3] == b[3]  # identical iteration counts
        np.testing.assert_allclose(a[0], b[0], atol=1e-10)
        assert a[2] == pytest.approx(b[2], abs=1e-10)


@needs_ext
def test_backends_agree_on_combinatorics():
    X = points(11, 10, 3)
    D = dist_matrix(X, 2.0)
    c1, c2 = _pykernels.subset_costs_diameter(D), _ckernels.subset_costs_diameter(D)
    np.testing.assert_array_equal(c1, c2)
    assert _pykernels.partition_minmax(c1, 10, 3) == _ckernels.partition_minmax(c2, 10, 3)
    assert _pykernels.max_min_dispersion(D, 4) == _ckernels.max_min_dispersion(D, 4)
    a = _pykernels.cheb_dual_fw(X, 3.0, 1e-9, 20000)
    b = _ckernels.cheb_dual_fw(X, 3.0, 1e-9, 20000)
    assert a[3] == b[3]
    assert a[1] == pytest.approx(b[1], abs=1e-12)
    la, ua = _pykernels.uniform_bounds(X[:6], 3.0)
    lb, ub = _ckernels.uniform_bounds(X[:6], 3.0)
    np.testing.assert_allclose(la, lb, atol=1e-12)
    np.testing.assert_allclose(ua, ub, atol=1e-12)
