from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from noncompact.errors import BudgetError, DomainError
from noncompact.lp import SparseVector, SpaceSpec, norm
from noncompact.oracles import (
    OracleBudget,
    alpha_cover,
    alpha_k,
    beta_m,
    beta_subset,
    chebyshev_radius,
    chi_cover,
    chi_k,
)
from noncompact.sets import FinitePointSet, TailFamily, truncate
from oracles_bruteforce import alpha_brute, beta_brute, cheb_radius, chi_brute

E = SparseVector()


def as_set(X):
    return FinitePointSet(tuple(SparseVector.from_dense(r) for r in X))


@pytest.mark.parametrize("p", [2.0, 3.0])
@pytest.mark.parametrize("seed", [0, 1, 2])
def test_chi_matches_brute_force(p, seed):
    X = np.random.default_rng(seed).uniform(-1, 1, size=(6, 2))
    for k in (2, 3):
        assert chi_k(as_set(X), k, SpaceSpec(p)) == pytest.approx(chi_brute(X, k, p), abs=1e-6)


@pytest.mark.parametrize("p", [2.0, 2.5])
def test_alpha_and_beta_match_brute_force(p):
    X = np.random.default_rng(9).uniform(-1, 1, size=(8, 3))
    P, sp = as_set(X), SpaceSpec(p)
    for k in (2, 3, 4):
        assert alpha_k(P, k, sp) == pytest.approx(alpha_brute(X, k, p), abs=1e-12)
    for m in (2, 4, 8):
        assert beta_m(P, m, sp) == pytest.approx(beta_brute(X, m, p), abs=1e-12)


def test_tail_truncation_values(space2):
    tail = TailFamily(E, 1.0, 1)
    P8 = truncate(tail, 8, space2)
    assert abs(alpha_k(P8, 3, space2) - math.sqrt(2)) <= 1e-9
    for m in range(2, 9):
        assert abs(beta_m(P8, m, space2) - math.sqrt(2)) <= 1e-9
    chis = [chi_k(truncate(tail, n, space2), 2, space2) for n in (4, 8, 12)]
    # k-1 blocks of size ceil(N/k): radius of the regular simplex sqrt(1 - 1/s)
    for n, c in zip((4, 8, 12), chis):
        assert c == pytest.approx(math.sqrt(1 - 1 / math.ceil(n / 2)), abs=1e-8)
    assert chis == sorted(chis) and chis[-1] >= 0.8


def test_trivial_covers(space2):
    P = as_set([[0.0], [1.0], [3.0]])
    assert alpha_k(P, 3, space2) == 0.0
    assert chi_k(P, 5, space2) == 0.0
    assert alpha_cover(P, 3, space2)[1] == [(0,), (1,), (2,)]


def test_cover_blocks_are_partitions(space2):
    X = np.random.default_rng(4).uniform(-1, 1, size=(7, 2))
    for fn in (alpha_cover, chi_cover):
        value, blocks = fn(as_set(X), 3, space2)
        flat = sorted(i for b in blocks for i in b)
        assert flat == list(range(7)) and len(blocks) <= 3


def test_budget_and_domain_errors(space2):
    P = as_set(np.eye(13))
    with pytest.raises(BudgetError):
        alpha_k(P, 2, space2)
    with pytest.raises(BudgetError):
        chi_k(as_set(np.eye(6)), 5, space2, OracleBudget(max_parts=4))
    with pytest.raises(BudgetError):
        beta_m(P, 2, space2)
    with pytest.raises(DomainError):
        alpha_k(as_set(np.eye(3)), 0, space2)
    with pytest.raises(DomainError):
        beta_m(as_set(np.eye(3)), 1, space2)
    with pytest.raises(DomainError):
        beta_m(as_set(np.eye(3)), 4, space2)
    with pytest.raises(DomainError):
        OracleBudget(max_points=17)


def test_chebyshev_radius_examples(space2):
    c, r = chebyshev_radius(as_set([[1, 0], [0, 1]]), space2)
    assert r == pytest.approx(math.sqrt(0.5), abs=1e-8)
    assert c.isclose(SparseVector({1: 0.5, 2: 0.5}), 1e-6)
    c, r = chebyshev_radius(as_set([[2.0, 3.0]]), space2)
    assert r == 0.0


@pytest.mark.parametrize("p", [2.0, 3.0, 4.0])
def test_chebyshev_radius_vs_nelder_mead(p):
    X = np.random.default_rng(int(p)).uniform(-1, 1, size=(7, 3))
    c, r = chebyshev_radius(as_set(X), SpaceSpec(p))
    assert r == pytest.approx(cheb_radius(X, p), abs=1e-7)
    far = max(norm(SparseVector.from_dense(x) - c, p) for x in X)
    assert far == pytest.approx(r, abs=1e-12)


small_sets = st.integers(0, 10_000).map(lambda s: np.random.default_rng(s).uniform(-1, 1, size=(7, 2)))


@settings(max_examples=25)
@given(small_sets, st.sampled_from([2.0, 3.0]))
def test_finite_measure_relations(X, p):
    P, sp = as_set(X), SpaceSpec(p)
    prev_a = prev_c = math.inf
    for k in (1, 2, 3, 4):
        a, c = alpha_k(P, k, sp), chi_k(P, k, sp)
        # a ball of radius c has diameter <= 2c; a set of diameter a sits in a ball of radius a
        assert c <= a + 1e-9 and a <= 2 * c + 1e-7
        assert a <= prev_a + 1e-12 and c <= prev_c + 1e-9
        prev_a, prev_c = a, c
    betas = [beta_m(P, m, sp) for m in range(2, 8)]
    assert all(x >= y - 1e-12 for x, y in zip(betas, betas[1:]))


@settings(max_examples=25)
@given(small_sets, st.floats(0.1, 10))
def test_oracles_are_homogeneous(X, k):
    sp = SpaceSpec(2.0)
    P, Q = as_set(X), as_set(k * X)
    assert alpha_k(Q, 3, sp) == pytest.approx(k * alpha_k(P, 3, sp), rel=1e-9)
    assert chi_k(Q, 2, sp) == pytest.approx(k * chi_k(P, 2, sp), rel=1e-6)
    assert beta_m(Q, 3, sp) == pytest.approx(k * beta_m(P, 3, sp), rel=1e-9)


def test_beta_subset_indices(space2):
    value, idx = beta_subset(as_set([[0.0], [1.0], [5.0], [5.5]]), 2, space2)
    assert value == 5.5 and idx == (0, 3)
