from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import ps
from noncompact.errors import DomainError, ParseError
from noncompact.lp import SparseVector, SpaceSpec, basis, distance, norm
from noncompact.oracles import alpha_k, beta_m, pairwise_distances
from noncompact.sets import (
    BallTail,
    Finite,
    FinitePointSet,
    MeasureKind,
    SphereTail,
    TailFamily,
    Union,
    format_set,
    is_infinite,
    is_minimal,
    leaves,
    measure_exact,
    parse_set,
    scale_set,
    sup_norm_bound,
    truncate,
    truncate_dense,
    unit_ball_measure,
    validate_in_unit_ball,
)

A, B, C = MeasureKind.ALPHA, MeasureKind.BETA, MeasureKind.CHI
E = SparseVector()


def fin(*rows):
    return Finite(FinitePointSet(tuple(SparseVector.from_dense(r) for r in rows)))


def test_kind_parse():
    assert MeasureKind.parse("Alpha") is A
    assert MeasureKind.parse(C) is C
    with pytest.raises(DomainError):
        MeasureKind.parse("gamma")


@pytest.mark.parametrize("p", [2.0, 3.0, 1.5])
def test_tail_measures(p):
    sp = SpaceSpec(p)
    t = TailFamily(E, 1.0, 1)
    assert measure_exact(t, A, sp) == pytest.approx(2 ** (1 / p))
    assert measure_exact(t, B, sp) == pytest.approx(2 ** (1 / p))
    assert measure_exact(t, C, sp) == 1.0


@pytest.mark.parametrize("cls", [SphereTail, BallTail])
def test_sphere_and_ball_measures(cls, space2):
    s = cls(SparseVector({1: 0.3}), 0.5, 2)
    assert measure_exact(s, A, space2) == 1.0
    assert measure_exact(s, C, space2) == 0.5
    assert measure_exact(s, B, space2) == pytest.approx(0.5 * math.sqrt(2))
    assert not is_minimal(s, A, space2)


def test_pairwise_distances_of_tail_truncation_justify_beta(space2):
    # independent oracle: every pair of a tail truncation is r*2^(1/p) apart
    t = TailFamily(SparseVector({1: 0.7}), 0.4, 2)
    D = pairwise_distances(truncate(t, 10, space2), space2)
    off = D[~np.eye(10, dtype=bool)]
    assert np.allclose(off, measure_exact(t, B, space2))


def test_finite_is_zero_and_union_is_max(space2):
    f = fin([1, 0], [0, 1])
    assert all(measure_exact(f, k, space2) == 0 for k in MeasureKind)
    u = Union((f, TailFamily(E, 0.5, 3), SphereTail(E, 0.6, 3)))
    assert measure_exact(u, A, space2) == pytest.approx(1.2)
    assert measure_exact(u, C, space2) == pytest.approx(0.6)
    assert is_infinite(u) and not is_infinite(f)


def test_minimality_rules(space2):
    t1 = TailFamily(E, 0.5, 1)
    t2 = TailFamily(SparseVector({1: 1.0}), 0.5, 3)
    assert is_minimal(t1, A, space2)
    assert is_minimal(Union((t1, t2, fin([3.0]))), C, space2)
    assert not is_minimal(Union((t1, TailFamily(E, 0.6, 1))), B, space2)
    with pytest.raises(DomainError):
        is_minimal(fin([1.0]), A, space2)


def test_union_component_limit():
    t = TailFamily(E, 1.0, 1)
    Union(tuple([t] * 16))
    with pytest.raises(DomainError):
        Union(tuple([t] * 17))
    with pytest.raises(DomainError):
        Union(())


def test_nested_union_leaves():
    t = TailFamily(E, 1.0, 1)
    u = Union((t, Union((t, fin([1.0])))))
    assert len(leaves(u)) == 3


@pytest.mark.parametrize(
    "bad",
    [
        lambda: TailFamily(E, 0.0, 1),
        lambda: TailFamily(E, -1.0, 1),
        lambda: TailFamily(SparseVector({3: 1.0}), 1.0, 3),
        lambda: SphereTail(E, 1.0, 0),
        lambda: FinitePointSet(()),
        lambda: FinitePointSet((basis(1), basis(1))),
    ],
)
def test_validation(bad):
    with pytest.raises(DomainError):
        bad()


@given(st.floats(0.01, 5), st.floats(0.01, 5), ps)
def test_scale_homogeneity(r, k, p):
    sp = SpaceSpec(p)
    s = Union((SphereTail(SparseVector({1: 0.2}), r, 2), TailFamily(E, r / 2, 4)))
    for kind in MeasureKind:
        assert measure_exact(scale_set(s, k), kind, sp) == pytest.approx(k * measure_exact(s, kind, sp))


def test_scale_rejects_nonpositive():
    with pytest.raises(DomainError):
        scale_set(TailFamily(E, 1.0, 1), 0.0)


def test_sup_norm_and_unit_ball(space2):
    w = TailFamily(SparseVector({1: 0.6}), 0.8, 2)
    assert sup_norm_bound(w, space2) == pytest.approx(1.0)
    assert validate_in_unit_ball(w, space2)
    assert not validate_in_unit_ball(scale_set(w, 1.01), space2)
    # every sampled point sits on the unit sphere
    for v in truncate(SphereTail(SparseVector({1: 0.6}), 0.8, 2), 9, space2, "random", seed=3):
        assert norm(v, 2) == pytest.approx(1.0)


def test_unit_ball_measures():
    sp = SpaceSpec(3.0)
    assert unit_ball_measure(A, sp) == 2.0
    assert unit_ball_measure(C, sp) == 1.0
    assert unit_ball_measure(B, sp) == pytest.approx(2 ** (1 / 3))


def test_truncate_axes_order(space2):
    s = SphereTail(SparseVector({1: 0.5}), 0.5, 2)
    pts = truncate(s, 3, space2)
    assert pts.points[0] == SparseVector({1: 0.5, 2: 0.5})
    assert pts.points[1] == SparseVector({1: 0.5, 2: -0.5})
    assert pts.points[2] == SparseVector({1: 0.5, 3: 0.5})


def test_truncate_union_round_robin_dedups(space2):
    t = TailFamily(E, 1.0, 1)
    pts = truncate(Union((t, t, fin([5.0]))), 4, space2)
    assert pts.points == (basis(1), SparseVector({1: 5.0}), basis(2), basis(3))


def test_truncate_errors(space2):
    with pytest.raises(DomainError):
        truncate(fin([1.0]), 2, space2)
    with pytest.raises(DomainError):
        truncate(TailFamily(E, 1.0, 1), 0, space2)
    with pytest.raises(DomainError):
        truncate(TailFamily(E, 1.0, 1), 10, SpaceSpec(2.0, truncation_dim=8))
    with pytest.raises(DomainError):
        truncate(SphereTail(E, 1.0, 1), 4, space2, scheme="spiral")


@pytest.mark.parametrize("cls", [TailFamily, SphereTail, BallTail])
@pytest.mark.parametrize("scheme", ["axes", "positive"])
@pytest.mark.parametrize("count", [1, 7, 8])
def test_truncate_dense_matches_sparse(cls, scheme, count, space2):
    s = cls(SparseVector({1: 0.3, 2: -0.1}), 0.7, 4)
    X, coords = truncate_dense(s, count, space2, scheme)
    Y, coords2 = truncate(s, count, space2, scheme).to_dense()
    assert coords == coords2
    np.testing.assert_array_equal(X, Y)


def test_finite_oracles_see_structured_measure(space2):
    # alpha on a tail truncation: pigeonhole puts two points in one part
    t = TailFamily(SparseVector({1: 0.5}), 0.75, 2)
    P = truncate(t, 9, space2)
    assert alpha_k(P, 4, space2) == pytest.approx(measure_exact(t, A, space2), abs=1e-12)
    assert beta_m(P, 5, space2) == pytest.approx(measure_exact(t, B, space2), abs=1e-12)


# -- text form ---------------------------------------------------------------

nums = st.floats(-3, 3, allow_nan=False).map(lambda x: round(x, 6))


@st.composite
def leaf_sets(draw):
    kind = draw(st.sampled_from(["tail", "sphere", "ball", "finite"]))
    dim = draw(st.integers(0, 3))
    if kind == "finite":
        rows = draw(st.lists(st.lists(nums, min_size=dim + 1, max_size=dim + 1), min_size=1, max_size=4))
        pts = {tuple(SparseVector.from_dense(r).items): r for r in rows}
        return fin(*pts.values())
    center = SparseVector.from_dense(draw(st.lists(nums, min_size=dim, max_size=dim)))
    r = draw(st.floats(0.01, 3).map(lambda x: round(x, 6)))
    start = center.max_index + 1 + draw(st.integers(0, 3))
    return {"tail": TailFamily, "sphere": SphereTail, "ball": BallTail}[kind](center, r, start)


any_sets = st.one_of(leaf_sets(), st.lists(leaf_sets(), min_size=1, max_size=4).map(lambda c: Union(tuple(c))))


@given(any_sets)
def test_format_parse_roundtrip(s):
    text = format_set(s)
    assert parse_set(text) == s
    assert format_set(parse_set(text)) == text


def test_parse_examples():
    assert parse_set("tail(center=[], r=1, start=1)") == TailFamily(E, 1.0, 1)
    assert parse_set("sphere(center=[0.5, 0], r=0.5)") == SphereTail(SparseVector({1: 0.5}), 0.5, 2)
    assert format_set(parse_set("finite([[1,0]])")) == "finite([[1]])"
    u = parse_set("union(tail(r=1), finite([[2]]))")
    assert isinstance(u, Union) and len(u.components) == 2


@pytest.mark.parametrize(
    "text,pos",
    [
        ("tail(center=[0.5], r=1", 4),
        ("tail(r=1, start=1.5)", 16),
        ("cone(r=1)", 0),
        ("tail(r='x')", 7),
        ("tail(center=[1], r=1, start=1)", 0),
        ("tail(1)", 5),
        ("finite([[1], [1]])", 0),
    ],
)
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as err:
        parse_set(text)
    assert err.value.position == pos


def test_distance_helper_matches_truncation(space2):
    pts = truncate(TailFamily(E, 2.0, 1), 2, space2).points
    assert distance(*pts, 2) == pytest.approx(2 * math.sqrt(2))
