"""Symbolic infinite subsets of l_p with exact measure values.

Every infinite variant is built from a centre plus a tail coordinate
subspace whose indices lie strictly beyond the centre's support, which is
what makes the measure formulas below exact.
"""

from __future__ import annotations

import ast
import enum
import math
from dataclasses import dataclass
from typing import Iterator, Union as TypingUnion

import numpy as np

from .errors import DomainError, ParseError
from .lp import DEFAULT_TOL, SparseVector, SpaceSpec, norm

MAX_UNION_COMPONENTS = 16


class MeasureKind(enum.Enum):
    ALPHA = "alpha"  # Kuratowski
    CHI = "chi"  # Hausdorff
    BETA = "beta"  # Istratescu

    @classmethod
    def parse(cls, name: "str | MeasureKind") -> "MeasureKind":
        if isinstance(name, MeasureKind):
            return name
        try:
            return cls(name.lower())
        except ValueError:
            raise DomainError(f"unknown measure kind {name!r}; expected alpha, chi or beta") from None


@dataclass(frozen=True)
class FinitePointSet:
    points: tuple[SparseVector, ...]

    def __post_init__(self):
        pts = tuple(self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise DomainError("a finite point set must be nonempty")
        X, _ = self.to_dense()
        for i in range(len(pts) - 1):
            close = np.max(np.abs(X[i + 1 :] - X[i]), axis=1) <= DEFAULT_TOL
            if close.any():
                raise DomainError(f"points {i} and {i + 1 + int(np.argmax(close))} coincide")

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[SparseVector]:
        return iter(self.points)

    def coordinates(self) -> list[int]:
        """Sorted union of the supports."""
        return sorted({i for v in self.points for i in v.support})

    def to_dense(self) -> tuple[np.ndarray, list[int]]:
        """Dense ``(len, d)`` matrix over the union support, plus the index map."""
        coords = self.coordinates()
        col = {c: j for j, c in enumerate(coords)}
        X = np.zeros((len(self.points), max(len(coords), 1)))
        for r, v in enumerate(self.points):
            for i, x in v.items:
                X[r, col[i]] = x
        return X, coords

    def scaled(self, k: float) -> "FinitePointSet":
        return FinitePointSet(tuple(k * v for v in self.points))


def _check_tail(center: SparseVector, radius: float, tail_start: int, name: str) -> None:
    if not radius > 0 or not math.isfinite(radius):
        raise DomainError(f"{name}: radius must be positive, got {radius!r}")
    if int(tail_start) != tail_start or tail_start < 1:
        raise DomainError(f"{name}: tail_start must be a positive integer, got {tail_start!r}")
    if center.max_index >= tail_start:
        raise DomainError(
            f"{name}: tail_start={tail_start} must exceed the centre support (max index {center.max_index})"
        )


@dataclass(frozen=True)
class TailFamily:
    """``{center + radius * e_n : n >= tail_start}``."""

    center: SparseVector
    radius: float
    tail_start: int

    def __post_init__(self):
        _check_tail(self.center, self.radius, self.tail_start, "tail")


@dataclass(frozen=True)
class SphereTail:
    """``center + radius * u`` over unit vectors ``u`` of the tail subspace."""

    center: SparseVector
    radius: float
    tail_start: int

    def __post_init__(self):
        _check_tail(self.center, self.radius, self.tail_start, "sphere")


@dataclass(frozen=True)
class BallTail:
    """Like :class:`SphereTail` but with the whole ball of the tail subspace."""

    center: SparseVector
    radius: float
    tail_start: int

    def __post_init__(self):
        _check_tail(self.center, self.radius, self.tail_start, "ball")


@dataclass(frozen=True)
class Finite:
    points: FinitePointSet


@dataclass(frozen=True)
class Union:
    components: tuple["StructuredSet", ...]

    def __post_init__(self):
        comps = tuple(self.components)
        object.__setattr__(self, "components", comps)
        if not comps:
            raise DomainError("union needs at least one component")
        if len(comps) > MAX_UNION_COMPONENTS:
            raise DomainError(f"union has {len(comps)} components, at most {MAX_UNION_COMPONENTS} allowed")


StructuredSet = TypingUnion[TailFamily, SphereTail, BallTail, Finite, Union]
_TAILS = (TailFamily, SphereTail, BallTail)


def leaves(s: StructuredSet) -> list[StructuredSet]:
    """Flatten nested unions into their non-union components."""
    if isinstance(s, Union):
        return [leaf for c in s.components for leaf in leaves(c)]
    return [s]


def is_infinite(s: StructuredSet) -> bool:
    return any(isinstance(leaf, _TAILS) for leaf in leaves(s))


def measure_exact(s: StructuredSet, kind: MeasureKind, space: SpaceSpec) -> float:
    """Exact value of the chosen measure of noncompactness on ``s``."""
    kind = MeasureKind.parse(kind)
    root2 = 2.0 ** (1.0 / space.p)
    if isinstance(s, Finite):
        return 0.0
    if isinstance(s, TailFamily):
        return s.radius if kind is MeasureKind.CHI else s.radius * root2
    if isinstance(s, (SphereTail, BallTail)):
        if kind is MeasureKind.ALPHA:
            return 2.0 * s.radius
        if kind is MeasureKind.CHI:
            return s.radius
        return s.radius * root2
    if isinstance(s, Union):
        return max(measure_exact(c, kind, space) for c in s.components)
    raise TypeError(f"not a structured set: {s!r}")


def is_minimal(s: StructuredSet, kind: MeasureKind, space: SpaceSpec) -> bool:
    """Decide whether every infinite subset of ``s`` has the measure of ``s``."""
    kind = MeasureKind.parse(kind)
    infinite = [leaf for leaf in leaves(s) if isinstance(leaf, _TAILS)]
    if not infinite:
        raise DomainError("minimality is only defined for infinite sets")
    if any(not isinstance(leaf, TailFamily) for leaf in infinite):
        # sphere and ball tails contain convergent sequences
        return False
    values = [measure_exact(leaf, kind, space) for leaf in infinite]
    return max(values) - min(values) <= space.tol * max(1.0, max(values))


def scale_set(s: StructuredSet, k: float) -> StructuredSet:
    if not k > 0 or not math.isfinite(k):
        raise DomainError(f"scale factor must be positive, got {k!r}")
    if isinstance(s, _TAILS):
        return type(s)(k * s.center, k * s.radius, s.tail_start)
    if isinstance(s, Finite):
        return Finite(s.points.scaled(k))
    if isinstance(s, Union):
        return Union(tuple(scale_set(c, k) for c in s.components))
    raise TypeError(f"not a structured set: {s!r}")


def sup_norm_bound(s: StructuredSet, space: SpaceSpec) -> float:
    """Largest norm attained on ``s`` (closed form for tails)."""
    p = space.p
    if isinstance(s, _TAILS):
        c = norm(s.center, p)
        return (c**p + s.radius**p) ** (1.0 / p)
    if isinstance(s, Finite):
        return max(norm(v, p) for v in s.points)
    return max(sup_norm_bound(c, space) for c in s.components)


def validate_in_unit_ball(s: StructuredSet, space: SpaceSpec) -> bool:
    return sup_norm_bound(s, space) <= 1.0 + space.tol


def unit_ball_measure(kind: MeasureKind, space: SpaceSpec) -> float:
    kind = MeasureKind.parse(kind)
    if kind is MeasureKind.ALPHA:
        return 2.0
    if kind is MeasureKind.CHI:
        return 1.0
    return 2.0 ** (1.0 / space.p)


SCHEMES = ("axes", "positive", "random")


def _tail_points(s, count: int, space: SpaceSpec, scheme: str, seed: int) -> list[SparseVector]:
    if isinstance(s, TailFamily) or scheme == "positive":
        if count > space.truncation_dim:
            raise DomainError(f"count={count} exceeds truncation_dim={space.truncation_dim}")
        return [s.center + SparseVector({s.tail_start + i: s.radius}) for i in range(count)]
    if scheme == "axes":
        if count > 2 * space.truncation_dim:
            raise DomainError(f"count={count} exceeds 2*truncation_dim={2 * space.truncation_dim}")
        out = []
        for i in range(count):
            sign = 1.0 if i % 2 == 0 else -1.0
            out.append(s.center + SparseVector({s.tail_start + i // 2: sign * s.radius}))
        return out
    if scheme == "random":
        dim = min(space.truncation_dim, max(count, 2))
        rng = np.random.default_rng(seed)
        out = []
        for _ in range(count):
            u = rng.standard_normal(dim)
            u /= np.sum(np.abs(u) ** space.p) ** (1.0 / space.p)
            if isinstance(s, BallTail):
                u *= rng.uniform() ** (1.0 / dim)
            out.append(s.center + SparseVector((s.tail_start + j, s.radius * x) for j, x in enumerate(u)))
        return out
    raise DomainError(f"unknown sampling scheme {scheme!r}; expected one of {SCHEMES}")


def _raw_points(s, count: int, space: SpaceSpec, scheme: str, seed: int) -> list[SparseVector]:
    if isinstance(s, _TAILS):
        return _tail_points(s, count, space, scheme, seed)
    if isinstance(s, Finite):
        return list(s.points.points[:count])
    per = [_raw_points(c, count, space, scheme, seed + n) for n, c in enumerate(s.components)]
    out: list[SparseVector] = []
    for i in range(count):
        for pts in per:
            if i < len(pts):
                out.append(pts[i])
    return out


def truncate_dense(
    s: StructuredSet, count: int, space: SpaceSpec, scheme: str = "axes"
) -> tuple[np.ndarray, list[int]]:
    """Dense form of ``truncate(s, count, space, scheme).to_dense()`` for a
    single tail variant, built without intermediate sparse vectors."""
    if not isinstance(s, _TAILS) or scheme not in ("axes", "positive"):
        return truncate(s, count, space, scheme).to_dense()
    positive = isinstance(s, TailFamily) or scheme == "positive"
    ndir = count if positive else (count + 1) // 2
    if ndir > space.truncation_dim:
        raise DomainError(f"count={count} needs {ndir} directions, truncation_dim={space.truncation_dim}")
    base = [i for i, _ in s.center.items]
    coords = base + list(range(s.tail_start, s.tail_start + ndir))
    X = np.zeros((count, len(coords)))
    X[:, : len(base)] = [v for _, v in s.center.items]
    rows = np.arange(count)
    if positive:
        X[rows, len(base) + rows] = s.radius
    else:
        X[rows, len(base) + rows // 2] = np.where(rows % 2 == 0, s.radius, -s.radius)
    return X, coords


def truncate(
    s: StructuredSet, count: int, space: SpaceSpec, scheme: str = "axes", seed: int = 0
) -> FinitePointSet:
    """Return ``count`` distinct points of ``s``.

    Tail families use ``center + radius*e_{tail_start+i}``. Sphere and ball
    tails default to antipodal axis pairs (``scheme="axes"``); ``"positive"``
    keeps only the ``+`` half and ``"random"`` draws seeded directions.
    """
    if int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count!r}")
    if isinstance(s, Finite) and count > len(s.points):
        raise DomainError(f"finite set has only {len(s.points)} points, asked for {count}")
    pts: list[SparseVector] = []
    for v in _raw_points(s, count, space, scheme, seed):
        if not any(v.isclose(w, DEFAULT_TOL) for w in pts):
            pts.append(v)
        if len(pts) == count:
            break
    if len(pts) < count:
        raise DomainError(f"set yields only {len(pts)} distinct points, asked for {count}")
    return FinitePointSet(tuple(pts))


# -- canonical text form ---------------------------------------------------

_NAMES = {TailFamily: "tail", SphereTail: "sphere", BallTail: "ball"}
_BY_NAME = {v: k for k, v in _NAMES.items()}


def _fmt_num(x: float) -> str:
    x = float(x)
    return repr(int(x)) if x.is_integer() and abs(x) < 1e15 else repr(x)


def _fmt_vec(v: SparseVector, length: int | None = None) -> str:
    return "[" + ", ".join(_fmt_num(x) for x in v.dense(length)) + "]"


def format_set(s: StructuredSet) -> str:
    """Canonical text, e.g. ``tail(center=[0.5], r=0.5, start=2)``."""
    if isinstance(s, _TAILS):
        return f"{_NAMES[type(s)]}(center={_fmt_vec(s.center)}, r={_fmt_num(s.radius)}, start={s.tail_start})"
    if isinstance(s, Finite):
        n = max(1, max(v.max_index for v in s.points.points))
        return "finite([" + ", ".join(_fmt_vec(v, n) for v in s.points.points) + "])"
    if isinstance(s, Union):
        return "union(" + ", ".join(format_set(c) for c in s.components) + ")"
    raise TypeError(f"not a structured set: {s!r}")


def _literal(node: ast.AST, text: str, what: str):
    try:
        return ast.literal_eval(node)
    except ValueError:
        raise ParseError(f"{what} must be a literal", node.col_offset) from None


def _number(node: ast.AST, text: str, what: str) -> float:
    val = _literal(node, text, what)
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ParseError(f"{what} must be a number", node.col_offset)
    return float(val)


def _vector(node: ast.AST, text: str, what: str) -> SparseVector:
    val = _literal(node, text, what)
    if not isinstance(val, (list, tuple)) or any(
        isinstance(x, bool) or not isinstance(x, (int, float)) for x in val
    ):
        raise ParseError(f"{what} must be a list of numbers", node.col_offset)
    return SparseVector.from_dense(val)


def _build(node: ast.AST, text: str) -> StructuredSet:
    if not isinstance(node, ast.Call) or not isinstance(node.func, ast.Name):
        raise ParseError("expected tail(...), sphere(...), ball(...), finite(...) or union(...)", node.col_offset)
    name = node.func.id
    pos = node.col_offset
    try:
        if name in _BY_NAME:
            if node.args:
                raise ParseError(f"{name}() takes keyword arguments only", node.args[0].col_offset)
            kw = {k.arg: k.value for k in node.keywords}
            unknown = set(kw) - {"center", "r", "start"}
            if unknown:
                raise ParseError(f"unknown argument {sorted(unknown)[0]!r}", pos)
            center = _vector(kw["center"], text, "center") if "center" in kw else SparseVector()
            if "r" not in kw:
                raise ParseError(f"{name}() requires r=", pos)
            r = _number(kw["r"], text, "r")
            if "start" in kw:
                start = _number(kw["start"], text, "start")
                if not start.is_integer():
                    raise ParseError("start must be an integer", kw["start"].col_offset)
                start = int(start)
            else:
                start = center.max_index + 1
            return _BY_NAME[name](center, r, start)
        if name == "finite":
            if len(node.args) != 1 or node.keywords:
                raise ParseError("finite() takes one list of points", pos)
            rows = _literal(node.args[0], text, "points")
            if not isinstance(rows, (list, tuple)):
                raise ParseError("finite() expects a list of points", node.args[0].col_offset)
            pts = []
            for row, sub in zip(rows, getattr(node.args[0], "elts", [node.args[0]] * len(rows))):
                pts.append(_vector(sub, text, "point"))
            return Finite(FinitePointSet(tuple(pts)))
        if name == "union":
            if node.keywords or not node.args:
                raise ParseError("union() takes one or more set expressions", pos)
            return Union(tuple(_build(a, text) for a in node.args))
    except DomainError as exc:
        raise ParseError(str(exc), pos) from None
    raise ParseError(f"unknown set constructor {name!r}", pos)


def parse_set(text: str) -> StructuredSet:
    """Inverse of :func:`format_set`."""
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"syntax error: {exc.msg}", max((exc.offset or 1) - 1, 0)) from None
    return _build(tree.body, text)
