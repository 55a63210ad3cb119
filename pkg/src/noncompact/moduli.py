"""Moduli of noncompact convexity on l_p: closed forms and witness estimates.

A witness is a subset ``A`` of the closed unit ball with measure above
``eps``; ``1 - d(0, co(A))`` evaluated on it bounds the modulus from above.
Witnesses are ``{a*e_1 + b*u}`` with ``a^p + b^p = 1`` and ``u`` ranging
over a tail direction set, either basis vectors (a minimal set) or the
tail unit sphere. The hull distance is evaluated on a finite truncation,
which slightly overstates it; that truncation slack is reported with every
estimate rather than corrected away.
"""

from __future__ import annotations

import csv
import enum
import functools
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DomainError, NoClosedFormError, NoncompactError
from .hull import hull_distance_dense
from .lp import SparseVector, SpaceSpec, norm
from .sets import (
    MeasureKind,
    SphereTail,
    StructuredSet,
    TailFamily,
    format_set,
    measure_exact,
    truncate_dense,
    unit_ball_measure,
    validate_in_unit_ball,
)

MARGINS = (1e-2, 1e-3)


class WitnessFamily(enum.Enum):
    MINIMAL_TAIL = "minimal_tail"
    SPHERE_TAIL = "sphere_tail"


def _require_p2(space: SpaceSpec) -> None:
    if space.p < 2:
        raise DomainError(f"closed forms need p >= 2, got p={space.p}")


def closed_form_modulus(kind: MeasureKind, space: SpaceSpec, eps: float) -> float:
    """``1 - (1 - eps^p/2)^(1/p)`` for beta, ``1 - (1 - (eps/2)^p)^(1/p)`` for alpha."""
    kind = MeasureKind.parse(kind)
    if kind is MeasureKind.CHI:
        raise NoClosedFormError("no closed form for the Hausdorff modulus; see chi_reference")
    _require_p2(space)
    end = unit_ball_measure(kind, space)
    if not 0 <= eps <= end * (1 + 1e-12):
        raise DomainError(f"eps={eps} outside [0, {end}]")
    p = space.p
    inner = 1.0 - eps**p / 2.0 if kind is MeasureKind.BETA else 1.0 - (eps / 2.0) ** p
    return 1.0 - max(inner, 0.0) ** (1.0 / p)


def closed_form_derivative(kind: MeasureKind, space: SpaceSpec, eps: float) -> float:
    """d/d eps of :func:`closed_form_modulus` (increasing in eps)."""
    kind = MeasureKind.parse(kind)
    if kind is MeasureKind.CHI:
        raise NoClosedFormError("no closed form for the Hausdorff modulus")
    _require_p2(space)
    p = space.p
    if kind is MeasureKind.BETA:
        u, du = eps**p / 2.0, p * eps ** (p - 1.0) / 2.0
    else:
        u, du = (eps / 2.0) ** p, p * (eps / 2.0) ** (p - 1.0) / 2.0
    if u >= 1.0:
        return math.inf
    return (1.0 - u) ** (1.0 / p - 1.0) * du / p


def clarkson_delta(space: SpaceSpec, eps: float) -> float:
    """Modulus of convexity of l_p for p >= 2."""
    _require_p2(space)
    if not 0 <= eps <= 2:
        raise DomainError(f"eps={eps} outside [0, 2]")
    p = space.p
    return 1.0 - max(1.0 - (eps / 2.0) ** p, 0.0) ** (1.0 / p)


def chi_reference(space: SpaceSpec, eps: float) -> float:
    """Limit of the Hausdorff witness estimates, ``1 - (1 - eps^p)^(1/p)``.

    Not a published closed form; used only as a numeric target.
    """
    if not 0 <= eps <= 1:
        raise DomainError(f"eps={eps} outside [0, 1]")
    return 1.0 - max(1.0 - eps**space.p, 0.0) ** (1.0 / space.p)


def witness_radius(kind: MeasureKind, family: WitnessFamily, level: float, space: SpaceSpec) -> float:
    """Tail radius ``b`` at which the family's measure equals ``level``."""
    root2 = 2.0 ** (1.0 / space.p)
    if kind is MeasureKind.CHI:
        return level
    if family is WitnessFamily.SPHERE_TAIL and kind is MeasureKind.ALPHA:
        return level / 2.0
    return level / root2


def witness_end(kind: MeasureKind, family: WitnessFamily, space: SpaceSpec) -> float:
    """Supremum of the measure levels the family can reach inside the unit ball."""
    kind = MeasureKind.parse(kind)
    family = WitnessFamily(family)
    reach = 1.0 / witness_radius(kind, family, 1.0, space)
    return min(unit_ball_measure(kind, space), reach)


def witness_make(
    kind: MeasureKind, family: WitnessFamily, eps: float, margin: float, space: SpaceSpec
) -> StructuredSet:
    kind = MeasureKind.parse(kind)
    family = WitnessFamily(family)
    if not margin > 0:
        raise DomainError(f"margin must be positive, got {margin!r}")
    if eps < 0:
        raise DomainError(f"eps must be nonnegative, got {eps!r}")
    level = eps + margin
    if not level < unit_ball_measure(kind, space):
        raise DomainError(f"eps + margin = {level} reaches the unit-ball measure")
    b = witness_radius(kind, family, level, space)
    if b > 1.0:
        raise DomainError(f"witness infeasible: tail radius {b} > 1")
    a = max(1.0 - b**space.p, 0.0) ** (1.0 / space.p)
    center = SparseVector({1: a})
    cls = TailFamily if family is WitnessFamily.MINIMAL_TAIL else SphereTail
    w = cls(center, b, 2)
    assert validate_in_unit_ball(w, space) and measure_exact(w, kind, space) > eps
    return w


@dataclass(frozen=True)
class ModulusPoint:
    epsilon: float
    analytic_value: float | None
    numeric_estimate: float | None
    witness: StructuredSet | None
    restricted_minimal: bool
    family: str | None = None
    slack: float = 0.0
    error: str | None = None

    @property
    def value(self) -> float | None:
        return self.numeric_estimate if self.numeric_estimate is not None else self.analytic_value

    def to_dict(self) -> dict:
        return {
            "epsilon": self.epsilon,
            "analytic": self.analytic_value,
            "numeric": self.numeric_estimate,
            "witness": format_set(self.witness) if self.witness is not None else None,
            "family": self.family,
            "slack": self.slack,
            "error": self.error,
        }


def analytic_value(kind: MeasureKind, space: SpaceSpec, eps: float) -> float | None:
    if kind is MeasureKind.CHI or space.p < 2:
        return None
    try:
        return closed_form_modulus(kind, space, eps)
    except DomainError:
        return None


def _family_estimate(kind, family, space, eps, trunc_N, tol):
    """Extrapolated ``1 - d`` over the margin schedule; None when infeasible."""
    samples = []
    for m in MARGINS + (tol,):
        try:
            w = witness_make(kind, family, eps, m, space)
        except DomainError:
            continue
        X, coords = truncate_dense(w, trunc_N, space)
        res = hull_distance_dense(X, coords, space, tol)
        samples.append((m, 1.0 - res.value, w, res.value - norm(w.center, space.p)))
    if not samples:
        return None
    if len(samples) == 1:
        m0, v0, w0, s0 = samples[0]
        return v0, w0, s0
    (m1, v1, _, _), (m2, v2, w2, s2) = samples[-2], samples[-1]
    v = v2 - m2 * (v1 - v2) / (m1 - m2)
    return min(max(v, 0.0), 1.0), w2, s2


@functools.lru_cache(maxsize=65536)
def _estimate_cached(kind, p, truncation_dim, eps, restrict_minimal, trunc_N, tol):
    space = SpaceSpec(p, truncation_dim)
    families = [WitnessFamily.MINIMAL_TAIL]
    if not restrict_minimal:
        families.append(WitnessFamily.SPHERE_TAIL)
    best = None
    for fam in families:
        got = _family_estimate(kind, fam, space, eps, trunc_N, tol)
        if got is not None and (best is None or got[0] < best[0]):
            best = (got[0], got[1], got[2], fam.value)
    return best


def estimate_modulus(
    kind: MeasureKind,
    space: SpaceSpec,
    eps: float,
    restrict_minimal: bool = False,
    trunc_N: int = 256,
    tol: float = 1e-6,
) -> ModulusPoint:
    """Witness estimate of the modulus (or of its minimal-set variant).

    With ``restrict_minimal`` only tail families (minimal sets) are
    admissible; otherwise sphere tails compete too and the smaller value
    wins. Raises :class:`DomainError` when no witness is feasible at ``eps``.
    """
    kind = MeasureKind.parse(kind)
    eps = float(eps)
    end = unit_ball_measure(kind, space)
    if not 0 <= eps < end:
        raise DomainError(f"eps={eps} outside [0, {end})")
    if trunc_N < 8:
        raise DomainError(f"trunc_N must be at least 8, got {trunc_N}")
    best = _estimate_cached(kind, space.p, space.truncation_dim, eps, bool(restrict_minimal), int(trunc_N), tol)
    if best is None:
        raise DomainError(f"no admissible witness with measure above eps={eps}")
    value, witness, slack, fam = best
    return ModulusPoint(
        epsilon=eps,
        analytic_value=analytic_value(kind, space, eps),
        numeric_estimate=value,
        witness=witness,
        restricted_minimal=bool(restrict_minimal),
        family=fam,
        slack=slack,
    )


def make_grid(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic grid, rounded to 12 decimals for stable keys."""
    if stop < start:
        raise DomainError(f"grid stop {stop} below start {start}")
    if stop == start:
        return [round(float(start), 12)]
    if not step > 0:
        raise DomainError(f"grid step must be positive, got {step}")
    n = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(n)]


@dataclass
class ModulusCurve:
    space: SpaceSpec
    kind: MeasureKind
    restricted_minimal: bool
    grid: list[ModulusPoint]
    config: dict = field(default_factory=dict)

    def epsilons(self) -> list[float]:
        return [pt.epsilon for pt in self.grid]

    def values(self) -> list[float | None]:
        return [pt.value for pt in self.grid]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "p": self.space.p,
            "restricted_minimal": self.restricted_minimal,
            "config": self.config,
            "grid": [pt.to_dict() for pt in self.grid],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["epsilon", "analytic", "numeric", "witness"])
        for pt in self.grid:
            w.writerow(
                [
                    repr(pt.epsilon),
                    "" if pt.analytic_value is None else repr(pt.analytic_value),
                    "" if pt.numeric_estimate is None else repr(pt.numeric_estimate),
                    "" if pt.witness is None else format_set(pt.witness),
                ]
            )
        return buf.getvalue()


def _check_grid(grid: Sequence[float]) -> list[float]:
    grid = [float(e) for e in grid]
    if not grid:
        raise DomainError("empty grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("grid must be strictly increasing")
    return grid


def modulus_curve(
    kind: MeasureKind,
    space: SpaceSpec,
    grid: Iterable[float],
    restrict_minimal: bool = False,
    trunc_N: int = 256,
    tol: float = 1e-6,
) -> ModulusCurve:
    """Estimate the modulus on every grid point; failures become flagged gaps."""
    kind = MeasureKind.parse(kind)
    grid = _check_grid(list(grid))
    pts = []
    for eps in grid:
        try:
            pts.append(estimate_modulus(kind, space, eps, restrict_minimal, trunc_N, tol))
        except NoncompactError as exc:
            pts.append(ModulusPoint(eps, analytic_value(kind, space, eps), None, None, restrict_minimal, error=str(exc)))
    config = {"trunc_N": trunc_N, "tol": tol, "truncation_dim": space.truncation_dim}
    return ModulusCurve(space, kind, bool(restrict_minimal), pts, config)


def analytic_curve(kind: MeasureKind, space: SpaceSpec, grid: Iterable[float]) -> ModulusCurve:
    """Closed-form curve (no numeric column)."""
    kind = MeasureKind.parse(kind)
    pts = [
        ModulusPoint(eps, closed_form_modulus(kind, space, eps), None, None, False)
        for eps in _check_grid(list(grid))
    ]
    return ModulusCurve(space, kind, False, pts, {"source": "closed_form"})


@dataclass(frozen=True)
class CharacteristicEstimate:
    value: float
    kind: MeasureKind
    restricted_minimal: bool


def characteristic(curve: ModulusCurve, zero_tol: float = 1e-4) -> CharacteristicEstimate:
    """Largest grid epsilon whose modulus value is within ``zero_tol`` of 0."""
    if not curve.grid:
        raise DomainError("empty curve")
    best = 0.0
    for pt in curve.grid:
        v = pt.value
        if v is not None and v <= zero_tol:
            best = max(best, pt.epsilon)
    return CharacteristicEstimate(best, curve.kind, curve.restricted_minimal)
