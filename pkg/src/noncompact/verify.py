"""Named, reportable checks of the l_p noncompact-convexity claims.

Every check takes the shared :class:`VerifyConfig` and returns a
:class:`CheckResult` whose ``margin`` is the worst slack observed (``>= 0``
means pass). The estimators only ever produce upper bounds on the moduli;
closed forms play the role of the reference floor, and the finite-truncation
slack of each estimate is budgeted explicitly wherever an estimate is
compared against a closed form.
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError
from .hull import hull_distance_dense
from .lp import SparseVector, SpaceSpec
from .moduli import (
    WitnessFamily,
    analytic_curve,
    clarkson_delta,
    closed_form_derivative,
    closed_form_modulus,
    estimate_modulus,
    make_grid,
    witness_end,
)
from .oracles import OracleBudget, alpha_k, beta_m, chi_k
from .sets import (
    BallTail,
    Finite,
    FinitePointSet,
    MeasureKind,
    SphereTail,
    StructuredSet,
    TailFamily,
    Union,
    is_infinite,
    is_minimal,
    leaves,
    measure_exact,
    scale_set,
    truncate,
    truncate_dense,
)

ALPHA, BETA, CHI = MeasureKind.ALPHA, MeasureKind.BETA, MeasureKind.CHI
AXIOM_PS = (2.0, 2.5, 3.0)
REL_TOL = 1e-12


@dataclass(frozen=True)
class VerifyConfig:
    p: float = 2.0
    trunc_N: int = 256
    tol: float = 1e-6
    zero_tol: float = 1e-4
    seed: int = 42
    grid_step: float = 0.05
    grid_stop: float | None = None  # default: last step below 2^(1/p) - 0.05
    trials: int = 1000
    budget: OracleBudget = OracleBudget()

    def __post_init__(self):
        if self.trials < 1:
            raise DomainError("trials must be at least 1")
        if self.trunc_N < 8:
            raise DomainError("trunc_N must be at least 8")
        if not self.tol > 0 or not self.grid_step > 0:
            raise DomainError("tol and grid_step must be positive")

    @property
    def space(self) -> SpaceSpec:
        return SpaceSpec(self.p)

    def grid(self) -> list[float]:
        stop = self.grid_stop
        if stop is None:
            end = 2.0 ** (1.0 / self.p) - 0.05
            stop = math.floor(end / self.grid_step + 1e-9) * self.grid_step
        return make_grid(0.0, stop, self.grid_step)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["grid"] = self.grid()
        return d


@dataclass
class CheckResult:
    name: str
    reference: str
    passed: bool
    margin: float
    details: str
    runtime: float = 0.0

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "name": self.name,
            "reference": self.reference,
            "passed": self.passed,
            "margin": self.margin,
            "details": self.details,
        }
        if timing:
            d["runtime"] = self.runtime
        return d


def _result(name: str, ref: str, margin: float, lines: list[str]) -> CheckResult:
    margin = float(margin)
    return CheckResult(name, ref, margin >= 0, margin, "\n".join(lines))


@dataclass
class VerificationReport:
    config: VerifyConfig
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def n_passed(self) -> int:
        return sum(c.passed for c in self.checks)

    @property
    def n_failed(self) -> int:
        return len(self.checks) - self.n_passed

    @property
    def all_passed(self) -> bool:
        return self.n_failed == 0

    def to_dict(self, timing: bool = True) -> dict:
        return {
            "config": self.config.to_dict(),
            "checks": [c.to_dict(timing) for c in self.checks],
            "summary": {"total": len(self.checks), "passed": self.n_passed, "failed": self.n_failed},
            "note": "estimators give upper bounds only; closed forms serve as the reference floor",
        }

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2) + "\n"

    def to_text(self, timing: bool = True) -> str:
        out = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            extra = f" ({c.runtime:.2f}s)" if timing else ""
            out.append(f"[{status}] {c.name}: margin={c.margin:.3g}{extra}")
            out.extend("    " + line for line in c.details.splitlines())
        out.append(f"{self.n_passed}/{len(self.checks)} checks passed")
        return "\n".join(out) + "\n"


# ---------------------------------------------------------------- generators


def _random_center(rng: np.random.Generator, dim: int, scale: float) -> SparseVector:
    vals = rng.uniform(-scale, scale, size=dim)
    vals[rng.random(dim) < 0.3] = 0.0
    return SparseVector.from_dense(vals)


def random_leaf(rng: np.random.Generator, allow_finite: bool = True) -> StructuredSet:
    """One random non-union structured set with small support."""
    dim = int(rng.integers(0, 4))
    kinds = ["tail", "sphere", "ball"] + (["finite"] if allow_finite else [])
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind == "finite":
        n = int(rng.integers(1, 5))
        X = rng.uniform(-1, 1, size=(n, dim + 1))
        return Finite(FinitePointSet(tuple(SparseVector.from_dense(row) for row in X)))
    center = _random_center(rng, dim, 1.0)
    radius = float(rng.uniform(0.05, 2.0))
    start = dim + 1 + int(rng.integers(0, 3))
    cls = {"tail": TailFamily, "sphere": SphereTail, "ball": BallTail}[kind]
    return cls(center, radius, start)


def random_structured_set(rng: np.random.Generator) -> StructuredSet:
    """Random leaf or union (possibly nested), covering every set kind."""
    if rng.random() < 0.5:
        return random_leaf(rng)
    n = int(rng.integers(2, 5))
    comps = []
    for _ in range(n):
        if rng.random() < 0.15:
            comps.append(Union(tuple(random_leaf(rng) for _ in range(2))))
        else:
            comps.append(random_leaf(rng))
    return Union(tuple(comps))


def random_minimal_union(rng: np.random.Generator, parts: int) -> StructuredSet:
    """Union of tail families sharing one radius, plus maybe a finite part."""
    r = float(rng.uniform(0.1, 1.5))
    comps: list[StructuredSet] = []
    for _ in range(parts):
        dim = int(rng.integers(0, 3))
        comps.append(TailFamily(_random_center(rng, dim, 1.0), r, dim + 1 + int(rng.integers(0, 3))))
    if rng.random() < 0.5:
        comps.append(Finite(FinitePointSet((SparseVector.from_dense(rng.uniform(-1, 1, 2)),))))
    return Union(tuple(comps))


def _subset_pairs(s: StructuredSet):
    """``(subset, superset)`` pairs whose inclusion is known structurally."""
    if isinstance(s, Union):
        for c in s.components:
            yield c, s
    if isinstance(s, TailFamily):
        yield TailFamily(s.center, s.radius, s.tail_start + 1), s
        yield s, SphereTail(s.center, s.radius, s.tail_start)
    if isinstance(s, SphereTail):
        yield s, BallTail(s.center, s.radius, s.tail_start)


def _close(a: float, b: float) -> bool:
    return abs(a - b) <= REL_TOL * max(1.0, abs(a), abs(b))


# ---------------------------------------------------------------- checks


def check_axioms(config: VerifyConfig) -> CheckResult:
    """Margin: minus the number of violations (0 when clean)."""
    rng = np.random.default_rng(config.seed)
    violations: list[str] = []
    oracle_checks = 0
    for t in range(config.trials):
        space = SpaceSpec(AXIOM_PS[t % len(AXIOM_PS)])
        s = random_structured_set(rng)
        other = random_structured_set(rng)
        k = float(rng.uniform(0.1, 3.0))
        for kind in MeasureKind:
            m = measure_exact(s, kind, space)
            if (m == 0.0) == is_infinite(s):
                violations.append(f"trial {t}: zero-iff-finite fails for {kind.value}")
            mo = measure_exact(other, kind, space)
            mu = measure_exact(Union((s, other)), kind, space)
            if not _close(mu, max(m, mo)):
                violations.append(f"trial {t}: union {mu} != max({m}, {mo}) for {kind.value}")
            ms = measure_exact(scale_set(s, k), kind, space)
            if not _close(ms, k * m):
                violations.append(f"trial {t}: scaling by {k} gives {ms}, expected {k * m}")
            for sub, sup in _subset_pairs(s):
                if measure_exact(sub, kind, space) > measure_exact(sup, kind, space) * (1 + REL_TOL):
                    violations.append(f"trial {t}: subset monotonicity fails for {kind.value}")
        if t % 50 == 0:
            # finite oracles on an 8-point truncation of a random tail family
            leaf = TailFamily(_random_center(rng, 2, 1.0), float(rng.uniform(0.1, 2.0)), 3)
            P = truncate(leaf, 8, space)
            want = measure_exact(leaf, BETA, space)
            for got in (beta_m(P, 8, space), alpha_k(P, 3, space)):
                if abs(got - want) > 1e-9:
                    violations.append(f"trial {t}: oracle {got} disagrees with exact {want}")
            oracle_checks += 1
    # adversarial union: the maximal component must be found among 16
    space = config.space
    comps = tuple(TailFamily(SparseVector(), 0.5 + 0.01 * i, 1 + i) for i in range(16))
    for kind in MeasureKind:
        if not _close(measure_exact(Union(comps), kind, space), measure_exact(comps[-1], kind, space)):
            violations.append(f"16-component union max fails for {kind.value}")
    lines = [
        f"{config.trials} randomized trials over p in {list(AXIOM_PS)}, all three measures",
        f"{oracle_checks} finite-oracle cross-checks on truncated tail families",
        "closure axiom holds vacuously: structured sets are identified with their closures",
        f"violations: {len(violations)}",
    ]
    lines += violations[:20]
    return _result("axioms", "measure axioms: zero on finite sets, union max, homogeneity, monotonicity", -len(violations), lines)


def _curve_values(kind, space, grid, restrict, config) -> dict[float, object]:
    out = {}
    for eps in grid:
        try:
            out[eps] = estimate_modulus(kind, space, eps, restrict, config.trunc_N, config.tol)
        except DomainError:
            pass
    return out


def check_chain(config: VerifyConfig) -> CheckResult:
    """Margin: worst slack over the analytic chain and the primed estimator chain."""
    space = config.space
    grid = config.grid()
    worst = math.inf
    lines = []
    for eps in grid:
        d = clarkson_delta(space, eps)
        a = closed_form_modulus(ALPHA, space, eps)
        b = closed_form_modulus(BETA, space, eps)
        worst = min(worst, a - d + REL_TOL, b - a + REL_TOL)
    lines.append(f"analytic chain delta <= alpha <= beta on {len(grid)} points, worst slack {worst:.3g}")
    tol2 = 2 * config.tol
    beta_p = _curve_values(BETA, space, grid, True, config)
    alpha_p = _curve_values(ALPHA, space, grid, True, config)
    chi_p = _curve_values(CHI, space, grid, True, config)
    est_worst = math.inf
    compared = 0
    for eps in grid:
        if eps not in beta_p or eps not in alpha_p:
            continue
        vb, va = beta_p[eps].numeric_estimate, alpha_p[eps].numeric_estimate
        # the clarkson modulus is a true lower bound; the estimate exceeds the
        # infinite-witness value by at most its truncation slack
        slack = beta_p[eps].slack
        est_worst = min(est_worst, vb - clarkson_delta(space, eps) + slack + tol2, va - vb + tol2)
        if eps in chi_p:
            est_worst = min(est_worst, chi_p[eps].numeric_estimate - va + tol2)
        compared += 1
    lines.append(f"primed estimator chain on {compared} points, worst slack {est_worst:.3g}")
    return _result("chain", "inequality chains of the moduli and of the primed moduli", min(worst, est_worst), lines)


def check_strict_gap(config: VerifyConfig) -> CheckResult:
    """Margin: worst of (estimate - closed alpha) - (closed beta - closed alpha - 2 tol - slack)."""
    space = config.space
    worst = math.inf
    lines = []
    at_one = None
    for eps in config.grid():
        if eps == 0:
            lines.append("eps=0 excluded: both moduli vanish")
            continue
        try:
            pt = estimate_modulus(ALPHA, space, eps, True, config.trunc_N, config.tol)
        except DomainError:
            lines.append(f"eps={eps} excluded: no minimal witness")
            continue
        a = closed_form_modulus(ALPHA, space, eps)
        need = closed_form_modulus(BETA, space, eps) - a - 2 * config.tol - pt.slack
        worst = min(worst, (pt.numeric_estimate - a) - need)
        if abs(eps - 1.0) < 1e-12:
            at_one = pt.numeric_estimate - a
    if at_one is not None:
        lines.append(f"gap at eps=1: {at_one:.6f}")
    if worst == math.inf:
        worst = -1.0
        lines.append("no interior grid point")
    return _result("strict_gap", "strict inequality between the primed and classical alpha moduli", worst, lines)


def check_rescaling(config: VerifyConfig) -> CheckResult:
    """Margin: 2 tol minus the worst rescaling or subhomogeneity defect."""
    space = config.space
    c = 2.0 ** (-1.0 / space.p)
    tol2 = 2 * config.tol
    worst_id = 0.0
    worst_sub = 0.0
    n = 0
    for eps in config.grid():
        try:
            va = estimate_modulus(ALPHA, space, eps, True, config.trunc_N, config.tol).numeric_estimate
            vc = estimate_modulus(CHI, space, round(c * eps, 12), True, config.trunc_N, config.tol).numeric_estimate
        except DomainError:
            continue
        worst_id = max(worst_id, abs(va - vc))
        n += 1
        if eps < 1.0:
            full = estimate_modulus(CHI, space, eps, True, config.trunc_N, config.tol).numeric_estimate
            worst_sub = max(worst_sub, vc - c * full)
    lines = [
        f"{n} grid points; max |alpha'(eps) - chi'(2^(-1/p) eps)| = {worst_id:.3g}",
        f"max subhomogeneity excess chi'(c eps) - c chi'(eps) = {worst_sub:.3g}",
    ]
    return _result("rescaling", "rescaling identity and subhomogeneity of the primed chi modulus", tol2 - max(worst_id, worst_sub), lines)


def check_nonminimalizability(config: VerifyConfig) -> CheckResult:
    """Margin: largest (beta closed - alpha closed) on eps >= 0.8, minus 0.05."""
    space = config.space
    best = -math.inf
    where = None
    for eps in config.grid():
        if eps < 0.8:
            continue
        diff = closed_form_modulus(BETA, space, eps) - closed_form_modulus(ALPHA, space, eps)
        if diff > best:
            best, where = diff, eps
    if where is None:
        return _result("nonminimalizability", "alpha is not minimalizable on l_p", -1.0, ["no grid point with eps >= 0.8"])
    lines = [f"largest beta-alpha modulus difference {best:.6f} at eps={where}"]
    if best >= 0.05:
        lines.append(
            "the alpha and beta moduli differ, yet they would coincide if alpha were "
            f"minimalizable; hence alpha is not minimalizable on l_{space.p:g}"
        )
    return _result("nonminimalizability", "alpha is not minimalizable on l_p", best - 0.05, lines)


CONTINUITY_STEPS = (0.04, 0.02, 0.01)
JUMP_RATIO = 0.6


def max_jump(values: list[float]) -> float:
    return max((abs(b - a) for a, b in zip(values, values[1:])), default=0.0)


def jump_ratios(curve_at: Callable[[float], float], stop: float, steps=CONTINUITY_STEPS) -> list[float]:
    """Ratios of max adjacent jump on successive halvings of the step."""
    jumps = [max_jump([curve_at(e) for e in make_grid(0.0, stop, h)]) for h in steps]
    return [0.0 if j0 == 0 else j1 / j0 for j0, j1 in zip(jumps, jumps[1:])]


def continuity_stop(right_end: float, coarse: float = CONTINUITY_STEPS[0]) -> float:
    """Last coarse grid point in ``[0, right_end - 0.1]``; shared by every refinement."""
    return round(math.floor((right_end - 0.1) / coarse + 1e-9) * coarse, 12)


def check_continuity(config: VerifyConfig) -> CheckResult:
    """Margin: worst of (0.6 - jump ratio) and (derivative bound - analytic jump)."""
    space = config.space
    lines = []
    worst = math.inf
    est = lambda kind, restrict: lambda e: estimate_modulus(  # noqa: E731
        kind, space, e, restrict, config.trunc_N, config.tol
    ).numeric_estimate
    curves = [
        ("beta'", est(BETA, True), witness_end(BETA, WitnessFamily.MINIMAL_TAIL, space)),
        ("alpha", est(ALPHA, False), witness_end(ALPHA, WitnessFamily.SPHERE_TAIL, space)),
        ("alpha'", est(ALPHA, True), witness_end(ALPHA, WitnessFamily.MINIMAL_TAIL, space)),
        ("chi'", est(CHI, True), witness_end(CHI, WitnessFamily.MINIMAL_TAIL, space)),
    ]
    for name, f, end in curves:
        stop = continuity_stop(end)
        ratios = jump_ratios(f, stop)
        worst = min(worst, *(JUMP_RATIO - r for r in ratios))
        lines.append(f"{name} on [0, {stop}]: jump ratios {', '.join(f'{r:.3f}' for r in ratios)}")
    if space.p >= 2:
        for kind in (BETA, ALPHA):
            stop = continuity_stop(witness_end(kind, WitnessFamily.SPHERE_TAIL, space))
            bound = closed_form_derivative(kind, space, stop)
            for h in CONTINUITY_STEPS:
                curve = analytic_curve(kind, space, make_grid(0.0, stop, h))
                jump = max_jump(curve.values())
                worst = min(worst, bound * h - jump)
            lines.append(f"closed {kind.value} on [0, {stop}]: jumps within {bound:.4f} x step")
    return _result("continuity", "continuity of the moduli from below and above", worst, lines)


def check_minimality(config: VerifyConfig) -> CheckResult:
    """Margin: minus the number of violated implications or identities."""
    rng = np.random.default_rng(config.seed + 1)
    violations: list[str] = []
    n_minimal = 0
    n_sets = 0
    for t in range(config.trials):
        space = SpaceSpec(AXIOM_PS[t % len(AXIOM_PS)])
        s = random_minimal_union(rng, int(rng.integers(1, 4))) if t % 4 == 0 else random_structured_set(rng)
        if not is_infinite(s):
            continue
        n_sets += 1
        if not is_minimal(s, ALPHA, space):
            continue
        n_minimal += 1
        if not (is_minimal(s, BETA, space) and is_minimal(s, CHI, space)):
            violations.append(f"trial {t}: alpha-minimal set is not beta- and chi-minimal")
        a, x = measure_exact(s, ALPHA, space), measure_exact(s, CHI, space)
        if not _close(a, 2.0 ** (1.0 / space.p) * x):
            violations.append(f"trial {t}: alpha={a} != 2^(1/p) chi={x}")
        for leaf in leaves(s):
            # hereditary: an infinite part keeps the whole set's measure
            if isinstance(leaf, TailFamily) and not _close(measure_exact(leaf, ALPHA, space), a):
                violations.append(f"trial {t}: infinite part changes the measure")
    lines = [f"{n_sets} infinite sets, {n_minimal} alpha-minimal", f"violations: {len(violations)}"]
    lines += violations[:20]
    return _result("minimality", "alpha-minimal sets are beta- and chi-minimal; alpha = 2^(1/p) chi on them", -len(violations), lines)


def check_oracle_convergence(config: VerifyConfig) -> CheckResult:
    """Margin: worst of the exactness tolerances minus observed errors."""
    space = config.space
    root2 = 2.0 ** (1.0 / space.p)
    tail = TailFamily(SparseVector(), 1.0, 1)
    lines = []
    P8 = truncate(tail, 8, space)
    worst = 1e-9 - abs(alpha_k(P8, 3, space, config.budget) - root2)
    lines.append(f"alpha_3 on 8 points: {alpha_k(P8, 3, space, config.budget):.12f} (target {root2:.12f})")
    for m in range(2, 9):
        worst = min(worst, 1e-9 - abs(beta_m(P8, m, space, config.budget) - root2))
    chis = [chi_k(truncate(tail, n, space), 2, space, config.budget) for n in (4, 8, 12)]
    lines.append("chi_2 on 4/8/12 points: " + ", ".join(f"{c:.6f}" for c in chis))
    for c0, c1 in zip(chis, chis[1:]):
        worst = min(worst, c1 - c0 + config.budget.solver_tolerance)
    worst = min(worst, 1.0 + config.budget.solver_tolerance - chis[-1])
    hull_err = 0.0
    for a_target, n in ((0.8, 16), (0.6, 64), (0.9, config.trunc_N)):
        b = (1.0 - a_target**space.p) ** (1.0 / space.p)
        s = SphereTail(SparseVector({1: a_target}), b, 2)
        X, coords = truncate_dense(s, n, space, scheme="positive")
        got = hull_distance_dense(X, coords, space, config.tol * 1e-3).value
        want = (a_target**space.p + b**space.p * n ** (1.0 - space.p)) ** (1.0 / space.p)
        hull_err = max(hull_err, abs(got - want))
    worst = min(worst, 1e-6 - hull_err)
    lines.append(f"sphere-tail hull distance formula error {hull_err:.3g}")
    return _result("oracle_convergence", "finite realizations of the three measures", worst, lines)


def check_prime_vs_classic(config: VerifyConfig) -> CheckResult:
    """Margin: worst of (primed - classical + tol) and 2 tol - |beta' - beta|, |chi' - chi|."""
    space = config.space
    worst = math.inf
    lines = []
    for kind in MeasureKind:
        grid = config.grid()
        primed = _curve_values(kind, space, grid, True, config)
        classic = _curve_values(kind, space, grid, False, config)
        common = [e for e in grid if e in primed and e in classic]
        w = min((primed[e].numeric_estimate - classic[e].numeric_estimate + config.tol for e in common), default=math.inf)
        worst = min(worst, w)
        line = f"{kind.value}: primed >= classical on {len(common)} points (worst slack {w:.3g})"
        if kind is not ALPHA:
            dev = max((abs(primed[e].numeric_estimate - classic[e].numeric_estimate) for e in common), default=0.0)
            worst = min(worst, 2 * config.tol - dev)
            line += f"; coincide within {dev:.3g}"
        lines.append(line)
    lines.append("general metric-space statements are checked only through these l_p consequences")
    return _result("prime_vs_classic", "primed moduli dominate the classical ones; coincidence for beta and chi", worst, lines)


REGISTRY: dict[str, Callable[[VerifyConfig], CheckResult]] = {
    "axioms": check_axioms,
    "chain": check_chain,
    "strict_gap": check_strict_gap,
    "rescaling": check_rescaling,
    "nonminimalizability": check_nonminimalizability,
    "continuity": check_continuity,
    "minimality": check_minimality,
    "oracle_convergence": check_oracle_convergence,
    "prime_vs_classic": check_prime_vs_classic,
}


def run_check(name: str, config: VerifyConfig) -> CheckResult:
    if name not in REGISTRY:
        raise DomainError(f"unknown check {name!r}; choose from {', '.join(REGISTRY)}")
    t0 = time.perf_counter()
    res = REGISTRY[name](config)
    res.runtime = time.perf_counter() - t0
    return res


def run_all(config: VerifyConfig = VerifyConfig(), names: list[str] | None = None) -> VerificationReport:
    """Run the registry (or ``names``) in registry order."""
    selected = list(REGISTRY) if names is None else [n for n in REGISTRY if n in names]
    for n in names or []:
        if n not in REGISTRY:
            raise DomainError(f"unknown check {n!r}; choose from {', '.join(REGISTRY)}")
    return VerificationReport(config, [run_check(n, config) for n in selected])
