"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 usage or input
error, 3 numeric failure of a solver.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, fields, replace

from .errors import BudgetError, DomainError, NumericError, ParseError
from .hull import hull_distance
from .lp import SpaceSpec
from .moduli import analytic_curve, characteristic, make_grid, modulus_curve
from .oracles import OracleBudget, alpha_k, beta_m, chi_k
from .sets import Finite, MeasureKind, measure_exact, parse_set, truncate, unit_ball_measure
from .svg import curve_svg
from .verify import REGISTRY, VerifyConfig, run_all

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


@dataclass(frozen=True)
class Config:
    p: float = 2.0
    truncation_N: int = 256
    tol: float = 1e-6
    zero_tol: float = 1e-4
    seed: int = 42
    grid: str | None = None  # start:stop:step; default depends on the kind
    output_format: str | None = None
    max_points: int = 12
    max_parts: int = 4
    solver_tolerance: float = 1e-8

    @property
    def space(self) -> SpaceSpec:
        return SpaceSpec(self.p)

    @property
    def budget(self) -> OracleBudget:
        return OracleBudget(self.max_points, self.max_parts, self.solver_tolerance)


# config-file keys and their flag aliases
_ALIASES = {"trunc": "truncation_N", "format": "output_format", "zero-tol": "zero_tol"}
_TYPES = {f.name: f.type for f in fields(Config)}
_CASTS = {"float": float, "int": int, "str | None": str}


def load_config_file(path: str) -> dict:
    """``key=value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = _ALIASES.get(key.strip(), key.strip().replace("-", "_"))
            if not sep or key not in _TYPES:
                raise DomainError(f"{path}:{lineno}: expected key=value with a known key, got {raw.strip()!r}")
            try:
                out[key] = _CASTS[_TYPES[key]](value.strip())
            except ValueError:
                raise DomainError(f"{path}:{lineno}: bad value for {key}: {value.strip()!r}") from None
    return out


def build_config(args: argparse.Namespace) -> Config:
    """Defaults, then the config file, then explicit flags."""
    values = load_config_file(args.config) if args.config else {}
    for name in _TYPES:
        flag = getattr(args, name, None)
        if flag is not None:
            values[name] = flag
    cfg = Config(**values)
    cfg.space  # validates p
    cfg.budget
    return cfg


def parse_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"grid must be start:stop:step, got {text!r}")
    try:
        start, stop, step = map(float, parts)
    except ValueError:
        raise DomainError(f"grid must be start:stop:step, got {text!r}") from None
    return make_grid(start, stop, step)


def default_grid(kind: MeasureKind, space: SpaceSpec) -> list[float]:
    return make_grid(0.0, round(unit_ball_measure(kind, space) - 0.05, 12), 0.05)


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _fmt(x: float) -> str:
    return "%.9g" % x


def cmd_measure(args, cfg: Config) -> int:
    s = parse_set(args.set)
    kind = MeasureKind.parse(args.kind)
    space = cfg.space
    exact = measure_exact(s, kind, space)
    print(f"exact={_fmt(exact)}")
    if args.oracle:
        key, sep, val = args.oracle.partition("=")
        if not sep or key not in ("k", "m") or not val.isdigit():
            raise DomainError(f"--oracle must be k=INT or m=INT, got {args.oracle!r}")
        n = int(val)
        if (key == "m") != (kind is MeasureKind.BETA):
            raise DomainError("use m= with beta and k= with alpha or chi")
        count = min(cfg.truncation_N, len(s.points)) if isinstance(s, Finite) else cfg.truncation_N
        P = truncate(s, count, space)
        fn = {MeasureKind.ALPHA: alpha_k, MeasureKind.CHI: chi_k, MeasureKind.BETA: beta_m}[kind]
        value = fn(P, n, space, cfg.budget)
        print(f"oracle={_fmt(value)} ({key}={n}, {count} points)")
        print(f"difference={_fmt(exact - value)}")
    return EXIT_OK


def cmd_hull_dist(args, cfg: Config) -> int:
    s = parse_set(args.set)
    count = min(cfg.truncation_N, len(s.points)) if isinstance(s, Finite) else cfg.truncation_N
    P = s.points if isinstance(s, Finite) else truncate(s, count, cfg.space, args.scheme, cfg.seed)
    res = hull_distance(P, cfg.space, cfg.tol)
    print(f"distance={_fmt(res.value)}")
    print(f"dual_bound={_fmt(res.dual_value)}")
    print(f"gap={_fmt(res.gap)}")
    print(f"points={len(P)} iterations={res.iterations}")
    return EXIT_OK


def _curve(args, cfg: Config):
    kind = MeasureKind.parse(args.kind)
    space = cfg.space
    grid = parse_grid(cfg.grid) if cfg.grid else default_grid(kind, space)
    if getattr(args, "analytic", False):
        return analytic_curve(kind, space, grid)
    return modulus_curve(kind, space, grid, args.prime, cfg.truncation_N, cfg.tol)


def cmd_modulus(args, cfg: Config) -> int:
    curve = _curve(args, cfg)
    fmt = cfg.output_format or "csv"
    if fmt == "csv":
        text = curve.to_csv()
    elif fmt == "json":
        text = curve.to_json()
    elif fmt == "svg":
        text = curve_svg(curve)
    else:
        raise DomainError(f"modulus output format must be csv, json or svg, got {fmt!r}")
    _emit(text, args.output)
    for pt in curve.grid:
        if pt.error:
            print(f"warning: eps={pt.epsilon}: {pt.error}", file=sys.stderr)
    return EXIT_OK


def cmd_characteristic(args, cfg: Config) -> int:
    curve = _curve(args, cfg)
    est = characteristic(curve, cfg.zero_tol)
    if (cfg.output_format or "text") == "json":
        _emit(json.dumps({"value": est.value, "kind": est.kind.value, "restricted_minimal": est.restricted_minimal}) + "\n", args.output)
    else:
        _emit(f"characteristic={_fmt(est.value)}\n", args.output)
    return EXIT_OK


def cmd_verify(args, cfg: Config) -> int:
    names = None if args.suite == "all" else [args.suite]
    vcfg = VerifyConfig(
        p=cfg.p,
        trunc_N=cfg.truncation_N,
        tol=cfg.tol,
        zero_tol=cfg.zero_tol,
        seed=cfg.seed,
        trials=args.trials,
        budget=cfg.budget,
    )
    if cfg.grid:
        pts = parse_grid(cfg.grid)
        start, stop = pts[0], pts[-1]
        step = pts[1] - pts[0] if len(pts) > 1 else vcfg.grid_step
        if start != 0:
            raise DomainError("verification grids start at 0")
        vcfg = replace(vcfg, grid_step=step, grid_stop=stop)
    report = run_all(vcfg, names)
    timing = not args.no_timing
    fmt = cfg.output_format or "json"
    if fmt not in ("json", "text"):
        raise DomainError(f"verify output format must be json or text, got {fmt!r}")
    _emit(report.to_json(timing) if fmt == "json" else report.to_text(timing), args.output)
    return EXIT_OK if report.all_passed else EXIT_CHECK


def _common(parser: argparse.ArgumentParser) -> None:
    g = parser.add_argument_group("configuration")
    g.add_argument("--config", metavar="FILE", help="key=value file; flags override it")
    g.add_argument("--p", type=float, help="exponent of l_p (default 2)")
    g.add_argument("--trunc", dest="truncation_N", type=int, help="truncation size N (default 256)")
    g.add_argument("--tol", type=float, help="solver tolerance (default 1e-6)")
    g.add_argument("--zero-tol", dest="zero_tol", type=float, help="zero threshold for characteristics")
    g.add_argument("--seed", type=int, help="random seed (default 42)")
    g.add_argument("--grid", help="start:stop:step, inclusive")
    g.add_argument("--format", dest="output_format", help="output format")
    g.add_argument("--max-points", dest="max_points", type=int, help="oracle point budget")
    g.add_argument("--max-parts", dest="max_parts", type=int, help="oracle part budget")
    g.add_argument("--output", "-o", help="write to FILE instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noncompact", description="Measures of noncompactness and moduli on l_p")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="exact measure of a set expression, optionally vs a finite oracle")
    p.add_argument("set", help='e.g. "tail(center=[], r=1, start=1)"')
    p.add_argument("--kind", default="alpha", choices=[k.value for k in MeasureKind])
    p.add_argument("--oracle", help="k=INT (alpha, chi) or m=INT (beta) on a truncation of --trunc points")
    _common(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("hull-dist", help="distance from 0 to the convex hull of a (truncated) set")
    p.add_argument("set")
    p.add_argument("--scheme", default="axes", choices=["axes", "positive", "random"])
    _common(p)
    p.set_defaults(func=cmd_hull_dist)

    for name, func, helptext in (
        ("modulus", cmd_modulus, "modulus curve as csv, json or svg"),
        ("characteristic", cmd_characteristic, "largest eps where the modulus vanishes"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--kind", default="beta", choices=[k.value for k in MeasureKind])
        p.add_argument("--prime", action="store_true", help="restrict witnesses to minimal sets")
        p.add_argument("--analytic", action="store_true", help="use the closed form instead of witnesses")
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("--suite", default="all", help=f"all or one of: {', '.join(REGISTRY)}")
    p.add_argument("--trials", type=int, default=1000, help="randomized trials per property check")
    p.add_argument("--no-timing", action="store_true", help="omit runtimes (byte-stable output)")
    _common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "verify" and args.suite != "all" and args.suite not in REGISTRY:
        parser.print_usage(sys.stderr)
        print(f"noncompact: error: unknown suite {args.suite!r}; choose all or one of {', '.join(REGISTRY)}", file=sys.stderr)
        return EXIT_USAGE
    try:
        cfg = build_config(args)
        return args.func(args, cfg)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, BudgetError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
