"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

from .asymmetric import classify_region, interval_bound
from .core import DeviationInterval, MomentKind, MomentSpec, canonicalize, chebyshev_ratio, normalize
from .errors import BoundError, InvalidWeightFunction
from .generalized import WeightFunction, sellke_report
from .verify import OracleConfig, format_report, format_value, two_atom_oracle

EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE = 0, 1, 2


class InputError(Exception):
    pass


def parse_real(text: str) -> float:
    """Decimal number or ``inf``."""
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if math.isnan(x):
        raise argparse.ArgumentTypeError("nan is not allowed")
    return x


def _interval_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--kind", type=MomentKind.parse, default=MomentKind.SECOND,
                   help="second (E(X-mode)^2) or first (E|X-mode|); default second")
    p.add_argument("--u", type=parse_real, required=True, help="deviation below the mode, or inf")
    p.add_argument("--v", type=parse_real, required=True, help="deviation above the mode, or inf")
    p.add_argument("--moment", type=parse_real, default=1.0, help="value of the moment; default 1")
    p.add_argument("--family", choices=("symmetric", "unimodal"), default="symmetric",
                   help="symmetric unimodal laws (default) or all unimodal laws")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unimodal-bounds", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="sharp tail bound outside (-u, v) around the mode")
    _interval_args(p)
    p.add_argument("--oracle", action="store_true", help="also report the two-atom oracle value")

    p = sub.add_parser("region", help="region label of (u, v)")
    _interval_args(p)

    p = sub.add_parser("extremal", help="extremal law attaining the bound")
    _interval_args(p)

    p = sub.add_parser("sweep", help="CSV grid of bounds for 0 < u <= v <= extent")
    p.add_argument("--kind", type=MomentKind.parse, default=MomentKind.SECOND)
    p.add_argument("--step", type=parse_real, required=True)
    p.add_argument("--extent", type=parse_real, required=True)
    p.add_argument("--output", type=Path, help="CSV path; stdout if omitted")

    p = sub.add_parser("verify", help="run the certification suites")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--tol", type=parse_real, default=5e-4, help="oracle tolerance; default 5e-4")
    p.add_argument("--grid", type=int, default=20, help="oracle grid points per axis of (u, v)")
    p.add_argument("--oracle-grid", type=int, default=256)
    p.add_argument("--refine", type=int, default=3)
    p.add_argument("--mc-cases", type=int, default=500)
    p.add_argument("--mc-samples", type=int, default=100_000)
    p.add_argument("--output", type=Path, help="also write the report to this path")

    p = sub.add_parser("gbound", help="weighted bound from a tabulated weight function")
    p.add_argument("--table", type=Path, required=True, help="two columns x g(x); '#' lines ignored")
    p.add_argument("--v", type=parse_real, required=True)
    p.add_argument("--eg", type=parse_real, required=True, help="E g(|X - mode|)")
    return parser


def _interval(args) -> tuple[DeviationInterval, MomentSpec]:
    return DeviationInterval(args.u, args.v), MomentSpec(args.kind, args.moment)


def run_bound(args, out) -> int:
    interval, spec = _interval(args)
    res = interval_bound(interval, spec, args.family)
    canon = canonicalize(interval)
    un, vn = normalize(canon.u, spec), normalize(canon.v, spec)
    items = [
        ("kind", spec.kind.value),
        ("family", args.family),
        ("u", args.u),
        ("v", args.v),
        ("moment", spec.value),
        ("u_normalized", un),
        ("v_normalized", vn),
        ("swapped", res.swapped),
        ("region", res.region.value),
        ("bound", res.bound),
    ]
    if spec.kind is MomentKind.SECOND:
        # distribution-free comparison at the nearer deviation, uncapped
        items.append(("chebyshev_ratio", chebyshev_ratio(un)))
    if args.oracle and args.family == "symmetric" and math.isfinite(vn):
        items.append(("oracle", two_atom_oracle(un, vn, spec.kind, OracleConfig())))
    out.write(format_report(items))
    return EXIT_OK


def run_region(args, out) -> int:
    interval, spec = _interval(args)
    canon = canonicalize(interval)
    un, vn = normalize(canon.u, spec), normalize(canon.v, spec)
    region = classify_region(un, vn, spec.kind)
    out.write(format_report([("kind", spec.kind.value), ("swapped", canon.swapped), ("region", region.value)]))
    return EXIT_OK


def run_extremal(args, out) -> int:
    interval, spec = _interval(args)
    res = interval_bound(interval, spec, args.family)
    mix = res.extremal
    items = [
        ("region", res.region.value),
        ("bound", res.bound),
        ("swapped", res.swapped),
        ("side", mix.side),
        ("zero_mass", mix.zero_mass),
        ("components", len(mix.components)),
    ]
    for i, (c, w) in enumerate(mix.components, 1):
        items += [(f"component_{i}_half_width", c), (f"component_{i}_weight", w)]
    out.write(format_report(items))
    return EXIT_OK


def sweep_rows(kind: MomentKind, step: float, extent: float):
    if not (step > 0 and extent > 0 and math.isfinite(step) and math.isfinite(extent)):
        raise InputError("step and extent must be positive and finite")
    count = int(math.floor(extent / step * (1 + 1e-12)))
    ticks = [round(k * step, 12) for k in range(1, count + 1)]
    for u in ticks:
        for v in ticks:
            if u <= v:
                res = interval_bound(DeviationInterval(u, v), MomentSpec(kind))
                yield u, v, res.bound, res.region.value


def run_sweep(args, out) -> int:
    lines = ["u,v,bound,region\n"]
    for u, v, b, region in sweep_rows(args.kind, args.step, args.extent):
        lines.append(f"{u:.15g},{v:.15g},{b:.17g},{region}\n")
    text = "".join(lines)
    if args.output is None:
        out.write(text)
        return EXIT_OK
    try:
        args.output.write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {args.output}: {exc}") from exc
    return EXIT_OK


def run_verify(args, out) -> int:
    from .suites import run_all

    results = run_all(seed=args.seed, tol=args.tol, grid=args.grid, oracle_grid=args.oracle_grid,
                      refine=args.refine, mc_cases=args.mc_cases, mc_samples=args.mc_samples)
    lines = [f"seed={args.seed}\n", f"tolerance={format_value(args.tol)}\n"]
    for r in results:
        lines.append(r.summary() + "\n")
        lines.extend(f"  fail: {d}\n" for d in r.failures)
    ok = all(r.ok for r in results)
    lines.append(f"status={'PASS' if ok else 'FAIL'}\n")
    text = "".join(lines)
    out.write(text)
    if args.output is not None:
        args.output.write_text(text)
    return EXIT_OK if ok else EXIT_VERIFY_FAILED


def read_table(path: Path) -> WeightFunction:
    xs, gs = [], []
    try:
        lines = path.read_text().splitlines()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    for lineno, line in enumerate(lines, 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputError(f"{path}:{lineno}: expected two columns")
        try:
            xs.append(float(parts[0]))
            gs.append(float(parts[1]))
        except ValueError:
            raise InputError(f"{path}:{lineno}: not a number") from None
    return WeightFunction.from_table(xs, gs)


def run_gbound(args, out) -> int:
    g = read_table(args.table)
    rep = sellke_report(g, args.v, args.eg)
    out.write(format_report([
        ("v", args.v),
        ("eg", args.eg),
        ("x_v", rep.x_v),
        ("g_left", rep.g_left),
        ("horizon_hit", rep.horizon_hit),
        ("ratio", rep.ratio),
        ("bound", rep.bound),
    ]))
    return EXIT_OK


COMMANDS = {
    "bound": run_bound,
    "region": run_region,
    "extremal": run_extremal,
    "sweep": run_sweep,
    "verify": run_verify,
    "gbound": run_gbound,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, out)
    except (BoundError, InputError, InvalidWeightFunction, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
