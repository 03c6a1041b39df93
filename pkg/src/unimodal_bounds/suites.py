"""Deterministic certification suites driven by ``unimodal-bounds verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import qmc

from .asymmetric import (
    ANTI_DIAGONAL,
    FIRST_REGIONS,
    GAUSS_KNOT,
    SECOND_REGIONS,
    SLOPE_S2,
    TRIPLE_POINT_U,
    a2_a3_curve,
    classify_region,
    markov_asym_bound,
    markov_asym_formula,
    normalized_bound,
    psi_semenikhin,
    s4_upper_curve,
    semenikhin_bound,
    semenikhin_formula,
)
from .core import MomentKind, Region, SymmetricUniformMixture, gauss_bound, markov_gauss_bound
from .errors import InvalidInstance
from .generalized import (
    VolkovInstance,
    WeightFunction,
    find_xv,
    sellke_bound,
    shifted_square_moment,
    shifted_square_weight,
    volkov_check,
    volkov_from_weight,
)
from .rng import XorShift64Star
from .verify import (
    OracleConfig,
    draw_mixture,
    EmpiricalTail,
    interior_points,
    mixture_moment,
    mixture_tail,
    two_atom_oracle,
)


@dataclass
class SuiteResult:
    name: str
    passed: int = 0
    total: int = 0
    failures: list[str] = field(default_factory=list)

    def record(self, ok: bool, detail: str = "") -> None:
        self.total += 1
        if ok:
            self.passed += 1
        elif len(self.failures) < 5:
            self.failures.append(detail)

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def summary(self) -> str:
        return f"{self.name}: {self.passed}/{self.total} pass"


def canonical_grid(n: int = 20, extent: float = 4.0) -> list[tuple[float, float]]:
    ticks = [extent * i / n for i in range(1, n + 1)]
    return [(u, v) for u in ticks for v in ticks if u <= v]


def oracle_suite(kind: MomentKind, cfg: OracleConfig, n: int = 20, extent: float = 4.0) -> SuiteResult:
    res = SuiteResult(f"oracle_{MomentKind.parse(kind).value}")
    for u, v in canonical_grid(n, extent):
        bound = normalized_bound(u, v, kind).bound
        oracle = two_atom_oracle(u, v, kind, cfg)
        res.record(abs(bound - oracle) <= cfg.tolerance, f"u={u:g} v={v:g} bound={bound:.9g} oracle={oracle:.9g}")
    return res


def sharpness_suite(points_per_region: int = 5) -> SuiteResult:
    res = SuiteResult("extremal_sharpness")
    for region in SECOND_REGIONS + FIRST_REGIONS:
        kind = MomentKind.SECOND if region in SECOND_REGIONS else MomentKind.FIRST_ABSOLUTE
        for u, v in interior_points(region, points_per_region):
            b = normalized_bound(u, v, kind)
            tail = mixture_tail(b.extremal, u, v)
            moment = mixture_moment(b.extremal, kind)
            ok = b.region is region and abs(tail - b.bound) <= 1e-9 and abs(moment - 1.0) <= 1e-10
            res.record(ok, f"{region} u={u:g} v={v:g} tail={tail:.12g} bound={b.bound:.12g}")
    return res


def reduction_suite(n: int = 1000) -> SuiteResult:
    res = SuiteResult("diagonal_reduction")
    for v in np.geomspace(1e-3, 1e3, n):
        v = float(v)
        d2 = abs(semenikhin_bound(v, v).bound - gauss_bound(v).bound)
        d1 = abs(markov_asym_bound(v, v).bound - markov_gauss_bound(v).bound)
        res.record(d2 <= 1e-12 and d1 <= 1e-12, f"v={v:g} d2={d2:.3g} d1={d1:.3g}")
    return res


def sellke_suite() -> SuiteResult:
    res = SuiteResult("sellke")
    square, linear = WeightFunction.power(2), WeightFunction.power(1)
    for v in (0.1, 1.0, 10.0):
        xs, xl = find_xv(square, v), find_xv(linear, v)
        res.record(abs(xs / (1.5 * v) - 1) <= 1e-10, f"x_v(x^2, {v})={xs!r}")
        res.record(abs(xl / (2.0 * v) - 1) <= 1e-10, f"x_v(x, {v})={xl!r}")
        bs, bl = sellke_bound(square, v, 1.0), sellke_bound(linear, v, 1.0)
        res.record(abs(bs - min(1.0, 4 / (9 * v * v))) <= 1e-10 * max(bs, 1e-300) + 1e-15, f"x^2 bound {bs!r}")
        res.record(abs(bl - min(1.0, 1 / (2 * v))) <= 1e-10 * bl, f"x bound {bl!r}")
    for v in (0.5, 1.0):
        b = sellke_bound(shifted_square_weight(v), v, shifted_square_moment(v))
        res.record(abs(b - (1 - v / math.sqrt(3))) <= 1e-8, f"shifted v={v} bound={b!r}")
    return res


def region_boundaries() -> list[tuple[str, MomentKind, Region, Region, object, float, float]]:
    """``(name, kind, region_a, region_b, curve, u_lo, u_hi)`` for every shared boundary.

    ``curve`` maps ``u`` to the boundary ``v``; a ``None`` curve with
    ``u_lo == u_hi`` denotes the vertical segment ``u = u_lo`` for v in
    ``[boundary start, 4 u_lo]``.
    """
    S, A = MomentKind.SECOND, MomentKind.FIRST_ABSOLUTE
    return [
        ("S1|S4 on v=psi(u)", S, Region.S1, Region.S4, psi_semenikhin, 0.0, TRIPLE_POINT_U),
        ("S1|S2 on v=4/sqrt3-u", S, Region.S1, Region.S2, lambda u: ANTI_DIAGONAL - u, TRIPLE_POINT_U, GAUSS_KNOT),
        ("S2|S4 on v=(2sqrt2-1)u", S, Region.S2, Region.S4, lambda u: SLOPE_S2 * u, TRIPLE_POINT_U, GAUSS_KNOT),
        ("S2|S3 on v=(2sqrt2-1)u", S, Region.S2, Region.S3, lambda u: SLOPE_S2 * u, GAUSS_KNOT, 10.0),
        ("S4|S5 on upper curve", S, Region.S4, Region.S5, s4_upper_curve, 0.0, GAUSS_KNOT),
        ("S3|S5 on u=2/sqrt3", S, Region.S3, Region.S5, None, GAUSS_KNOT, GAUSS_KNOT),
        ("A1|A3 on v=2-u", A, Region.A1, Region.A3, lambda u: 2.0 - u, 0.0, 1.0),
        ("A2|A3 on v=2+u^2/(2-u)", A, Region.A2, Region.A3, a2_a3_curve, 0.0, 1.0),
        ("A3|A4 on v=3u", A, Region.A3, Region.A4, lambda u: 3.0 * u, 1.0, 10.0),
        ("A2|A4 on u=1", A, Region.A2, Region.A4, None, 1.0, 1.0),
    ]


def boundary_samples(curve, u_lo, u_hi, n=1000):
    if curve is None:
        u = u_lo
        start = s4_upper_curve(u) if math.isclose(u, GAUSS_KNOT) else 3.0 * u
        return [(u, float(v)) for v in np.linspace(start, 40.0, n)]
    # open interval: endpoints may be the degenerate corner u -> 0
    us = u_lo + (u_hi - u_lo) * (np.arange(n) + 0.5) / n
    return [(float(u), float(curve(u))) for u in us]


def formula(region: Region, u: float, v: float) -> float:
    if region in SECOND_REGIONS:
        return semenikhin_formula(region, u, v)
    return markov_asym_formula(region, u, v)


def region_integrity_suite(n_points: int = 100_000, n_boundary: int = 1000, seed: int = 0) -> SuiteResult:
    res = SuiteResult("region_integrity")
    sampler = qmc.Halton(d=2, scramble=False)
    pts = sampler.random(n_points + 1)[1:]
    unclassified = 0
    for a, b in pts:
        u, v = 10.0 * min(a, b), 10.0 * max(a, b)
        if u <= 0:
            continue
        for kind in (MomentKind.SECOND, MomentKind.FIRST_ABSOLUTE):
            try:
                classify_region(u, v, kind)
            except AssertionError:
                unclassified += 1
    res.record(unclassified == 0, f"{unclassified} unclassified points")
    for name, _, ra, rb, curve, lo, hi in region_boundaries():
        worst = max(abs(formula(ra, u, v) - formula(rb, u, v)) for u, v in boundary_samples(curve, lo, hi, n_boundary))
        res.record(worst <= 1e-8, f"{name}: max gap {worst:.3g}")
    us = 2.3 * (np.arange(n_boundary) + 1) / n_boundary
    worst = max(
        abs(semenikhin_formula(Region.S1, u, psi_semenikhin(u)) - semenikhin_formula(Region.S4, u, psi_semenikhin(u)))
        for u in us
    )
    res.record(worst <= 1e-8, f"S1/S4 at psi for u<=2.3: max gap {worst:.3g}")
    return res


def random_unit_mixture(rng: XorShift64Star, kind: MomentKind) -> SymmetricUniformMixture:
    """Random mixture of 1 to 4 uniforms, sometimes with a mode atom, rescaled to unit moment."""
    k = 1 + int(rng.random(1)[0] * 4)
    widths = np.sort(0.05 + 5.0 * rng.random(k))
    raw = 0.05 + rng.random(k)
    zero = 0.0
    if rng.random(1)[0] < 0.5:
        zero = 0.6 * rng.random(1)[0]
    weights = (1.0 - zero) * raw / raw.sum()
    mix = SymmetricUniformMixture.build(list(zip(widths.tolist(), weights.tolist())))
    m = mixture_moment(mix, kind)
    factor = 1.0 / math.sqrt(m) if MomentKind.parse(kind) is MomentKind.SECOND else 1.0 / m
    return mix.scaled(factor)


def dominance_suite(
    kind: MomentKind, seed: int, cases: int = 500, points: int = 20, samples: int = 100_000
) -> tuple[SuiteResult, SuiteResult]:
    """Closed-form tails and Monte Carlo frequencies of random unit-moment mixtures vs the bound."""
    kind = MomentKind.parse(kind)
    exact = SuiteResult(f"dominance_exact_{kind.value}")
    mc = SuiteResult(f"dominance_mc_{kind.value}")
    rng = XorShift64Star(seed)
    for case in range(cases):
        mix = random_unit_mixture(rng, kind)
        emp = EmpiricalTail(draw_mixture(mix, samples, rng))
        uv = rng.uniform(0.02, 5.0, 2 * points).reshape(points, 2)
        for a, b in uv:
            u, v = float(min(a, b)), float(max(a, b))
            bound = normalized_bound(u, v, kind).bound
            tail = mixture_tail(mix, u, v)
            freq, se = emp(u, v)
            exact.record(tail <= bound + 1e-12, f"case={case} u={u:.6g} v={v:.6g} tail={tail:.9g} bound={bound:.9g}")
            mc.record(freq <= bound + 4 * se, f"case={case} u={u:.6g} v={v:.6g} freq={freq:.6g} bound={bound:.9g}")
    return exact, mc


def _uniform(width: float):
    return lambda x: 1.0 / width if 0.0 <= x <= width else 0.0


def _trunc_exp(rate: float, upper: float):
    norm = 1.0 - math.exp(-rate * upper)
    return lambda x: rate * math.exp(-rate * x) / norm if 0.0 <= x <= upper else 0.0


def _half_normal(upper: float):
    norm = math.erf(upper / math.sqrt(2.0))
    return lambda x: math.sqrt(2.0 / math.pi) * math.exp(-0.5 * x * x) / norm if 0 <= x <= upper else 0.0


def volkov_instances() -> list[tuple[str, VolkovInstance]]:
    """Ten valid (density, psi) pairs, five built from a weight function."""
    unif3 = _uniform(3.0)
    exp1 = _trunc_exp(1.0, 50.0)
    exp2 = _trunc_exp(2.0, 30.0)
    hn = _half_normal(12.0)
    step = lambda x: (0.5 if x <= 1.0 else 0.0) + (0.125 if x <= 4.0 else 0.0)  # noqa: E731
    tri = lambda x: 2.0 * (1.0 - x) if 0.0 <= x <= 1.0 else 0.0  # noqa: E731
    return [
        ("uniform3_shift1", VolkovInstance(unif3, lambda x: x + 1.0, lambda x: 1.0, 3.0, (3.0,))),
        ("uniform3_square_weight", volkov_from_weight(WeightFunction.power(2), 1.0, unif3, 3.0, (3.0,))),
        ("exp1_shift_half", VolkovInstance(exp1, lambda x: x + 0.5, lambda x: 1.0, 50.0)),
        ("exp1_linear_weight", volkov_from_weight(WeightFunction.power(1), 1.0, exp1, 50.0)),
        ("halfnormal_shift1", VolkovInstance(hn, lambda x: x + 1.0, lambda x: 1.0, 12.0)),
        ("halfnormal_square_weight", volkov_from_weight(WeightFunction.power(2), 0.7, hn, 12.0)),
        ("triangle_shift_quarter", VolkovInstance(tri, lambda x: x + 0.25, lambda x: 1.0, 1.0)),
        ("step_double_slope", VolkovInstance(step, lambda x: 2.0 * x + 0.3, lambda x: 2.0, 4.0, (1.0, 4.0))),
        (
            "uniform2_hinge",
            VolkovInstance(_uniform(2.0), lambda x: max(x, 1.0), lambda x: 1.0 if x > 1.0 else 0.0, 2.0, (1.0,)),
        ),
        ("exp2_shifted_square_weight", volkov_from_weight(shifted_square_weight(0.5), 0.5, exp2, 30.0)),
    ]


def volkov_violations() -> list[tuple[str, VolkovInstance]]:
    unif3 = _uniform(3.0)
    return [
        ("psi_below_identity", VolkovInstance(unif3, lambda x: 0.5 * x, lambda x: 0.5, 3.0, (3.0,))),
        (
            "increasing_density",
            VolkovInstance(lambda x: 2.0 * x / 9.0, lambda x: x + 1.0, lambda x: 1.0, 3.0),
        ),
        ("unnormalized_density", VolkovInstance(lambda x: 0.5, lambda x: x + 1.0, lambda x: 1.0, 3.0)),
    ]


def volkov_suite(tol: float = 1e-8) -> SuiteResult:
    res = SuiteResult("volkov")
    for name, inst in volkov_instances():
        rep = volkov_check(inst, tol)
        res.record(rep.holds, f"{name}: lhs={rep.lhs!r} rhs={rep.rhs!r}")
    for name, inst in volkov_violations():
        try:
            volkov_check(inst, tol)
        except InvalidInstance:
            res.record(True)
        else:
            res.record(False, f"{name}: accepted")
    return res


def run_all(seed: int = 42, tol: float = 5e-4, grid: int = 20, oracle_grid: int = 256,
            refine: int = 3, mc_cases: int = 500, mc_samples: int = 100_000) -> list[SuiteResult]:
    cfg = OracleConfig(grid_points_per_axis=oracle_grid, refine_iterations=refine, tolerance=tol)
    out = [
        oracle_suite(MomentKind.SECOND, cfg, grid),
        oracle_suite(MomentKind.FIRST_ABSOLUTE, cfg, grid),
        sharpness_suite(),
        reduction_suite(),
        sellke_suite(),
        region_integrity_suite(),
    ]
    for kind in (MomentKind.SECOND, MomentKind.FIRST_ABSOLUTE):
        out.extend(dominance_suite(kind, seed, mc_cases, 20, mc_samples))
    out.append(volkov_suite())
    return out
