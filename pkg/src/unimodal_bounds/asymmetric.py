"""Sharp bounds on ``P(X <= -u or X >= v)`` for symmetric unimodal ``X``.

Two families, both in normalized units with ``0 < u <= v``:

* second moment ``E X^2 = 1``: five closed-form pieces on regions S1..S5,
  separated by the curves ``v = psi(u)``, ``v = 4/sqrt(3) - u``,
  ``v = (2 sqrt(2) - 1) u`` and ``v = ((1 + 2/(sqrt(3) u))^(3/2) - 1) u``;
* first absolute moment ``E|X| = 1``: four pieces on regions A1..A4,
  separated by ``v = 2 - u``, ``v = 2 + u^2/(2 - u)`` and ``v = 3u``.

Points on a shared boundary get the first matching label in the order
S1..S5 / A1..A4; adjacent formulas agree there. ``v = inf`` selects the
v-free piece (S3 or S5, A2 or A4).
"""

from __future__ import annotations

import math
from dataclasses import replace

from .core import (
    GAUSS_KNOT,
    SQRT3,
    BoundResult,
    DeviationInterval,
    MomentKind,
    MomentSpec,
    Region,
    SymmetricUniformMixture,
    canonicalize,
    gauss_bound,
    markov_gauss_bound,
    normalize,
)
from .errors import DomainError, InvalidWeight, NonPositiveDeviation, NotCanonical

SLOPE_S2 = 2.0 * math.sqrt(2.0) - 1.0
ANTI_DIAGONAL = 4.0 / SQRT3
TRIPLE_POINT_U = 2.0 / math.sqrt(6.0)
WEIGHT_SLACK = 1e-10
_FALLBACK_TOL = 1e-9

SECOND_REGIONS = (Region.S1, Region.S2, Region.S3, Region.S4, Region.S5)
FIRST_REGIONS = (Region.A1, Region.A2, Region.A3, Region.A4)


def _check_canonical(u: float, v: float) -> None:
    if math.isnan(u) or math.isnan(v) or u <= 0 or v <= 0:
        raise NonPositiveDeviation(f"deviations must be positive, got u={u}, v={v}")
    if math.isinf(u):
        raise NotCanonical("u must be finite in canonical form")
    if u > v:
        raise NotCanonical(f"expected u <= v, got u={u}, v={v}")


def psi_semenikhin(u: float) -> float:
    """Curve ``v = psi(u)`` along which the S1 and S4 formulas touch."""
    if not 0.0 < u <= 3.0:
        raise DomainError(f"psi is defined for 0 < u <= 3, got {u}")
    t = u / 3.0
    # with gap = 1 - sqrt(1 - t^2) = t^2 / r, the cube-root terms simplify so
    # neither cancellation nor underflow of t^2 can occur
    r3 = (1.0 + math.sqrt(1.0 - t * t)) ** (1.0 / 3.0)
    t23 = t ** (2.0 / 3.0)
    return GAUSS_KNOT - u + SQRT3 * t23 * (t23 / r3 + r3)


def s4_upper_curve(u: float) -> float:
    """Boundary between S4 and S5."""
    return ((1.0 + 2.0 / (SQRT3 * u)) ** 1.5 - 1.0) * u


def _second_region_matches(region: Region, u: float, v: float, tol: float) -> bool:
    lo = lambda a, b: a <= b + tol * max(1.0, abs(b))  # noqa: E731
    if region is Region.S1:
        return u <= GAUSS_KNOT and lo(v, ANTI_DIAGONAL - u) and lo(v, psi_semenikhin(u))
    if region is Region.S2:
        return lo(v, SLOPE_S2 * u) and lo(ANTI_DIAGONAL - u, v)
    if region is Region.S3:
        return lo(GAUSS_KNOT, u) and lo(SLOPE_S2 * u, v)
    if region is Region.S4:
        if u > GAUSS_KNOT + tol or math.isinf(v):
            return False
        lower = max(psi_semenikhin(min(u, GAUSS_KNOT)), SLOPE_S2 * u)
        return lo(lower, v) and lo(v, s4_upper_curve(u))
    if region is Region.S5:
        return lo(u, GAUSS_KNOT) and lo(s4_upper_curve(u), v)
    raise ValueError(f"{region} is not a second-moment region")


def classify_region_second(u: float, v: float) -> Region:
    _check_canonical(u, v)
    if math.isinf(v):
        return Region.S3 if u >= GAUSS_KNOT else Region.S5
    for tol in (0.0, _FALLBACK_TOL):
        for region in SECOND_REGIONS:
            if _second_region_matches(region, u, v, tol):
                return region
    raise AssertionError(f"no second-moment region contains ({u!r}, {v!r})")


def semenikhin_formula(region: Region, u: float, v: float) -> float:
    """The closed-form piece for ``region``, evaluated anywhere it is defined."""
    if region is Region.S1:
        return 1.0 - (u + v) / (2.0 * SQRT3)
    if region is Region.S2:
        return 16.0 / (9.0 * (u + v) ** 2)
    if region is Region.S3:
        return 2.0 / (9.0 * u * u)
    if region is Region.S4:
        a = u ** (2.0 / 3.0)
        d = (u + v) ** (2.0 / 3.0) - a
        return 0.5 * (1.0 - a / d + 4.0 / (9.0 * d**3))
    if region is Region.S5:
        return 0.5 * (1.0 - u / SQRT3)
    raise ValueError(f"{region} is not a second-moment region")


def s4_parameters(u: float, v: float) -> tuple[float, float, float]:
    """Half-widths ``(u0, u1)`` and weight ``p`` of ``u1`` in the S4 extremal law."""
    a = u ** (2.0 / 3.0)
    s = u + v
    d = s ** (2.0 / 3.0) - a
    u0 = 1.5 * u ** (1.0 / 3.0) * d
    u1 = 1.5 * s ** (1.0 / 3.0) * d
    p = (4.0 - 3.0 * a * d * d) / (3.0 * d**3)
    return u0, u1, p


def _clamped_weight(p: float, what: str) -> float:
    if not -WEIGHT_SLACK <= p <= 1.0 + WEIGHT_SLACK:
        raise InvalidWeight(f"{what} weight {p!r} outside [0, 1]")
    return min(max(p, 0.0), 1.0)


def semenikhin_extremal(u: float, v: float, region: Region | None = None) -> SymmetricUniformMixture:
    _check_canonical(u, v)
    region = region or classify_region_second(u, v)
    if region in (Region.S1, Region.S5):
        return SymmetricUniformMixture.uniform(SQRT3)
    if region is Region.S2:
        s = u + v
        return SymmetricUniformMixture.build([(0.75 * s, _clamped_weight(16.0 / (3.0 * s * s), "S2"))])
    if region is Region.S3:
        return SymmetricUniformMixture.build([(1.5 * u, _clamped_weight(4.0 / (3.0 * u * u), "S3"))])
    u0, u1, p = s4_parameters(u, v)
    p = _clamped_weight(p, "S4")
    return SymmetricUniformMixture.build([(u0, 1.0 - p), (u1, p)])


def semenikhin_bound(u: float, v: float) -> BoundResult:
    """Sharp bound for symmetric unimodal laws with unit second moment."""
    region = classify_region_second(u, v)
    value = semenikhin_formula(region, u, v)
    return BoundResult(min(max(value, 0.0), 1.0), region, semenikhin_extremal(u, v, region))


def a2_a3_curve(u: float) -> float:
    """Boundary between A3 and A2 for ``u <= 1``."""
    return 2.0 + u * u / (2.0 - u)


def classify_region_first(u: float, v: float) -> Region:
    _check_canonical(u, v)
    if v <= 2.0 - u:
        return Region.A1
    if u <= 1.0:
        return Region.A2 if v > a2_a3_curve(u) else Region.A3
    return Region.A4 if v > 3.0 * u else Region.A3


def markov_asym_formula(region: Region, u: float, v: float) -> float:
    if region is Region.A1:
        return 1.0 - (u + v) / 4.0
    if region is Region.A2:
        return 0.5 - u / 4.0
    if region is Region.A3:
        return 1.0 / (u + v)
    if region is Region.A4:
        return 1.0 / (4.0 * u)
    raise ValueError(f"{region} is not a first-moment region")


def markov_asym_extremal(u: float, v: float, region: Region | None = None) -> SymmetricUniformMixture:
    _check_canonical(u, v)
    region = region or classify_region_first(u, v)
    if region in (Region.A1, Region.A2):
        return SymmetricUniformMixture.uniform(2.0)
    if region is Region.A3:
        s = u + v
        return SymmetricUniformMixture.build([(s, _clamped_weight(2.0 / s, "A3"))])
    return SymmetricUniformMixture.build([(2.0 * u, _clamped_weight(1.0 / u, "A4"))])


def markov_asym_bound(u: float, v: float) -> BoundResult:
    """Sharp bound for symmetric unimodal laws with unit first absolute moment."""
    region = classify_region_first(u, v)
    value = markov_asym_formula(region, u, v)
    return BoundResult(min(max(value, 0.0), 1.0), region, markov_asym_extremal(u, v, region))


def classify_region(u: float, v: float, kind: MomentKind) -> Region:
    if MomentKind.parse(kind) is MomentKind.SECOND:
        return classify_region_second(u, v)
    return classify_region_first(u, v)


def region_formula(region: Region, u: float, v: float) -> float:
    if region in SECOND_REGIONS:
        return semenikhin_formula(region, u, v)
    return markov_asym_formula(region, u, v)


def normalized_bound(u: float, v: float, kind: MomentKind) -> BoundResult:
    """Symmetric-law bound at canonical normalized deviations."""
    if MomentKind.parse(kind) is MomentKind.SECOND:
        return semenikhin_bound(u, v)
    return markov_asym_bound(u, v)


def general_unimodal_bound(u: float, v: float, spec: MomentSpec) -> BoundResult:
    """Bound when asymmetric unimodal laws are allowed: Gauss at the nearer side.

    ``u`` and ``v`` are raw deviations. The extremal law is one-sided, uniform
    on ``(-c, 0)`` with a point mass at the mode, on the raw scale.
    """
    _check_canonical(u, v)
    un = normalize(u, spec)
    base = gauss_bound(un) if spec.kind is MomentKind.SECOND else markov_gauss_bound(un)
    return replace(base, extremal=base.extremal.scaled(spec.scale).one_sided())


def interval_bound(interval: DeviationInterval, spec: MomentSpec, family: str = "symmetric") -> BoundResult:
    """Bound at raw deviations, canonicalizing and normalizing first.

    ``family`` is ``"symmetric"`` (symmetric unimodal laws) or ``"unimodal"``
    (all unimodal laws). The extremal law is returned on the raw scale.
    """
    canon = canonicalize(interval)
    if family == "unimodal":
        res = general_unimodal_bound(canon.u, canon.v, spec)
    elif family == "symmetric":
        res = normalized_bound(normalize(canon.u, spec), normalize(canon.v, spec), spec.kind)
        res = replace(res, extremal=res.extremal.scaled(spec.scale))
    else:
        raise ValueError(f"family must be 'symmetric' or 'unimodal', got {family!r}")
    return replace(res, swapped=canon.swapped)
