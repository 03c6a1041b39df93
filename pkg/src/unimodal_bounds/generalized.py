"""Tail bounds for unimodal laws from an arbitrary nondecreasing weight ``g``.

For a unimodal ``X`` with mode ``nu`` the bound reads

    P(|X - nu| >= v) <= E g(|X - nu|) / g(x_v-)

where ``x_v`` is the last point at which
``chi(x) = int_0^x g - g(x) (x - v)`` is nonnegative. ``g(x) = x**2`` gives
Gauss's 4/(9 v^2) and ``g(x) = x`` gives 1/(2 v).

Also here: a quadrature check of Volkov's inequality
``P(X >= psi(0)) <= E psi'(X)`` for nonincreasing densities on ``[0, inf)``,
used as a test harness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    DegenerateWeight,
    InvalidInstance,
    InvalidWeightFunction,
    NonPositiveDeviation,
    WeightNotPositiveOnInterval,
    ZeroDenominator,
)
from .quadrature import integrate

HORIZON_FACTOR = 1e8
XV_REL_WIDTH = 1e-12
LEFT_LIMIT_DELTA = 1e-9
CHECK_POINTS = 1000


@dataclass(frozen=True)
class WeightFunction:
    """A nonnegative nondecreasing function on ``[0, inf)``.

    ``breakpoints`` lists kinks or jumps for the quadrature; ``antiderivative``
    (``x -> int_0^x g``), when known, bypasses quadrature entirely.
    ``upper_eval_limit`` caps the search for ``x_v``; ``None`` means
    ``1e8 * v``.
    """

    evaluator: Callable[[float], float]
    declared_bounded: bool | None = None
    upper_eval_limit: float | None = None
    breakpoints: tuple[float, ...] = ()
    antiderivative: Callable[[float], float] | None = None

    def __call__(self, x: float) -> float:
        return float(self.evaluator(x))

    def integral(self, x: float) -> float:
        if self.antiderivative is not None:
            return float(self.antiderivative(x))
        return integrate(self.evaluator, 0.0, x, self.breakpoints)

    def horizon(self, v: float) -> float:
        return self.upper_eval_limit if self.upper_eval_limit is not None else HORIZON_FACTOR * v

    def scaled(self, factor: float) -> "WeightFunction":
        ev, anti = self.evaluator, self.antiderivative
        return WeightFunction(
            evaluator=lambda x: factor * ev(x),
            declared_bounded=self.declared_bounded,
            upper_eval_limit=self.upper_eval_limit,
            breakpoints=self.breakpoints,
            antiderivative=None if anti is None else (lambda x: factor * anti(x)),
        )

    def check(self, upper: float, n: int = CHECK_POINTS) -> None:
        """Spot-check nonnegativity and monotonicity on ``n`` points of ``[0, upper]``."""
        lin = np.linspace(0.0, upper, n // 2)
        geo = np.geomspace(upper * 1e-9, upper, n - n // 2)
        xs = np.unique(np.concatenate([lin, geo]))
        gs = np.array([self(x) for x in xs])
        if not np.all(np.isfinite(gs)):
            raise InvalidWeightFunction("weight function is not finite on its sampled grid")
        if np.any(gs < 0):
            raise InvalidWeightFunction(f"weight function negative at x={xs[np.argmax(gs < 0)]!r}")
        slack = 1e-12 * max(1.0, float(np.max(np.abs(gs))))
        drops = np.diff(gs) < -slack
        if np.any(drops):
            raise InvalidWeightFunction(f"weight function decreases after x={xs[np.argmax(drops)]!r}")

    @classmethod
    def power(cls, k: float) -> "WeightFunction":
        """``g(x) = x**k`` for ``k > 0``."""
        return cls(lambda x: x**k, antiderivative=lambda x: x ** (k + 1) / (k + 1))

    @classmethod
    def from_table(cls, xs: Sequence[float], gs: Sequence[float]) -> "WeightFunction":
        """Piecewise-linear interpolation of a table, constant beyond the last row."""
        xs = np.asarray(xs, dtype=float)
        gs = np.asarray(gs, dtype=float)
        if xs.ndim != 1 or xs.shape != gs.shape or xs.size < 2:
            raise InvalidWeightFunction("table needs at least two (x, g) rows")
        if xs[0] != 0.0:
            raise InvalidWeightFunction("table must start at x = 0")
        if np.any(np.diff(xs) <= 0):
            raise InvalidWeightFunction("table x values must be strictly increasing")
        if np.any(gs < 0) or not np.all(np.isfinite(gs)):
            raise InvalidWeightFunction("table g values must be finite and nonnegative")
        if np.any(np.diff(gs) < 0):
            raise InvalidWeightFunction("table g values must be nondecreasing")
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (gs[1:] + gs[:-1]) * np.diff(xs))])
        last_x, last_g, total = xs[-1], gs[-1], cum[-1]

        def anti(x: float) -> float:
            if x >= last_x:
                return float(total + last_g * (x - last_x))
            i = int(np.searchsorted(xs, x, side="right")) - 1
            gx = np.interp(x, xs, gs)
            return float(cum[i] + 0.5 * (gs[i] + gx) * (x - xs[i]))

        return cls(
            evaluator=lambda x: float(np.interp(x, xs, gs)),
            declared_bounded=True,
            breakpoints=tuple(xs.tolist()),
            antiderivative=anti,
        )


def chi(g: WeightFunction, x: float, v: float) -> float:
    if x < 0:
        raise ValueError(f"x must be nonnegative, got {x}")
    if not v > 0:
        raise NonPositiveDeviation(f"v must be positive, got {v}")
    if x == 0:
        return 0.0
    return g.integral(x) - g(x) * (x - v)


@dataclass(frozen=True)
class XvSearch:
    x_v: float
    horizon: float
    horizon_hit: bool


def search_xv(g: WeightFunction, v: float) -> XvSearch:
    """Locate ``x_v`` by doubling from ``v`` and then bisecting.

    Relies on ``chi`` being nonincreasing on ``[v, inf)``. The returned point
    is the left end of the final bracket, so ``chi(x_v) >= 0`` and ``x_v`` lies
    strictly left of any jump of ``g`` at the true root.
    """
    if not v > 0:
        raise NonPositiveDeviation(f"v must be positive, got {v}")
    limit = g.horizon(v)
    _require_positive_below(g, v, limit)
    g.check(limit)

    lo, hi = v, 2.0 * v
    while chi(g, hi, v) >= 0:
        lo = hi
        if hi >= limit:
            return XvSearch(math.inf, limit, True)
        hi = min(2.0 * hi, limit)
    while hi - lo > XV_REL_WIDTH * hi:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if chi(g, mid, v) >= 0:
            lo = mid
        else:
            hi = mid
    return XvSearch(lo, limit, False)


def find_xv(g: WeightFunction, v: float) -> float:
    return search_xv(g, v).x_v


def _require_positive_below(g: WeightFunction, v: float, limit: float) -> None:
    inside = [g(v * k / CHECK_POINTS) for k in range(1, CHECK_POINTS)]
    if any(val > 0 for val in inside):
        return
    outside = np.geomspace(v, limit, 200)
    if any(g(x) > 0 for x in outside):
        raise WeightNotPositiveOnInterval(f"g vanishes on (0, {v}); the bound needs g > 0 somewhere there")
    raise DegenerateWeight("g is identically zero on its sampled domain")


def left_limit(g: WeightFunction, x: float) -> float:
    """``g(x-)`` via nested evaluations ``g(x - delta)`` with shrinking ``delta``."""
    delta = min(LEFT_LIMIT_DELTA * max(1.0, x), 0.5 * x)
    floor = 16.0 * math.ulp(x)
    value = g(x - delta)
    while delta > floor:
        delta *= 0.1
        nxt = g(x - delta)
        if nxt < value:
            # nondecreasing g cannot drop towards the left limit; keep the larger
            break
        value = nxt
    return value


@dataclass(frozen=True)
class SellkeReport:
    x_v: float
    g_left: float
    ratio: float
    bound: float
    horizon_hit: bool


def sellke_report(g: WeightFunction, v: float, eg: float) -> SellkeReport:
    if eg < 0 or not math.isfinite(eg):
        raise ValueError(f"E g(|X - nu|) must be finite and nonnegative, got {eg}")
    search = search_xv(g, v)
    if math.isinf(search.x_v):
        g_left = g(search.horizon)
    else:
        g_left = left_limit(g, search.x_v)
    if g_left <= 0:
        raise ZeroDenominator(f"g(x_v-) = {g_left} at x_v = {search.x_v}")
    ratio = eg / g_left
    return SellkeReport(search.x_v, g_left, ratio, min(1.0, ratio), search.horizon_hit)


def sellke_bound(g: WeightFunction, v: float, eg: float) -> float:
    return sellke_report(g, v, eg).bound


def shifted_square_weight(v: float, second_moment: float = 1.0) -> WeightFunction:
    """``g(x) = x^2 + 3 s (2 sqrt(s) / (sqrt(3) v) - 1)`` with ``s = E(X - nu)^2``.

    The constant is nonnegative only for ``v <= 2 sqrt(s / 3)``, the range
    where this weight yields the linear piece ``1 - v / sqrt(3 s)``.
    """
    shift = 3.0 * second_moment * (2.0 * math.sqrt(second_moment) / (math.sqrt(3.0) * v) - 1.0)
    return WeightFunction(lambda x: x * x + shift, antiderivative=lambda x: x**3 / 3.0 + shift * x)


def shifted_square_moment(v: float, second_moment: float = 1.0) -> float:
    """``E g(|X - nu|)`` for :func:`shifted_square_weight`."""
    return second_moment + 3.0 * second_moment * (2.0 * math.sqrt(second_moment) / (math.sqrt(3.0) * v) - 1.0)


@dataclass(frozen=True)
class VolkovInstance:
    """Nonincreasing density ``f`` on ``[0, support_upper]`` and a transform ``psi``.

    Mass of ``f`` beyond ``support_upper`` is treated as zero.
    """

    density: Callable[[float], float]
    psi: Callable[[float], float]
    psi_derivative: Callable[[float], float]
    support_upper: float
    breakpoints: tuple[float, ...] = ()


@dataclass(frozen=True)
class VolkovReport:
    lhs: float
    rhs: float
    holds: bool


def validate_volkov(inst: VolkovInstance, n: int = CHECK_POINTS, tol: float = 1e-8) -> None:
    xs = np.linspace(0.0, inst.support_upper, n)
    ps = np.array([inst.psi(x) for x in xs])
    fs = np.array([inst.density(x) for x in xs])
    bad = ps < xs - tol * np.maximum(1.0, xs)
    if np.any(bad):
        raise InvalidInstance(f"psi(x) >= x fails at x={xs[np.argmax(bad)]!r}")
    if np.any(np.diff(ps) < -tol):
        raise InvalidInstance("psi is not nondecreasing")
    if np.any(fs < 0):
        raise InvalidInstance("density is negative")
    if np.any(np.diff(fs) > tol * max(1.0, float(fs.max()))):
        raise InvalidInstance("density increases somewhere")
    mass = integrate(inst.density, 0.0, inst.support_upper, inst.breakpoints)
    if abs(mass - 1.0) > tol:
        raise InvalidInstance(f"density integrates to {mass!r}, not 1")


def volkov_check(inst: VolkovInstance, tol: float = 1e-8) -> VolkovReport:
    validate_volkov(inst, tol=tol)
    start = inst.psi(0.0)
    upper = inst.support_upper
    if start < upper:
        lhs = integrate(inst.density, start, upper, inst.breakpoints)
    else:
        lhs = 0.0
    rhs = integrate(lambda x: inst.psi_derivative(x) * inst.density(x), 0.0, upper, inst.breakpoints)
    return VolkovReport(lhs, rhs, lhs <= rhs + tol)


def volkov_from_weight(
    g: WeightFunction,
    v: float,
    density: Callable[[float], float],
    support_upper: float,
    breakpoints: tuple[float, ...] = (),
) -> VolkovInstance:
    """Instance with ``psi(x) = int_0^x g / g(x_v) + v``, the transform behind the weighted bound."""
    xv = find_xv(g, v)
    if math.isinf(xv):
        raise InvalidInstance("x_v is infinite; no finite normalizer for psi")
    norm = left_limit(g, xv)
    return VolkovInstance(
        density=density,
        psi=lambda x: g.integral(x) / norm + v,
        psi_derivative=lambda x: g(x) / norm,
        support_upper=support_upper,
        breakpoints=tuple(sorted(set(breakpoints) | set(g.breakpoints))),
    )
