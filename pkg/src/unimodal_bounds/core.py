"""Domain types and the classic symmetric-interval bounds.

Everything here works with the centred variable ``X - mode``. Deviations are
normalized to unit moment before a bound is evaluated: ``v / sigma`` under a
second-moment constraint and ``v / E|X - mode|`` under a first-absolute-moment
constraint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

from .errors import (
    BothInfinite,
    InvalidMixture,
    NonPositiveDeviation,
    NonPositiveMoment,
)

SQRT3 = math.sqrt(3.0)
GAUSS_KNOT = 2.0 / SQRT3
MARKOV_KNOT = 1.0
MIXTURE_MASS_TOL = 1e-12


class MomentKind(str, Enum):
    SECOND = "second"
    FIRST_ABSOLUTE = "first"

    @classmethod
    def parse(cls, text: "str | MomentKind") -> "MomentKind":
        if isinstance(text, MomentKind):
            return text
        key = text.strip().lower()
        aliases = {
            "second": cls.SECOND,
            "second_moment": cls.SECOND,
            "variance": cls.SECOND,
            "first": cls.FIRST_ABSOLUTE,
            "first_absolute": cls.FIRST_ABSOLUTE,
            "mad": cls.FIRST_ABSOLUTE,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ValueError(f"unknown moment kind {text!r}") from None


class Region(str, Enum):
    S1 = "S1"
    S2 = "S2"
    S3 = "S3"
    S4 = "S4"
    S5 = "S5"
    A1 = "A1"
    A2 = "A2"
    A3 = "A3"
    A4 = "A4"
    GAUSS_PIECE1 = "GaussPiece1"
    GAUSS_PIECE2 = "GaussPiece2"
    MARKOV_PIECE1 = "MarkovPiece1"
    MARKOV_PIECE2 = "MarkovPiece2"
    CHEBYSHEV = "Chebyshev"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class MomentSpec:
    """Which moment of ``X - mode`` is fixed, and its value.

    ``value`` is ``E((X - mode)^2)`` for :attr:`MomentKind.SECOND` and
    ``E|X - mode|`` for :attr:`MomentKind.FIRST_ABSOLUTE`.
    """

    kind: MomentKind
    value: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", MomentKind.parse(self.kind))
        if not (math.isfinite(self.value) and self.value > 0):
            raise NonPositiveMoment(f"moment value must be positive and finite, got {self.value}")

    @property
    def scale(self) -> float:
        """Length unit that maps raw deviations to normalized ones."""
        if self.kind is MomentKind.SECOND:
            return math.sqrt(self.value)
        return self.value


@dataclass(frozen=True)
class DeviationInterval:
    """Deviations ``u`` below and ``v`` above the mode; either may be ``inf``."""

    u: float
    v: float
    mode: float = 0.0
    swapped: bool = False

    def __post_init__(self):
        _check_deviation(self.u, "u")
        _check_deviation(self.v, "v")
        if math.isinf(self.u) and math.isinf(self.v):
            raise BothInfinite("at most one of u, v may be infinite")

    @classmethod
    def from_endpoints(cls, lower: float, upper: float, mode: float = 0.0) -> "DeviationInterval":
        """Interval ``(lower, upper)`` around ``mode`` as deviations from the mode."""
        return cls(u=mode - lower, v=upper - mode, mode=mode)

    @property
    def is_canonical(self) -> bool:
        return self.u <= self.v


def _check_deviation(x: float, name: str = "v") -> float:
    if math.isnan(x) or x <= 0:
        raise NonPositiveDeviation(f"{name} must be positive, got {x}")
    return x


def canonicalize(interval: DeviationInterval) -> DeviationInterval:
    """Return the interval with ``u <= v``, flipping :attr:`swapped` on a swap.

    Valid for symmetric laws, where the tail event is invariant under
    exchanging the two deviations.
    """
    if interval.u > interval.v:
        return replace(interval, u=interval.v, v=interval.u, swapped=not interval.swapped)
    return interval


def normalize(v: float, spec: MomentSpec) -> float:
    if not (spec.value > 0):
        raise NonPositiveMoment(f"moment value must be positive, got {spec.value}")
    return v / spec.scale


@dataclass(frozen=True)
class SymmetricUniformMixture:
    """Mixture of uniforms on ``(-c_i, c_i)`` plus a point mass at the mode.

    ``side="lower"`` marks the one-sided variant used for general
    (asymmetric) unimodal laws: each component is uniform on ``(-c_i, 0)``.
    Moments of ``|X|`` are identical for both sides.
    """

    components: tuple[tuple[float, float], ...]
    zero_mass: float = 0.0
    side: str = "both"

    def __post_init__(self):
        comps = tuple((float(c), float(w)) for c, w in self.components)
        object.__setattr__(self, "components", comps)
        if self.side not in ("both", "lower"):
            raise InvalidMixture(f"side must be 'both' or 'lower', got {self.side!r}")
        if not 0.0 <= self.zero_mass <= 1.0:
            raise InvalidMixture(f"zero_mass {self.zero_mass} outside [0, 1]")
        prev = 0.0
        for c, w in comps:
            if not (math.isfinite(c) and c > prev):
                raise InvalidMixture("half-widths must be positive, finite and strictly increasing")
            if not 0.0 < w <= 1.0:
                raise InvalidMixture(f"component weight {w} outside (0, 1]")
            prev = c
        total = self.zero_mass + sum(w for _, w in comps)
        if abs(total - 1.0) > MIXTURE_MASS_TOL:
            raise InvalidMixture(f"total mass {total!r} differs from 1")

    @classmethod
    def build(cls, parts, side: str = "both") -> "SymmetricUniformMixture":
        """Assemble from ``(half_width, weight)`` pairs; the remainder goes to the mode.

        Zero weights are dropped, equal half-widths merged, and round-off in the
        remaining mass is absorbed into ``zero_mass``.
        """
        merged: dict[float, float] = {}
        for c, w in parts:
            if w > 0.0:
                merged[float(c)] = merged.get(float(c), 0.0) + float(w)
        comps = tuple(sorted(merged.items()))
        rest = 1.0 - sum(w for _, w in comps)
        if -MIXTURE_MASS_TOL <= rest < 0.0:
            # absorb round-off into the largest weight
            c_last, w_last = comps[-1]
            comps = comps[:-1] + ((c_last, w_last + rest),)
            rest = 0.0
        return cls(components=comps, zero_mass=max(rest, 0.0), side=side)

    @classmethod
    def uniform(cls, half_width: float, side: str = "both") -> "SymmetricUniformMixture":
        return cls(components=((half_width, 1.0),), side=side)

    @property
    def half_widths(self) -> list[float]:
        return [c for c, _ in self.components]

    @property
    def weights(self) -> list[float]:
        return [w for _, w in self.components]

    def scaled(self, factor: float) -> "SymmetricUniformMixture":
        """The law of ``factor * X``."""
        return replace(self, components=tuple((c * factor, w) for c, w in self.components))

    def one_sided(self) -> "SymmetricUniformMixture":
        return replace(self, side="lower")


@dataclass(frozen=True)
class BoundResult:
    bound: float
    region: Region
    extremal: SymmetricUniformMixture
    swapped: bool = False

    def __post_init__(self):
        if not 0.0 <= self.bound <= 1.0:
            raise ValueError(f"bound {self.bound} outside [0, 1]")


def chebyshev_ratio(v: float) -> float:
    """Uncapped Bienaymé-Chebyshev ratio ``1 / v^2`` at unit second moment."""
    _check_deviation(v)
    return 1.0 / (v * v)


def chebyshev_bound(v: float) -> float:
    return min(1.0, chebyshev_ratio(v))


def gauss_extremal(v: float) -> SymmetricUniformMixture:
    _check_deviation(v)
    if math.isinf(v):
        return SymmetricUniformMixture.uniform(SQRT3)
    c = max(1.5 * v, SQRT3)
    weight = min(4.0 / (3.0 * v * v), 1.0)
    return SymmetricUniformMixture.build([(c, weight)])


def gauss_bound(v: float) -> BoundResult:
    """Sharp bound on ``P(|X| >= v)`` for unimodal ``X`` with mode 0 and ``E X^2 = 1``."""
    _check_deviation(v)
    if v >= GAUSS_KNOT:
        bound, region = 4.0 / (9.0 * v * v), Region.GAUSS_PIECE1
    else:
        bound, region = 1.0 - v / SQRT3, Region.GAUSS_PIECE2
    return BoundResult(min(bound, 1.0), region, gauss_extremal(v))


def markov_gauss_extremal(v: float) -> SymmetricUniformMixture:
    _check_deviation(v)
    if math.isinf(v):
        return SymmetricUniformMixture.uniform(2.0)
    c = 2.0 * max(v, 1.0)
    return SymmetricUniformMixture.build([(c, 2.0 / c)])


def markov_gauss_bound(v: float) -> BoundResult:
    """Sharp bound on ``P(|X| >= v)`` for unimodal ``X`` with mode 0 and ``E|X| = 1``."""
    _check_deviation(v)
    if v >= MARKOV_KNOT:
        bound, region = 1.0 / (2.0 * v), Region.MARKOV_PIECE1
    else:
        bound, region = 1.0 - v / 2.0, Region.MARKOV_PIECE2
    return BoundResult(min(bound, 1.0), region, markov_gauss_extremal(v))


def symmetric_bound(v: float, spec: MomentSpec) -> BoundResult:
    """Gauss or Markov-Gauss bound at a raw deviation ``v`` under ``spec``.

    The attached extremal law is expressed on the raw scale.
    """
    vn = normalize(_check_deviation(v), spec)
    if spec.kind is MomentKind.SECOND:
        res = gauss_bound(vn)
    else:
        res = markov_gauss_bound(vn)
    return replace(res, extremal=res.extremal.scaled(spec.scale))
