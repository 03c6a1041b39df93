"""Independent checks of the closed-form bounds.

Three routes, none of which reuses the closed-form bound formulas:

* exact tail and moment calculus for uniform mixtures;
* a brute-force oracle over the Khintchine representation ``X = U Y``,
  maximizing the tail over laws of ``|Y|`` with at most two atoms under the
  moment constraint;
* seeded Monte Carlo sampling of mixtures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .asymmetric import (
    ANTI_DIAGONAL,
    SLOPE_S2,
    TRIPLE_POINT_U,
    a2_a3_curve,
    normalized_bound,
    psi_semenikhin,
    s4_upper_curve,
)
from .core import GAUSS_KNOT, MomentKind, Region, SymmetricUniformMixture
from .errors import HorizonHit, NotCanonical
from .rng import XorShift64Star


def mixture_tail(mix: SymmetricUniformMixture, u: float, v: float) -> float:
    """``P(X <= -u or X >= v)`` for the mixture; the mode's point mass contributes 0."""
    total = 0.0
    for c, w in mix.components:
        below = max(0.0, 1.0 - u / c)
        if mix.side == "lower":
            total += w * below
        else:
            total += w * 0.5 * (below + max(0.0, 1.0 - v / c))
    return total


def mixture_moment(mix: SymmetricUniformMixture, kind: MomentKind) -> float:
    """``E X^2`` or ``E|X|``; uniform on ``(-c, c)`` contributes ``c^2/3`` or ``c/2``."""
    if MomentKind.parse(kind) is MomentKind.SECOND:
        return sum(w * c * c / 3.0 for c, w in mix.components)
    return sum(w * c / 2.0 for c, w in mix.components)


# Khintchine: E X^2 = E Y^2 / 3 and E|X| = E|Y| / 2, so unit moments of X
# fix E Y^2 = 3 or E|Y| = 2.
def latent_moment_target(kind: MomentKind) -> float:
    return 3.0 if MomentKind.parse(kind) is MomentKind.SECOND else 2.0


def latent_moment(y, kind: MomentKind):
    y = np.asarray(y, dtype=float)
    return y * y if MomentKind.parse(kind) is MomentKind.SECOND else y


def latent_pivot(kind: MomentKind) -> float:
    """The atom location whose moment equals the target."""
    return math.sqrt(3.0) if MomentKind.parse(kind) is MomentKind.SECOND else 2.0


def conditional_tail(y, u: float, v: float):
    """``P(U y <= -u or U y >= v)`` for symmetric ``Y`` with ``|Y| = y``."""
    y = np.asarray(y, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        left = np.where(y > 0, np.maximum(0.0, 1.0 - u / y), 0.0)
        right = np.where(y > 0, np.maximum(0.0, 1.0 - v / y), 0.0)
    return 0.5 * (left + right)


def atom_weights(y1, y2, kind: MomentKind):
    """Weight on ``y1`` making ``p m(y1) + (1 - p) m(y2)`` hit the moment target.

    Requires ``y1 <= pivot <= y2``; a coincident pair at the pivot gets weight 1.
    """
    target = latent_moment_target(kind)
    m1, m2 = latent_moment(y1, kind), latent_moment(y2, kind)
    span = m2 - m1
    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(span > 0, (m2 - target) / span, 1.0)
    return np.clip(p, 0.0, 1.0)


@dataclass(frozen=True)
class OracleConfig:
    grid_points_per_axis: int = 256
    refine_iterations: int = 3
    atom_upper_limit: float | None = None
    tolerance: float = 5e-4
    candidates: int = 4

    def __post_init__(self):
        if self.grid_points_per_axis < 64:
            raise ValueError("grid_points_per_axis must be at least 64")
        if self.refine_iterations < 2:
            raise ValueError("refine_iterations must be at least 2")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")

    def horizon(self, u: float, v: float, kind: MomentKind) -> float:
        need = 4.0 * max(u, v, latent_pivot(kind))
        if self.atom_upper_limit is None:
            return need
        if self.atom_upper_limit < need:
            raise ValueError(f"atom_upper_limit {self.atom_upper_limit} below required {need}")
        return self.atom_upper_limit


@dataclass(frozen=True)
class OracleResult:
    value: float
    low_atom: float
    high_atom: float
    low_weight: float


def _axis(lo: float, hi: float, n: int, kinks) -> np.ndarray:
    pts = np.linspace(lo, hi, n)
    extra = [k for k in kinks if lo <= k <= hi]
    return np.unique(np.concatenate([pts, extra])) if extra else pts


def _evaluate(y1: np.ndarray, y2: np.ndarray, u, v, kind):
    p = atom_weights(y1[:, None], y2[None, :], kind)
    vals = p * conditional_tail(y1, u, v)[:, None] + (1.0 - p) * conditional_tail(y2, u, v)[None, :]
    return vals, p


def oracle_search(u: float, v: float, kind: MomentKind, cfg: OracleConfig = OracleConfig()) -> OracleResult:
    """Grid-then-refine maximization of the tail over two-atom laws of ``|Y|``.

    The low atom ranges over ``[0, pivot]`` (0 realizes a point mass at the
    mode) and the high atom over ``[pivot, horizon]``; the weight is solved
    from the moment equation, so every candidate is feasible. Kinks at
    ``y = u`` and ``y = v`` are placed on every grid.
    """
    if not (0 < u <= v) or math.isinf(v):
        raise NotCanonical(f"oracle needs finite 0 < u <= v, got u={u}, v={v}")
    kind = MomentKind.parse(kind)
    pivot = latent_pivot(kind)
    limit = cfg.horizon(u, v, kind)
    n = cfg.grid_points_per_axis
    kinks = (u, v, pivot)

    y1 = _axis(0.0, pivot, n, kinks)
    y2 = _axis(pivot, limit, n, kinks)
    vals, _ = _evaluate(y1, y2, u, v, kind)

    # refine around several separated coarse maxima; basins can be close in value
    order = np.argsort(vals, axis=None)[::-1]
    starts: list[tuple[float, float]] = []
    h1, h2 = y1[1] - y1[0] if y1.size > 1 else 0.0, (limit - pivot) / (n - 1)
    for flat in order:
        i, j = np.unravel_index(flat, vals.shape)
        cand = (float(y1[i]), float(y2[j]))
        if all(abs(cand[0] - s[0]) > 3 * h1 or abs(cand[1] - s[1]) > 3 * h2 for s in starts):
            starts.append(cand)
        if len(starts) >= cfg.candidates:
            break

    best = OracleResult(-1.0, pivot, pivot, 1.0)
    for a, b in starts:
        w1, w2 = pivot / (n - 1), (limit - pivot) / (n - 1)
        for _ in range(cfg.refine_iterations):
            ax1 = _axis(max(0.0, a - 2 * w1), min(pivot, a + 2 * w1), n, kinks)
            ax2 = _axis(max(pivot, b - 2 * w2), min(limit, b + 2 * w2), n, kinks)
            sub, p = _evaluate(ax1, ax2, u, v, kind)
            i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
            a, b = float(ax1[i]), float(ax2[j])
            local = OracleResult(float(sub[i, j]), a, b, float(p[i, j]))
            w1, w2 = 4 * w1 / (n - 1), 4 * w2 / (n - 1)
        if local.value > best.value:
            best = local

    if best.low_weight < 1.0 and best.high_atom >= 0.99 * limit:
        raise HorizonHit(f"maximizing atom {best.high_atom} within 1% of horizon {limit}")
    return best


def two_atom_oracle(u: float, v: float, kind: MomentKind, cfg: OracleConfig = OracleConfig()) -> float:
    return oracle_search(u, v, kind, cfg).value


class EmpiricalTail:
    """Tail frequencies ``P_n(X <= -u or X >= v)`` from a fixed sample."""

    def __init__(self, samples: np.ndarray):
        self.samples = np.sort(np.asarray(samples, dtype=float))
        self.n = self.samples.size

    def __call__(self, u: float, v: float) -> tuple[float, float]:
        below = np.searchsorted(self.samples, -u, side="right")
        above = self.n - np.searchsorted(self.samples, v, side="left")
        freq = float(below + above) / self.n
        return freq, math.sqrt(freq * (1.0 - freq) / self.n)


def draw_mixture(mix: SymmetricUniformMixture, n: int, rng: XorShift64Star) -> np.ndarray:
    pick = rng.random(n)
    pos = rng.random(n)
    cum = np.cumsum([mix.zero_mass] + mix.weights)
    idx = np.minimum(np.searchsorted(cum, pick, side="right"), len(cum) - 1)
    widths = np.array([0.0] + mix.half_widths)[idx]
    if mix.side == "lower":
        return -widths * pos
    return widths * (2.0 * pos - 1.0)


def sample_mixture(mix: SymmetricUniformMixture, n: int, seed: int) -> EmpiricalTail:
    if n < 1:
        raise ValueError("n must be at least 1")
    return EmpiricalTail(draw_mixture(mix, n, XorShift64Star(seed)))


@dataclass(frozen=True)
class SharpnessReport:
    u: float
    v: float
    kind: MomentKind
    region: Region
    closed_form_bound: float
    extremal_tail: float
    extremal_moment: float
    oracle_value: float
    passed: bool

    def items(self) -> list[tuple[str, object]]:
        return [
            ("u", self.u),
            ("v", self.v),
            ("kind", self.kind.value),
            ("region", self.region.value),
            ("closed_form_bound", self.closed_form_bound),
            ("extremal_tail", self.extremal_tail),
            ("extremal_moment", self.extremal_moment),
            ("oracle_value", self.oracle_value),
            ("status", "PASS" if self.passed else "FAIL"),
        ]


EXTREMAL_TOL = 1e-9


def sharpness_report(u: float, v: float, kind: MomentKind, cfg: OracleConfig = OracleConfig()) -> SharpnessReport:
    kind = MomentKind.parse(kind)
    res = normalized_bound(u, v, kind)
    tail = mixture_tail(res.extremal, u, v)
    moment = mixture_moment(res.extremal, kind)
    oracle = two_atom_oracle(u, v, kind, cfg)
    ok = (
        abs(tail - res.bound) <= EXTREMAL_TOL
        and oracle - res.bound <= cfg.tolerance
        and res.bound - oracle <= 10 * cfg.tolerance
    )
    return SharpnessReport(u, v, kind, res.region, res.bound, tail, moment, oracle, ok)


def format_value(x: object) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.17g}"
    return str(x)


def format_report(items) -> str:
    """Serialize ``(key, value)`` pairs as ``key=value`` lines."""
    return "".join(f"{k}={format_value(val)}\n" for k, val in items)


def parse_report(text: str) -> dict[str, str]:
    out = {}
    for line in text.splitlines():
        if line and not line.startswith("#"):
            key, _, val = line.partition("=")
            out[key] = val
    return out


def interior_points(region: Region, k: int = 5) -> list[tuple[float, float]]:
    """``k`` canonical points strictly inside ``region``, away from its boundaries."""
    fr = [(i + 0.5) / k for i in range(k)]
    pts = []
    for f in fr:
        if region is Region.S1:
            u = 0.05 + f * (GAUSS_KNOT - 0.15)
            top = min(psi_semenikhin(u), ANTI_DIAGONAL - u)
            pts.append((u, u + 0.5 * (top - u)))
        elif region is Region.S2:
            u = TRIPLE_POINT_U + 0.05 + f * 4.0
            lo = max(u, ANTI_DIAGONAL - u)
            pts.append((u, lo + 0.5 * (SLOPE_S2 * u - lo)))
        elif region is Region.S3:
            u = GAUSS_KNOT + 0.05 + f * 3.0
            pts.append((u, SLOPE_S2 * u * (1.1 + f)))
        elif region is Region.S4:
            u = 0.02 + f * (GAUSS_KNOT - 0.1)
            lo = max(psi_semenikhin(u), SLOPE_S2 * u)
            pts.append((u, lo + 0.5 * (s4_upper_curve(u) - lo)))
        elif region is Region.S5:
            u = 0.05 + f * (GAUSS_KNOT - 0.1)
            pts.append((u, s4_upper_curve(u) * (1.1 + f)))
        elif region is Region.A1:
            u = 0.05 + f * 0.9
            pts.append((u, u + 0.5 * (2.0 - 2.0 * u)))
        elif region is Region.A2:
            u = 0.05 + f * 0.9
            pts.append((u, a2_a3_curve(u) * (1.1 + f)))
        elif region is Region.A3:
            if f < 0.5:
                u = 0.1 + f * 1.6
                pts.append((u, 2.0 - u + 0.5 * (a2_a3_curve(u) - 2.0 + u)))
            else:
                u = 1.1 + f * 2.0
                pts.append((u, 2.0 * u))
        elif region is Region.A4:
            u = 1.1 + f * 2.0
            pts.append((u, 3.0 * u * (1.1 + f)))
        else:
            raise ValueError(f"no interior sampler for {region}")
    return pts
