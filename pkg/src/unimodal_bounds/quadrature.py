"""Adaptive Simpson quadrature with interval halving.

Integrands with kinks or jumps should declare them as ``breakpoints`` so each
smooth piece is integrated separately; an undeclared jump will usually exhaust
the depth budget and raise :class:`QuadratureFailure`.
"""

from __future__ import annotations

import math
from typing import Callable, Iterable

from .errors import QuadratureFailure

ABS_TOL = 1e-12
MAX_DEPTH = 48
MAX_EVALS = 2_000_000


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    breakpoints: Iterable[float] = (),
    tol: float = ABS_TOL,
    max_depth: int = MAX_DEPTH,
) -> float:
    """Integral of ``f`` over ``[a, b]``.

    The absolute tolerance is ``tol * max(1, |estimate|)``, so large integrals
    are resolved to a fixed relative accuracy.
    """
    if b < a:
        return -integrate(f, b, a, breakpoints, tol, max_depth)
    if b == a:
        return 0.0
    knots = [a] + sorted(x for x in set(breakpoints) if a < x < b) + [b]
    budget = [MAX_EVALS]
    pieces = []
    for lo, hi in zip(knots[:-1], knots[1:]):
        # one-sided endpoint values, so a jump at a knot is seen from inside the piece
        fa, fm, fb = f(math.nextafter(lo, hi)), f(0.5 * (lo + hi)), f(math.nextafter(hi, lo))
        pieces.append((lo, hi, fa, fm, fb, _simpson(lo, hi, fa, fm, fb)))
    rough = sum(p[-1] for p in pieces)
    scale = max(1.0, abs(rough))
    total = 0.0
    for lo, hi, fa, fm, fb, whole in pieces:
        share = tol * scale * (hi - lo) / (b - a)
        total += _adapt(f, lo, hi, fa, fm, fb, whole, share, max_depth, budget)
    return total


def _simpson(a, b, fa, fm, fb):
    return (b - a) * (fa + 4.0 * fm + fb) / 6.0


def _adapt(f, a, b, fa, fm, fb, whole, tol, depth, budget):
    # explicit stack keeps deep refinement off the Python recursion limit
    stack = [(a, b, fa, fm, fb, whole, tol, depth)]
    total = 0.0
    while stack:
        a, b, fa, fm, fb, whole, tol, depth = stack.pop()
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        budget[0] -= 2
        left = _simpson(a, m, fa, flm, fm)
        right = _simpson(m, b, fm, frm, fb)
        err = left + right - whole
        if abs(err) <= 15.0 * tol or (b - a) <= 4.0 * math.ulp(max(abs(a), abs(b))):
            total += left + right + err / 15.0
            continue
        if depth <= 0 or budget[0] <= 0:
            raise QuadratureFailure(
                f"tolerance {tol:.3g} not reached on [{a!r}, {b!r}] (error estimate {abs(err):.3g})"
            )
        stack.append((a, m, fa, flm, fm, left, 0.5 * tol, depth - 1))
        stack.append((m, b, fm, frm, fb, right, 0.5 * tol, depth - 1))
    return total
