import math

import pytest
from scipy import integrate

_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion, printed in the terminal summary."""

    def record(number: int, name: str, ok: bool, detail: str = "") -> bool:
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {name}"
        if detail:
            line += f" :: {detail}"
        _CRITERIA.append(line)
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)


def brute_tail(mix, u, v):
    """Tail of a uniform mixture by direct quadrature of its density (independent of mixture_tail)."""
    total = 0.0
    for c, w in mix.components:
        lo, hi = (-c, 0.0) if mix.side == "lower" else (-c, c)
        dens = w / (hi - lo)
        left = integrate.quad(lambda x: dens, lo, min(-u, hi))[0] if -u > lo else 0.0
        right = integrate.quad(lambda x: dens, max(v, lo), hi)[0] if v < hi else 0.0
        total += left + right
    return total


def brute_moment(mix, power):
    total = 0.0
    for c, w in mix.components:
        lo, hi = (-c, 0.0) if mix.side == "lower" else (-c, c)
        total += w * integrate.quad(lambda x: abs(x) ** power / (hi - lo), lo, hi)[0]
    return total


SQRT3 = math.sqrt(3.0)
