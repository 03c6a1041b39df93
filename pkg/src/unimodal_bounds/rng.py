"""Seeded xorshift64* stream, reproducible bit-for-bit from its description.

The stream interleaves ``LANES`` independent xorshift64* generators
(shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D). Lane ``i`` is seeded
with the ``i``-th output of splitmix64 started at ``seed``. Draw ``k`` of the
stream is step ``k // LANES`` of lane ``k % LANES``. Doubles take the top 53
bits: ``(x >> 11) * 2**-53``.
"""

from __future__ import annotations

import numpy as np

LANES = 1024
MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_MULT = np.uint64(0x2545F4914F6CDD1D)
_S12, _S25, _S27, _S11 = (np.uint64(k) for k in (12, 25, 27, 11))


def splitmix64(state: int) -> tuple[int, int]:
    """One splitmix64 step: returns ``(new_state, output)``."""
    state = (state + _GOLDEN) & MASK64
    z = state
    z = ((z ^ (z >> 30)) * _MIX1) & MASK64
    z = ((z ^ (z >> 27)) * _MIX2) & MASK64
    return state, z ^ (z >> 31)


class XorShift64Star:
    def __init__(self, seed: int):
        sm = int(seed) & MASK64
        lanes = []
        for _ in range(LANES):
            sm, z = splitmix64(sm)
            lanes.append(z or 1)  # xorshift state must be nonzero
        self._state = np.array(lanes, dtype=np.uint64)
        self._pending = np.empty(0, dtype=np.uint64)

    def _block(self) -> np.ndarray:
        x = self._state
        x ^= x >> _S12
        x ^= x << _S25
        x ^= x >> _S27
        return x * _MULT

    def integers(self, n: int) -> np.ndarray:
        """Next ``n`` raw 64-bit outputs of the stream."""
        have = self._pending
        need = n - have.size
        if need <= 0:
            out, self._pending = have[:n], have[n:]
            return out
        blocks = [have]
        for _ in range(-(-need // LANES)):
            blocks.append(self._block())
        allv = np.concatenate(blocks)
        out, self._pending = allv[:n], allv[n:]
        return out

    def random(self, n: int) -> np.ndarray:
        """``n`` doubles uniform on ``[0, 1)``."""
        return (self.integers(n) >> _S11).astype(np.float64) * 2.0**-53

    def uniform(self, low: float, high: float, n: int) -> np.ndarray:
        return low + (high - low) * self.random(n)
