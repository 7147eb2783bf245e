"""Feynman sum over intermediate basis states, polynomial memory."""

from __future__ import annotations

import sys
import threading

import numpy as np

from .. import bits
from ..circuit import Circuit, GateClass
from .base import AmplitudeOracle

DEFAULT_CACHE_BYTES = 256 * 2**20
ENTRY_BYTES = 200  # rough dict-entry footprint of ((t, x), complex)


class PathSumOracle(AmplitudeOracle):
    supports_marginals = False

    def __init__(self, circuit: Circuit, cache_bytes: int = DEFAULT_CACHE_BYTES):
        super().__init__(circuit)
        self.cache_bytes = cache_bytes
        self._max_entries = cache_bytes // ENTRY_BYTES
        self._cache: dict[tuple[int, int], complex] = {}
        self._lock = threading.Lock()
        need = 4 * circuit.m + 200
        if sys.getrecursionlimit() < need:
            sys.setrecursionlimit(need)

    def _amp(self, t: int, x: int) -> complex:
        if t == 0:
            return 1.0 + 0j if x == 0 else 0j
        key = (t, x)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        g = self.circuit.gate_for(t - 1, x)
        sup = g.support
        row = bits.local_index(x, sup)
        if g.gate_class is GateClass.DIAGONAL:
            val = g.matrix[row, row] * self._amp(t - 1, x)
        elif g.gate_class is GateClass.PERMUTATION:
            image, phase = g.permutation
            col = int(np.flatnonzero(image == row)[0])
            val = phase[col] * self._amp(t - 1, bits.with_local(x, sup, col))
        else:
            val = 0j
            mrow = g.matrix[row]
            for col in np.flatnonzero(mrow):
                val += mrow[col] * self._amp(t - 1, bits.with_local(x, sup, int(col)))
        if len(self._cache) < self._max_entries:
            self._cache[key] = val
        return val

    def _amplitudes(self, t, xs):
        with self._lock:
            return np.array([self._amp(t, int(x)) for x in xs], dtype=complex)

    def clear_cache(self) -> None:
        self._cache.clear()

    def clone(self) -> "PathSumOracle":
        return PathSumOracle(self.circuit, self.cache_bytes)


def build_pathsum_oracle(c: Circuit, cache_bytes: int = DEFAULT_CACHE_BYTES) -> PathSumOracle:
    return PathSumOracle(c, cache_bytes)
