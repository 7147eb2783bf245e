from __future__ import annotations

import threading
from collections import Counter
from typing import Sequence

import numpy as np

from .. import bits
from ..circuit import Circuit


class OracleError(RuntimeError):
    pass


class UnsupportedError(OracleError):
    pass


class AmplitudeOracle:
    """Answers ``<x| U_t ... U_1 |0^n>`` for a fixed circuit.

    Subclasses implement ``_amplitudes``.  Every public query is counted per
    prefix length in ``call_counter``.
    """

    supports_marginals = False
    exact = True

    def __init__(self, circuit: Circuit):
        self.circuit = circuit
        self.n = circuit.n
        self.m = circuit.m
        self.call_counter: Counter[int] = Counter()
        self._count_lock = threading.Lock()

    # -- public interface -------------------------------------------------

    def amplitude(self, t: int, x: int) -> complex:
        return complex(self.amplitudes(t, np.array([x], dtype=np.int64))[0])

    def amplitudes(self, t: int, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64).reshape(-1)
        self._check_prefix(t)
        with self._count_lock:
            self.call_counter[t] += len(xs)
        return self._amplitudes(t, xs)

    def branch_probabilities(self, t: int, reps, support: Sequence[int]) -> np.ndarray:
        """Unnormalized branch weights for gate ``t`` (1-based prefix length).

        Row ``r`` holds the weights of the strings that agree with ``reps[r]``
        outside ``support``, indexed by the local value on ``support``.  The
        default is ``P_t(y) = |amplitude(t, y)|^2``.
        """
        reps = np.asarray(reps, dtype=np.int64).reshape(-1)
        offsets = bits.deposit(np.arange(1 << len(support), dtype=np.int64), support)
        base = reps & ~bits.mask_of(support)
        ys = (base[:, None] | offsets[None, :]).reshape(-1)
        amps = self.amplitudes(t, ys)
        return (np.abs(amps) ** 2).reshape(len(reps), -1)

    def marginal(self, t: int, y: int, j: int) -> float:
        raise UnsupportedError(f"{type(self).__name__} does not support marginals")

    @property
    def total_calls(self) -> int:
        return sum(self.call_counter.values())

    def reset_counters(self) -> None:
        with self._count_lock:
            self.call_counter.clear()

    def clone(self) -> "AmplitudeOracle":
        raise NotImplementedError

    # -- helpers ------------------------------------------------------------

    def _check_prefix(self, t: int) -> None:
        if not 0 <= t <= self.m:
            raise OracleError(f"prefix length {t} outside [0, {self.m}]")

    def _amplitudes(self, t: int, xs: np.ndarray) -> np.ndarray:
        raise NotImplementedError


def marginal_probability(o: AmplitudeOracle, t: int, y: int, j: int) -> float:
    """Probability that qubits ``0..j-1`` of the prefix-``t`` state read ``y``."""
    if not o.supports_marginals:
        raise UnsupportedError(f"marginals unsupported by {type(o).__name__}")
    if j == 0:
        return 1.0
    return o.marginal(t, y, j)
