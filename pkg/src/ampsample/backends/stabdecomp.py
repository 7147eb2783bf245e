"""Clifford+T states as sums of stabilizer states.

Each T is replaced by ``alpha*I + beta*S`` (``Tdg`` by the conjugate pair with
``Sdg``), so a prefix with l T gates is a sum of ``2**l`` Clifford circuits.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .. import gates
from ..circuit import Circuit, Gate, circuit_from_gates
from .base import AmplitudeOracle, OracleError
from .chform import SUPPORTED, CHForm

MAX_T = 16
CHECKPOINT_TERMS = 1 << 16  # total CH-forms kept across cached prefixes

BETA = (np.exp(1j * np.pi / 4) - 1) / (1j - 1)
ALPHA = 1 - BETA

_S = Gate.named("s", [0])
_SDG = Gate.named("sdg", [0])


@dataclass(frozen=True)
class StabilizerTerm:
    coefficient: complex
    clifford: Circuit

    def __post_init__(self):
        bad = [g.label for g in self.clifford.gates if gates.canonical(g.label) not in SUPPORTED]
        if bad:
            raise OracleError(f"non-Clifford gate(s) {bad} in stabilizer term")


def _t_split(g: Gate) -> tuple[tuple[complex, Gate | None], tuple[complex, Gate]] | None:
    name = gates.canonical(g.label)
    if name == "t":
        return (ALPHA, None), (BETA, _S.on(g.support))
    if name == "tdg":
        return (np.conj(ALPHA), None), (np.conj(BETA), _SDG.on(g.support))
    return None


def _check(c: Circuit) -> None:
    if c.is_adaptive:
        raise OracleError("adaptive circuits are not handled by the stabilizer backends")
    n_t = 0
    for g in c.gates:
        name = gates.canonical(g.label)
        if name in ("t", "tdg"):
            n_t += 1
        elif name not in SUPPORTED:
            raise OracleError(f"gate {g.label} is neither Clifford nor T")
    if n_t > MAX_T:
        raise OracleError(f"{n_t} T gates exceeds the cap of {MAX_T}")


def stabilizer_decompose(c: Circuit) -> list[list[StabilizerTerm]]:
    """Entry ``t`` decomposes the prefix state ``U_t...U_1|0^n>``, ``t = 0..m``."""
    _check(c)
    terms: list[tuple[complex, list[Gate]]] = [(1.0 + 0j, [])]
    out = [[StabilizerTerm(1.0 + 0j, circuit_from_gates(c.n, []))]]
    for g in c.gates:
        split = _t_split(g)
        if split is None:
            terms = [(a, gl + [g]) for a, gl in terms]
        else:
            (a0, _), (a1, sg) = split
            terms = [(a * a0, gl) for a, gl in terms] + [(a * a1, gl + [sg]) for a, gl in terms]
        out.append([StabilizerTerm(a, circuit_from_gates(c.n, gl)) for a, gl in terms])
    return out


class StabDecompOracle(AmplitudeOracle):
    supports_marginals = False

    def __init__(self, circuit: Circuit):
        _check(circuit)
        super().__init__(circuit)
        self._lock = threading.Lock()
        self._t = 0
        self._terms: list[tuple[complex, CHForm]] = [(1.0 + 0j, CHForm(circuit.n))]
        self._checkpoints = {0: self._terms}
        self._kept = 1

    def _advance(self, terms, g: Gate):
        split = _t_split(g)
        if split is None:
            return [(a, st.copy().apply(g)) for a, st in terms]
        (a0, _), (a1, sg) = split
        return [(a * a0, st) for a, st in terms] + [(a * a1, st.copy().apply(sg)) for a, st in terms]

    def terms(self, t: int) -> list[tuple[complex, CHForm]]:
        self._check_prefix(t)
        with self._lock:
            if t in self._checkpoints:
                return self._checkpoints[t]
            if t < self._t:
                self._t = max(k for k in self._checkpoints if k <= t)
                self._terms = self._checkpoints[self._t]
            while self._t < t:
                self._terms = self._advance(self._terms, self.circuit.gates[self._t])
                self._t += 1
                if self._kept + len(self._terms) <= CHECKPOINT_TERMS:
                    self._checkpoints[self._t] = self._terms
                    self._kept += len(self._terms)
            return self._terms

    def _amplitudes(self, t, xs):
        out = np.zeros(len(xs), dtype=complex)
        for a, st in self.terms(t):
            out += a * st.amplitudes(xs)
        return out

    def clone(self) -> "StabDecompOracle":
        return StabDecompOracle(self.circuit)


def build_stabdecomp_oracle(c: Circuit) -> StabDecompOracle:
    return StabDecompOracle(c)
