"""Dense Schrodinger-style amplitudes."""

from __future__ import annotations

import threading

import numpy as np

from ..circuit import Circuit, Gate, GateClass
from .base import AmplitudeOracle, OracleError

MAX_QUBITS = 26
CHECKPOINT_BUDGET = 64 * 2**20  # bytes


def apply_gate(state: np.ndarray, g: Gate, n: int) -> np.ndarray:
    """Return ``g|state>``; qubit q is bit q of the flat index."""
    w = g.width
    if g.gate_class is GateClass.DIAGONAL:
        out = state.copy()
        psi = out.reshape((2,) * n)
        diag = np.diagonal(g.matrix).reshape((2,) * w)
        axes = [n - 1 - q for q in reversed(g.support)]
        shape = [1] * n
        for a in axes:
            shape[a] = 2
        order = np.argsort(axes)
        psi *= np.transpose(diag, order).reshape(shape)
        return out
    psi = state.reshape((2,) * n)
    axes = [n - 1 - q for q in reversed(g.support)]
    op = g.matrix.reshape((2,) * (2 * w))
    out = np.tensordot(op, psi, axes=(list(range(w, 2 * w)), axes))
    out = np.moveaxis(out, list(range(w)), axes)
    return np.ascontiguousarray(out).reshape(-1)


def apply_slot(state: np.ndarray, c: Circuit, t: int) -> np.ndarray:
    """Apply gate slot ``t``, branching over its control table if adaptive."""
    ctl = c.adaptive.get(t)
    if ctl is None:
        return apply_gate(state, c.gates[t], c.n)
    out = np.zeros_like(state)
    for g, mask in ctl.branches(c.n):
        part = np.where(mask, state, 0)
        out[mask] = apply_gate(part, g, c.n)[mask]
    return out


def zero_state(n: int) -> np.ndarray:
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1.0
    return psi


def simulate(c: Circuit, t: int | None = None) -> np.ndarray:
    t = c.m if t is None else t
    psi = zero_state(c.n)
    for k in range(t):
        psi = apply_slot(psi, c, k)
    return psi


class StatevectorOracle(AmplitudeOracle):
    supports_marginals = True

    def __init__(self, circuit: Circuit, max_qubits: int = MAX_QUBITS, keep_prefixes: bool | None = None):
        if circuit.n > max_qubits:
            raise OracleError(f"{circuit.n} qubits exceeds the statevector guard of {max_qubits}")
        super().__init__(circuit)
        if keep_prefixes is None:
            keep_prefixes = (circuit.m + 1) * (16 << circuit.n) <= CHECKPOINT_BUDGET
        self.keep_prefixes = keep_prefixes
        self.gate_applications = 0
        self._lock = threading.Lock()
        self._t = 0
        self._psi = zero_state(circuit.n)
        self._checkpoints: dict[int, np.ndarray] = {0: self._psi}

    def state(self, t: int) -> np.ndarray:
        self._check_prefix(t)
        with self._lock:
            if t in self._checkpoints:
                return self._checkpoints[t]
            if t < self._t:
                start = max(k for k in self._checkpoints if k <= t)
                self._t, self._psi = start, self._checkpoints[start]
            while self._t < t:
                self._psi = apply_slot(self._psi, self.circuit, self._t)
                self._psi.setflags(write=False)
                self.gate_applications += 1
                self._t += 1
                if self.keep_prefixes:
                    self._checkpoints[self._t] = self._psi
            return self._psi

    def _amplitudes(self, t, xs):
        return self.state(t)[xs]

    def probabilities(self, t: int) -> np.ndarray:
        return np.abs(self.state(t)) ** 2

    def marginal(self, t: int, y: int, j: int) -> float:
        p = self.probabilities(t).reshape(-1, 1 << j)
        with self._count_lock:
            self.call_counter[t] += p.shape[0]
        return float(p[:, y].sum())

    def clone(self) -> "StatevectorOracle":
        return StatevectorOracle(self.circuit, keep_prefixes=self.keep_prefixes)


def build_statevector_oracle(c: Circuit, max_qubits: int = MAX_QUBITS, keep_prefixes: bool | None = None) -> StatevectorOracle:
    return StatevectorOracle(c, max_qubits, keep_prefixes)
