"""Stabilizer states in CH-form with exact global phase.

A state is ``omega * U_C U_H |s>`` where ``U_H`` is a product of Hadamards on
the qubits flagged in ``v`` and ``U_C`` is generated by S, CZ and CNOT (so it
fixes ``|0^n>``).  ``U_C`` is stored through its conjugation action::

    U_C^-1 Z_p U_C = prod_j Z_j^G[p,j]
    U_C^-1 X_p U_C = i^gamma[p] prod_j X_j^F[p,j] Z_j^M[p,j]
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .. import gates
from ..circuit import Circuit, Gate
from .base import OracleError

SUPPORTED = frozenset({"i", "h", "s", "sdg", "x", "y", "z", "cx", "cz"})
_PHASES = np.array([1, 1j, -1, -1j])


class NotCliffordError(OracleError):
    pass


def _parity(a: np.ndarray) -> int:
    return int(np.count_nonzero(a)) & 1


class CHForm:
    def __init__(self, n: int):
        self.n = n
        self.F = np.eye(n, dtype=np.uint8)
        self.G = np.eye(n, dtype=np.uint8)
        self.M = np.zeros((n, n), dtype=np.uint8)
        self.gamma = np.zeros(n, dtype=np.int64)
        self.v = np.zeros(n, dtype=np.uint8)
        self.s = np.zeros(n, dtype=np.uint8)
        self.omega = 1.0 + 0j

    def copy(self) -> "CHForm":
        c = CHForm.__new__(CHForm)
        c.n = self.n
        c.F, c.G, c.M = self.F.copy(), self.G.copy(), self.M.copy()
        c.gamma, c.v, c.s = self.gamma.copy(), self.v.copy(), self.s.copy()
        c.omega = self.omega
        return c

    # -- left multiplication by C-type gates --------------------------------

    def left_s(self, q: int) -> None:
        self.M[q] ^= self.G[q]
        self.gamma[q] = (self.gamma[q] - 1) % 4

    def left_z(self, q: int) -> None:
        self.gamma[q] = (self.gamma[q] + 2) % 4

    def left_cz(self, q: int, r: int) -> None:
        self.M[q] ^= self.G[r]
        self.M[r] ^= self.G[q]

    def left_cx(self, q: int, r: int) -> None:
        sign = _parity(self.M[q] & self.F[r])
        self.gamma[q] = (self.gamma[q] + self.gamma[r] + 2 * sign) % 4
        self.G[r] ^= self.G[q]
        self.F[q] ^= self.F[r]
        self.M[q] ^= self.M[r]

    # -- right multiplication by C-type gates -------------------------------

    def _right_s(self, q: int) -> None:
        self.M[:, q] ^= self.F[:, q]
        self.gamma = (self.gamma - self.F[:, q]) % 4

    def _right_cz(self, q: int, r: int) -> None:
        self.gamma = (self.gamma + 2 * (self.F[:, q] & self.F[:, r])) % 4
        self.M[:, q] ^= self.F[:, r]
        self.M[:, r] ^= self.F[:, q]

    def _right_cx(self, q: int, r: int) -> None:
        self.G[:, q] ^= self.G[:, r]
        self.F[:, r] ^= self.F[:, q]
        self.M[:, q] ^= self.M[:, r]

    # -- Paulis and Hadamard ------------------------------------------------

    def _pauli_on_basis(self, fx: np.ndarray, mz: np.ndarray) -> tuple[int, np.ndarray]:
        """``U_H X^fx Z^mz U_H |s> = (-1)^sign |s ^ x>``; returns (sign, x)."""
        v = self.v
        x = np.where(v, mz, fx).astype(np.uint8)
        z = np.where(v, fx, mz).astype(np.uint8)
        sign = _parity(v & fx & mz) ^ _parity(z & self.s)
        return sign, x

    def left_x(self, q: int) -> None:
        sign, x = self._pauli_on_basis(self.F[q], self.M[q])
        self.s ^= x
        self.omega *= _PHASES[self.gamma[q] % 4] * (-1) ** sign

    def left_y(self, q: int) -> None:
        self.left_z(q)
        self.left_x(q)
        self.omega *= 1j

    def left_h(self, q: int) -> None:
        v, s = self.v, self.s
        # Z part: U_C^-1 Z_q U_C = Z^G[q]
        t = s ^ (self.G[q] & v)
        a_pow = 2 * _parity(self.G[q] & (1 - v) & s)
        # X part
        sign, xx = self._pauli_on_basis(self.F[q], self.M[q])
        u = s ^ xx
        b_pow = (int(self.gamma[q]) + 2 * sign) % 4
        if np.array_equal(t, u):
            self.s = t
            self.omega *= (_PHASES[a_pow] + _PHASES[b_pow]) / np.sqrt(2)
            return
        self._superpose(t, u, a_pow, (b_pow - a_pow) % 4)

    def _superpose(self, t: np.ndarray, u: np.ndarray, a_pow: int, delta: int) -> None:
        """Replace ``U_H |s>`` by ``i^a_pow U_H (|t> + i^delta |u>) / sqrt(2)``."""
        v = self.v
        diff = t ^ u
        v0 = np.flatnonzero(diff & (1 - v))
        v1 = np.flatnonzero(diff & v)
        if len(v0):
            q = int(v0[0])
            if t[q]:
                t, u = u, t
                a_pow, delta = (a_pow + delta) % 4, (-delta) % 4
            for i in v0[1:]:
                self._right_cx(q, int(i))
            for i in v1:
                self._right_cz(q, int(i))
        else:
            q = int(v1[0])
            if t[q]:
                t, u = u, t
                a_pow, delta = (a_pow + delta) % 4, (-delta) % 4
            for i in v1[1:]:
                self._right_cx(int(i), q)
        factor = _PHASES[a_pow]
        s_new = t.copy()
        if not v[q]:
            # |0> + i^d |1>  =  sqrt2 S^d H |0>
            s_turns, v_new, s_q = delta, 1, 0
        elif delta == 0:
            s_turns, v_new, s_q = 0, 0, 0
        elif delta == 2:
            s_turns, v_new, s_q = 0, 0, 1
        elif delta == 1:
            s_turns, v_new, s_q = 3, 1, 0
            factor *= np.exp(1j * np.pi / 4)
        else:
            s_turns, v_new, s_q = 1, 1, 0
            factor *= np.exp(-1j * np.pi / 4)
        for _ in range(s_turns):
            self._right_s(q)
        s_new[q] = s_q
        self.v = v.copy()
        self.v[q] = v_new
        self.s = s_new
        self.omega *= factor

    # -- gates ----------------------------------------------------------------

    def apply(self, g: Gate) -> "CHForm":
        name = gates.canonical(g.label)
        sup = g.support
        if name not in SUPPORTED:
            raise NotCliffordError(f"gate {g.label} is not in the supported Clifford set")
        if name == "i":
            pass
        elif name == "h":
            self.left_h(sup[0])
        elif name == "s":
            self.left_s(sup[0])
        elif name == "sdg":
            for _ in range(3):
                self.left_s(sup[0])
        elif name == "z":
            self.left_z(sup[0])
        elif name == "x":
            self.left_x(sup[0])
        elif name == "y":
            self.left_y(sup[0])
        elif name == "cz":
            self.left_cz(sup[0], sup[1])
        elif name == "cx":
            self.left_cx(sup[0], sup[1])
        return self

    # -- amplitudes ---------------------------------------------------------

    def amplitudes(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64).reshape(-1)
        n = self.n
        xb = ((xs[:, None] >> np.arange(n)) & 1).astype(np.uint8)
        phase = np.zeros(len(xs), dtype=np.int64)
        f = np.zeros((len(xs), n), dtype=np.uint8)
        mz = np.zeros((len(xs), n), dtype=np.uint8)
        for p in range(n):
            sel = xb[:, p].astype(bool)
            if not sel.any():
                continue
            cross = np.count_nonzero(mz[sel] & self.F[p], axis=1) & 1
            phase[sel] += self.gamma[p] + 2 * cross
            f[sel] ^= self.F[p]
            mz[sel] ^= self.M[p]
        v = self.v.astype(bool)
        ok = np.all(f[:, ~v] == self.s[~v], axis=1)
        sign = (np.count_nonzero(mz & f, axis=1) + np.count_nonzero(f[:, v] & self.s[v], axis=1)) & 1
        amp = self.omega * _PHASES[phase % 4] * (1 - 2 * sign) * 2.0 ** (-0.5 * int(v.sum()))
        return np.where(ok, amp, 0)

    def amplitude(self, x: int) -> complex:
        return complex(self.amplitudes([x])[0])

    def statevector(self) -> np.ndarray:
        return self.amplitudes(np.arange(1 << self.n))


def ch_form(c: Circuit) -> CHForm:
    if c.is_adaptive:
        raise NotCliffordError("adaptive circuits are not handled by the stabilizer backend")
    st = CHForm(c.n)
    for g in c.gates:
        st.apply(g)
    return st


@lru_cache(maxsize=256)
def _cached_ch_form(c: Circuit) -> CHForm:
    return ch_form(c)


def clifford_amplitude(c: Circuit, x: int) -> complex:
    """``<x|C|0^n>`` for a Clifford circuit, phase included."""
    return _cached_ch_form(c).amplitude(x)
