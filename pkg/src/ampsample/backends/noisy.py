"""Perturbed amplitude oracle for robustness experiments.

Prefix state ``t`` is replaced by ``phi_t = psi_t + e_t`` with a seeded random
direction ``e_t`` of norm exactly ``eps_t``.  Branch weights at gate ``t`` are
``|<y|U_t|phi_{t-1}>|^2 / ||phi_{t-1}||^2``.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import bits
from .base import AmplitudeOracle, OracleError
from .statevector import apply_slot

MAX_QUBITS = 12


@dataclass(frozen=True)
class NoisePlan:
    eps: tuple[float, ...]  # eps[t-1] is the magnitude for prefix t
    seed: int = 0
    _arr: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        arr = np.asarray(self.eps, dtype=float)
        if arr.ndim != 1 or np.any(arr < 0) or not np.all(np.isfinite(arr)):
            raise ValueError("perturbation magnitudes must be finite and nonnegative")
        object.__setattr__(self, "eps", tuple(float(e) for e in arr))
        object.__setattr__(self, "_arr", arr)

    @classmethod
    def uniform(cls, m: int, eps: float, seed: int = 0) -> "NoisePlan":
        return cls((eps,) * m, seed)

    def epsilon(self, t: int) -> float:
        if t == 0:
            return 0.0
        return self.eps[t - 1]

    def l1_error_bound(self) -> float:
        """``16 * sum(eps_1..eps_{m-1})``, the L1 bound on the sampler error."""
        return 16.0 * float(np.sum(self._arr[:-1])) if len(self.eps) else 0.0

    def dumps(self) -> str:
        lines = [f"seed {self.seed}"]
        lines += [f"{t} {e!r}" for t, e in enumerate(self.eps, start=1)]
        return "\n".join(lines) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def loads(cls, text: str, m: int | None = None) -> "NoisePlan":
        seed = 0
        table: dict[int, float] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            toks = line.split()
            try:
                if toks[0] == "seed" and len(toks) == 2:
                    seed = int(toks[1])
                elif len(toks) == 2:
                    t = int(toks[0])
                    if t < 1 or t in table:
                        raise ValueError(f"bad or repeated prefix index {t}")
                    table[t] = float(toks[1])
                else:
                    raise ValueError("expected 't epsilon' or 'seed S'")
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        size = max(table, default=0) if m is None else m
        if m is not None and table and max(table) > m:
            raise ValueError(f"prefix index {max(table)} exceeds circuit length {m}")
        return cls(tuple(table.get(t, 0.0) for t in range(1, size + 1)), seed)

    @classmethod
    def load(cls, path: str | Path, m: int | None = None) -> "NoisePlan":
        return cls.loads(Path(path).read_text(), m)


class NoisyOracle(AmplitudeOracle):
    exact = False
    supports_marginals = False

    def __init__(self, inner: AmplitudeOracle, plan: NoisePlan, max_qubits: int = MAX_QUBITS):
        if inner.n > max_qubits:
            raise OracleError(f"noisy wrapper materializes states; {inner.n} qubits exceeds {max_qubits}")
        if not inner.exact:
            raise OracleError("noisy wrapper needs an exact inner oracle")
        if len(plan.eps) < inner.m:
            raise OracleError(f"plan covers {len(plan.eps)} prefixes, circuit has {inner.m}")
        super().__init__(inner.circuit)
        self.inner = inner
        self.plan = plan
        self._lock = threading.Lock()
        self._psi: dict[int, np.ndarray] = {}
        self._phi: dict[int, np.ndarray] = {}
        self._next: dict[int, np.ndarray] = {}

    def _exact(self, t: int) -> np.ndarray:
        if t not in self._psi:
            self._psi[t] = self.inner.amplitudes(t, np.arange(1 << self.n))
        return self._psi[t]

    def phi(self, t: int) -> np.ndarray:
        self._check_prefix(t)
        with self._lock:
            if t not in self._phi:
                psi = self._exact(t)
                eps = self.plan.epsilon(t)
                if eps == 0:
                    self._phi[t] = psi
                else:
                    rng = np.random.default_rng(np.random.SeedSequence([self.plan.seed, t]))
                    e = rng.standard_normal(psi.shape) + 1j * rng.standard_normal(psi.shape)
                    self._phi[t] = psi + e * (eps / np.linalg.norm(e))
            return self._phi[t]

    def norm_sq(self, t: int) -> float:
        return float(np.vdot(self.phi(t), self.phi(t)).real)

    def realized_eps(self, t: int) -> float:
        phi = self.phi(t)
        return float(np.linalg.norm(phi - self._exact(t)))

    def _amplitudes(self, t, xs):
        return self.phi(t)[xs]

    def _evolved(self, t: int) -> np.ndarray:
        """``U_t |phi_{t-1}> / ||phi_{t-1}||``."""
        if t not in self._next:
            prev = self.phi(t - 1)
            self._next[t] = apply_slot(prev, self.circuit, t - 1) / np.sqrt(self.norm_sq(t - 1))
        return self._next[t]

    def branch_probabilities(self, t, reps, support):
        self._check_prefix(t)
        if t == 0:
            raise OracleError("branch weights need a gate, t >= 1")
        reps = np.asarray(reps, dtype=np.int64).reshape(-1)
        offsets = bits.deposit(np.arange(1 << len(support), dtype=np.int64), support)
        ys = ((reps & ~bits.mask_of(support))[:, None] | offsets[None, :]).reshape(-1)
        with self._count_lock:
            self.call_counter[t] += len(ys)
        w = self._evolved(t)[ys]
        return (np.abs(w) ** 2).reshape(len(reps), -1)

    def clone(self) -> "NoisyOracle":
        return NoisyOracle(self.inner.clone(), self.plan)


def wrap_noisy_oracle(inner: AmplitudeOracle, plan: NoisePlan) -> NoisyOracle:
    return NoisyOracle(inner, plan)
