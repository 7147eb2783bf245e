"""Per-prefix error allocation for the stabilizer-rank sampler.

Costs are in units of stabilizer-amplitude evaluations; the O(n^2) price of a
single evaluation is left out.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import gates
from .circuit import Circuit, Gate, GateClass

TAN_PI_8 = np.tan(np.pi / 8)
XI_T = 1.0 / np.cos(np.pi / 8) ** 2
L1_FACTOR = 16.0


@dataclass(frozen=True)
class ErrorBudget:
    xi: np.ndarray  # xi_t for gates 1..m
    eta: np.ndarray  # eta_t = prod_{s<=t} xi_s, t = 1..m
    eps: np.ndarray  # eps_t for t = 1..m-1
    delta: float
    cost: float  # sum_{t<m} eta_t / eps_t^2
    cost_closed_form: float  # 256 (sum eta_t^{1/3})^3 / delta^2
    cost_last_term: float  # 256 eta_{m-1} / delta^2

    def rank(self, t: int) -> float:
        """Terms needed at prefix t (1 <= t < m): eta_t / eps_t^2."""
        return float(self.eta[t - 1] / self.eps[t - 1] ** 2)


def allocate_error_budget(xi: Sequence[float], delta: float) -> ErrorBudget:
    xi = np.asarray(xi, dtype=float)
    if xi.ndim != 1 or len(xi) < 2:
        raise ValueError("need per-gate values for at least two gates")
    if np.any(xi < 1 - 1e-12):
        raise ValueError(f"xi values must be >= 1, got min {xi.min()}")
    if not 0 < delta <= 2:
        raise ValueError(f"delta must lie in (0, 2], got {delta}")
    eta = np.cumprod(xi)
    head = eta[:-1]
    cube = np.cbrt(head)
    eps = (delta / L1_FACTOR) * cube / cube.sum()
    cost = float(np.sum(head / eps**2))
    closed = L1_FACTOR**2 * float(cube.sum()) ** 3 / delta**2
    last = L1_FACTOR**2 * float(head[-1]) / delta**2
    return ErrorBudget(xi, eta, eps, float(delta), cost, closed, last)


def budget_cost(eta: Sequence[float], eps: Sequence[float]) -> float:
    eta, eps = np.asarray(eta, dtype=float), np.asarray(eps, dtype=float)
    return float(np.sum(eta / eps**2))


def xi_zrotation(theta: float) -> float:
    """Value for ``exp(-i theta Z / 2)``.

    The closed form holds on [0, pi/2]; other angles differ from one in that
    range by a power of S, so they are reduced mod pi/2 first.
    """
    th = float(np.mod(theta, np.pi / 2))
    if np.isclose(th, np.pi / 2, rtol=0, atol=1e-12):
        th = 0.0
    return float((np.cos(th / 2) + TAN_PI_8 * np.sin(th / 2)) ** 2)


def gate_xi(g: Gate) -> float:
    name = gates.canonical(g.label)
    if name in gates.CLIFFORD_NAMES or name == "swap":
        return 1.0
    if name in ("t", "tdg"):
        return float(XI_T)
    if name == "rz":
        return xi_zrotation(g.params[0])
    if g.width == 1 and g.gate_class is GateClass.DIAGONAL:
        d = np.diagonal(g.matrix)
        return xi_zrotation(float(np.angle(d[1] / d[0])))
    raise ValueError(f"no stabilizer-extent value known for gate {g.label}")


def circuit_xi(c: Circuit) -> list[float]:
    if c.is_adaptive:
        raise ValueError("adaptive circuits have no fixed per-gate values")
    return [gate_xi(g) for g in c.gates]
