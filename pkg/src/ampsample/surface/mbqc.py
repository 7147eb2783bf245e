"""Measurement-based computation on surface-code states, simulated by
resampling one edge at a time from product-state overlaps."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..backends.statevector import apply_slot
from .. import gates
from ..circuit import Circuit, ControlTable, Gate, circuit_from_gates, parse_circuit
from .graph import GraphError, PlanarGraph, product_state_overlap, sample_cycle, surface_code_state

ZERO_MASS = 1e-14
MAX_EXACT_EDGES = 12


class MBQCError(RuntimeError):
    pass


@dataclass
class SurfaceCodeInstance:
    """``(U_1 x ... x U_n)|psi_G>`` measured in the computational basis.

    ``schedule`` is a circuit on the edge qubits whose gate ``j`` is the
    single-qubit unitary of edge ``j``; classical controls may only read
    edges measured earlier.
    """

    graph: PlanarGraph
    schedule: Circuit

    def __post_init__(self):
        g, s = self.graph, self.schedule
        if any(e.v is None for e in g.edges):
            raise GraphError("surface-code instances need a graph without dangling edges")
        if s.n != g.n or s.m != g.n:
            raise MBQCError(f"schedule needs one gate per edge ({g.n}), got {s.m} gates on {s.n} qubits")
        for j, gate in enumerate(s.gates):
            if gate.support != (j,):
                raise MBQCError(f"schedule gate {j} must act on edge {j} alone, acts on {gate.support}")
        for j, ctl in s.adaptive.items():
            if any(c >= j for c in ctl.controls):
                raise MBQCError(f"edge {j} is controlled by an edge measured later")

    @property
    def n(self) -> int:
        return self.graph.n

    def unitary(self, j: int, x: int) -> np.ndarray:
        return self.schedule.gate_for(j, x).matrix


def uniform_schedule(n: int, gate: str = "i") -> Circuit:
    return circuit_from_gates(n, [Gate.named(gate, [j]) for j in range(n)])


def random_schedule(n: int, rng: np.random.Generator, p_adaptive: float = 0.0) -> Circuit:
    """Haar-random single-edge unitaries; with probability ``p_adaptive`` an
    edge also gets a one-bit control on an earlier edge."""
    out, adaptive = [], {}
    for j in range(n):
        out.append(Gate(gates.random_unitary(2, rng), (j,), "matrix"))
        if j > 0 and rng.random() < p_adaptive:
            c = int(rng.integers(j))
            adaptive[j] = ControlTable((c,), {(1,): Gate(gates.random_unitary(2, rng), (j,), "matrix")}, out[-1])
    return circuit_from_gates(n, out, adaptive)


def parse_schedule(text: str, n: int, source: str | None = None, base_dir=None) -> Circuit:
    """Circuit grammar; a missing ``qubits`` line defaults to the edge count."""
    if not any(line.split("#", 1)[0].split()[:1] == ["qubits"] for line in text.splitlines()):
        text = f"qubits {n}\n" + text
    return parse_circuit(text, source=source, base_dir=base_dir)


def load_schedule(path: str | Path, n: int) -> Circuit:
    path = Path(path)
    return parse_schedule(path.read_text(), n, source=str(path), base_dir=path.parent)


def prefix_states(inst: SurfaceCodeInstance, x: int, t: int) -> np.ndarray:
    """Rows ``conj``-ready: ``phi_j = U_j^dag |x_j>`` for ``j <= t``, ``|x_j>`` after."""
    states = np.zeros((inst.n, 2), dtype=complex)
    for j in range(inst.n):
        b = (x >> j) & 1
        if j <= t:
            states[j] = inst.unitary(j, x)[b].conj()
        else:
            states[j, b] = 1.0
    return states


def prefix_probability(inst: SurfaceCodeInstance, x: int, t: int) -> float:
    """``P_t(x)``: outcome ``x`` after applying ``U_0..U_t``; ``t = -1`` is ``psi_G`` itself."""
    return abs(product_state_overlap(inst.graph, prefix_states(inst, x, t))) ** 2


def mbqc_sample(inst: SurfaceCodeInstance, rng: np.random.Generator) -> int:
    x = sample_cycle(inst.graph, rng)
    for t in range(inst.n):
        y = x ^ (1 << t)
        px, py = prefix_probability(inst, x, t), prefix_probability(inst, y, t)
        if px + py < ZERO_MASS:
            raise MBQCError(f"two-point mass vanished at edge {t}")
        if rng.random() * (px + py) >= px:
            x = y
    return x


def induced_mbqc_distribution(inst: SurfaceCodeInstance) -> np.ndarray:
    """Exact output law of :func:`mbqc_sample`, propagated edge by edge."""
    if inst.n > MAX_EXACT_EDGES:
        raise MBQCError(f"exact propagation limited to {MAX_EXACT_EDGES} edges")
    q = np.abs(surface_code_state(inst.graph)) ** 2
    for t in range(inst.n):
        new = np.zeros_like(q)
        bit = 1 << t
        for x in np.flatnonzero(q > 0):
            x = int(x)
            if x & bit and q[x ^ bit] > 0:
                continue  # the pair was handled from its partner
            lo, hi = x & ~bit, x | bit
            p_lo, p_hi = prefix_probability(inst, lo, t), prefix_probability(inst, hi, t)
            mass = q[lo] + q[hi]
            if p_lo + p_hi < ZERO_MASS:
                if mass > ZERO_MASS:
                    raise MBQCError(f"two-point mass vanished at edge {t}")
                continue
            new[lo] += mass * p_lo / (p_lo + p_hi)
            new[hi] += mass * p_hi / (p_lo + p_hi)
        q = new
    return q


def brute_force_distribution(inst: SurfaceCodeInstance) -> np.ndarray:
    """``|<x|U|psi_G>|^2`` from a dense state; controlled edges branch on the record."""
    if inst.n > MAX_EXACT_EDGES:
        raise MBQCError(f"brute force limited to {MAX_EXACT_EDGES} edges")
    psi = surface_code_state(inst.graph)
    for j in range(inst.n):
        psi = apply_slot(psi, inst.schedule, j)
    return np.abs(psi) ** 2
