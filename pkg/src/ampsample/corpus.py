"""Random and named circuits used for cross-checks and demos."""

from __future__ import annotations

import numpy as np

from . import gates
from .circuit import Circuit, ControlTable, Gate, circuit_from_gates

CLIFFORD_1Q = ("h", "s", "sdg", "x", "y", "z")
CLIFFORD_2Q = ("cx", "cz")


def bell() -> Circuit:
    return circuit_from_gates(2, [Gate.named("h", [0]), Gate.named("cx", [0, 1])])


def ghz(n: int) -> Circuit:
    return circuit_from_gates(n, [Gate.named("h", [0])] + [Gate.named("cx", [i, i + 1]) for i in range(n - 1)])


def identity(n: int, m: int = 3) -> Circuit:
    return circuit_from_gates(n, [Gate.named("i", [t % n]) for t in range(m)])


def _pick(rng: np.random.Generator, n: int, k: int) -> list[int]:
    return [int(q) for q in rng.choice(n, size=k, replace=False)]


def random_circuit(n: int, m: int, rng: np.random.Generator, max_width: int = 2) -> Circuit:
    """Haar-random gates on random supports of size 1..max_width."""
    out = []
    for _ in range(m):
        w = int(rng.integers(1, min(max_width, n) + 1))
        out.append(Gate(gates.random_unitary(1 << w, rng), tuple(_pick(rng, n, w)), "matrix"))
    return circuit_from_gates(n, out)


def random_mixed_circuit(n: int, m: int, rng: np.random.Generator) -> Circuit:
    """Mixture of general, diagonal and permutation gates."""
    out = []
    for _ in range(m):
        r = rng.random()
        if r < 0.4:
            w = int(rng.integers(1, min(2, n) + 1))
            out.append(Gate(gates.random_unitary(1 << w, rng), tuple(_pick(rng, n, w)), "matrix"))
        elif r < 0.6:
            out.append(_diag_gate(rng, n))
        elif r < 0.8 and n > 1:
            out.append(Gate.named(str(rng.choice(["cx", "swap", "cz"])), _pick(rng, n, 2)))
        else:
            out.append(Gate.named(str(rng.choice(["h", "x", "y"])), _pick(rng, n, 1)))
    return circuit_from_gates(n, out)


def _diag_gate(rng: np.random.Generator, n: int) -> Gate:
    name = str(rng.choice(["t", "s", "z", "rz"]))
    if name == "rz":
        return Gate.named("rz", _pick(rng, n, 1), float(rng.uniform(0, 2 * np.pi)))
    return Gate.named(name, _pick(rng, n, 1))


def random_clifford_circuit(n: int, m: int, rng: np.random.Generator) -> Circuit:
    out = []
    for _ in range(m):
        if n > 1 and rng.random() < 0.4:
            out.append(Gate.named(str(rng.choice(CLIFFORD_2Q)), _pick(rng, n, 2)))
        else:
            out.append(Gate.named(str(rng.choice(CLIFFORD_1Q)), _pick(rng, n, 1)))
    return circuit_from_gates(n, out)


def random_clifford_t_circuit(n: int, m: int, n_t: int, rng: np.random.Generator) -> Circuit:
    """Clifford circuit with exactly ``n_t`` T/Tdg gates at random positions."""
    if n_t > m:
        raise ValueError("more T gates than gate slots")
    slots = set(int(s) for s in rng.choice(m, size=n_t, replace=False))
    base = random_clifford_circuit(n, m, rng).gates
    out = [Gate.named(str(rng.choice(["t", "tdg"])), _pick(rng, n, 1)) if t in slots else g for t, g in enumerate(base)]
    return circuit_from_gates(n, out)


def random_cnot_su2_circuit(n: int, n_cnot: int, n_single: int, rng: np.random.Generator) -> Circuit:
    kinds = ["cx"] * n_cnot + ["u"] * n_single
    rng.shuffle(kinds)
    out = []
    for k in kinds:
        if k == "cx":
            out.append(Gate.named("cx", _pick(rng, n, 2)))
        else:
            out.append(Gate(gates.random_unitary(2, rng), tuple(_pick(rng, n, 1)), "matrix"))
    return circuit_from_gates(n, out)


def random_adaptive_circuit(n: int, m: int, rng: np.random.Generator, p_adaptive: float = 0.4) -> Circuit:
    """Random circuit where some single-qubit slots are classically controlled.

    Each controlled slot picks one or two control qubits outside its support
    and assigns an independent random gate to every control record.
    """
    if n < 2:
        raise ValueError("adaptive circuits need at least two qubits")
    out: list[Gate] = []
    adaptive: dict[int, ControlTable] = {}
    for t in range(m):
        if rng.random() < p_adaptive:
            q = _pick(rng, n, 1)
            others = [j for j in range(n) if j != q[0]]
            k = int(rng.integers(1, min(2, len(others)) + 1))
            ctrls = tuple(int(c) for c in rng.choice(others, size=k, replace=False))
            default = Gate(gates.random_unitary(2, rng), tuple(q), "matrix")
            table = {}
            for rec in range(1, 1 << k):
                key = tuple((rec >> i) & 1 for i in range(k))
                table[key] = Gate(gates.random_unitary(2, rng), tuple(q), "matrix")
            out.append(default)
            adaptive[t] = ControlTable(ctrls, table, default)
        else:
            w = int(rng.integers(1, 3))
            out.append(Gate(gates.random_unitary(1 << w, rng), tuple(_pick(rng, n, w)), "matrix"))
    return circuit_from_gates(n, out, adaptive)
