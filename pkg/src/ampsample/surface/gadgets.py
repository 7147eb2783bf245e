"""Weighted planar gadgets whose cycle sums realize vertex weight functions.

``theta`` gives weight 0 on 000 and 1 on every weight-2 input (a 2-factor
constraint at a degree-3 vertex).  ``gamma`` gives weight 1 when
``z1 = z3`` and ``z2 = z4`` and 0 on the other even inputs, letting two edges
cross without interacting.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .graph import GraphError, PlanarGraph

MAX_GADGET_EDGES = 24


@dataclass
class Gadget:
    name: str
    graph: PlanarGraph
    dangling: list[int]  # edge indices, clockwise around the outer face
    tau: float = 1.0

    def __post_init__(self):
        for j in self.dangling:
            if self.graph.edges[j].v is not None:
                raise GraphError(f"edge {j} of gadget {self.name} is not dangling")
        if len(set(self.dangling)) != len(self.dangling):
            raise GraphError("repeated dangling edge")

    @property
    def k(self) -> int:
        return len(self.dangling)

    @property
    def internal(self) -> list[int]:
        return [j for j, e in enumerate(self.graph.edges) if e.v is not None]

    def outer_vertex(self, slot: int):
        return self.graph.edges[self.dangling[slot]].u


def weighted_cycle_sum(gadget: Gadget, z: str | tuple[int, ...]) -> complex:
    """Sum over cycles restricting to ``z`` on the dangling edges of the
    product of edge weights in the cycle."""
    g = gadget.graph
    if g.n > MAX_GADGET_EDGES:
        raise GraphError(f"gadget has {g.n} edges, guard is {MAX_GADGET_EDGES}")
    zb = np.array([int(c) for c in z], dtype=bool)
    if len(zb) != gadget.k:
        raise GraphError(f"expected {gadget.k} dangling bits, got {len(zb)}")
    cyc = g.cycles
    sel = np.all(cyc[:, gadget.dangling] == zb, axis=1)
    w = np.array([g.weight(j) for j in range(g.n)], dtype=complex)
    terms = np.prod(np.where(cyc[sel], w, 1.0), axis=1)
    return complex(terms.sum())


def cycle_table(gadget: Gadget) -> dict[str, complex]:
    return {"".join(map(str, z)): weighted_cycle_sum(gadget, z) for z in itertools.product((0, 1), repeat=gadget.k)}


THETA_A = np.exp(1j * np.pi / 3)
THETA_B = 3 ** -0.25

GAMMA_A = np.exp(1j * np.pi / 4)
GAMMA_B = np.exp(-1j * np.pi / 6)
GAMMA_C = -1 / np.sqrt(2)
GAMMA_D = np.sqrt(abs(1 - np.sqrt(2) * np.exp(1j * np.pi / 12) + np.exp(1j * np.pi / 6)))


def theta(a: complex = THETA_A, b: complex = THETA_B) -> Gadget:
    """Triangle of ``a`` edges; each corner has a ``b`` edge out to a dangling edge."""
    pairs = [
        ("c1", "c2"), ("c2", "c3"), ("c3", "c1"),
        ("c1", "o1"), ("c2", "o2"), ("c3", "o3"),
        ("o1", None), ("o2", None), ("o3", None),
    ]
    weights = {0: a, 1: a, 2: a, 3: b, 4: b, 5: b}
    return Gadget("theta", PlanarGraph.from_edges(pairs, weights=weights), [6, 7, 8], 1.0)


def gamma(a: complex = GAMMA_A, b: complex = GAMMA_B, c: complex = GAMMA_C, d: complex = GAMMA_D,
          tau: float | None = None) -> Gadget:
    """Two paths ``u-w1-w2-v`` and ``u-w3-w4-v`` (weights b, a, b) closed by a
    ``c`` edge ``u-v``; each ``w_i`` has a ``d`` edge out to a dangling edge.
    Dangling order around the outer face: w1, w2, w4, w3."""
    pairs = [
        ("u", "w1"), ("w1", "w2"), ("w2", "v"),
        ("u", "w3"), ("w3", "w4"), ("w4", "v"),
        ("u", "v"),
        ("w1", "o1"), ("w2", "o2"), ("w3", "o3"), ("w4", "o4"),
        ("o1", None), ("o2", None), ("o3", None), ("o4", None),
    ]
    weights = {0: b, 1: a, 2: b, 3: b, 4: a, 5: b, 6: c, 7: d, 8: d, 9: d, 10: d}
    if tau is None:
        tau = 1 / abs(1 + 2 * a * b**2 * c + a**2 * b**4) ** 2
    return Gadget("gamma", PlanarGraph.from_edges(pairs, weights=weights), [11, 12, 14, 13], float(tau))


def two_factor_weight(z: str) -> float:
    return 0.0 if z == "000" else 1.0


def crossing_weight(z: str) -> float:
    return 1.0 if z[0] == z[2] and z[1] == z[3] else 0.0


def _even(k: int) -> list[str]:
    return ["".join(map(str, z)) for z in itertools.product((0, 1), repeat=k) if sum(z) % 2 == 0]


@dataclass
class GadgetCheck:
    name: str
    value: complex | float
    expected: complex | float
    tol: float

    @property
    def ok(self) -> bool:
        return bool(abs(self.value - self.expected) <= self.tol)


@dataclass
class GadgetReport:
    tau: float
    checks: list[GadgetCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    @property
    def failures(self) -> list[GadgetCheck]:
        return [c for c in self.checks if not c.ok]


def verify_gadgets(theta_gadget: Gadget | None = None, gamma_gadget: Gadget | None = None) -> GadgetReport:
    th = theta() if theta_gadget is None else theta_gadget
    gm = gamma() if gamma_gadget is None else gamma_gadget
    tt, gt = cycle_table(th), cycle_table(gm)
    rep = GadgetReport(gm.tau)
    a = th.graph.weight(0)
    b = th.graph.weight(3)
    rep.checks.append(GadgetCheck("theta 000 vanishes", tt["000"], 0, 1e-12))
    rep.checks.append(GadgetCheck("theta 000 = 1 + a^3", tt["000"], 1 + a**3, 1e-12))
    for z in ("011", "101", "110"):
        rep.checks.append(GadgetCheck(f"theta {z} = b^2(a + a^2)", tt[z], b**2 * (a + a**2), 1e-12))
        rep.checks.append(GadgetCheck(f"|theta {z}| = 1", abs(tt[z]), 1.0, 1e-12))
    for z in _even(3):
        rep.checks.append(GadgetCheck(f"theta weight {z}", th.tau * abs(tt[z]) ** 2, two_factor_weight(z), 1e-12))

    ga, gb, gc, gd = (gm.graph.weight(j) for j in (1, 0, 6, 7))
    poly = {
        "0000": 1 + 2 * ga * gb**2 * gc + ga**2 * gb**4,
        "1100": gd**2 * (ga + gb**2 * gc + ga * gb**4 + ga**2 * gb**2 * gc),
        "1010": gd**2 * (gb**2 * gc + 2 * ga * gb**2 + ga**2 * gb**2 * gc),
        "0110": gd**2 * (gb**2 + ga**2 * gb**2 + 2 * ga * gb**2 * gc),
        "1111": gd**4 * (ga**2 + gb**4 + 2 * ga * gb**2 * gc),
    }
    for z, p in poly.items():
        rep.checks.append(GadgetCheck(f"gamma {z} polynomial", gt[z], p, 1e-9))
    for z in ("1100", "0110"):
        rep.checks.append(GadgetCheck(f"gamma {z} vanishes", gt[z], 0, 1e-9))
    inv_tau = 1 / gm.tau
    for z in ("0000", "1010", "1111"):
        rep.checks.append(GadgetCheck(f"|gamma {z}|^2 = 1/tau", abs(gt[z]) ** 2, inv_tau, 1e-9))
    for z in _even(4):
        rep.checks.append(GadgetCheck(f"gamma weight {z}", gm.tau * abs(gt[z]) ** 2, crossing_weight(z), 1e-9))
        rep.checks.append(GadgetCheck(f"gamma {z} reversal symmetry", gt[z], gt[z[::-1]], 1e-9))
        rep.checks.append(GadgetCheck(f"gamma {z} pair-swap symmetry", gt[z], gt[z[1] + z[0] + z[3] + z[2]], 1e-9))
    return rep
