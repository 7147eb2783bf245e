"""Planar graphs with one qubit per edge, cycle spaces, and surface-code overlaps.

Edge ``j`` (its position in ``edges``) is qubit ``j``.  A dangling edge has a
single endpoint and counts once there in the parity condition; a self-loop
counts twice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Hashable, Sequence

import numpy as np

from ..circuit import format_complex, parse_complex
from . import gf2

MAX_ENUM_DIM = 22
MAX_MARGINAL_DIM = 16


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    label: Hashable
    u: Hashable
    v: Hashable | None  # None for a dangling edge


@dataclass(eq=False)
class PlanarGraph:
    edges: list[Edge]
    faces: list[list[int]] | None = None  # edge indices of each face boundary
    weights: dict[int, complex] = field(default_factory=dict)
    order: dict[Hashable, list[int]] = field(default_factory=dict)  # clockwise edges per vertex

    def __post_init__(self):
        for j, w in self.weights.items():
            if not 0 <= j < len(self.edges):
                raise GraphError(f"weight given for missing edge {j}")
            if self.edges[j].v is None and w != 1:
                raise GraphError(f"dangling edge {self.edges[j].label} must have weight 1")
        if self.faces is not None:
            for f in self.faces:
                if any(not 0 <= j < len(self.edges) for j in f):
                    raise GraphError(f"face {f} names a missing edge")
                if not self.is_cycle(self.mask(f)):
                    raise GraphError(f"face {[self.edges[j].label for j in f]} is not a cycle")

    @classmethod
    def from_edges(cls, pairs: Sequence[tuple], faces=None, weights=None) -> "PlanarGraph":
        """``pairs`` of ``(u, v)``; ``v = None`` makes a dangling edge."""
        edges = [Edge(j, u, v) for j, (u, v) in enumerate(pairs)]
        return cls(edges, faces, dict(weights or {}))

    @property
    def n(self) -> int:
        return len(self.edges)

    @cached_property
    def vertices(self) -> list[Hashable]:
        seen: dict[Hashable, None] = {}
        for e in self.edges:
            seen.setdefault(e.u)
            if e.v is not None:
                seen.setdefault(e.v)
        return list(seen)

    @cached_property
    def incidence(self) -> list[int]:
        """Per vertex, the bitmask of edges incident an odd number of times."""
        pos = {v: i for i, v in enumerate(self.vertices)}
        rows = [0] * len(pos)
        for j, e in enumerate(self.edges):
            rows[pos[e.u]] ^= 1 << j
            if e.v is not None:
                rows[pos[e.v]] ^= 1 << j
        return rows

    def mask(self, edge_ids: Sequence[int]) -> int:
        x = 0
        for j in edge_ids:
            x ^= 1 << j
        return x

    def weight(self, j: int) -> complex:
        return self.weights.get(j, 1.0 + 0j)

    def is_cycle(self, x: int) -> bool:
        return all((r & x).bit_count() % 2 == 0 for r in self.incidence)

    @cached_property
    def cycle_dim(self) -> int:
        return self.n - gf2.rank(self.incidence)

    @property
    def cycle_count(self) -> int:
        return 1 << self.cycle_dim

    @cached_property
    def basis(self) -> list[int]:
        return cycle_space_basis(self)

    @cached_property
    def cycles(self) -> np.ndarray:
        """All elements of the cycle space as rows of little-endian edge bits."""
        return enumerate_span(gf2.echelon(self.basis), self.n)


def cycle_space_basis(g: PlanarGraph) -> list[int]:
    """Face boundaries when faces are given (checked to span), else a nullspace basis."""
    if g.faces is None:
        return gf2.nullspace(g.incidence, g.n)
    vecs = [g.mask(f) for f in g.faces]
    if gf2.rank(vecs) != g.cycle_dim:
        raise GraphError(f"faces span dimension {gf2.rank(vecs)}, cycle space has {g.cycle_dim}")
    return vecs


def sample_cycle(g: PlanarGraph, rng: np.random.Generator) -> int:
    """Uniform element of the cycle space: a random XOR of basis vectors."""
    x = 0
    for b, r in zip(g.basis, rng.integers(0, 2, size=len(g.basis))):
        if r:
            x ^= b
    return x


def enumerate_span(basis: Sequence[int], n: int) -> np.ndarray:
    """Boolean array (2^d, n) of the span of independent ``basis`` vectors."""
    d = len(basis)
    if d > MAX_ENUM_DIM:
        raise GraphError(f"cycle-space dimension {d} exceeds the enumeration guard {MAX_ENUM_DIM}")
    vecs = np.array([[(b >> j) & 1 for j in range(n)] for b in basis], dtype=bool).reshape(d, n)
    out = np.zeros((1, n), dtype=bool)
    for v in vecs:
        out = np.concatenate([out, out ^ v])
    return out


def _conj_factors(states: np.ndarray, cycles: np.ndarray) -> np.ndarray:
    """Per cycle, ``prod_j conj(phi_j[x_j])`` over the columns given."""
    states = np.asarray(states, dtype=complex)
    out = np.ones(len(cycles), dtype=complex)
    for j in range(states.shape[0]):
        out *= np.where(cycles[:, j], np.conj(states[j, 1]), np.conj(states[j, 0]))
    return out


def product_state_overlap(g: PlanarGraph, states: np.ndarray) -> complex:
    """``<Phi|psi_G>`` for a product state with ``states[j]`` on edge ``j``."""
    states = np.asarray(states, dtype=complex)
    if states.shape != (g.n, 2):
        raise GraphError(f"expected states of shape ({g.n}, 2), got {states.shape}")
    z = g.cycles
    return complex(_conj_factors(states, z).sum() / np.sqrt(len(z)))


def marginal_overlap(g: PlanarGraph, subset: Sequence[int], states: np.ndarray) -> float:
    """``<Phi|rho_M|Phi>`` with ``states[i]`` the state on edge ``subset[i]``."""
    subset = list(subset)
    if g.cycle_dim > MAX_MARGINAL_DIM:
        raise GraphError(f"cycle-space dimension {g.cycle_dim} exceeds {MAX_MARGINAL_DIM}")
    states = np.asarray(states, dtype=complex).reshape(len(subset), 2)
    z = g.cycles
    amp = _conj_factors(states, z[:, subset])
    rest = np.ones(g.n, dtype=bool)
    rest[subset] = False
    if not rest.any():
        return float(abs(amp.sum()) ** 2 / len(z))
    _, key = np.unique(z[:, rest], axis=0, return_inverse=True)
    key = key.reshape(-1)
    sums = np.bincount(key, weights=amp.real) + 1j * np.bincount(key, weights=amp.imag)
    return float(np.sum(np.abs(sums) ** 2) / len(z))


def surface_code_state(g: PlanarGraph) -> np.ndarray:
    """Dense ``psi_G`` (small graphs only); bit ``j`` of the index is edge ``j``."""
    if g.n > 20:
        raise GraphError("dense surface-code state limited to 20 edges")
    z = g.cycles
    idx = (z.astype(np.int64) << np.arange(g.n)).sum(axis=1)
    psi = np.zeros(1 << g.n, dtype=complex)
    psi[idx] = 1 / np.sqrt(len(z))
    return psi


# --------------------------------------------------------------------------
# text format


SECTIONS = ("edges", "faces", "weights", "order")


def parse_graph(text: str, source: str | None = None) -> PlanarGraph:
    where = source or "<graph>"
    section = None
    edges: list[Edge] = []
    index: dict[str, int] = {}
    faces: list[list[int]] = []
    weights: dict[int, complex] = {}
    order: dict[str, list[int]] = {}
    saw_faces = False

    def eid(tok: str) -> int:
        if tok not in index:
            raise GraphError(f"unknown edge id {tok!r}")
        return index[tok]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if len(toks) == 1 and toks[0] in SECTIONS:
                section = toks[0]
                saw_faces |= section == "faces"
                continue
            if section == "edges":
                if len(toks) != 3:
                    raise GraphError("expected 'id u v' (v = '-' for a dangling edge)")
                if toks[0] in index:
                    raise GraphError(f"repeated edge id {toks[0]!r}")
                index[toks[0]] = len(edges)
                edges.append(Edge(toks[0], toks[1], None if toks[2] == "-" else toks[2]))
            elif section == "faces":
                faces.append([eid(t) for t in toks])
            elif section == "weights":
                if len(toks) != 2:
                    raise GraphError("expected 'id re,im'")
                weights[eid(toks[0])] = parse_complex(toks[1])
            elif section == "order":
                order[toks[0]] = [eid(t) for t in toks[1:]]
            else:
                raise GraphError(f"line outside a section: {line!r}")
        except ValueError as exc:
            raise GraphError(f"{where}:{lineno}: {exc}") from None
    if not edges:
        raise GraphError(f"{where}: no edges")
    return PlanarGraph(edges, faces if saw_faces else None, weights, order)


def load_graph(path: str | Path) -> PlanarGraph:
    return parse_graph(Path(path).read_text(), source=str(path))


def dumps_graph(g: PlanarGraph) -> str:
    lines = ["edges"]
    for e in g.edges:
        lines.append(f"{e.label} {e.u} {'-' if e.v is None else e.v}")
    if g.faces is not None:
        lines.append("faces")
        lines += [" ".join(str(g.edges[j].label) for j in f) for f in g.faces]
    if g.weights:
        lines.append("weights")
        lines += [f"{g.edges[j].label} {format_complex(w)}" for j, w in sorted(g.weights.items())]
    if g.order:
        lines.append("order")
        lines += [f"{v} " + " ".join(str(g.edges[j].label) for j in es) for v, es in g.order.items()]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# small named graphs


def square() -> PlanarGraph:
    return PlanarGraph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0)], faces=[[0, 1, 2, 3]])


def two_squares() -> PlanarGraph:
    """Two unit squares sharing edge 6 (7 edges, 2 faces)."""
    pairs = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (1, 4)]
    return PlanarGraph.from_edges(pairs, faces=[[0, 6, 4, 5], [1, 2, 3, 6]])


def grid(rows: int, cols: int) -> PlanarGraph:
    """``rows x cols`` vertex grid with its unit-square faces."""
    pairs, where = [], {}
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                where[("h", r, c)] = len(pairs)
                pairs.append(((r, c), (r, c + 1)))
            if r + 1 < rows:
                where[("v", r, c)] = len(pairs)
                pairs.append(((r, c), (r + 1, c)))
    faces = [
        [where[("h", r, c)], where[("v", r, c + 1)], where[("h", r + 1, c)], where[("v", r, c)]]
        for r in range(rows - 1)
        for c in range(cols - 1)
    ]
    return PlanarGraph.from_edges(pairs, faces=faces)
