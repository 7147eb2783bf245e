"""Counting perfect matchings of a 3-regular graph through a surface-code marginal.

A perfect matching of a 3-regular graph is the complement of a 2-factor, so
we count 2-factors.  Every vertex of a planarized drawing is replaced by a
``theta`` gadget, every crossing by a ``gamma`` gadget, and the count becomes
``sigma * |Z(G)| * <Phi|rho_M|Phi>`` with ``M`` the internal gadget edges.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Sequence

import numpy as np

from .gadgets import Gadget, crossing_weight, cycle_table, gamma, theta, two_factor_weight
from .graph import MAX_MARGINAL_DIM, GraphError, PlanarGraph, marginal_overlap

INTEGRAL_TOL = 1e-6


class ReductionError(ValueError):
    pass


@dataclass(frozen=True)
class Segment:
    a: Hashable
    b: Hashable
    edge: Hashable  # the edge of the original graph this piece belongs to


@dataclass
class PlanarizedDrawing:
    """A drawing with crossing nodes inserted.

    ``crossings[c]`` lists the four segment indices at ``c`` in clockwise
    order; positions 0/2 and 1/3 belong to the same original edge.
    """

    vertices: list[Hashable]
    segments: list[Segment]
    crossings: dict[Hashable, tuple[int, int, int, int]] = field(default_factory=dict)

    def __post_init__(self):
        nodes = set(self.vertices) | set(self.crossings)
        if len(nodes) != len(self.vertices) + len(self.crossings):
            raise ReductionError("a crossing shares a name with a vertex")
        for i, s in enumerate(self.segments):
            if s.a not in nodes or s.b not in nodes:
                raise ReductionError(f"segment {i} ends at an unknown node")
            if s.a == s.b:
                raise ReductionError(f"segment {i} is a loop")
        deg = Counter()
        for s in self.segments:
            deg[s.a] += 1
            deg[s.b] += 1
        for v in self.vertices:
            if deg[v] != 3:
                raise ReductionError(f"vertex {v!r} has degree {deg[v]}, the graph must be 3-regular")
        for c, quad in self.crossings.items():
            if len(quad) != 4 or len(set(quad)) != 4:
                raise ReductionError(f"crossing {c!r} needs four distinct segments")
            if sorted(quad) != sorted(i for i, s in enumerate(self.segments) if c in (s.a, s.b)):
                raise ReductionError(f"crossing {c!r} lists segments that do not meet it")
            e = [self.segments[i].edge for i in quad]
            if e[0] != e[2] or e[1] != e[3] or e[0] == e[1]:
                raise ReductionError(f"crossing {c!r} must pair positions 0/2 and 1/3 of two distinct edges")
        self.original_edges()

    def incident(self, node) -> list[int]:
        """Segments at ``node`` in gadget-slot order."""
        if node in self.crossings:
            return list(self.crossings[node])
        return [i for i, s in enumerate(self.segments) if node in (s.a, s.b)]

    def original_edges(self) -> list[tuple]:
        """Endpoints of each original edge, recovered by walking its segments."""
        by_edge: dict[Hashable, list[Segment]] = {}
        for s in self.segments:
            by_edge.setdefault(s.edge, []).append(s)
        vs = set(self.vertices)
        out = []
        for label, segs in by_edge.items():
            ends = [x for s in segs for x in (s.a, s.b) if x in vs]
            if len(ends) != 2:
                raise ReductionError(f"edge {label!r} does not join two vertices")
            out.append((ends[0], ends[1]))
        return out

    def segment_graph(self) -> PlanarGraph:
        return PlanarGraph.from_edges([(s.a, s.b) for s in self.segments])


def _drawing(vertices, pieces, crossings=None) -> PlanarizedDrawing:
    return PlanarizedDrawing(list(vertices), [Segment(a, b, e) for a, b, e in pieces], dict(crossings or {}))


def k4() -> PlanarizedDrawing:
    return _drawing(range(4), [(i, j, (i, j)) for i, j in itertools.combinations(range(4), 2)])


def k33_one_crossing() -> PlanarizedDrawing:
    """Hexagon A1 B1 A2 B2 A3 B3 with chords; A1B2 and A3B1 cross at X."""
    hexagon = ["A1", "B1", "A2", "B2", "A3", "B3"]
    pieces = [(hexagon[i], hexagon[(i + 1) % 6], f"{hexagon[i]}{hexagon[(i + 1) % 6]}") for i in range(6)]
    pieces += [
        ("A2", "B3", "A2B3"),
        ("A1", "X", "A1B2"), ("X", "B2", "A1B2"),
        ("B1", "X", "A3B1"), ("X", "A3", "A3B1"),
    ]
    return _drawing(hexagon, pieces, {"X": (7, 9, 8, 10)})


def triple_edge() -> PlanarizedDrawing:
    return _drawing([0, 1], [(0, 1, k) for k in range(3)])


def prism() -> PlanarizedDrawing:
    pairs = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)]
    return _drawing(range(6), [(a, b, (a, b)) for a, b in pairs])


def cube() -> PlanarizedDrawing:
    pairs = [(0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7)]
    return _drawing(range(8), [(a, b, (a, b)) for a, b in pairs])


def count_perfect_matchings(vertices: Sequence, edges: Sequence[tuple]) -> int:
    """Brute-force count; parallel edges are distinct matchings."""
    adj: dict = {v: [] for v in vertices}
    for j, (u, v) in enumerate(edges):
        if u == v:
            continue
        adj[u].append((j, v))
        adj[v].append((j, u))
    order = list(vertices)

    def rec(free: frozenset) -> int:
        if not free:
            return 1
        u = next(v for v in order if v in free)
        return sum(rec(free - {u, w}) for _, w in adj[u] if w in free)

    return rec(frozenset(vertices))


@dataclass
class ExpandedGraph:
    graph: PlanarGraph
    internal: list[int]
    gadgets: dict[Hashable, Gadget]
    sigma: float
    states: np.ndarray  # one row per internal edge, in ``internal`` order


def expand(d: PlanarizedDrawing, theta_gadget: Gadget | None = None, gamma_gadget: Gadget | None = None) -> ExpandedGraph:
    th = theta() if theta_gadget is None else theta_gadget
    gm = gamma() if gamma_gadget is None else gamma_gadget
    gadgets = {v: th for v in d.vertices} | {c: gm for c in d.crossings}
    pairs, internal, f = [], [], []
    for node, gd in gadgets.items():
        for j in gd.internal:
            e = gd.graph.edges[j]
            internal.append(len(pairs))
            f.append(gd.graph.weight(j))
            pairs.append(((node, e.u), (node, e.v)))
    for i, s in enumerate(d.segments):
        ends = []
        for node in (s.a, s.b):
            slot = d.incident(node).index(i)
            ends.append((node, gadgets[node].outer_vertex(slot)))
        pairs.append(tuple(ends))
    f = np.array(f, dtype=complex)
    norm = 1 + np.abs(f) ** 2
    states = np.stack([np.ones_like(f), f], axis=1) / np.sqrt(norm)[:, None]
    sigma = float(np.prod([g.tau for g in gadgets.values()]) * np.prod(norm))
    return ExpandedGraph(PlanarGraph.from_edges(pairs), internal, gadgets, sigma, states)


def gadget_product_sum(d: PlanarizedDrawing, gadgets: dict[Hashable, Gadget]) -> float:
    """``sum_{y in Z(G'')} prod_u tau_u |Cycle(G_u, y at u)|^2`` over the segment graph."""
    tables = {id(g): cycle_table(g) for g in gadgets.values()}
    slots = {u: d.incident(u) for u in gadgets}
    total = 0.0
    for y in d.segment_graph().cycles:
        term = 1.0
        for u, g in gadgets.items():
            z = "".join("1" if y[i] else "0" for i in slots[u])
            term *= g.tau * abs(tables[id(g)][z]) ** 2
            if term == 0:
                break
        total += term
    return total


def vertex_weight_sum(d: PlanarizedDrawing) -> int:
    """Exact 2-factor count from the target weight tables alone."""
    total = 0
    for y in d.segment_graph().cycles:
        term = 1.0
        for v in d.vertices:
            term *= two_factor_weight("".join("1" if y[i] else "0" for i in d.incident(v)))
        for c in d.crossings:
            term *= crossing_weight("".join("1" if y[i] else "0" for i in d.incident(c)))
        total += term
    return int(total)


@dataclass
class ReductionResult:
    count: int
    value: float
    sigma: float
    cycle_dim: int
    mu: float
    gadget_sum: float
    brute_force: int
    edges: int

    @property
    def consistent(self) -> bool:
        return self.count == self.brute_force and abs(self.gadget_sum - self.count) <= INTEGRAL_TOL


def perfect_matchings_via_reduction(d: PlanarizedDrawing, theta_gadget: Gadget | None = None,
                                    gamma_gadget: Gadget | None = None, force: bool = False) -> ReductionResult:
    ex = expand(d, theta_gadget, gamma_gadget)
    g = ex.graph
    if g.cycle_dim > MAX_MARGINAL_DIM and not force:
        raise ReductionError(f"expanded graph has cycle-space dimension {g.cycle_dim}, guard is {MAX_MARGINAL_DIM}")
    try:
        mu = marginal_overlap(g, ex.internal, ex.states)
    except GraphError as exc:
        raise ReductionError(str(exc)) from None
    value = ex.sigma * g.cycle_count * mu
    count = int(round(value))
    if abs(value - count) > INTEGRAL_TOL:
        raise ReductionError(f"reduction gave {value!r}, not an integer within {INTEGRAL_TOL}")
    brute = count_perfect_matchings(d.vertices, d.original_edges())
    return ReductionResult(count, value, ex.sigma, g.cycle_dim, mu, gadget_product_sum(d, ex.gadgets), brute, g.n)
