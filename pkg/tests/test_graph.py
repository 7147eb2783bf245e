import numpy as np
import pytest

from ampsample.surface import gf2
from ampsample.surface.graph import (
    GraphError,
    PlanarGraph,
    cycle_space_basis,
    dumps_graph,
    grid,
    marginal_overlap,
    parse_graph,
    product_state_overlap,
    sample_cycle,
    square,
    surface_code_state,
    two_squares,
)


def brute_cycles(g):
    return {x for x in range(1 << g.n) if g.is_cycle(x)}


def test_gf2_nullspace_brute_force(rng):
    for _ in range(30):
        ncols = int(rng.integers(1, 9))
        rows = [int(r) for r in rng.integers(0, 1 << ncols, size=int(rng.integers(0, 6)))]
        ns = gf2.nullspace(rows, ncols)
        want = {x for x in range(1 << ncols) if all(bin(r & x).count("1") % 2 == 0 for r in rows)}
        assert len(ns) == ncols - gf2.rank(rows)
        assert all(v in want for v in ns)
        assert 1 << len(ns) == len(want)


@pytest.mark.parametrize("g,dim", [(square(), 1), (two_squares(), 2), (grid(3, 3), 4), (grid(2, 4), 3)])
def test_cycle_dimension(g, dim):
    assert g.cycle_dim == dim
    assert len(cycle_space_basis(g)) == dim
    rows = {int(sum(1 << j for j in np.flatnonzero(r))) for r in g.cycles}
    assert rows == brute_cycles(g)


def test_faces_must_span():
    with pytest.raises(GraphError):
        cycle_space_basis(PlanarGraph.from_edges([(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)], faces=[[0, 1, 2, 3]]))


def test_face_must_be_cycle():
    with pytest.raises(GraphError):
        PlanarGraph.from_edges([(0, 1), (1, 2), (2, 0)], faces=[[0, 1]])


def test_without_faces_uses_nullspace():
    g = PlanarGraph.from_edges([(0, 1), (1, 2), (2, 0)])
    assert g.basis == [0b111]


def test_dangling_and_self_loops():
    g = PlanarGraph.from_edges([(0, 0), (0, 1), (1, None), (0, None)])
    assert g.is_cycle(0b0001)  # a self-loop meets its vertex twice
    assert g.is_cycle(0b1110)
    assert not g.is_cycle(0b0100)
    with pytest.raises(GraphError):
        PlanarGraph.from_edges([(0, None)], weights={0: 2.0})


def test_multi_edges():
    g = PlanarGraph.from_edges([(0, 1), (0, 1), (0, 1)])
    assert g.cycle_dim == 2


def test_sample_cycle_square(rng):
    g = square()
    draws = np.array([sample_cycle(g, rng) for _ in range(100_000)])
    assert set(draws) == {0, 15}
    assert abs((draws == 15).mean() - 0.5) < 0.02


def test_sample_cycle_always_cycles(rng):
    g = grid(3, 4)
    assert all(g.is_cycle(sample_cycle(g, rng)) for _ in range(2000))


def test_empty_face_list_gives_zero(rng):
    g = PlanarGraph.from_edges([(0, 1), (1, 2)], faces=[])
    assert all(sample_cycle(g, rng) == 0 for _ in range(10))


def test_two_squares_uniform(rng):
    g = two_squares()
    draws = np.array([sample_cycle(g, rng) for _ in range(100_000)])
    _, counts = np.unique(draws, return_counts=True)
    assert len(counts) == 4
    assert np.all(np.abs(counts / len(draws) - 0.25) < 0.02)


def test_overlap_examples():
    g = square()
    zero = np.tile([1, 0], (4, 1)).astype(complex)
    assert product_state_overlap(g, zero) == pytest.approx(2**-0.5)
    plus = np.full((4, 2), 2**-0.5, dtype=complex)
    assert product_state_overlap(g, plus) == pytest.approx(2 * 2**-2 / np.sqrt(2))
    one = zero.copy()
    one[0] = [0, 1]
    assert product_state_overlap(g, one) == 0


def test_basis_overlap_exhaustive():
    g = grid(2, 3)
    cyc = brute_cycles(g)
    for x in range(1 << g.n):
        states = np.zeros((g.n, 2))
        states[np.arange(g.n), [(x >> j) & 1 for j in range(g.n)]] = 1
        want = g.cycle_count**-0.5 if x in cyc else 0
        assert product_state_overlap(g, states) == pytest.approx(want)


def test_marginal_examples(rng):
    g = square()
    assert marginal_overlap(g, [0], np.array([[1, 0]])) == pytest.approx(0.5)
    assert marginal_overlap(g, [], np.zeros((0, 2))) == pytest.approx(1)
    states = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
    states /= np.linalg.norm(states, axis=1, keepdims=True)
    full = marginal_overlap(g, range(4), states)
    assert full == pytest.approx(abs(product_state_overlap(g, states)) ** 2)


def test_marginal_against_density_matrix(rng):
    g = two_squares()
    psi = surface_code_state(g)
    subset = [0, 3, 6]
    states = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
    states /= np.linalg.norm(states, axis=1, keepdims=True)
    t = psi.reshape([2] * g.n)  # axis k is edge n-1-k
    axes = [g.n - 1 - j for j in subset]
    rest = [a for a in range(g.n) if a not in axes]
    m = np.transpose(t, axes + rest).reshape(8, -1)
    rho = m @ m.conj().T
    # local index of the subset uses subset[0] as the high bit here
    phi = np.einsum("a,b,c->abc", *states).reshape(-1)
    assert marginal_overlap(g, subset, states) == pytest.approx(np.real(phi.conj() @ rho @ phi))


def test_text_roundtrip():
    g = PlanarGraph.from_edges([(0, 1), (1, 2), (2, 0), (0, None)], faces=[[0, 1, 2]], weights={0: 1j})
    back = parse_graph(dumps_graph(g))
    assert back.n == 4 and back.faces == [[0, 1, 2]] and back.weight(0) == 1j
    assert back.edges[3].v is None


def test_parse_errors():
    with pytest.raises(GraphError, match=":3:"):
        parse_graph("edges\na 0 1\nb 1\n")
    with pytest.raises(GraphError):
        parse_graph("edges\na 0 1\nfaces\nz\n")
