import numpy as np
import pytest

from ampsample.surface import reduction
from ampsample.surface.reduction import (
    PlanarizedDrawing,
    ReductionError,
    Segment,
    count_perfect_matchings,
    expand,
    perfect_matchings_via_reduction,
    vertex_weight_sum,
)


@pytest.mark.parametrize("name,want", [("k4", 3), ("k33_one_crossing", 6), ("triple_edge", 3), ("prism", 4),
                                       ("cube", 9)])
def test_counts(name, want):
    d = getattr(reduction, name)()
    r = perfect_matchings_via_reduction(d)
    assert r.count == want == r.brute_force
    assert abs(r.value - want) <= 1e-6
    assert r.gadget_sum == pytest.approx(want, abs=1e-6)
    assert vertex_weight_sum(d) == want


def test_expanded_sizes():
    assert expand(reduction.k4()).graph.n == 30
    assert expand(reduction.k4()).graph.cycle_dim == 7
    ex = expand(reduction.k33_one_crossing())
    assert ex.graph.n == 58 and ex.graph.cycle_dim == 13


def test_brute_force_matchings():
    assert count_perfect_matchings(range(4), [(0, 1), (2, 3), (0, 2), (1, 3), (0, 3), (1, 2)]) == 3
    assert count_perfect_matchings([0, 1], [(0, 1)] * 3) == 3
    assert count_perfect_matchings(range(3), [(0, 1), (1, 2)]) == 0


def test_crossing_order_symmetry():
    # mirrored clockwise order at the crossing must give the same count
    d = reduction.k33_one_crossing()
    q = d.crossings["X"]
    mirrored = PlanarizedDrawing(d.vertices, d.segments, {"X": (q[0], q[3], q[2], q[1])})
    assert perfect_matchings_via_reduction(mirrored).count == 6


def test_non_cubic_rejected():
    with pytest.raises(ReductionError):
        PlanarizedDrawing([0, 1, 2], [Segment(0, 1, "a"), Segment(1, 2, "b"), Segment(2, 0, "c")])


def test_bad_crossing_pairing_rejected():
    d = reduction.k33_one_crossing()
    q = d.crossings["X"]
    with pytest.raises(ReductionError):
        PlanarizedDrawing(d.vertices, d.segments, {"X": (q[0], q[2], q[1], q[3])})


def test_broken_gadget_breaks_count():
    from ampsample.surface.gadgets import THETA_A, theta

    with pytest.raises(ReductionError):
        perfect_matchings_via_reduction(reduction.k4(), theta_gadget=theta(a=THETA_A * np.exp(0.1j)))
