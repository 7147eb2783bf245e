import numpy as np
import pytest

from ampsample.budget import (
    XI_T,
    allocate_error_budget,
    budget_cost,
    circuit_xi,
    gate_xi,
    xi_zrotation,
)
from ampsample.circuit import Gate, parse_circuit


def test_eps_sum_and_cost_closed_form(rng):
    for _ in range(20):
        xi = rng.uniform(1, 4, size=int(rng.integers(2, 20)))
        delta = float(rng.uniform(1e-3, 2))
        b = allocate_error_budget(xi, delta)
        assert abs(b.eps.sum() - delta / 16) <= 1e-12
        assert b.cost == pytest.approx(b.cost_closed_form, rel=1e-10)
        assert b.cost_last_term == pytest.approx(256 * b.eta[-2] / delta**2)


def test_allocation_is_locally_optimal(rng):
    xi = rng.uniform(1, 3, size=8)
    b = allocate_error_budget(xi, 0.5)
    for _ in range(200):
        i, j = rng.choice(7, size=2, replace=False)
        h = rng.uniform(-0.3, 0.3) * min(b.eps[i], b.eps[j])
        e = b.eps.copy()
        e[i] += h
        e[j] -= h
        assert budget_cost(b.eta[:-1], e) >= b.cost * (1 - 1e-12)


def test_uniform_for_clifford_values():
    b = allocate_error_budget([1.0] * 5, 0.1)
    np.testing.assert_allclose(b.eps, 0.1 / 16 / 4)


def test_known_values():
    assert xi_zrotation(0.0) == 1.0
    assert gate_xi(Gate.named("h", [0])) == 1.0
    assert gate_xi(Gate.named("cx", [0, 1])) == 1.0
    assert gate_xi(Gate.named("t", [0])) == pytest.approx(1 / np.cos(np.pi / 8) ** 2)
    assert xi_zrotation(np.pi / 4) == pytest.approx(XI_T)
    assert xi_zrotation(np.pi / 2) == 1.0
    assert xi_zrotation(np.pi / 2 + np.pi / 4) == pytest.approx(XI_T)


def test_rz_monotone_on_quarter_turn():
    vals = [xi_zrotation(th) for th in np.linspace(0, np.pi / 4, 20)]
    assert all(a <= b + 1e-15 for a, b in zip(vals, vals[1:]))


def test_circuit_xi():
    c = parse_circuit("qubits 2\nh 0\nt 0\ncx 0 1\nrz 1 0.3\n")
    xi = circuit_xi(c)
    assert xi[:3] == [1.0, pytest.approx(XI_T), 1.0]
    with pytest.raises(ValueError):
        circuit_xi(parse_circuit("qubits 1\nrx 0 0.3\n"))


@pytest.mark.parametrize("xi,delta", [([1.0], 0.1), ([0.5, 1.0], 0.1), ([1.0, 1.0], 0.0), ([1.0, 1.0], 3.0)])
def test_allocation_rejects(xi, delta):
    with pytest.raises(ValueError):
        allocate_error_budget(xi, delta)
