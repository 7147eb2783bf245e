import numpy as np
import pytest

from ampsample.groundstate.hamiltonian import (
    DegenerateGroundStateError,
    HamiltonianError,
    SparseHamiltonian,
    exact_ground_state,
    lowest_eigenpairs,
    load_hamiltonian,
    parse_hamiltonian,
    pauli_matrix,
    random_local_hamiltonian,
    sensitivity,
    stoquastic_check_and_bound,
    tfim,
)


def test_pauli_word_acts_on_qubit_index():
    zi = pauli_matrix("ZI").toarray()
    # qubit 0 is the low bit: Z on qubit 0 flips the sign of odd indices
    np.testing.assert_allclose(np.diag(zi), [1, -1, 1, -1])


def test_minus_x():
    h = parse_hamiltonian("qubits 1\nterm -1 X\n")
    gs = exact_ground_state(h)
    assert gs.energy == pytest.approx(-1)
    assert gs.gap == pytest.approx(2)
    np.testing.assert_allclose(gs.pi, [0.5, 0.5])
    assert sensitivity(h, gs.psi) == pytest.approx(1)
    assert h.k == 1


def test_tfim_two_qubits_closed_form():
    gs = exact_ground_state(tfim(2))
    assert gs.energy == pytest.approx(-np.sqrt(5))
    assert gs.gap == pytest.approx(np.sqrt(5) - 1)
    golden = (1 + np.sqrt(5)) / 2
    assert gs.pi[0] / gs.pi[1] == pytest.approx(golden**2)


def test_degenerate_ground_state_rejected():
    with pytest.raises(DegenerateGroundStateError):
        exact_ground_state(parse_hamiltonian("qubits 2\nterm -1 ZI\n"))


def test_sparse_solver_agrees_with_dense(rng):
    h = random_local_hamiltonian(13, 2, rng)
    w, _ = lowest_eigenpairs(h, 2)
    small = random_local_hamiltonian(6, 2, rng)
    ws, _ = lowest_eigenpairs(small, 2)
    np.testing.assert_allclose(ws, np.linalg.eigvalsh(small.dense())[:2], atol=1e-9)
    assert w[0] <= w[1]


def test_matrix_file(tmp_path):
    (tmp_path / "h.txt").write_text("01 10 -0.5 0\n10 01 -0.5 0\n")
    (tmp_path / "h.ham").write_text("qubits 2\nterm 1 ZZ\nmatrix-file h.txt\n")
    h = load_hamiltonian(tmp_path / "h.ham")
    assert h.entry(0b10, 0b01) == pytest.approx(-0.5)
    assert h.entry(0, 0) == pytest.approx(1)


@pytest.mark.parametrize("text", ["term 1 X\n", "qubits 2\nterm 1 X\n", "qubits 1\nterm a X\n",
                                  "qubits 1\nterm 1j X\n"])
def test_parse_errors(text):
    with pytest.raises(HamiltonianError):
        parse_hamiltonian(text)


def test_non_hermitian_rejected():
    m = np.array([[0, 1], [0, 0]], dtype=complex)
    with pytest.raises(HamiltonianError):
        SparseHamiltonian.from_matrix(m)


def test_stoquastic_bound(rng):
    for _ in range(30):
        h = random_local_hamiltonian(int(rng.integers(2, 7)), 2, rng, stoquastic=True)
        ok, bound = stoquastic_check_and_bound(h)
        assert ok
        assert sensitivity(h, exact_ground_state(h).psi) <= bound + 1e-9


def test_non_stoquastic_detected():
    ok, _ = stoquastic_check_and_bound(parse_hamiltonian("qubits 1\nterm 1 X\nterm 0.5 Z\n"))
    assert not ok
