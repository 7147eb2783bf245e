import numpy as np
import pytest

from ampsample import bits, gates
from ampsample.circuit import (
    CircuitError,
    CircuitParseError,
    ControlTable,
    Gate,
    GateClass,
    apply_permutation_gate,
    circuit_from_gates,
    parse_circuit,
    parse_complex,
    serialize_circuit,
    serialize_control_table,
)
from ampsample.corpus import random_adaptive_circuit


def test_bitstring_text_puts_qubit_zero_first():
    assert bits.to_str(1, 3) == "100"
    assert bits.from_str("001") == 4
    for x in range(16):
        assert bits.from_str(bits.to_str(x, 4)) == x


def test_local_index_and_with_local_roundtrip():
    support = (3, 0)
    for x in range(16):
        j = bits.local_index(x, support)
        assert j == ((x >> 3) & 1) + 2 * (x & 1)
        assert bits.with_local(x, support, j) == x
    xs = np.arange(16)
    np.testing.assert_array_equal(bits.with_local(xs, support, 0), xs & ~0b1001)


def test_parse_bell():
    c = parse_circuit("qubits 2\nh 0\ncx 0 1  # entangle\n")
    assert c.n == 2 and c.m == 2
    assert [g.label for g in c.gates] == ["h", "cx"]


def test_parse_rotation_and_matrix():
    c = parse_circuit("qubits 1\nrz 0 0.5\nmatrix 1 0 0,0 1,0 1,0 0,0\n")
    assert c.gates[0].params == (0.5,)
    np.testing.assert_allclose(c.gates[1].matrix, gates.X)


def test_parse_error_reports_line_and_source():
    with pytest.raises(CircuitParseError) as exc:
        parse_circuit("qubits 2\nh 0\nfoo 1\n", source="bad.qc")
    assert "bad.qc" in str(exc.value) and "3" in str(exc.value)


@pytest.mark.parametrize("text", ["h 0\n", "qubits 1\ncx 0 1\n", "qubits 2\nh 5\n", "qubits 1\nrz 0\n"])
def test_parse_rejects(text):
    with pytest.raises(CircuitParseError):
        parse_circuit(text)


def test_non_unitary_matrix_rejected():
    with pytest.raises(CircuitError):
        Gate(np.array([[1, 1], [0, 1]]), (0,))


def test_classification():
    assert Gate.named("t", [0]).gate_class is GateClass.DIAGONAL
    assert Gate.named("cz", [0, 1]).gate_class is GateClass.DIAGONAL
    assert Gate.named("cx", [0, 1]).gate_class is GateClass.PERMUTATION
    assert Gate.named("y", [0]).gate_class is GateClass.PERMUTATION
    assert Gate.named("h", [0]).gate_class is GateClass.GENERAL


def test_apply_permutation_gate_matches_matrix():
    g = Gate.named("cx", [2, 0])
    for x in range(8):
        y, phase = apply_permutation_gate(g, x)
        assert y == x ^ (1 if x & 4 else 0)
        assert phase == 1
    with pytest.raises(CircuitError):
        apply_permutation_gate(Gate.named("h", [0]), 0)


def test_control_table_from_loader():
    tables = {"t1": "controls 0\n1 x\n"}
    c = parse_circuit("qubits 2\nh 0\ni 1 ctrl t1\n", loader=tables.__getitem__)
    assert c.is_adaptive
    assert c.gate_for(1, 0b00).label == "i"
    assert c.gate_for(1, 0b01).label == "x"


def test_control_table_overlapping_support_rejected():
    with pytest.raises(CircuitParseError):
        parse_circuit("qubits 2\ni 1 ctrl t\n", loader={"t": "controls 1\n1 x\n"}.__getitem__)


def test_serialize_roundtrip(rng):
    c = random_adaptive_circuit(3, 8, rng, p_adaptive=0.5)
    names = {t: f"table{t}" for t in c.adaptive}
    files = {names[t]: serialize_control_table(ctl) for t, ctl in c.adaptive.items()}
    back = parse_circuit(serialize_circuit(c, names), loader=files.__getitem__)
    assert back == c


def test_parse_complex_accepts_bare_real():
    assert parse_complex("-1") == -1
    assert parse_complex("0.5,-2") == complex(0.5, -2)
    with pytest.raises(ValueError):
        parse_complex("1,2,3")


def test_control_table_branches_partition_strings():
    base = Gate.named("i", [2])
    ctl = ControlTable((0, 1), {(1, 0): Gate.named("x", [2]), (1, 1): Gate.named("z", [2])}, base)
    covered = np.zeros(8, dtype=int)
    for g, sel in ctl.branches(3):
        covered += sel
    assert np.all(covered == 1)
    c = circuit_from_gates(3, [base], {0: ctl})
    assert c.gate_for(0, 0b011).label == "z"
