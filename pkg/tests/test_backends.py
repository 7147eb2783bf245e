import numpy as np
import pytest

from ampsample import corpus
from ampsample.backends import (
    BACKENDS,
    NoisePlan,
    NotCliffordError,
    OracleError,
    UnsupportedError,
    build_oracle,
    build_pathsum_oracle,
    build_stabdecomp_oracle,
    build_statevector_oracle,
    ch_form,
    clifford_amplitude,
    marginal_probability,
    simulate,
    stabilizer_decompose,
    wrap_noisy_oracle,
)
from ampsample.backends.stabdecomp import ALPHA, BETA
from ampsample.circuit import Gate, circuit_from_gates
from ampsample.gates import S, T
from ampsample.samplers import circuit_operator


def dense(c):
    psi = np.zeros(1 << c.n, dtype=complex)
    psi[0] = 1
    for t in range(c.m):
        psi = circuit_operator(c, t).toarray() @ psi
    return psi


def test_backend_names():
    assert set(BACKENDS) == {"statevector", "pathsum", "stabdecomp"}
    with pytest.raises(ValueError):
        build_oracle("nope", corpus.bell())


def test_bell_amplitudes_every_backend():
    c = corpus.bell()
    for name in BACKENDS:
        o = build_oracle(name, c)
        np.testing.assert_allclose(o.amplitudes(2, [0, 1, 2, 3]), [2**-0.5, 0, 0, 2**-0.5], atol=1e-12)
        np.testing.assert_allclose(o.amplitudes(1, [0, 1]), [2**-0.5, 2**-0.5], atol=1e-12)
        assert o.amplitude(0, 0) == 1


def test_statevector_matches_dense_product(rng):
    for _ in range(20):
        c = corpus.random_adaptive_circuit(4, 10, rng) if rng.random() < 0.5 else corpus.random_circuit(4, 10, rng)
        np.testing.assert_allclose(simulate(c), dense(c), atol=1e-12)


def test_pathsum_matches_statevector(rng):
    for _ in range(20):
        c = corpus.random_mixed_circuit(5, 12, rng)
        xs = np.arange(32)
        for t in (0, 5, c.m):
            np.testing.assert_allclose(build_pathsum_oracle(c).amplitudes(t, xs),
                                       build_statevector_oracle(c).amplitudes(t, xs), atol=1e-12)


def test_t_split_identity():
    np.testing.assert_allclose(ALPHA * np.eye(2) + BETA * S, T, atol=1e-15)


def test_stabilizer_terms_double_per_t(rng):
    c = corpus.random_clifford_t_circuit(3, 12, 4, rng)
    terms = stabilizer_decompose(c)
    assert len(terms[-1]) == 16
    psi = sum(term.coefficient * dense(term.clifford) for term in terms[-1])
    np.testing.assert_allclose(psi, dense(c), atol=1e-12)


def test_stabdecomp_matches_statevector(rng):
    for _ in range(15):
        c = corpus.random_clifford_t_circuit(4, 15, int(rng.integers(0, 6)), rng)
        xs = np.arange(16)
        sd, sv = build_stabdecomp_oracle(c), build_statevector_oracle(c)
        for t in range(c.m + 1):
            np.testing.assert_allclose(sd.amplitudes(t, xs), sv.amplitudes(t, xs), atol=1e-12)


def test_stabdecomp_rejects_non_clifford_t():
    c = circuit_from_gates(1, [Gate.named("rx", [0], 0.3)])
    with pytest.raises(OracleError):
        build_stabdecomp_oracle(c).amplitudes(1, [0])


def test_chform_global_phase_against_matrix_product(rng):
    for _ in range(100):
        n = int(rng.integers(1, 5))
        c = corpus.random_clifford_circuit(n, int(rng.integers(1, 30)), rng)
        np.testing.assert_allclose(ch_form(c).amplitudes(np.arange(1 << n)), dense(c), atol=1e-12)


def test_chform_known_phases():
    c = circuit_from_gates(1, [Gate.named("h", [0]), Gate.named("s", [0]), Gate.named("h", [0])])
    # H S H |0> = ((1 + i)|0> + (1 - i)|1>) / 2
    assert np.isclose(clifford_amplitude(c, 0), (1 + 1j) / 2)
    assert np.isclose(clifford_amplitude(c, 1), (1 - 1j) / 2)


def test_chform_rejects_t():
    with pytest.raises(NotCliffordError):
        ch_form(circuit_from_gates(1, [Gate.named("t", [0])]))


def test_call_counter_counts_queries():
    o = build_statevector_oracle(corpus.ghz(3))
    o.amplitudes(3, [0, 7])
    o.amplitude(1, 0)
    assert o.call_counter[3] == 2 and o.call_counter[1] == 1 and o.total_calls == 3
    o.reset_counters()
    assert o.total_calls == 0


def test_prefix_out_of_range():
    o = build_statevector_oracle(corpus.bell())
    with pytest.raises(OracleError):
        o.amplitudes(3, [0])


def test_marginals_only_on_statevector():
    c = corpus.ghz(3)
    assert np.isclose(marginal_probability(build_statevector_oracle(c), 3, 0, 1), 0.5)
    assert np.isclose(marginal_probability(build_statevector_oracle(c), 3, 0b01, 2), 0.0)
    with pytest.raises(UnsupportedError):
        marginal_probability(build_pathsum_oracle(c), 3, 0, 1)


def test_noisy_oracle_error_norm(rng):
    c = corpus.random_circuit(3, 6, rng)
    plan = NoisePlan.uniform(c.m, 0.01, seed=4)
    o = wrap_noisy_oracle(build_statevector_oracle(c), plan)
    assert not o.exact
    for t in range(1, c.m + 1):
        assert np.isclose(o.realized_eps(t), 0.01)
    assert np.isclose(plan.l1_error_bound(), 16 * 0.01 * (c.m - 1))


def test_noise_plan_text_roundtrip():
    plan = NoisePlan((0.1, 0.0, 0.25), seed=9)
    assert NoisePlan.loads(plan.dumps()) == plan
    with pytest.raises(ValueError):
        NoisePlan((-0.1,))
