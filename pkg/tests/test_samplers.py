import numpy as np
import pytest

from ampsample import corpus
from ampsample.backends import NoisePlan, build_pathsum_oracle, build_statevector_oracle, wrap_noisy_oracle
from ampsample.circuit import Gate, circuit_from_gates
from ampsample.samplers import (
    BRANCH,
    PERMUTE,
    SKIP,
    Distribution,
    SamplerError,
    chi_square_gof,
    gate_by_gate_sample,
    induced_sampler_distribution,
    qubit_by_qubit_sample,
    reference_distribution,
    tv_distance,
)


def test_bell_reference():
    d = reference_distribution(corpus.bell())
    assert d.as_dict(1e-12) == pytest.approx({"00": 0.5, "11": 0.5})


def test_gate_sampler_bell_support(rng):
    c = corpus.bell()
    o = build_statevector_oracle(c)
    outs = {gate_by_gate_sample(c, o, rng).output for _ in range(200)}
    assert outs == {0, 3}


@pytest.mark.parametrize("maker", ["plain", "mixed", "adaptive"])
def test_induced_law_is_exact(rng, maker):
    for _ in range(15):
        n, m = int(rng.integers(2, 6)), int(rng.integers(1, 15))
        c = {"plain": corpus.random_circuit, "mixed": corpus.random_mixed_circuit,
             "adaptive": corpus.random_adaptive_circuit}[maker](n, m, rng)
        o = build_statevector_oracle(c)
        l1, _ = tv_distance(induced_sampler_distribution(c, o), reference_distribution(c))
        assert l1 <= 1e-9


def test_induced_law_without_shortcuts(rng):
    c = corpus.random_mixed_circuit(4, 12, rng)
    o = build_pathsum_oracle(c)
    d = induced_sampler_distribution(c, o, skip_diagonal=False, apply_permutations=False)
    assert tv_distance(d, reference_distribution(c))[0] <= 1e-9


def test_trace_actions_and_counts():
    c = circuit_from_gates(2, [Gate.named("h", [0]), Gate.named("t", [0]), Gate.named("cx", [0, 1]),
                               Gate.named("h", [1])])
    o = build_statevector_oracle(c)
    tr = gate_by_gate_sample(c, o, np.random.default_rng(0))
    assert tr.actions == [BRANCH, SKIP, PERMUTE, BRANCH]
    assert tr.calls == [2, 0, 0, 2]
    assert tr.evaluations == o.total_calls == 4
    assert "total evaluations 4" in tr.report(2)


def test_noisy_oracle_disables_shortcuts(rng):
    c = corpus.ghz(3)
    o = wrap_noisy_oracle(build_statevector_oracle(c), NoisePlan.uniform(c.m, 0.001))
    tr = gate_by_gate_sample(c, o, rng)
    assert set(tr.actions) == {BRANCH}


def test_cnot_su2_evaluation_bound(rng):
    for _ in range(30):
        c = corpus.random_cnot_su2_circuit(4, 6, 5, rng)
        tr = gate_by_gate_sample(c, build_statevector_oracle(c), rng)
        assert tr.evaluations <= 2 * 5


def test_qubit_sampler_matches_reference(rng):
    c = corpus.random_circuit(3, 8, rng)
    o = build_statevector_oracle(c)
    samples = [qubit_by_qubit_sample(c, o, rng) for _ in range(20000)]
    emp = Distribution.from_samples(samples, 3)
    assert tv_distance(emp, reference_distribution(c))[1] < 0.03


def test_empirical_sampler_chi_square(rng):
    c = corpus.random_adaptive_circuit(3, 8, rng)
    o = build_statevector_oracle(c)
    ref = reference_distribution(c)
    keep = ref.probs > 1e-3
    samples = [gate_by_gate_sample(c, o, rng).output for _ in range(20000)]
    samples = [s for s in samples if keep[s]]
    trimmed = Distribution(np.where(keep, ref.probs, 0), 3)
    _, p = chi_square_gof(samples, trimmed)
    assert p > 1e-4


def test_chi_square_off_support_fails():
    ref = Distribution(np.array([0.5, 0.5, 0, 0]), 2)
    assert chi_square_gof([0, 1] * 10 + [3], ref) == (float("inf"), 0.0)


def test_distribution_lookup_and_validation():
    d = Distribution.from_dict({"10": 1.0}, 2)
    assert d["10"] == 1.0 and d[1] == 1.0
    with pytest.raises(ValueError):
        Distribution(np.array([0.5, 0.25, 0.25]), 1)
    with pytest.raises(ValueError):
        tv_distance(Distribution(np.ones(2) / 2, 1), Distribution(np.ones(4) / 4, 2))


def test_sampler_raises_on_vanishing_mass():
    class Broken:
        exact = True

        def branch_probabilities(self, t, reps, support):
            return np.zeros((len(reps), 1 << len(support)))

    with pytest.raises(SamplerError):
        gate_by_gate_sample(corpus.bell(), Broken(), np.random.default_rng(0))
