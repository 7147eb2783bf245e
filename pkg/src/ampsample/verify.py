"""Self-check suites.  Each returns a :class:`SuiteResult`; sizes default to
the full acceptance scale and can be reduced for quick runs."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import corpus, gates
from .backends import (
    NoisePlan,
    build_pathsum_oracle,
    build_stabdecomp_oracle,
    build_statevector_oracle,
    ch_form,
    wrap_noisy_oracle,
)
from .budget import XI_T, allocate_error_budget, budget_cost, gate_xi, xi_zrotation
from .circuit import Gate, GateClass
from .groundstate.hamiltonian import (
    exact_ground_state,
    random_local_hamiltonian,
    sensitivity,
    stoquastic_check_and_bound,
    tfim,
)
from .groundstate.magic import MagicRatioOracle, random_magic_instance, verify_magic_ratio_structure
from .groundstate.mcmc import ChainConfig, ExactGroundStateOracle, diag_min_start, gap_bound_check, run_chains, tv_decay_check
from .samplers import (
    Distribution,
    chi_square_gof,
    circuit_operator,
    gate_by_gate_sample,
    induced_sampler_distribution,
    reference_distribution,
    tv_distance,
)
from .surface import gadgets, reduction
from .surface.graph import grid, sample_cycle, square, two_squares
from .surface.mbqc import SurfaceCodeInstance, brute_force_distribution, induced_mbqc_distribution, random_schedule


@dataclass
class SuiteResult:
    name: str
    passed: bool
    summary: str
    metrics: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"{self.name:<12} {'PASS' if self.passed else 'FAIL'}  {self.summary}"

    def as_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "summary": self.summary,
                "metrics": self.metrics, "seconds": round(self.seconds, 3)}


def _corpus(count: int, rng: np.random.Generator, max_n: int = 8, max_m: int = 20):
    """Random circuits cycling through plain, mixed-class and adaptive kinds."""
    out = []
    for i in range(count):
        n = int(rng.integers(2, max_n + 1))
        m = int(rng.integers(1, max_m + 1))
        kind = i % 3
        if kind == 0:
            out.append(corpus.random_circuit(n, m, rng))
        elif kind == 1:
            out.append(corpus.random_mixed_circuit(n, m, rng))
        else:
            out.append(corpus.random_adaptive_circuit(n, m, rng))
    return out


def sampler_suite(count: int = 200, seed: int = 1) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst, adaptive = 0.0, 0
    for c in _corpus(count, rng):
        adaptive += c.is_adaptive
        o = build_statevector_oracle(c)
        l1, _ = tv_distance(induced_sampler_distribution(c, o), reference_distribution(c))
        worst = max(worst, l1)
    ok = worst <= 1e-9
    return SuiteResult("sampler", ok, f"{count} circuits ({adaptive} adaptive), max L1 {worst:.2e} (tol 1e-9)",
                       {"circuits": count, "adaptive": adaptive, "max_l1": worst})


def _dense_product(c) -> np.ndarray:
    psi = np.zeros(1 << c.n, dtype=complex)
    psi[0] = 1.0
    for t in range(c.m):
        psi = circuit_operator(c, t).toarray() @ psi
    return psi


def backend_suite(count: int = 200, seed: int = 2) -> SuiteResult:
    rng = np.random.default_rng(seed)
    worst_ps = worst_sd = worst_ch = 0.0
    for c in _corpus(count, rng):
        xs = np.arange(1 << c.n)
        ref = build_statevector_oracle(c).amplitudes(c.m, xs)
        worst_ps = max(worst_ps, float(np.abs(build_pathsum_oracle(c).amplitudes(c.m, xs) - ref).max()))
    n_ct = max(count // 4, 1)
    for _ in range(n_ct):
        n = int(rng.integers(1, 7))
        m = int(rng.integers(1, 21))
        c = corpus.random_clifford_t_circuit(n, m, int(rng.integers(0, min(m, 6) + 1)), rng)
        xs = np.arange(1 << n)
        sv, sd = build_statevector_oracle(c), build_stabdecomp_oracle(c)
        for t in (c.m // 2, c.m):
            worst_sd = max(worst_sd, float(np.abs(sd.amplitudes(t, xs) - sv.amplitudes(t, xs)).max()))
    for _ in range(n_ct):
        n = int(rng.integers(1, 5))
        c = corpus.random_clifford_circuit(n, int(rng.integers(1, 21)), rng)
        direct = _dense_product(c)
        worst_ch = max(worst_ch, float(np.abs(ch_form(c).amplitudes(np.arange(1 << n)) - direct).max()))
    worst = max(worst_ps, worst_sd, worst_ch)
    return SuiteResult(
        "backends", worst <= 1e-9,
        f"pathsum {worst_ps:.1e}, stabdecomp {worst_sd:.1e} ({n_ct} Clifford+T), "
        f"CH-form vs matrix product {worst_ch:.1e} ({n_ct} Clifford, phase included)",
        {"pathsum": worst_ps, "stabdecomp": worst_sd, "chform": worst_ch},
    )


def robustness_suite(pairs: int = 50, seed: int = 3, eps: float | None = None) -> SuiteResult:
    """Noisy-oracle sampler error against ``16 * sum(eps)``.

    Without ``eps``, each pair draws a total in [1e-4, 0.05] (log-uniform)
    and splits it at random over the gates; with ``eps`` every prefix gets
    that magnitude.
    """
    rng = np.random.default_rng(seed)
    violations, worst_ratio, rows = 0, 0.0, []
    for i in range(pairs):
        n = int(rng.integers(2, 6))
        m = int(rng.integers(3, 11))
        c = corpus.random_circuit(n, m, rng) if i % 2 == 0 else corpus.random_adaptive_circuit(n, m, rng)
        if eps is None:
            total = 10 ** rng.uniform(-4, math.log10(0.05))
            w = rng.random(m - 1)
            plan = NoisePlan(tuple(total * w / w.sum()) + (float(rng.uniform(0, 0.01)),), seed=int(rng.integers(2**31)))
        else:
            plan = NoisePlan.uniform(m, eps, seed=int(rng.integers(2**31)))
        o = wrap_noisy_oracle(build_statevector_oracle(c), plan)
        l1, _ = tv_distance(induced_sampler_distribution(c, o), reference_distribution(c))
        bound = plan.l1_error_bound()
        violations += l1 > bound + 1e-12
        if bound > 0:
            worst_ratio = max(worst_ratio, l1 / bound)
        rows.append((l1, bound))
    zero = 0.0
    for _ in range(5):
        c = corpus.random_circuit(4, 10, rng)
        o = wrap_noisy_oracle(build_statevector_oracle(c), NoisePlan.uniform(c.m, 0.0))
        zero = max(zero, tv_distance(induced_sampler_distribution(c, o), reference_distribution(c))[0])
    ok = violations == 0 and zero <= 1e-9
    return SuiteResult(
        "robustness", ok,
        f"{pairs} pairs, {violations} violations, max L1/bound {worst_ratio:.3f}, zero-noise L1 {zero:.1e}",
        {"pairs": pairs, "violations": violations, "max_ratio": worst_ratio, "zero_noise_l1": zero,
         "l1_and_bound": rows},
    )


def calls_suite(count: int = 100, seed: int = 4) -> SuiteResult:
    rng = np.random.default_rng(seed)
    bad = []
    for i in range(count):
        n = int(rng.integers(2, 7))
        c = corpus.random_mixed_circuit(n, int(rng.integers(1, 21)), rng)
        o = build_statevector_oracle(c)
        tr = gate_by_gate_sample(c, o, rng)
        if tr.evaluations > c.m * (1 << c.max_width):
            bad.append(f"m*2^k bound, circuit {i}")
        if sum(o.call_counter.values()) != tr.evaluations:
            bad.append(f"oracle counter mismatch, circuit {i}")
        for g, k in zip(c.gates, tr.calls):
            if g.gate_class is GateClass.DIAGONAL and k:
                bad.append(f"diagonal gate evaluated, circuit {i}")
    for i in range(count):
        n = int(rng.integers(2, 7))
        c = corpus.random_cnot_su2_circuit(n, int(rng.integers(0, 10)), int(rng.integers(1, 10)), rng)
        tr = gate_by_gate_sample(c, build_statevector_oracle(c), rng)
        general = sum(g.width == 1 and g.gate_class is not GateClass.DIAGONAL for g in c.gates)
        if tr.evaluations > 2 * general:
            bad.append(f"CNOT+SU(2) bound, circuit {i}")
    return SuiteResult("calls", not bad, f"{2 * count} traces, {len(bad)} violations", {"violations": bad})


def budget_suite(count: int = 20, seed: int = 5) -> SuiteResult:
    rng = np.random.default_rng(seed)
    sum_err = closed_err = 0.0
    improved = 0
    for _ in range(count):
        xi = rng.uniform(1, 3, size=int(rng.integers(3, 15)))
        delta = float(rng.uniform(0.01, 2))
        b = allocate_error_budget(xi, delta)
        sum_err = max(sum_err, abs(b.eps.sum() - delta / 16))
        closed_err = max(closed_err, abs(b.cost - b.cost_closed_form) / b.cost)
        for _ in range(50):
            i, j = rng.choice(len(b.eps), size=2, replace=False)
            h = rng.uniform(-0.5, 0.5) * min(b.eps[i], b.eps[j])
            e = b.eps.copy()
            e[i] += h
            e[j] -= h
            improved += budget_cost(b.eta[:-1], e) < b.cost * (1 - 1e-12)
    clifford = [gate_xi(Gate.named(name, [0, 1] if name in ("cx", "cnot", "cz") else [0]))
                for name in sorted(gates.CLIFFORD_NAMES)]
    exact = all(x == 1.0 for x in clifford) and xi_zrotation(0.0) == 1.0
    t_ok = abs(gate_xi(Gate.named("t", [0])) - XI_T) <= 1e-12
    ok = sum_err <= 1e-12 and closed_err <= 1e-9 and improved == 0 and exact and t_ok
    return SuiteResult(
        "budget", ok,
        f"{count} xi vectors: |sum eps - delta/16| {sum_err:.1e}, {improved} improving perturbations, "
        f"Clifford/zero-angle xi exact: {exact}",
        {"sum_error": sum_err, "closed_form_rel_error": closed_err, "improving": improved, "clifford_exact": exact},
    )


def mcmc_suite(count: int = 100, seed: int = 6, t_max: int = 200, max_n: int = 8) -> SuiteResult:
    rng = np.random.default_rng(seed)
    stats = {"balance": 0.0, "min_eig": 1.0, "gap_violations": 0, "tv_violations": 0, "l1_violations": 0}
    for _ in range(count):
        n = int(rng.integers(2, max_n + 1))
        h = random_local_hamiltonian(n, int(rng.integers(1, 3)), rng)
        x_in = diag_min_start(h, ExactGroundStateOracle.from_hamiltonian(h))
        rep = gap_bound_check(h, ChainConfig(n, h.k, x_in=x_in))
        cm = rep.chain
        stats["balance"] = max(stats["balance"], cm.balance_residual)
        stats["min_eig"] = min(stats["min_eig"], float(cm.eigenvalues.min()))
        stats["gap_violations"] += not rep.holds
        d = tv_decay_check(cm, x_in, t_max)
        stats["tv_violations"] += not d.tv_holds
        stats["l1_violations"] += not d.l1_holds
    ok = (stats["balance"] <= 1e-10 and stats["min_eig"] >= -1e-12
          and stats["gap_violations"] == 0 and stats["tv_violations"] == 0)
    return SuiteResult(
        "mcmc", ok,
        f"{count} instances: balance {stats['balance']:.1e}, min eigenvalue {stats['min_eig']:.1e}, "
        f"gap violations {stats['gap_violations']}, TV-decay violations {stats['tv_violations']} "
        f"(L1 form: {stats['l1_violations']})",
        stats,
    )


def sensitivity_suite(count: int = 30, seed: int = 7) -> SuiteResult:
    rng = np.random.default_rng(seed)
    stoq_bad = magic_bad = 0
    ratio_err = 0.0
    for _ in range(count):
        h = random_local_hamiltonian(int(rng.integers(2, 7)), 2, rng, stoquastic=True)
        stoq, bound = stoquastic_check_and_bound(h)
        s = sensitivity(h, exact_ground_state(h).psi)
        stoq_bad += not stoq or s > bound + 1e-9
    for _ in range(count):
        hm, _ = random_magic_instance(int(rng.integers(2, 6)), rng, sparsity=float(rng.choice([0.0, 0.2])))
        rep = verify_magic_ratio_structure(hm)
        magic_bad += not rep.ok
        ratio_err = max(ratio_err, rep.ratio_error)
        o = MagicRatioOracle(hm)
        pi = exact_ground_state(hm.to_sparse()).pi
        for x in np.flatnonzero(pi > 1e-12)[:8]:
            for y in np.flatnonzero(pi > 1e-12)[:8]:
                ratio_err = max(ratio_err, abs(o.ratio(int(x), int(y)) - pi[y] / pi[x]))
    ok = stoq_bad == 0 and magic_bad == 0 and ratio_err <= 1e-8
    return SuiteResult(
        "sensitivity", ok,
        f"{count} stoquastic ({stoq_bad} over bound), {count} magic-ratio ({magic_bad} failing), "
        f"max ratio error {ratio_err:.1e}",
        {"stoquastic_failures": stoq_bad, "magic_failures": magic_bad, "ratio_error": ratio_err},
    )


def tfim_suite(chains: int = 10_000, steps: int = 10_000, seed: int = 8) -> SuiteResult:
    h = tfim(2)
    pi = exact_ground_state(h).pi
    cfg = ChainConfig(2, h.k, x_in=diag_min_start(h), steps=steps, seed=seed)
    finals = run_chains(pi, cfg, chains)
    _, tv = tv_distance(Distribution.from_samples(finals, 2), Distribution(pi, 2))
    return SuiteResult("tfim", tv <= 0.03, f"{chains} chains x {steps} steps, TV {tv:.4f} (tol 0.03)", {"tv": tv})


def surface_suite(draws: int = 100_000, seed: int = 9, schedules: int = 10) -> SuiteResult:
    rng = np.random.default_rng(seed)
    non_cycles = 0
    for g in (square(), two_squares(), grid(3, 3), grid(3, 4)):
        non_cycles += sum(not g.is_cycle(sample_cycle(g, rng)) for _ in range(2000))
    g = two_squares()
    samples = [sample_cycle(g, rng) for _ in range(draws)]
    uniform = Distribution.from_dict({"".join("1" if b else "0" for b in row): 0.25 for row in g.cycles}, g.n)
    _, pval = chi_square_gof(samples, uniform)
    worst = 0.0
    for g in (square(), two_squares(), grid(2, 3), grid(3, 3)):
        for i in range(schedules):
            inst = SurfaceCodeInstance(g, random_schedule(g.n, rng, p_adaptive=0.5 if i % 2 else 0.0))
            worst = max(worst, float(np.abs(induced_mbqc_distribution(inst) - brute_force_distribution(inst)).sum()))
    ok = non_cycles == 0 and pval > 1e-3 and worst <= 1e-8
    return SuiteResult(
        "surface", ok,
        f"non-cycles {non_cycles}, two-square chi-square p {pval:.3f} at {draws} draws, MBQC max L1 {worst:.1e}",
        {"non_cycles": non_cycles, "chi2_p": pval, "mbqc_l1": worst},
    )


def gadget_suite(theta_a: complex | None = None) -> SuiteResult:
    th = gadgets.theta() if theta_a is None else gadgets.theta(a=theta_a)
    rep = gadgets.verify_gadgets(theta_gadget=th)
    ok = rep.ok and abs(rep.tau - 3.732) <= 1e-3
    fails = [c.name for c in rep.failures]
    return SuiteResult("gadgets", ok, f"{len(rep.checks)} identities, {len(fails)} failing, tau {rep.tau:.6f}",
                       {"tau": rep.tau, "failures": fails})


def reduction_suite() -> SuiteResult:
    expected = {"k4": 3, "k33_one_crossing": 6, "triple_edge": 3, "prism": 4, "cube": 9}
    got, ok = {}, True
    for name, want in expected.items():
        r = reduction.perfect_matchings_via_reduction(getattr(reduction, name)())
        got[name] = {"count": r.count, "value": r.value, "brute_force": r.brute_force}
        ok &= r.consistent and r.count == want and abs(r.value - r.count) <= 1e-6
    return SuiteResult("reduction", ok, ", ".join(f"{k} {v['count']}" for k, v in got.items()), got)


SUITES: dict[str, Callable[..., SuiteResult]] = {
    "sampler": sampler_suite,
    "backends": backend_suite,
    "robustness": robustness_suite,
    "calls": calls_suite,
    "budget": budget_suite,
    "mcmc": mcmc_suite,
    "sensitivity": sensitivity_suite,
    "tfim": tfim_suite,
    "surface": surface_suite,
    "gadgets": gadget_suite,
    "reduction": reduction_suite,
}


def run_suite(name: str, **kwargs) -> SuiteResult:
    t0 = time.perf_counter()
    res = SUITES[name](**kwargs)
    res.seconds = time.perf_counter() - t0
    return res
