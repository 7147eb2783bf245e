"""Sampling output strings from amplitude access, plus exact-law utilities."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy import stats

from . import bits
from .backends.base import AmplitudeOracle, marginal_probability
from .circuit import Circuit, Gate, GateClass

ZERO_MASS = 1e-14
MAX_EXACT_QUBITS = 10
SUPPORT_TOL = 1e-12

SKIP = "diagonal-skip"
PERMUTE = "permutation-apply"
BRANCH = "branch"


class SamplerError(RuntimeError):
    pass


@dataclass
class Distribution:
    probs: np.ndarray
    n: int

    def __post_init__(self):
        self.probs = np.asarray(self.probs, dtype=float)
        if self.probs.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} probabilities, got {self.probs.shape}")

    def __getitem__(self, x) -> float:
        if isinstance(x, str):
            x = bits.from_str(x)
        return float(self.probs[x])

    def as_dict(self, tol: float = 0.0) -> dict[str, float]:
        return {bits.to_str(int(x), self.n): float(self.probs[x]) for x in np.flatnonzero(self.probs > tol)}

    def support(self, tol: float = SUPPORT_TOL) -> np.ndarray:
        return np.flatnonzero(self.probs > tol)

    @classmethod
    def from_dict(cls, d: dict[str, float], n: int) -> "Distribution":
        p = np.zeros(1 << n)
        for k, v in d.items():
            p[bits.from_str(k)] += v
        return cls(p, n)

    @classmethod
    def from_samples(cls, samples: Iterable[int], n: int) -> "Distribution":
        counts = np.bincount(np.asarray(list(samples), dtype=np.int64), minlength=1 << n)
        return cls(counts / counts.sum(), n)


@dataclass
class SampleTrace:
    output: int
    calls: list[int] = field(default_factory=list)  # probability evaluations per gate
    branch_sets: list[tuple[int, ...] | None] = field(default_factory=list)
    actions: list[str] = field(default_factory=list)

    @property
    def evaluations(self) -> int:
        return sum(self.calls)

    def report(self, n: int) -> str:
        lines = ["gate  action             evals  branch_set"]
        for t, (a, k, s) in enumerate(zip(self.actions, self.calls, self.branch_sets), start=1):
            sset = "-" if s is None else ",".join(bits.to_str(y, n) for y in s)
            lines.append(f"{t:<5} {a:<18} {k:<6} {sset}")
        lines.append(f"total evaluations {self.evaluations}; output {bits.to_str(self.output, n)}")
        return "\n".join(lines)


def _shortcuts(o: AmplitudeOracle, skip_diagonal, apply_permutations) -> tuple[bool, bool]:
    # A perturbed oracle only carries the error guarantee when every gate is
    # sampled from its branch weights, so shortcuts default off there.
    skip = o.exact if skip_diagonal is None else skip_diagonal
    perm = o.exact if apply_permutations is None else apply_permutations
    return skip, perm


def _branch_set(x: int, support: Sequence[int]) -> np.ndarray:
    offsets = bits.deposit(np.arange(1 << len(support), dtype=np.int64), support)
    return (x & ~bits.mask_of(support)) | offsets


def gate_by_gate_sample(
    c: Circuit,
    o: AmplitudeOracle,
    rng: np.random.Generator,
    skip_diagonal: bool | None = None,
    apply_permutations: bool | None = None,
) -> SampleTrace:
    skip, perm = _shortcuts(o, skip_diagonal, apply_permutations)
    x = 0
    trace = SampleTrace(0)
    for t in range(1, c.m + 1):
        g = c.gate_for(t - 1, x)
        cls = g.gate_class
        if skip and cls is GateClass.DIAGONAL:
            trace.actions.append(SKIP)
            trace.calls.append(0)
            trace.branch_sets.append(None)
            continue
        if perm and cls is not GateClass.GENERAL:
            image, _ = g.permutation
            x = bits.with_local(x, g.support, int(image[bits.local_index(x, g.support)]))
            trace.actions.append(PERMUTE)
            trace.calls.append(0)
            trace.branch_sets.append(None)
            continue
        w = o.branch_probabilities(t, [x], g.support)[0]
        total = float(w.sum())
        if total < ZERO_MASS:
            raise SamplerError(f"branch mass {total:.3g} at gate {t} is below {ZERO_MASS}")
        cdf = np.cumsum(w) / total
        j = min(int(np.searchsorted(cdf, rng.random(), side="right")), len(w) - 1)
        trace.actions.append(BRANCH)
        trace.calls.append(len(w))
        trace.branch_sets.append(tuple(int(y) for y in _branch_set(x, g.support)))
        x = bits.with_local(x, g.support, j)
    trace.output = x
    return trace


def qubit_by_qubit_sample(c: Circuit, o: AmplitudeOracle, rng: np.random.Generator) -> int:
    """Chain rule over marginals of the output state: qubit 0 first."""
    y = 0
    for j in range(1, c.n + 1):
        p0 = marginal_probability(o, c.m, y, j)
        p1 = marginal_probability(o, c.m, y | (1 << (j - 1)), j)
        if p0 + p1 < ZERO_MASS:
            raise SamplerError(f"marginal mass vanished at qubit {j - 1}")
        if rng.random() * (p0 + p1) >= p0:
            y |= 1 << (j - 1)
    return y


def induced_sampler_distribution(
    c: Circuit,
    o: AmplitudeOracle,
    skip_diagonal: bool | None = None,
    apply_permutations: bool | None = None,
) -> Distribution:
    """Exact output law of ``gate_by_gate_sample`` by propagating it gate by gate."""
    n = c.n
    if n > MAX_EXACT_QUBITS:
        raise SamplerError(f"exact propagation limited to {MAX_EXACT_QUBITS} qubits")
    skip, perm = _shortcuts(o, skip_diagonal, apply_permutations)
    idx = np.arange(1 << n, dtype=np.int64)
    q = np.zeros(1 << n)
    q[0] = 1.0
    for t in range(1, c.m + 1):
        alts = c.alternatives(t - 1)
        support = alts[0].support
        ctl = c.adaptive.get(t - 1)
        if ctl is None:
            groups = [(alts[0], np.ones(1 << n, dtype=bool))]
        else:
            groups = ctl.branches(n)
        new = np.zeros_like(q)
        mask = bits.mask_of(support)
        for g, sel in groups:
            live = sel & (q > 0)
            if not live.any():
                continue
            cls = g.gate_class
            if skip and cls is GateClass.DIAGONAL:
                new[live] += q[live]
                continue
            if perm and cls is not GateClass.GENERAL:
                image, _ = g.permutation
                xs = idx[live]
                ys = bits.with_local(xs, support, image[bits.local_index(xs, support)])
                np.add.at(new, ys, q[live])
                continue
            classes = idx[live] & ~mask
            mass = np.bincount(classes, weights=q[live], minlength=1 << n)
            reps = np.flatnonzero(mass > 0)
            w = o.branch_probabilities(t, reps, support)
            totals = w.sum(axis=1)
            bad = (totals < ZERO_MASS) & (mass[reps] > ZERO_MASS)
            if bad.any():
                raise SamplerError(f"branch mass below {ZERO_MASS} on a reached class at gate {t}")
            ok = totals >= ZERO_MASS
            reps, w, totals = reps[ok], w[ok], totals[ok]
            offsets = bits.deposit(np.arange(1 << len(support), dtype=np.int64), support)
            ys = (reps[:, None] | offsets[None, :]).reshape(-1)
            np.add.at(new, ys, (w * (mass[reps] / totals)[:, None]).reshape(-1))
        q = new
    return Distribution(q, n)


def _embed(g: Gate, n: int, cols: np.ndarray) -> sp.coo_matrix:
    """Sparse full-register matrix of ``g`` restricted to the given columns."""
    lc = bits.local_index(cols, g.support)
    rows, cs, vals = [], [], []
    for r in range(1 << g.width):
        v = g.matrix[r, lc]
        nz = v != 0
        rows.append(bits.with_local(cols[nz], g.support, r))
        cs.append(cols[nz])
        vals.append(v[nz])
    dim = 1 << n
    return sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cs))), shape=(dim, dim))


def circuit_operator(c: Circuit, t: int) -> sp.csr_matrix:
    """Sparse ``U_t`` on the full register; adaptive slots become multiplexed unitaries."""
    ctl = c.adaptive.get(t)
    idx = np.arange(1 << c.n, dtype=np.int64)
    if ctl is None:
        return _embed(c.gates[t], c.n, idx).tocsr()
    return sum((_embed(g, c.n, idx[sel]) for g, sel in ctl.branches(c.n)), start=sp.csr_matrix((1 << c.n, 1 << c.n))).tocsr()


def reference_distribution(c: Circuit) -> Distribution:
    if c.n > MAX_EXACT_QUBITS:
        raise SamplerError(f"reference distribution limited to {MAX_EXACT_QUBITS} qubits")
    psi = np.zeros(1 << c.n, dtype=complex)
    psi[0] = 1.0
    for t in range(c.m):
        psi = circuit_operator(c, t) @ psi
    return Distribution(np.abs(psi) ** 2, c.n)


def tv_distance(p: Distribution, q: Distribution) -> tuple[float, float]:
    """Return ``(L1, TV)`` with ``TV = L1 / 2``."""
    if p.n != q.n:
        raise ValueError("distributions over different register sizes")
    l1 = float(np.abs(p.probs - q.probs).sum())
    return l1, l1 / 2


def chi_square_gof(samples: Sequence[int], ref: Distribution) -> tuple[float, float]:
    """Pearson statistic and p-value; any sample off the support fails outright."""
    samples = np.asarray(samples, dtype=np.int64)
    supp = ref.support()
    p = ref.probs[supp]
    if len(samples) < 5 / p.min():
        raise ValueError(f"need at least {int(np.ceil(5 / p.min()))} samples, got {len(samples)}")
    counts = np.bincount(samples, minlength=1 << ref.n)
    if counts.sum() != counts[supp].sum():
        return float("inf"), 0.0
    if len(supp) == 1:
        return 0.0, 1.0
    expected = len(samples) * p / p.sum()
    res = stats.chisquare(counts[supp], expected)
    return float(res.statistic), float(res.pvalue)
