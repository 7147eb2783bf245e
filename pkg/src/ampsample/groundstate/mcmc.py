"""Lazy Metropolis-Hastings sampling of |psi(x)|^2 from amplitude ratios."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .hamiltonian import SparseHamiltonian, exact_ground_state, sensitivity

SUPPORT_TOL = 1e-24
MAX_CHAIN_STATES = 4096


class ChainError(ValueError):
    pass


class GroundStateOracle:
    """Ratio access to a target law ``pi``."""

    def ratio(self, x: int, y: int) -> float:
        raise NotImplementedError

    def in_support(self, x: int) -> bool:
        raise NotImplementedError


class ExactGroundStateOracle(GroundStateOracle):
    """Ratios read off a dense table of ``pi``."""

    def __init__(self, pi: np.ndarray, tol: float = SUPPORT_TOL):
        self.pi = np.asarray(pi, dtype=float)
        self.n = int(len(self.pi)).bit_length() - 1
        self.tol = tol
        self.calls = 0

    @classmethod
    def from_hamiltonian(cls, h: SparseHamiltonian) -> "ExactGroundStateOracle":
        return cls(exact_ground_state(h).pi)

    def in_support(self, x: int) -> bool:
        return bool(self.pi[x] > self.tol)

    def ratio(self, x: int, y: int) -> float:
        if not self.in_support(x):
            raise ChainError(f"state {x} is outside the support")
        self.calls += 1
        return float(self.pi[y] / self.pi[x])

    def support(self) -> np.ndarray:
        return np.flatnonzero(self.pi > self.tol)


@dataclass
class ChainConfig:
    n: int
    k: int
    x_in: int = 0
    steps: int = 1000
    seed: int | None = None
    eps: float = 0.01
    masks: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if not 0 <= self.k <= self.n:
            raise ChainError(f"proposal radius {self.k} outside [0, {self.n}]")
        if self.steps < 0:
            raise ChainError("steps must be nonnegative")
        out = [0]
        for j in range(1, self.k + 1):
            for combo in itertools.combinations(range(self.n), j):
                out.append(sum(1 << q for q in combo))
        self.masks = np.array(out, dtype=np.int64)

    @property
    def N(self) -> int:
        return len(self.masks)


def proposal_size(n: int, k: int) -> int:
    return sum(math.comb(n, j) for j in range(k + 1))


def propose(x: int, cfg: ChainConfig, rng: np.random.Generator) -> int:
    return x ^ int(cfg.masks[rng.integers(cfg.N)])


def metropolis_step(x: int, o: GroundStateOracle, cfg: ChainConfig, rng: np.random.Generator) -> tuple[int, bool]:
    """One lazy step; returns the new state and whether a move happened."""
    if rng.random() < 0.5:
        return x, False
    y = propose(x, cfg, rng)
    if y == x or not o.in_support(y):
        return x, False
    if rng.random() < min(1.0, o.ratio(x, y)):
        return y, True
    return x, False


@dataclass
class ChainResult:
    final: int
    steps: int
    moves: int

    @property
    def acceptance(self) -> float:
        return self.moves / self.steps if self.steps else 0.0


def run_chain(o: GroundStateOracle, cfg: ChainConfig, rng: np.random.Generator | None = None) -> ChainResult:
    if not o.in_support(cfg.x_in):
        raise ChainError(f"start state {cfg.x_in} is outside the support")
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    x, moves = cfg.x_in, 0
    for _ in range(cfg.steps):
        x, moved = metropolis_step(x, o, cfg, rng)
        moves += moved
    return ChainResult(x, cfg.steps, moves)


def run_chains(pi: np.ndarray, cfg: ChainConfig, chains: int, rng: np.random.Generator | None = None,
               tol: float = SUPPORT_TOL) -> np.ndarray:
    """Many independent chains at once against a dense ``pi`` table."""
    pi = np.asarray(pi, dtype=float)
    if not pi[cfg.x_in] > tol:
        raise ChainError(f"start state {cfg.x_in} is outside the support")
    rng = np.random.default_rng(cfg.seed) if rng is None else rng
    x = np.full(chains, cfg.x_in, dtype=np.int64)
    for _ in range(cfg.steps):
        hold = rng.random(chains) < 0.5
        y = x ^ cfg.masks[rng.integers(cfg.N, size=chains)]
        u = rng.random(chains)
        py = pi[y]
        move = ~hold & (py > tol) & (u * pi[x] < py)
        x = np.where(move, y, x)
    return x


@dataclass
class ChainMatrix:
    states: np.ndarray
    P: np.ndarray
    pi: np.ndarray
    eigenvalues: np.ndarray  # descending
    row_residual: float
    balance_residual: float

    @property
    def lambda1(self) -> float:
        return float(self.eigenvalues[1]) if len(self.eigenvalues) > 1 else 0.0

    def index(self, x: int) -> int:
        i = int(np.searchsorted(self.states, x))
        if i >= len(self.states) or self.states[i] != x:
            raise ChainError(f"state {x} is not in the chain's state space")
        return i


def chain_matrix(o: GroundStateOracle, support, cfg: ChainConfig, pi=None) -> ChainMatrix:
    """Exact transition matrix on ``support``.

    ``pi`` (over the support) is taken from the oracle's table when available,
    otherwise from ratios against the first support state.
    """
    states = np.unique(np.asarray(support, dtype=np.int64))
    size = len(states)
    if size > MAX_CHAIN_STATES:
        raise ChainError(f"support of {size} states exceeds {MAX_CHAIN_STATES}")
    pos = {int(s): i for i, s in enumerate(states)}
    P = np.zeros((size, size))
    for i, x in enumerate(states):
        x = int(x)
        for mask in cfg.masks[1:]:
            y = x ^ int(mask)
            j = pos.get(y)
            if j is not None:
                P[i, j] = 0.5 / cfg.N * min(1.0, o.ratio(x, y))
        P[i, i] = 1.0 - P[i].sum()
    if pi is None:
        if isinstance(o, ExactGroundStateOracle):
            pi = o.pi[states]
        else:
            pi = np.array([o.ratio(int(states[0]), int(y)) for y in states])
    pi = np.asarray(pi, dtype=float)
    pi = pi / pi.sum()
    row_res = float(np.max(np.abs(P.sum(axis=1) - 1)))
    flow = pi[:, None] * P
    bal_res = float(np.max(np.abs(flow - flow.T)))
    # reversible chain: D^1/2 P D^-1/2 is symmetric with the same spectrum
    r = np.sqrt(pi)
    sym = r[:, None] * P / r[None, :]
    eig = np.linalg.eigvalsh((sym + sym.T) / 2)[::-1]
    return ChainMatrix(states, P, pi, eig, row_res, bal_res)


def mixing_time(lambda1: float, pi_in: float, eps: float) -> float:
    """Steps after which the decay bound drops below ``eps``."""
    if lambda1 <= 0:
        return 0.0
    if lambda1 >= 1:
        return math.inf
    return max(0.0, math.log(2 * eps * math.sqrt(pi_in)) / math.log(lambda1))


def runtime_estimate(n: int, k: int, s: float, gap: float, pi_in: float, eps: float) -> float:
    """Scaling estimate of ratio calls, constant taken as 1."""
    return n**k * s / gap * math.log(1 / (pi_in * eps))


@dataclass
class DecayReport:
    tv: np.ndarray  # TV distance after t steps, t = 0..t_max
    l1: np.ndarray
    bound: np.ndarray  # lambda1^t / (2 sqrt(pi_in))

    @property
    def tv_holds(self) -> bool:
        return bool(np.all(self.tv <= self.bound + 1e-12))

    @property
    def l1_holds(self) -> bool:
        return bool(np.all(self.l1 <= self.bound + 1e-12))


def tv_decay_check(cm: ChainMatrix, x_in: int, t_max: int = 200) -> DecayReport:
    i = cm.index(x_in)
    p = np.zeros(len(cm.states))
    p[i] = 1.0
    l1 = np.empty(t_max + 1)
    for t in range(t_max + 1):
        l1[t] = np.abs(p - cm.pi).sum()
        p = p @ cm.P
    ts = np.arange(t_max + 1)
    bound = np.maximum(cm.lambda1, 0.0) ** ts / (2 * np.sqrt(cm.pi[i]))
    return DecayReport(l1 / 2, l1, bound)


@dataclass
class GapReport:
    gap: float
    s: float
    N: int
    lambda1: float
    lhs: float  # 1 - lambda1
    rhs: float  # gap / (2 N s)
    holds: bool
    pi_in: float
    mixing_time: float
    runtime_estimate: float
    chain: ChainMatrix = field(repr=False)


def gap_bound_check(h: SparseHamiltonian, cfg: ChainConfig) -> GapReport:
    if h.n > 10:
        raise ChainError("gap check limited to 10 qubits")
    if cfg.k < h.k:
        raise ChainError(f"proposal radius {cfg.k} is below the Hamiltonian's coupling range {h.k}")
    gs = exact_ground_state(h)
    o = ExactGroundStateOracle(gs.pi)
    if not o.in_support(cfg.x_in):
        raise ChainError(f"start state {cfg.x_in} is outside the support")
    s = sensitivity(h, gs.psi)
    cm = chain_matrix(o, o.support(), cfg)
    lhs = 1.0 - cm.lambda1
    if s > 0:
        rhs = gs.gap / (2 * cfg.N * s)
        holds = lhs >= rhs - 1e-10
    else:
        # no coupled pair inside the support: only a single-state chain is consistent
        rhs = math.inf
        holds = len(cm.states) == 1
    pi_in = float(cm.pi[cm.index(cfg.x_in)])
    return GapReport(
        gs.gap, s, cfg.N, cm.lambda1, lhs, rhs, holds, pi_in,
        mixing_time(cm.lambda1, pi_in, cfg.eps),
        runtime_estimate(h.n, cfg.k, s, gs.gap, pi_in, cfg.eps) if s > 0 else 0.0,
        cm,
    )


def diag_min_start(h: SparseHamiltonian, o: GroundStateOracle | None = None) -> int:
    """Lowest-diagonal string, restricted to the oracle's support when given."""
    d = h.diagonal()
    order = np.argsort(d, kind="stable")
    for x in order:
        if o is None or o.in_support(int(x)):
            return int(x)
    raise ChainError("no state of the support found")
