"""Frustration-free Hamiltonians ``H = -sum_a sum_j |phi_aj><phi_aj|`` whose
projector supports are disjoint within each family ``a``.

For such H the ground-state amplitude ratio of two strings coupled by H equals
the ratio inside the one projector state that contains both.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .. import bits
from ..circuit import format_complex, parse_complex
from .hamiltonian import (
    DegenerateGroundStateError,
    SparseHamiltonian,
    exact_ground_state,
    lowest_eigenpairs,
    sensitivity,
)
from .mcmc import GroundStateOracle

NORM_TOL = 1e-10
BFS_BUDGET = 1 << 20


class MagicRatioError(ValueError):
    pass


State = dict[int, complex]


@dataclass
class MagicRatioHamiltonian:
    n: int
    families: list[list[State]]
    validate: bool = True
    _owner: list[dict[int, int]] = field(init=False, repr=False)

    def __post_init__(self):
        self.families = [[{int(x): complex(a) for x, a in phi.items() if a != 0} for phi in fam] for fam in self.families]
        self._owner = []
        for fam in self.families:
            owner: dict[int, int] = {}
            for j, phi in enumerate(fam):
                for x in phi:
                    if not 0 <= x < 1 << self.n:
                        raise MagicRatioError(f"string {x} does not fit {self.n} qubits")
                    owner.setdefault(x, j)
            self._owner.append(owner)
        if self.validate:
            problems = self.structure_problems()
            if problems:
                raise MagicRatioError("; ".join(problems))

    @property
    def m(self) -> int:
        return len(self.families)

    def structure_problems(self) -> list[str]:
        out = []
        for a, fam in enumerate(self.families):
            seen: set[int] = set()
            for j, phi in enumerate(fam):
                if seen & phi.keys():
                    out.append(f"family {a}: state {j} overlaps an earlier state's support")
                seen |= phi.keys()
                norm = sum(abs(v) ** 2 for v in phi.values())
                if abs(norm - 1) > NORM_TOL:
                    out.append(f"family {a}: state {j} has squared norm {norm:.12g}")
        return out

    def owner(self, a: int, x: int) -> State | None:
        j = self._owner[a].get(x)
        return None if j is None else self.families[a][j]

    def covered(self, x: int) -> bool:
        """True when every family has a projector state containing ``x``."""
        return all(x in own for own in self._owner)

    def neighbours(self, x: int):
        for a in range(self.m):
            phi = self.owner(a, x)
            if phi is not None:
                yield a, phi

    def projector(self, a: int) -> sp.csr_matrix:
        dim = 1 << self.n
        out = sp.csr_matrix((dim, dim), dtype=complex)
        for phi in self.families[a]:
            idx = np.fromiter(phi.keys(), dtype=np.int64)
            v = np.fromiter(phi.values(), dtype=complex)
            rows = np.repeat(idx, len(idx))
            cols = np.tile(idx, len(idx))
            out = out + sp.csr_matrix((np.outer(v, v.conj()).reshape(-1), (rows, cols)), shape=(dim, dim))
        return out

    def to_sparse(self) -> SparseHamiltonian:
        dim = 1 << self.n
        mat = sp.csr_matrix((dim, dim), dtype=complex)
        for a in range(self.m):
            mat = mat - self.projector(a)
        return SparseHamiltonian(self.n, mat)


def magic_ratio(hm: MagicRatioHamiltonian, x: int, y: int) -> float:
    """``pi(y)/pi(x)`` for strings coupled by H, from one projector state."""
    if x == y:
        return 1.0
    for a in range(hm.m):
        phi = hm.owner(a, y)
        if phi is not None and x in phi:
            return float(abs(phi[y] / phi[x]) ** 2)
    raise MagicRatioError(f"no projector state contains both {bits.to_str(x, hm.n)} and {bits.to_str(y, hm.n)}")


class MagicRatioOracle(GroundStateOracle):
    """Ratio oracle for the unique ground state of a magic-ratio Hamiltonian.

    ``x_ref`` must lie in the support.  Pairs coupled by H use one lookup;
    other pairs use a product of lookups along a chain of coupled strings,
    found by breadth-first search over the component of ``x_ref``.  Strings
    outside that component carry zero weight.
    """

    def __init__(self, hm: MagicRatioHamiltonian, x_ref: int | None = None, budget: int = BFS_BUDGET):
        self.hm = hm
        self.x_ref = default_start(hm) if x_ref is None else x_ref
        if not hm.covered(self.x_ref):
            raise MagicRatioError(f"reference string {bits.to_str(self.x_ref, hm.n)} is not in the support")
        self.budget = budget
        self._weights: dict[int, float] | None = None
        self.calls = 0

    def _component(self) -> dict[int, float]:
        if self._weights is None:
            w = {self.x_ref: 1.0}
            queue = deque([self.x_ref])
            while queue:
                z = queue.popleft()
                for _, phi in self.hm.neighbours(z):
                    for u, amp in phi.items():
                        if u not in w:
                            w[u] = w[z] * abs(amp / phi[z]) ** 2
                            if len(w) > self.budget:
                                raise MagicRatioError(f"support search exceeded {self.budget} strings")
                            queue.append(u)
            self._weights = w
        return self._weights

    def in_support(self, x: int) -> bool:
        if not self.hm.covered(x):
            return False
        return x in self._component()

    def ratio(self, x: int, y: int) -> float:
        self.calls += 1
        try:
            return magic_ratio(self.hm, x, y)
        except MagicRatioError:
            pass
        w = self._component()
        if x not in w:
            raise MagicRatioError(f"string {bits.to_str(x, self.hm.n)} is outside the support")
        return w.get(y, 0.0) / w[x]

    def pi(self) -> np.ndarray:
        """Dense law on the component (small n only)."""
        p = np.zeros(1 << self.hm.n)
        for x, v in self._component().items():
            p[x] = v
        return p / p.sum()


def default_start(hm: MagicRatioHamiltonian) -> int:
    """Smallest string covered by every family."""
    cands = set(hm._owner[0]) if hm.m else set()
    for own in hm._owner[1:]:
        cands &= own.keys()
    if not cands:
        raise MagicRatioError("no string is covered by every family; the ground state would vanish")
    return min(cands)


@dataclass
class MagicStructureReport:
    problems: list[str]
    frustration_free: bool
    unique: bool
    energy: float
    s: float
    m: int
    ratio_error: float  # max |magic_ratio - eigensolve ratio| over coupled support pairs

    @property
    def disjoint(self) -> bool:
        return not any("overlaps" in p for p in self.problems)

    @property
    def s_bounded(self) -> bool:
        return self.s <= self.m + 1e-9

    @property
    def ok(self) -> bool:
        return not self.problems and self.frustration_free and self.unique and self.s_bounded and self.ratio_error <= 1e-8


def verify_magic_ratio_structure(hm: MagicRatioHamiltonian, tol: float = 1e-8) -> MagicStructureReport:
    if hm.n > 12:
        raise MagicRatioError("structure check limited to 12 qubits")
    problems = hm.structure_problems()
    h = hm.to_sparse()
    w, v = lowest_eigenpairs(h, 2)
    psi = v[:, 0]
    ff = bool(abs(w[0] + hm.m) <= tol) and all(
        np.linalg.norm(hm.projector(a) @ psi - psi) <= tol for a in range(hm.m)
    )
    unique = True
    try:
        psi = exact_ground_state(h).psi
    except DegenerateGroundStateError:
        unique = False
    s = sensitivity(h, psi)
    err = 0.0
    pi = np.abs(psi) ** 2
    off = h.off_diagonal()
    for y, x in zip(off.row, off.col):
        if pi[x] > 1e-12 and not problems:
            err = max(err, abs(magic_ratio(hm, int(x), int(y)) - pi[y] / pi[x]))
    return MagicStructureReport(problems, ff, unique, float(w[0]), s, hm.m, float(err))


# --------------------------------------------------------------------------
# text format and instance generators


def parse_magic(text: str, source: str | None = None) -> MagicRatioHamiltonian:
    """``qubits N`` then ``family`` blocks of ``state <bits> <re,im> ...`` lines.

    Each state is normalized on reading.
    """
    where = source or "<magic>"
    n = None
    families: list[list[State]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if toks[0] == "qubits" and len(toks) == 2:
                n = int(toks[1])
            elif toks[0] == "family" and len(toks) == 1:
                families.append([])
            elif toks[0] == "state":
                if n is None or not families:
                    raise ValueError("'state' needs a preceding 'qubits' line and 'family' block")
                if len(toks) < 3 or len(toks) % 2 == 0:
                    raise ValueError("expected 'state <bits> <re,im> [<bits> <re,im> ...]'")
                phi: State = {}
                for b, amp in zip(toks[1::2], toks[2::2]):
                    if len(b) != n:
                        raise ValueError(f"bit string {b!r} is not of length {n}")
                    x = bits.from_str(b)
                    if x in phi:
                        raise ValueError(f"string {b} listed twice")
                    phi[x] = parse_complex(amp)
                norm = np.sqrt(sum(abs(a) ** 2 for a in phi.values()))
                if norm == 0:
                    raise ValueError("zero state")
                families[-1].append({x: a / norm for x, a in phi.items()})
            else:
                raise ValueError(f"cannot parse {line!r}")
        except ValueError as exc:
            raise MagicRatioError(f"{where}:{lineno}: {exc}") from None
    if n is None:
        raise MagicRatioError(f"{where}: missing 'qubits N' line")
    return MagicRatioHamiltonian(n, families)


def load_magic(path: str | Path) -> MagicRatioHamiltonian:
    return parse_magic(Path(path).read_text(), source=str(path))


def dumps_magic(hm: MagicRatioHamiltonian) -> str:
    lines = [f"qubits {hm.n}"]
    for fam in hm.families:
        lines.append("family")
        for phi in fam:
            entries = " ".join(f"{bits.to_str(x, hm.n)} {format_complex(a)}" for x, a in sorted(phi.items()))
            lines.append(f"state {entries}")
    return "\n".join(lines) + "\n"


def families_from_target(psi: np.ndarray, n: int, supports: list[tuple[int, ...]]) -> list[list[State]]:
    """One family per qubit subset: blocks of strings agreeing off the subset,
    each carrying the normalized restriction of ``psi``."""
    out = []
    idx = np.arange(1 << n, dtype=np.int64)
    for sup in supports:
        mask = bits.mask_of(sup)
        fam = []
        for base in np.unique(idx & ~mask):
            block = base | bits.deposit(np.arange(1 << len(sup), dtype=np.int64), sup)
            amps = psi[block]
            nz = np.abs(amps) > 0
            if not nz.any():
                continue
            amps = amps / np.linalg.norm(amps)
            fam.append({int(x): complex(a) for x, a, keep in zip(block, amps, nz) if keep})
        out.append(fam)
    return out


def random_magic_instance(n: int, rng: np.random.Generator, k: int = 2, extra: int = 1,
                          sparsity: float = 0.0, attempts: int = 50) -> tuple[MagicRatioHamiltonian, np.ndarray]:
    """Random instance with a known unique ground state ``psi`` (returned).

    Families act on neighbouring pairs (so every string is linked) plus
    ``extra`` random subsets of size ``k``; a fraction ``sparsity`` of the
    target amplitudes is zeroed.
    """
    for _ in range(attempts):
        psi = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
        if sparsity > 0:
            psi[rng.random(1 << n) < sparsity] = 0
            if not psi.any():
                continue
        psi /= np.linalg.norm(psi)
        supports = [(i, i + 1) for i in range(n - 1)] if n > 1 else [(0,)]
        for _ in range(extra):
            supports.append(tuple(sorted(int(q) for q in rng.choice(n, size=min(k, n), replace=False))))
        hm = MagicRatioHamiltonian(n, families_from_target(psi, n, supports))
        try:
            gs = exact_ground_state(hm.to_sparse())
        except DegenerateGroundStateError:
            continue
        if abs(abs(np.vdot(gs.psi, psi)) - 1) < 1e-8:
            return hm, psi
    raise MagicRatioError("could not build an instance with a unique ground state")


def vanishing_pair_instance() -> MagicRatioHamiltonian:
    """Two-qubit instance whose ground state vanishes on a coupled pair.

    Ground state (|00> + |01>)/sqrt2; strings 10 and 11 are coupled by the
    first family yet both carry zero amplitude.
    """
    r = 1 / np.sqrt(2)
    s00, s01, s10, s11 = (bits.from_str(b) for b in ("00", "01", "10", "11"))
    fam_a = [{s00: r, s01: r}, {s10: r, s11: r}]
    fam_b = [{s00: r, s01: r}]
    return MagicRatioHamiltonian(2, [fam_a, fam_b])
