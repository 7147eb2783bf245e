"""Sparse qubit Hamiltonians in the computational basis."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .. import bits
from ..circuit import parse_complex

MAX_QUBITS = 14
DENSE_LIMIT = 4096
HERMITIAN_TOL = 1e-10
DEGENERACY_TOL = 1e-8
PSI_TOL = 1e-12


class HamiltonianError(ValueError):
    pass


class DegenerateGroundStateError(HamiltonianError):
    pass


def pauli_matrix(word: str) -> sp.csr_matrix:
    """Sparse matrix of a Pauli word; character ``i`` acts on qubit ``i``."""
    n = len(word)
    word = word.upper()
    if set(word) - set("IXYZ"):
        raise HamiltonianError(f"bad Pauli word {word!r}")
    flip = bits.mask_of(i for i, p in enumerate(word) if p in "XY")
    zmask = bits.mask_of(i for i, p in enumerate(word) if p in "YZ")
    n_y = word.count("Y")
    x = np.arange(1 << n, dtype=np.int64)
    sign = 1 - 2 * (bits.popcount(x & zmask) & 1)
    vals = (1j**n_y) * sign
    return sp.csr_matrix((vals.astype(complex), (x ^ flip, x)), shape=(1 << n, 1 << n))


@dataclass
class SparseHamiltonian:
    n: int
    matrix: sp.csr_matrix
    terms: tuple[tuple[complex, str], ...] = ()

    def __post_init__(self):
        if not 1 <= self.n <= MAX_QUBITS:
            raise HamiltonianError(f"qubit count {self.n} outside [1, {MAX_QUBITS}]")
        self.matrix = sp.csr_matrix(self.matrix, dtype=complex)
        if self.matrix.shape != (1 << self.n, 1 << self.n):
            raise HamiltonianError(f"matrix shape {self.matrix.shape} does not fit {self.n} qubits")
        self.matrix.eliminate_zeros()
        diff = self.matrix - self.matrix.getH()
        if diff.nnz and np.max(np.abs(diff.data)) > HERMITIAN_TOL:
            raise HamiltonianError("Hamiltonian is not Hermitian")

    @classmethod
    def from_terms(cls, n: int, terms: Sequence[tuple[complex, str]]) -> "SparseHamiltonian":
        mat = sp.csr_matrix((1 << n, 1 << n), dtype=complex)
        for coeff, word in terms:
            if len(word) != n:
                raise HamiltonianError(f"Pauli word {word!r} is not of length {n}")
            mat = mat + coeff * pauli_matrix(word)
        return cls(n, mat, tuple((complex(c), w.upper()) for c, w in terms))

    @classmethod
    def from_matrix(cls, m) -> "SparseHamiltonian":
        m = sp.csr_matrix(m)
        n = int(m.shape[0]).bit_length() - 1
        if m.shape[0] != 1 << n:
            raise HamiltonianError("matrix dimension is not a power of two")
        return cls(n, m)

    @property
    def dim(self) -> int:
        return 1 << self.n

    @property
    def k(self) -> int:
        """Largest Hamming distance between basis states coupled by H."""
        coo = self.matrix.tocoo()
        if coo.nnz == 0:
            return 0
        return int(np.max(bits.popcount(coo.row.astype(np.int64) ^ coo.col.astype(np.int64))))

    def diagonal(self) -> np.ndarray:
        return self.matrix.diagonal().real

    def off_diagonal(self) -> sp.coo_matrix:
        off = self.matrix - sp.diags(self.matrix.diagonal())
        off = sp.coo_matrix(off)
        off.eliminate_zeros()
        return off

    def entry(self, y: int, x: int) -> complex:
        return complex(self.matrix[y, x])

    def dense(self) -> np.ndarray:
        return self.matrix.toarray()


def parse_hamiltonian(text: str, base_dir: str | Path | None = None, source: str | None = None) -> SparseHamiltonian:
    n = None
    terms: list[tuple[complex, str]] = []
    extra: list[sp.coo_matrix] = []
    where = source or "<hamiltonian>"
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        try:
            if toks[0] == "qubits" and len(toks) == 2:
                if n is not None:
                    raise HamiltonianError("repeated 'qubits' line")
                n = int(toks[1])
            elif n is None:
                raise HamiltonianError("'qubits N' must come first")
            elif toks[0] == "term" and len(toks) == 3:
                if len(toks[2]) != n:
                    raise HamiltonianError(f"Pauli word {toks[2]!r} is not of length {n}")
                terms.append((parse_complex(toks[1]), toks[2]))
            elif toks[0] == "matrix-file" and len(toks) == 2:
                path = Path(toks[1])
                if not path.is_absolute() and base_dir is not None:
                    path = Path(base_dir) / path
                extra.append(load_matrix_entries(path, n))
            else:
                raise HamiltonianError(f"cannot parse {line!r}")
        except (ValueError, OSError) as exc:
            raise HamiltonianError(f"{where}:{lineno}: {exc}") from None
    if n is None:
        raise HamiltonianError(f"{where}: missing 'qubits N' line")
    h = SparseHamiltonian.from_terms(n, terms)
    if extra:
        mat = h.matrix + sum(extra[1:], start=extra[0]).tocsr()
        h = SparseHamiltonian(n, mat, h.terms)
    return h


def load_matrix_entries(path: str | Path, n: int) -> sp.coo_matrix:
    """Lines ``x y re im`` with ``x``, ``y`` bit strings; entry is ``<x|H|y>``."""
    rows, cols, vals = [], [], []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        if len(toks) != 4 or len(toks[0]) != n or len(toks[1]) != n:
            raise HamiltonianError(f"{path}:{lineno}: expected 'x y re im' with {n}-bit strings")
        rows.append(bits.from_str(toks[0]))
        cols.append(bits.from_str(toks[1]))
        vals.append(complex(float(toks[2]), float(toks[3])))
    return sp.coo_matrix((np.array(vals, dtype=complex), (rows, cols)), shape=(1 << n, 1 << n))


def load_hamiltonian(path: str | Path) -> SparseHamiltonian:
    path = Path(path)
    return parse_hamiltonian(path.read_text(), base_dir=path.parent, source=str(path))


@dataclass(frozen=True)
class GroundState:
    energy: float
    gap: float
    psi: np.ndarray

    @property
    def pi(self) -> np.ndarray:
        return np.abs(self.psi) ** 2


def lowest_eigenpairs(h: SparseHamiltonian, k: int = 2) -> tuple[np.ndarray, np.ndarray]:
    k = min(k, h.dim)
    if h.dim <= DENSE_LIMIT:
        w, v = np.linalg.eigh(h.dense())
        return w[:k], v[:, :k]
    w, v = spla.eigsh(h.matrix, k=k, which="SA", tol=1e-12)
    order = np.argsort(w)
    return w[order], v[:, order]


def exact_ground_state(h: SparseHamiltonian, degeneracy_tol: float = DEGENERACY_TOL) -> GroundState:
    w, v = lowest_eigenpairs(h, 2)
    gap = float(w[1] - w[0]) if len(w) > 1 else np.inf
    if gap < degeneracy_tol:
        raise DegenerateGroundStateError(f"ground space is degenerate (gap {gap:.3g})")
    psi = v[:, 0]
    j = int(np.argmax(np.abs(psi)))
    psi = psi * (abs(psi[j]) / psi[j])
    return GroundState(float(w[0]), gap, psi)


def sensitivity(h: SparseHamiltonian, psi: np.ndarray, tol: float = PSI_TOL) -> float:
    """Largest ``|<y|H|x><x|psi>| / |<y|psi>|`` over coupled pairs ``x != y``."""
    off = h.off_diagonal()
    if off.nnz == 0:
        return 0.0
    psi = np.asarray(psi)
    y, x = off.row, off.col
    live = np.abs(psi[y]) > tol
    if not live.any():
        raise HamiltonianError("every coupled string has zero amplitude; sensitivity is undefined")
    return float(np.max(np.abs(off.data[live] * psi[x[live]]) / np.abs(psi[y[live]])))


def stoquastic_check_and_bound(h: SparseHamiltonian, tol: float = PSI_TOL) -> tuple[bool, float]:
    off = h.off_diagonal()
    ok = bool(off.nnz == 0 or (np.all(np.abs(off.data.imag) <= tol) and np.all(off.data.real <= tol)))
    e0 = float(lowest_eigenpairs(h, 1)[0][0])
    return ok, float(h.diagonal().max() - e0)


def tfim(n: int, j: float = 1.0, field: float = 1.0, periodic: bool = False) -> SparseHamiltonian:
    """``-j sum Z_i Z_{i+1} - field sum X_i``."""
    def word(ops):
        w = ["I"] * n
        for q, p in ops:
            w[q] = p
        return "".join(w)

    bonds = [(i, (i + 1) % n) for i in range(n if periodic and n > 2 else n - 1)]
    terms = [(-j, word([(a, "Z"), (b, "Z")])) for a, b in bonds]
    terms += [(-field, word([(i, "X")])) for i in range(n)]
    return SparseHamiltonian.from_terms(n, terms)


def random_local_hamiltonian(n: int, k: int, rng: np.random.Generator, n_terms: int | None = None,
                             stoquastic: bool = False, attempts: int = 100) -> SparseHamiltonian:
    """Random Pauli sum of ``k``-local words with a nondegenerate ground state.

    Stoquastic instances use pure-X words with negative weights plus Z words.
    Every qubit gets an X or Y so the off-diagonal part is not empty.
    """
    n_terms = 2 * n if n_terms is None else n_terms
    letters = "XZ" if stoquastic else "XYZ"
    for _ in range(attempts):
        terms = []
        for t in range(n_terms):
            width = int(rng.integers(1, k + 1))
            qs = rng.choice(n, size=width, replace=False)
            w = ["I"] * n
            if stoquastic:
                p = str(rng.choice(list(letters)))
                for q in qs:
                    w[q] = p
                c = -abs(rng.standard_normal()) if p == "X" else rng.standard_normal()
            else:
                for q in qs:
                    w[q] = str(rng.choice(list(letters)))
                c = rng.standard_normal()
            terms.append((float(c), "".join(w)))
        for q in range(n):
            w = ["I"] * n
            w[q] = "X" if stoquastic else str(rng.choice(["X", "Y"]))
            terms.append((-abs(float(rng.standard_normal())) - 0.1, "".join(w)))
        h = SparseHamiltonian.from_terms(n, terms)
        try:
            exact_ground_state(h)
        except DegenerateGroundStateError:
            continue
        return h
    raise HamiltonianError("could not draw a Hamiltonian with a unique ground state")
