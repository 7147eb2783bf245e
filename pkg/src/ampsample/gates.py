"""Standard gate matrices.

Multi-qubit matrices use the support-ordered little-endian convention: for a
gate on ``(q0, q1)`` the row/column index is ``b(q0) + 2 * b(q1)``.
"""

from __future__ import annotations

import numpy as np

SQRT2 = np.sqrt(2.0)

I2 = np.eye(2, dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
S = np.array([[1, 0], [0, 1j]], dtype=complex)
SDG = S.conj().T
T = np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex)
TDG = T.conj().T

# control = first listed qubit (least significant), target = second
CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0],
     [0, 1, 0, 0]],
    dtype=complex,
)
CZ = np.diag([1, 1, 1, -1]).astype(complex)
SWAP = np.array(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]],
    dtype=complex,
)


def rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def rx(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


# name -> (arity, matrix)
FIXED = {
    "i": (1, I2),
    "id": (1, I2),
    "h": (1, H),
    "x": (1, X),
    "y": (1, Y),
    "z": (1, Z),
    "s": (1, S),
    "sdg": (1, SDG),
    "t": (1, T),
    "tdg": (1, TDG),
    "cx": (2, CNOT),
    "cnot": (2, CNOT),
    "cz": (2, CZ),
    "swap": (2, SWAP),
}

ROTATIONS = {"rz": rz, "rx": rx, "ry": ry}

CLIFFORD_NAMES = frozenset({"i", "id", "h", "x", "y", "z", "s", "sdg", "cx", "cnot", "cz"})

ALIASES = {"id": "i", "cnot": "cx"}


def canonical(name: str) -> str:
    name = name.lower()
    return ALIASES.get(name, name)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / SQRT2
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
