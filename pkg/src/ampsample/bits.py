"""Basis-string helpers.

A basis string over ``n`` qubits is a Python ``int`` whose bit ``i`` is the
value of qubit ``i``.  The text form puts qubit 0 first, so ``"10"`` on two
qubits is the integer ``1``.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


def to_str(x: int, n: int) -> str:
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def from_str(s: str) -> int:
    s = s.strip()
    if not s or any(ch not in "01" for ch in s):
        raise ValueError(f"not a bit string: {s!r}")
    return sum(1 << i for i, ch in enumerate(s) if ch == "1")


def bit(x: int, q: int) -> int:
    return (x >> q) & 1


def mask_of(qubits: Iterable[int]) -> int:
    m = 0
    for q in qubits:
        m |= 1 << q
    return m


def local_index(x, support: Sequence[int]):
    """Read the bits of ``x`` on ``support``; ``support[0]`` is the least significant.

    Works on ints and on integer numpy arrays.
    """
    j = 0 if isinstance(x, (int, np.integer)) else np.zeros_like(x)
    for i, q in enumerate(support):
        j = j | (((x >> q) & 1) << i)
    return j


def deposit(j, support: Sequence[int]):
    """Inverse of :func:`local_index`: spread the bits of ``j`` onto ``support``."""
    x = 0 if isinstance(j, (int, np.integer)) else np.zeros_like(j)
    for i, q in enumerate(support):
        x = x | (((j >> i) & 1) << q)
    return x


def with_local(x, support: Sequence[int], j):
    return (x & ~mask_of(support)) | deposit(j, support)


def restrict(x: int, qubits: Sequence[int]) -> tuple[int, ...]:
    """The restriction ``x_A`` as a tuple of bits in the order of ``qubits``."""
    return tuple((x >> q) & 1 for q in qubits)


def popcount(x) -> int:
    if isinstance(x, (int, np.integer)):
        return int(x).bit_count()
    x = np.asarray(x, dtype=np.uint64)
    c = np.zeros(x.shape, dtype=np.int64)
    while np.any(x):
        c += (x & np.uint64(1)).astype(np.int64)
        x = x >> np.uint64(1)
    return c


def hamming(x: int, y: int) -> int:
    return (x ^ y).bit_count()
