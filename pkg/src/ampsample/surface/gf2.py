"""Linear algebra over GF(2) with vectors stored as Python int bitmasks."""

from __future__ import annotations

from typing import Iterable


def rank(vectors: Iterable[int]) -> int:
    return len(echelon(vectors))


def echelon(vectors: Iterable[int]) -> list[int]:
    """Independent vectors spanning the same space, with distinct leading bits."""
    basis: dict[int, int] = {}
    for v in vectors:
        while v:
            lead = v.bit_length() - 1
            if lead not in basis:
                basis[lead] = v
                break
            v ^= basis[lead]
    return list(basis.values())


def in_span(v: int, vectors: Iterable[int]) -> bool:
    basis = {b.bit_length() - 1: b for b in echelon(vectors)}
    while v:
        lead = v.bit_length() - 1
        if lead not in basis:
            return False
        v ^= basis[lead]
    return True


def nullspace(rows: Iterable[int], ncols: int) -> list[int]:
    """Basis of ``{x : <r, x> = 0 mod 2 for every row r}``."""
    pivots: dict[int, int] = {}  # pivot column -> reduced row
    for r in rows:
        for col, pr in pivots.items():
            if (r >> col) & 1:
                r ^= pr
        if not r:
            continue
        col = (r & -r).bit_length() - 1
        for c in list(pivots):
            if (pivots[c] >> col) & 1:
                pivots[c] ^= r
        pivots[col] = r
    out = []
    for free in range(ncols):
        if free in pivots:
            continue
        x = 1 << free
        for col, pr in pivots.items():
            if (pr >> free) & 1:
                x |= 1 << col
        out.append(x)
    return out
