"""GF(2) linear algebra on int bitsets (bit j of a row = column j)."""

from __future__ import annotations

from typing import Iterable, Sequence


def parity(x: int) -> int:
    return x.bit_count() & 1


def rank(rows: Iterable[int]) -> int:
    return len(echelon_basis(rows))


def echelon_basis(rows: Iterable[int]) -> list[int]:
    """An echelon basis of the row span, keyed by distinct leading bits."""
    pivots: dict[int, int] = {}
    for row in rows:
        while row:
            lead = row.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = row
                break
            row ^= pivots[lead]
    return list(pivots.values())


def rref(rows: Iterable[int]) -> tuple[int, ...]:
    """Canonical reduced row echelon form.

    Pivots are leading (highest) bits; rows are sorted by decreasing pivot
    and each pivot bit is cleared from every other row, so the result
    depends only on the span.
    """
    basis = sorted(echelon_basis(rows), reverse=True)
    for i in range(len(basis)):
        lead = 1 << (basis[i].bit_length() - 1)
        for j in range(len(basis)):
            if j != i and basis[j] & lead:
                basis[j] ^= basis[i]
    return tuple(sorted(basis, reverse=True))


def in_span(vec: int, rows: Sequence[int]) -> bool:
    for b in sorted(echelon_basis(rows), reverse=True):
        if vec & (1 << (b.bit_length() - 1)):
            vec ^= b
    return vec == 0


def span(rows: Sequence[int]) -> list[int]:
    """All 2^k elements of the span; element i is the XOR of rows j over the set bits of i."""
    out = [0]
    for b in rows:
        out += [x ^ b for x in out]
    return out


def row_dependencies(rows: Sequence[int]) -> tuple[list[int], list[int]]:
    """Split row indices into a maximal independent prefix-greedy set and
    a basis of the dependency space.

    Returns ``(independent, kernel)`` where ``independent`` lists row
    indices and ``kernel`` holds bitmasks c over row indices with
    XOR_{i in c} rows[i] == 0.
    """
    pivots: dict[int, tuple[int, int]] = {}
    independent: list[int] = []
    kernel: list[int] = []
    for i, row in enumerate(rows):
        combo = 1 << i
        while row:
            lead = row.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = (row, combo)
                independent.append(i)
                break
            prow, pcombo = pivots[lead]
            row ^= prow
            combo ^= pcombo
        else:
            kernel.append(combo)
    return independent, kernel


def nullspace(rows: Sequence[int], ncols: int) -> list[int]:
    """Basis of {x in GF(2)^ncols : parity(row & x) == 0 for every row}."""
    basis = rref(rows)
    pivot_cols = [b.bit_length() - 1 for b in basis]
    free = [c for c in range(ncols) if c not in set(pivot_cols)]
    out = []
    for f in free:
        x = 1 << f
        for b, p in zip(basis, pivot_cols):
            if b >> f & 1:
                x |= 1 << p
        out.append(x)
    return out


def transpose(rows: Sequence[int], ncols: int) -> list[int]:
    out = [0] * ncols
    for i, row in enumerate(rows):
        for j in range(ncols):
            if row >> j & 1:
                out[j] |= 1 << i
    return out


def mat_vec(rows: Sequence[int], x: int) -> int:
    """y with y_i = parity(rows[i] & x)."""
    y = 0
    for i, row in enumerate(rows):
        y |= parity(row & x) << i
    return y


def inverse(rows: Sequence[int]) -> list[int]:
    """Inverse of a square matrix given as rows; rows[i] bit j = M[i][j]."""
    n = len(rows)
    work = [(rows[i], 1 << i) for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if work[i][0] >> col & 1), None)
        if piv is None:
            raise ValueError("matrix is singular over GF(2)")
        work[col], work[piv] = work[piv], work[col]
        pr, pc = work[col]
        for i in range(n):
            if i != col and work[i][0] >> col & 1:
                work[i] = (work[i][0] ^ pr, work[i][1] ^ pc)
    return [c for _, c in work]


__all__ = [
    "echelon_basis",
    "in_span",
    "inverse",
    "mat_vec",
    "nullspace",
    "parity",
    "rank",
    "row_dependencies",
    "rref",
    "span",
    "transpose",
]
