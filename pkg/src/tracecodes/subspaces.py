"""Exactly-once enumeration of GF(2)-subspaces by canonical RREF.

Vectors are ints of ``ambient_dim`` bits.  Column c of a basis matrix is
bit ``ambient_dim - 1 - c``, so the pivot (first nonzero column) of a row
is its highest set bit.  A k-dimensional subspace is enumerated as a
pivot set (columns in increasing order, lexicographic over
``itertools.combinations``) and a free-bit assignment ``t``: slot j of
the pivot set takes bit j of t, slots being the non-pivot columns to the
right of each pivot, row by row.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterator

import numpy as np

from . import gf2
from .numtheory import gaussian_binomial

MAX_AMBIENT = 24
DEFAULT_CHUNK = 1 << 15


class BudgetExceeded(RuntimeError):
    def __init__(self, count: int, budget: int, what: str = "subspaces"):
        super().__init__(f"{count} {what} exceeds the budget of {budget}")
        self.count = count
        self.budget = budget


@dataclass(frozen=True)
class SubspaceBasis:
    """Canonical RREF basis of a subspace of GF(2)^ambient_dim."""

    rows: tuple[int, ...]
    ambient_dim: int

    @classmethod
    def span_of(cls, vectors, ambient_dim: int) -> "SubspaceBasis":
        vectors = [int(v) for v in vectors]
        if any(v >> ambient_dim for v in vectors):
            raise ValueError(f"vector outside GF(2)^{ambient_dim}")
        return cls(gf2.rref(vectors), ambient_dim)

    @classmethod
    def full(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls.span_of([1 << j for j in range(ambient_dim)], ambient_dim)

    @classmethod
    def zero(cls, ambient_dim: int) -> "SubspaceBasis":
        return cls((), ambient_dim)

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        """Pivot columns, strictly increasing."""
        return tuple(self.ambient_dim - r.bit_length() for r in self.rows)

    def elements(self) -> list[int]:
        return gf2.span(self.rows)

    def __contains__(self, v: int) -> bool:
        return gf2.in_span(v, self.rows)

    def std_dual(self) -> "SubspaceBasis":
        """Annihilator under the standard dot product."""
        return SubspaceBasis.span_of(gf2.nullspace(self.rows, self.ambient_dim), self.ambient_dim)

    def hex_rows(self) -> list[str]:
        return [f"{r:x}" for r in self.rows]


def pivot_sets(ambient_dim: int, k: int) -> list[tuple[int, ...]]:
    return list(combinations(range(ambient_dim), k))


def free_slots(ambient_dim: int, pivots: tuple[int, ...]) -> list[tuple[int, int]]:
    """(row index, bit position) of every free entry for this pivot set."""
    taken = set(pivots)
    return [
        (i, ambient_dim - 1 - c)
        for i, p in enumerate(pivots)
        for c in range(p + 1, ambient_dim)
        if c not in taken
    ]


def pivot_set_size(ambient_dim: int, pivots: tuple[int, ...]) -> int:
    return 1 << len(free_slots(ambient_dim, pivots))


def iter_batches(
    ambient_dim: int, pivots: tuple[int, ...], chunk: int = DEFAULT_CHUNK
) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (first t, rows) for one pivot set; rows has shape (batch, k)."""
    k = len(pivots)
    base = np.array([1 << (ambient_dim - 1 - p) for p in pivots], dtype=np.int64)
    slots = free_slots(ambient_dim, pivots)
    total = 1 << len(slots)
    for start in range(0, total, chunk):
        t = np.arange(start, min(start + chunk, total), dtype=np.int64)
        rows = np.empty((len(t), k), dtype=np.int64)
        rows[:] = base
        for j, (i, bit) in enumerate(slots):
            rows[:, i] |= ((t >> j) & 1) << bit
        yield start, rows


def decode(ambient_dim: int, pivots: tuple[int, ...], t: int) -> tuple[int, ...]:
    """Rows of the subspace with free-bit assignment t."""
    rows = [1 << (ambient_dim - 1 - p) for p in pivots]
    for j, (i, bit) in enumerate(free_slots(ambient_dim, pivots)):
        if t >> j & 1:
            rows[i] |= 1 << bit
    return tuple(rows)


def batch_span(rows: np.ndarray) -> np.ndarray:
    """All 2^k combinations of each batch row set; column 0 is the zero vector."""
    out = np.zeros((rows.shape[0], 1), dtype=np.int64)
    for i in range(rows.shape[1]):
        out = np.concatenate([out, out ^ rows[:, i : i + 1]], axis=1)
    return out


def enumerate_subspaces(ambient_dim: int, k: int, budget: int | None = None) -> Iterator[SubspaceBasis]:
    """Every k-dimensional subspace exactly once, in canonical order."""
    if not 0 <= k <= ambient_dim <= MAX_AMBIENT:
        raise ValueError(f"need 0 <= k <= ambient_dim <= {MAX_AMBIENT}, got k={k}, ambient_dim={ambient_dim}")
    count = gaussian_binomial(ambient_dim, k)
    if budget is not None and count > budget:
        raise BudgetExceeded(count, budget)
    for pivots in pivot_sets(ambient_dim, k):
        for _, rows in iter_batches(ambient_dim, pivots):
            for r in rows:
                yield SubspaceBasis(tuple(int(v) for v in r), ambient_dim)


__all__ = [
    "BudgetExceeded",
    "SubspaceBasis",
    "batch_span",
    "decode",
    "enumerate_subspaces",
    "free_slots",
    "iter_batches",
    "pivot_set_size",
    "pivot_sets",
]
