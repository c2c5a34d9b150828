from __future__ import annotations

from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from tracecodes import gf2
from tracecodes.numtheory import gaussian_binomial
from tracecodes.subspaces import (
    BudgetExceeded,
    SubspaceBasis,
    batch_span,
    decode,
    enumerate_subspaces,
    iter_batches,
    pivot_set_size,
    pivot_sets,
)


def brute_subspaces(n, k):
    seen = set()
    for rows in combinations(range(1, 1 << n), k):
        if gf2.rank(rows) == k:
            seen.add(frozenset(gf2.span(rows)))
    return seen


@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 6) for k in range(0, n + 1)])
def test_exactly_once(n, k):
    got = [frozenset(S.elements()) for S in enumerate_subspaces(n, k)]
    assert len(got) == len(set(got)) == gaussian_binomial(n, k)
    assert set(got) == brute_subspaces(n, k)


@pytest.mark.parametrize("n,k,count", [(4, 1, 15), (4, 2, 35), (8, 1, 255), (8, 2, 10795)])
def test_counts(n, k, count):
    assert sum(1 for _ in enumerate_subspaces(n, k)) == count


def test_canonical_and_ordered():
    subs = list(enumerate_subspaces(6, 3))
    assert len(subs) == 1395
    for S in subs:
        assert gf2.rref(S.rows) == S.rows
    assert [S.pivots for S in subs] == sorted(S.pivots for S in subs)


def test_pivot_set_sizes_sum():
    assert sum(pivot_set_size(8, p) for p in pivot_sets(8, 4)) == 200787


def test_decode_matches_batches():
    piv = (0, 2, 5)
    for start, rows in iter_batches(7, piv, chunk=16):
        for i, r in enumerate(rows):
            assert decode(7, piv, start + i) == tuple(int(v) for v in r)


def test_batch_span():
    rows = next(iter_batches(5, (0, 1)))[1]
    sp = batch_span(rows)
    assert sp.shape == (len(rows), 4)
    for r, s in zip(rows, sp):
        assert s.tolist() == gf2.span([int(v) for v in r])


def test_budget():
    with pytest.raises(BudgetExceeded):
        next(enumerate_subspaces(8, 4, budget=1000))
    with pytest.raises(ValueError):
        next(enumerate_subspaces(4, 5))


@given(st.lists(st.integers(0, 255), max_size=6))
def test_basis_and_dual(vectors):
    S = SubspaceBasis.span_of(vectors, 8)
    assert S.dim == gf2.rank(vectors)
    assert all(v in S for v in vectors)
    D = S.std_dual()
    assert D.dim == 8 - S.dim
    assert D.std_dual() == S
    assert all(bin(x & y).count("1") % 2 == 0 for x in S.rows for y in D.rows)


def test_full_zero():
    assert SubspaceBasis.full(4).dim == 4
    assert SubspaceBasis.zero(4).elements() == [0]
    with pytest.raises(ValueError):
        SubspaceBasis.span_of([16], 4)
