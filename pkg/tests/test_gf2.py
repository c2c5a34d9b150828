from __future__ import annotations

import random

from hypothesis import given, strategies as st

from tracecodes import gf2

rows_st = st.lists(st.integers(0, (1 << 10) - 1), max_size=12)


@given(rows_st)
def test_rank_matches_span_size(rows):
    assert 1 << gf2.rank(rows) == len(set(gf2.span(gf2.echelon_basis(rows))))


@given(rows_st, st.randoms())
def test_rref_is_canonical(rows, rnd):
    basis = gf2.rref(rows)
    mixed = list(rows)
    for _ in range(len(mixed)):
        if len(mixed) >= 2:
            i, j = rnd.sample(range(len(mixed)), 2)
            mixed[i] ^= mixed[j]
    rnd.shuffle(mixed)
    assert gf2.rref(mixed) == basis
    assert list(basis) == sorted(basis, reverse=True)
    for r in basis:
        pivot = r.bit_length() - 1
        assert sum((other >> pivot) & 1 for other in basis) == 1


@given(rows_st)
def test_span_index_order(rows):
    basis = gf2.echelon_basis(rows)
    sp = gf2.span(basis)
    assert len(sp) == len(set(sp)) == 1 << len(basis)
    for i, v in enumerate(sp):
        acc = 0
        for j, b in enumerate(basis):
            if i >> j & 1:
                acc ^= b
        assert v == acc


@given(rows_st, st.integers(0, (1 << 10) - 1))
def test_in_span(rows, v):
    assert gf2.in_span(v, rows) == (v in set(gf2.span(gf2.echelon_basis(rows))))


@given(rows_st)
def test_nullspace(rows):
    ns = gf2.nullspace(rows, 10)
    assert len(ns) == 10 - gf2.rank(rows)
    assert gf2.rank(ns) == len(ns)
    assert all(gf2.parity(r & v) == 0 for r in rows for v in ns)


@given(rows_st)
def test_row_dependencies(rows):
    indep, kernel = gf2.row_dependencies(rows)
    assert len(indep) == gf2.rank(rows) == gf2.rank([rows[i] for i in indep])
    assert len(kernel) == len(rows) - len(indep)
    for mask in kernel:
        acc = 0
        for i, r in enumerate(rows):
            if mask >> i & 1:
                acc ^= r
        assert acc == 0 and mask


def test_inverse_and_transpose():
    rnd = random.Random(1)
    n = 8
    while True:
        rows = [rnd.randrange(1 << n) for _ in range(n)]
        if gf2.rank(rows) == n:
            break
    inv = gf2.inverse(rows)
    for x in range(1 << n):
        assert gf2.mat_vec(inv, gf2.mat_vec(rows, x)) == x
    t = gf2.transpose(rows, n)
    assert gf2.transpose(t, n) == rows
    assert all((t[j] >> i & 1) == (rows[i] >> j & 1) for i in range(n) for j in range(n))
