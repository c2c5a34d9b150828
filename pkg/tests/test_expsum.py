from __future__ import annotations

import random

import pytest

from tracecodes import expsum


def chi_sum(ctx, values):
    return sum(1 - 2 * ctx.trace_by_definition(v) for v in values)


def s_oracle(ctx, a):
    return chi_sum(ctx, [ctx.mul(a, ctx.pow(ctx.alpha, i)) for i in range(ctx.params.lm)])


def s_ab_oracle(ctx, a, b):
    e = ctx.params.exponent
    return chi_sum(ctx, [ctx.mul(a, ctx.pow(x, e)) ^ ctx.mul(b, x) for x in range(1, ctx.q)])


@pytest.mark.parametrize("q", [4, 16, 64])
def test_s_brute_and_closed_match_oracle(fields, q):
    ctx = fields[q]
    oracle = [s_oracle(ctx, a) for a in range(ctx.q)]
    assert expsum.s_values(ctx, "brute").tolist() == oracle
    assert expsum.s_values(ctx, "closed").tolist() == oracle
    assert [expsum.s_value(ctx, a, "closed") for a in range(ctx.q)] == oracle


@pytest.mark.parametrize("q", [4, 16])
def test_s_ab_exhaustive(fields, q):
    ctx = fields[q]
    for a in range(1, ctx.q):
        for b in range(ctx.q):
            want = s_ab_oracle(ctx, a, b)
            assert expsum.s_ab(ctx, a, b, "brute") == want
            assert expsum.s_ab(ctx, a, b, "closed") == want


def test_s_ab_sampled_q64(f64):
    rng = random.Random(0)
    for _ in range(300):
        a, b = rng.randrange(1, 64), rng.randrange(64)
        assert expsum.s_ab(f64, a, b, "closed") == s_ab_oracle(f64, a, b)


def test_s_ab_rejects_zero(f16):
    with pytest.raises(ValueError):
        expsum.s_ab(f16, 0, 1)


def test_value_sets(f4, f16, f64):
    assert expsum.s_value_set(f4).counts == {-1: 3}
    assert expsum.s_value_set(f16).counts == {1: 10, -3: 5}
    r = expsum.s_value_set(f64)
    assert r.counts == {5: 9, 1: 27, -3: 27}
    assert r.claimed == {5, 1, -3} and r.matches


@pytest.mark.parametrize("q", [4, 16, 64])
def test_orthogonality(fields, q):
    ctx = fields[q]
    assert int(expsum.s_values(ctx)[1:].sum()) == -ctx.params.lm


@pytest.mark.parametrize("q", [16, 64])
def test_class_sizes(fields, q):
    ctx = fields[q]
    for a in range(1, ctx.q):
        even, odd = expsum.ea_oa(ctx, a)
        assert even and odd
        assert len(even) + len(odd) == ctx.q - 1
        assert expsum.ea_size_closed(ctx, expsum.s_value(ctx, a)) == (len(even), len(odd))
        # direct membership for a few u
        for u in list(even)[:3]:
            c = ctx.mul(a, ctx.pow(u, -ctx.params.exponent))
            assert sum(ctx.subvector(c, 0)) % 2 == 0


def test_e1_size_q64(f64):
    even, _ = expsum.ea_oa(f64, 1)
    assert len(even) == 49


def test_rows(f16):
    rows = expsum.expsum_rows(f16)
    assert len(rows) == 15
    assert rows[0] == {"a": "1", "S_brute": -3, "S_closed": -3, "E_a": 3, "O_a": 12}
