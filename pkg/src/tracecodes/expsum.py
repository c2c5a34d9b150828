"""Character sums over the l^m-th roots of unity.

``S(a)`` sums the canonical additive character over the coset a<alpha>;
``S(a, b)`` sums chi(a x^e + b x) over F_q^* with e = (q-1)/l^m.  Each
is available by direct summation (``method="brute"``) and by the
closed forms in terms of alpha-basis subvector weights
(``method="closed"``).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .field import FieldCtx

Method = Literal["brute", "closed"]


@dataclass
class ValueSetReport:
    counts: dict[int, int]  # S(a) -> number of a in F_q^* attaining it
    claimed: frozenset[int]
    unattained: frozenset[int] = field(default_factory=frozenset)
    unexpected: frozenset[int] = field(default_factory=frozenset)

    @property
    def matches(self) -> bool:
        return not self.unattained and not self.unexpected


def _chi(bit) -> int:
    return 1 - 2 * int(bit)


def subvector0_weight(ctx: FieldCtx, u: int) -> int:
    return sum(ctx.subvector(u, 0))


def s_value(ctx: FieldCtx, a: int, method: Method = "brute") -> int:
    ctx.check(a)
    p = ctx.params
    if method == "brute":
        total, x = 0, a
        for _ in range(p.lm):
            total += _chi(ctx.trace(x))
            x = ctx.mul(x, ctx.alpha)
        return total
    if method == "closed":
        total = 0
        for i in range(p.lm // p.l):
            w = sum(ctx.subvector(a, i))
            total += (-1) ** w * (p.l - 2 * w)
        return total
    raise ValueError(f"unknown method {method!r}")


def s_ab(ctx: FieldCtx, a: int, b: int, method: Method = "brute") -> int:
    ctx.check(a)
    ctx.check(b)
    if a == 0:
        raise ValueError("S(a, b) is only defined for a != 0")
    p = ctx.params
    e = p.exponent
    if method == "brute":
        xs = ctx.elements[1:]
        args = ctx.mul_array(a, ctx.pow_array(xs, e)) ^ ctx.mul_array(b, xs)
        return int(np.sum(1 - 2 * ctx.trace_array(args).astype(np.int64)))
    if method == "closed":
        sa = s_value(ctx, a, "closed")
        if b == 0:
            return e * sa
        c = ctx.mul(a, ctx.pow(ctx.inv(b), e))
        sign = (-1) ** subvector0_weight(ctx, c)
        return sign * p.sqrt_q - (p.sqrt_q + 1) // p.lm * sa
    raise ValueError(f"unknown method {method!r}")


def s_values(ctx: FieldCtx, method: Method = "brute") -> np.ndarray:
    """S(a) for every a in F_q (index a), vectorised."""
    p = ctx.params
    a = ctx.elements
    if method == "brute":
        total = np.zeros(ctx.q, dtype=np.int64)
        x = a.copy()
        for _ in range(p.lm):
            total += 1 - 2 * ctx.trace_array(x).astype(np.int64)
            x = ctx.mul_array(x, ctx.alpha)
        return total
    if method == "closed":
        coords = ctx.alpha_coords_array
        total = np.zeros(ctx.q, dtype=np.int64)
        for i in range(p.lm // p.l):
            mask = sum(1 << (j - 1) for j in ctx.subvector_indices(i))
            w = np.bitwise_count(coords & mask).astype(np.int64)
            total += np.where(w % 2 == 0, 1, -1) * (p.l - 2 * w)
        return total
    raise ValueError(f"unknown method {method!r}")


def claimed_value_set(ctx: FieldCtx) -> frozenset[int]:
    p = ctx.params
    return frozenset(p.lm - 4 * j for j in range(1, p.s // 2 + 1))


def s_value_set(ctx: FieldCtx) -> ValueSetReport:
    """Multiset of S(a) over F_q^*, compared with the claimed value set."""
    values = s_values(ctx, "brute")[1:]
    counts = dict(sorted(Counter(int(v) for v in values).items(), reverse=True))
    claimed = claimed_value_set(ctx)
    return ValueSetReport(
        counts=counts,
        claimed=claimed,
        unattained=frozenset(claimed - counts.keys()),
        unexpected=frozenset(counts.keys() - claimed),
    )


def parity_classes(ctx: FieldCtx, a: int) -> np.ndarray:
    """For every u in F_q^*: wt((a u^-e)^(0)) mod 2, as uint8 (index u-1)."""
    p = ctx.params
    xs = ctx.elements[1:]
    c = ctx.mul_array(a, ctx.pow_array(xs, -p.exponent))
    mask = sum(1 << (j - 1) for j in ctx.subvector_indices(0))
    return (np.bitwise_count(ctx.alpha_coords_array[c] & mask) & 1).astype(np.uint8)


def ea_oa(ctx: FieldCtx, a: int) -> tuple[frozenset[int], frozenset[int]]:
    """Split F_q^* by the parity of wt((a u^-e)^(0)): (even, odd)."""
    ctx.check(a)
    if a == 0:
        raise ValueError("E_a / O_a need a != 0")
    odd = parity_classes(ctx, a)
    xs = ctx.elements[1:]
    return (
        frozenset(int(u) for u in xs[odd == 0]),
        frozenset(int(u) for u in xs[odd == 1]),
    )


def ea_size_closed(ctx: FieldCtx, s_a: int) -> tuple[int, int]:
    """(|E_a|, |O_a|) from S(a); raises if the formula is not integral."""
    p = ctx.params
    num_e = (ctx.q - 1) * (p.lm + s_a)
    num_o = (ctx.q - 1) * (p.lm - s_a)
    if num_e % (2 * p.lm) or num_o % (2 * p.lm):
        raise ArithmeticError("non-integral class size")
    return num_e // (2 * p.lm), num_o // (2 * p.lm)


def expsum_rows(ctx: FieldCtx) -> list[dict]:
    """Per-a table: a, S brute, S closed, |E_a|, |O_a| (a = 0 has no classes)."""
    brute = s_values(ctx, "brute")
    closed = s_values(ctx, "closed")
    rows = []
    for a in range(1, ctx.q):
        odd = parity_classes(ctx, a)
        n_odd = int(odd.sum())
        rows.append(
            {
                "a": f"{a:x}",
                "S_brute": int(brute[a]),
                "S_closed": int(closed[a]),
                "E_a": ctx.q - 1 - n_odd,
                "O_a": n_odd,
            }
        )
    return rows


__all__ = [
    "ValueSetReport",
    "claimed_value_set",
    "ea_oa",
    "ea_size_closed",
    "expsum_rows",
    "parity_classes",
    "s_ab",
    "s_value",
    "s_value_set",
    "s_values",
    "subvector0_weight",
]
