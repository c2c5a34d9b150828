"""Defining sets D_(a,b) in F_q^2 and the binary codes they define.

A point (x, y) of F_q^2 is packed into one integer ``x | y << s``; the
same packing is used for messages (u, v).  The codeword of (u, v) has
coordinate Tr(u x + v y) at each point (x, y) of D, and D lists its
points in increasing packed order.

Weight distributions are computed three ways: ``brute`` evaluates all
q^2 formal codewords coordinate by coordinate, ``transform`` runs a fast
Walsh-Hadamard transform over the indicator of D, and ``closed`` uses the
three/four-weight formulas (multiplicities from the solved moment system,
not the printed table for b = 0).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Literal

import numpy as np

from . import gf2
from .expsum import parity_classes, s_ab, s_value
from .field import FieldCtx, field_for

log = logging.getLogger(__name__)

Method = Literal["brute", "closed", "transform"]

TRANSFORM_MAX_DIM = 24
BRUTE_MAX_BITOPS = 1 << 36


@dataclass(frozen=True, eq=False)
class CodeSpec:
    ctx: FieldCtx
    a: int
    b: int

    def __post_init__(self):
        self.ctx.check(self.a)
        self.ctx.check(self.b)
        if self.a == 0:
            raise ValueError("a must be a nonzero field element")

    @property
    def params(self):
        return self.ctx.params

    @property
    def s(self) -> int:
        return self.ctx.s

    @property
    def q(self) -> int:
        return self.ctx.q

    def as_dict(self) -> dict:
        p = self.params
        return {"l": p.l, "m": p.m, "a": f"{self.a:x}", "b": f"{self.b:x}"}

    def __repr__(self) -> str:
        p = self.params
        return f"CodeSpec(l={p.l}, m={p.m}, a={self.a:#x}, b={self.b:#x})"


def make_spec(l: int, m: int, a: int, b: int) -> CodeSpec:
    return CodeSpec(_field(l, m), a, b)


@lru_cache(maxsize=None)
def _field(l: int, m: int) -> FieldCtx:
    return field_for(l, m)


def pack(x, y, s: int):
    return x | (y << s)


def unpack(w, s: int):
    return w & ((1 << s) - 1), w >> s


@dataclass(frozen=True, eq=False)
class DefiningSet:
    points: np.ndarray  # packed (x, y), ascending
    member: np.ndarray  # bool over all q^2 packed points

    @property
    def n(self) -> int:
        return len(self.points)


@dataclass
class WeightDistribution:
    counts: dict[int, int]  # weight -> multiplicity over all q^2 (u, v)
    n: int
    formal_dimension: int
    method: str
    kernel_size: int = 1

    @property
    def degenerate(self) -> bool:
        return self.kernel_size > 1

    @property
    def empirical_dimension(self) -> int:
        return self.formal_dimension - (self.kernel_size.bit_length() - 1)

    @property
    def nonzero_weights(self) -> list[int]:
        return [w for w in self.counts if w > 0]

    def enumerator(self) -> str:
        terms = []
        for w, a in self.counts.items():
            if w == 0:
                terms.append(str(a))
            else:
                terms.append(f"x^{w}" if a == 1 else f"{a}x^{w}")
        return " + ".join(terms)

    def as_list(self) -> list[dict]:
        return [{"weight": w, "multiplicity": a} for w, a in self.counts.items()]


@dataclass
class DegeneracyReport:
    """Closed forms give a nonpositive weight to some nonzero (u, v)."""

    spec: CodeSpec
    weights: dict[Fraction, int]  # closed-form weight -> formal multiplicity
    formal_dimension: int
    reason: str = ""
    degenerate: bool = field(default=True, init=False)


def length_closed(spec: CodeSpec) -> int:
    q = spec.q
    if spec.b == 0:
        return q * (q + 1 + s_ab(spec.ctx, spec.a, 0, "closed")) // 2 - 1
    return q * q // 2 - 1


def _defining_values(spec: CodeSpec) -> np.ndarray:
    """Tr(a x^e + b y) over all packed points."""
    ctx = spec.ctx
    pts = np.arange(spec.q * spec.q, dtype=np.int64)
    xs, ys = unpack(pts, spec.s)
    tx = ctx.trace_array(ctx.mul_array(spec.a, ctx.power_table(spec.params.exponent)))
    ty = ctx.trace_array(ctx.mul_array(spec.b, ctx.elements))
    return tx[xs] ^ ty[ys]


@lru_cache(maxsize=64)
def build_defining_set(spec: CodeSpec) -> DefiningSet:
    if 2 * spec.s > TRANSFORM_MAX_DIM:
        raise ValueError(f"F_q^2 has 2^{2 * spec.s} points, beyond the supported size")
    member = _defining_values(spec) == 0
    member[0] = False
    points = np.flatnonzero(member).astype(np.int64)
    dset = DefiningSet(points=points, member=member)
    expected = length_closed(spec)
    if dset.n != expected:
        log.warning("%r: |D| = %d but the length formula gives %d", spec, dset.n, expected)
    return dset


@lru_cache(maxsize=8)
def trace_product_table(ctx: FieldCtx) -> np.ndarray:
    """T[u, x] = Tr(u * x) as a q x q uint8 array."""
    us = ctx.elements[:, None]
    xs = ctx.elements[None, :]
    return ctx.trace_array(ctx.mul_array(us, xs))


@dataclass(frozen=True)
class CodewordView:
    bits: np.ndarray
    weight: int


def codeword(spec: CodeSpec, u: int, v: int) -> CodewordView:
    ctx = spec.ctx
    ctx.check(u)
    ctx.check(v)
    xs, ys = unpack(build_defining_set(spec).points, spec.s)
    bits = ctx.trace_array(ctx.mul_array(u, xs)) ^ ctx.trace_array(ctx.mul_array(v, ys))
    return CodewordView(bits=bits, weight=int(bits.sum()))


def generator_matrix(spec: CodeSpec) -> np.ndarray:
    """2s x n 0/1 matrix; row j is the codeword of the j-th unit message.

    Rows 0..s-1 are (x^j, 0), rows s..2s-1 are (0, x^(j-s)), matching the
    packed message bit order.
    """
    s = spec.s
    rows = [codeword(spec, 1 << j, 0).bits for j in range(s)]
    rows += [codeword(spec, 0, 1 << j).bits for j in range(s)]
    return np.array(rows, dtype=np.uint8)


def generator_rows_int(spec: CodeSpec) -> list[int]:
    out = []
    for row in generator_matrix(spec):
        packed = np.packbits(row, bitorder="little")
        out.append(int.from_bytes(packed.tobytes(), "little"))
    return out


def generator_matrix_text(spec: CodeSpec) -> str:
    return "".join("".join("01"[b] for b in row) + "\n" for row in generator_matrix(spec))


def weights_brute(spec: CodeSpec) -> np.ndarray:
    """Hamming weight of every formal codeword, indexed by packed (u, v)."""
    q, s = spec.q, spec.s
    dset = build_defining_set(spec)
    if q * q * max(dset.n, 1) > BRUTE_MAX_BITOPS:
        raise ValueError(f"brute-force enumeration of {q * q} codewords of length {dset.n} is too large")
    xs, ys = unpack(dset.points, s)
    table = trace_product_table(spec.ctx)
    x_part = np.packbits(table[:, xs], axis=1)  # row u: (Tr(u x_i))_i
    y_part = np.packbits(table[:, ys], axis=1)
    out = np.empty((q, q), dtype=np.int64)  # [v, u]
    for v in range(q):
        out[v] = np.bitwise_count(x_part ^ y_part[v]).sum(axis=1)
    return out.reshape(-1)


def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform: out[w] = sum_z f[z] (-1)^<w,z>."""
    a = np.asarray(values, dtype=np.int64).copy()
    n = len(a)
    if n & (n - 1):
        raise ValueError("length must be a power of two")
    h = 1
    while h < n:
        a = a.reshape(-1, 2, h)
        a = np.stack((a[:, 0] + a[:, 1], a[:, 0] - a[:, 1]), axis=1)
        h *= 2
    return a.reshape(n)


def point_dual_coords(spec: CodeSpec, points: np.ndarray) -> np.ndarray:
    """L2(x, y) = L(x) | L(y) << s, so Tr(u x + v y) = parity((u,v) & L2(x,y))."""
    xs, ys = unpack(points, spec.s)
    lc = spec.ctx.dual_coords
    return lc[xs] | (lc[ys] << spec.s)


def weights_transform(spec: CodeSpec) -> np.ndarray:
    dset = build_defining_set(spec)
    indicator = np.zeros(spec.q * spec.q, dtype=np.int64)
    indicator[point_dual_coords(spec, dset.points)] = 1
    corr = fwht(indicator)
    return (dset.n - corr) // 2


def weights_closed(spec: CodeSpec) -> np.ndarray:
    """Codeword weights from the case split on (u, v), indexed by packed (u, v)."""
    ctx, p = spec.ctx, spec.params
    q, sq = spec.q, p.sqrt_q
    s_a = s_value(ctx, spec.a, "closed")
    s_a0 = p.exponent * s_a
    # S(a, u) for every u
    s_au = np.empty(q, dtype=np.int64)
    s_au[0] = s_a0
    sign = 1 - 2 * parity_classes(ctx, spec.a).astype(np.int64)
    s_au[1:] = sign * sq - (sq + 1) // p.lm * s_a
    out = np.empty((q, q), dtype=np.int64)  # [v, u]
    if spec.b == 0:
        out[:, :] = q * (q + 1 + s_a0) // 4
        out[0, :] = q * (q + s_a0 - s_au) // 4
    else:
        out[:, :] = q * q // 4
        out[spec.b, :] = q * (q - 1 - s_au) // 4
    out[0, 0] = 0
    return out.reshape(-1)


def weight_closed(spec: CodeSpec, u: int, v: int) -> int:
    if u == 0 and v == 0:
        return 0
    ctx, q = spec.ctx, spec.q
    s_au = s_ab(ctx, spec.a, u, "closed")
    if spec.b == 0:
        if v != 0:
            return q * (q + 1 + s_ab(ctx, spec.a, 0, "closed")) // 4
        return q * (q + s_ab(ctx, spec.a, 0, "closed") - s_au) // 4
    if v == spec.b:
        return q * (q - 1 - s_au) // 4
    return q * q // 4


def distribution_from_weights(spec: CodeSpec, weights: np.ndarray, method: str) -> WeightDistribution:
    values, counts = np.unique(weights, return_counts=True)
    dist = {int(w): int(c) for w, c in zip(values, counts)}
    return WeightDistribution(
        counts=dist,
        n=build_defining_set(spec).n,
        formal_dimension=2 * spec.s,
        method=method,
        kernel_size=dist.get(0, 0),
    )


def closed_form_table(spec: CodeSpec, printed: bool = False) -> dict[Fraction, Fraction]:
    """Weight -> multiplicity over nonzero (u, v) from the closed formulas.

    With ``printed=True`` and b = 0 the two sqrt(q)-dependent weights take
    the multiplicities as printed in the b = 0 table, which are swapped
    relative to the solved moment system.
    """
    p, q = spec.params, Fraction(spec.q)
    sq = Fraction(p.sqrt_q)
    ratio = Fraction(s_value(spec.ctx, spec.a, "closed"), p.lm)
    half = (q - 1) / 2
    rows: list[tuple[Fraction, Fraction]]
    if spec.b == 0:
        w1 = q / 4 * (q + 1 + (q - 1) * ratio)
        w_plus = q / 4 * (q + sq + (q + sq) * ratio)
        w_minus = q / 4 * (q - sq + (q + sq) * ratio)
        a_plus, a_minus = half * (1 - ratio), half * (1 + ratio)
        if printed:
            a_plus, a_minus = a_minus, a_plus
        rows = [(w1, q * (q - 1)), (w_plus, a_plus), (w_minus, a_minus)]
    else:
        rows = [
            (q / 4 * (q - 1 - (q - 1) * ratio), Fraction(1)),
            (q / 4 * (q - 1 - sq + (1 + sq) * ratio), half * (1 + ratio)),
            (q / 4 * (q - 1 + sq + (1 + sq) * ratio), half * (1 - ratio)),
            (q * q / 4, q * q - q - 1),
        ]
    table: dict[Fraction, Fraction] = {}
    for w, a in rows:
        if a:
            table[w] = table.get(w, Fraction(0)) + a
    return dict(sorted(table.items()))


def closed_form_degenerate(spec: CodeSpec) -> bool:
    return any(w <= 0 for w in closed_form_table(spec))


def weight_distribution(spec: CodeSpec, method: Method = "brute") -> WeightDistribution | DegeneracyReport:
    if method == "brute":
        return distribution_from_weights(spec, weights_brute(spec), "brute")
    if method == "transform":
        return distribution_from_weights(spec, weights_transform(spec), "transform")
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    table = closed_form_table(spec)
    if any(w <= 0 for w in table):
        bad = ", ".join(f"{w} (x{a})" for w, a in table.items() if w <= 0)
        return DegeneracyReport(
            spec=spec,
            weights=table,
            formal_dimension=2 * spec.s,
            reason=f"closed-form weights {bad} are not positive; the map (u,v) -> c(u,v) is not injective",
        )
    if any(w.denominator != 1 or a.denominator != 1 for w, a in table.items()):
        raise ArithmeticError(f"non-integral closed-form distribution for {spec!r}")
    counts = {0: 1}
    counts.update({int(w): int(a) for w, a in table.items()})
    return WeightDistribution(
        counts=counts, n=length_closed(spec), formal_dimension=2 * spec.s, method="closed"
    )


def empirical_dimension(spec: CodeSpec) -> tuple[int, list[int]]:
    """GF(2) rank of the generator rows and the packed (u, v) kernel."""
    rows = generator_rows_int(spec)
    independent, kernel_basis = gf2.row_dependencies(rows)
    # row j is the unit message with packed bit j, so a dependency mask is the message itself
    kernel = sorted(gf2.span(kernel_basis))
    return len(independent), kernel


def dual_distance_at_least_2(spec: CodeSpec) -> bool:
    """No coordinate vanishes on the whole code (every column of G nonzero)."""
    return bool(generator_matrix(spec).any(axis=0).all())


def minmax_ratio(spec: CodeSpec, dist: WeightDistribution | None = None) -> tuple[Fraction, bool]:
    dist = dist or weight_distribution(spec, "brute")
    if dist.degenerate:
        raise ValueError(
            f"{spec!r} is degenerate (kernel of size {dist.kernel_size}); min/max weight ratio not meaningful"
        )
    ws = dist.nonzero_weights
    ratio = Fraction(min(ws), max(ws))
    return ratio, ratio > Fraction(1, 2)


def pless_first_moment_holds(dist: WeightDistribution, q: int) -> bool:
    return sum(w * a for w, a in dist.counts.items()) * 2 == dist.n * q * q


__all__ = [
    "CodeSpec",
    "CodewordView",
    "DefiningSet",
    "DegeneracyReport",
    "WeightDistribution",
    "build_defining_set",
    "closed_form_degenerate",
    "closed_form_table",
    "codeword",
    "distribution_from_weights",
    "dual_distance_at_least_2",
    "empirical_dimension",
    "fwht",
    "generator_matrix",
    "generator_matrix_text",
    "generator_rows_int",
    "length_closed",
    "make_spec",
    "minmax_ratio",
    "pack",
    "pless_first_moment_holds",
    "point_dual_coords",
    "unpack",
    "weight_closed",
    "weight_distribution",
    "weights_brute",
    "weights_closed",
    "weights_transform",
]
