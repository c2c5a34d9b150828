"""Arithmetic in F_q = GF(2)[x] / Phi_{l^m}(x).

Elements are plain ints whose bit j is the coefficient of x^j (the
polynomial basis).  Because the modulus is the cyclotomic polynomial
itself, the distinguished root of unity ``alpha`` is the class of x,
i.e. the integer 2.

The second coordinate system used by the exponential sums is the basis
{alpha, alpha^2, ..., alpha^s}; :meth:`FieldCtx.alpha_coords` converts
into it and :meth:`FieldCtx.subvector` slices it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import gf2
from .numtheory import (
    Gf2Poly,
    Params,
    cyclotomic_poly_gf2,
    poly_mulmod,
    prime_factors,
    validate_params,
)


@dataclass(frozen=True, eq=False)
class FieldCtx:
    params: Params
    modulus: Gf2Poly
    gamma: int
    alpha: int
    alpha_powers: tuple[int, ...]  # alpha^1 .. alpha^s in the polynomial basis
    to_alpha: tuple[int, ...]  # row j-1 extracts coordinate a_j
    trace_mask: int

    @property
    def q(self) -> int:
        return self.params.q

    @property
    def s(self) -> int:
        return self.params.s

    # -- scalar arithmetic ------------------------------------------------

    def check(self, u: int) -> int:
        if not 0 <= u < self.q:
            raise ValueError(f"{u:#x} is not an element of GF(2^{self.s})")
        return u

    @staticmethod
    def add(u: int, v: int) -> int:
        return u ^ v

    def mul(self, u: int, v: int) -> int:
        return poly_mulmod(u, v, self.modulus.bits)

    def pow(self, u: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(u), -k)
        out = 1
        while k:
            if k & 1:
                out = self.mul(out, u)
            u = self.mul(u, u)
            k >>= 1
        return out

    def inv(self, u: int) -> int:
        if u == 0:
            raise ZeroDivisionError("zero has no inverse in a field")
        return self.pow(u, self.q - 2)

    def trace(self, u: int) -> int:
        """Absolute trace to GF(2)."""
        return gf2.parity(u & self.trace_mask)

    def trace_by_definition(self, u: int) -> int:
        """sum_{j<s} u^(2^j), evaluated by repeated squaring."""
        acc, x = 0, u
        for _ in range(self.s):
            acc ^= x
            x = self.mul(x, x)
        assert acc in (0, 1), "trace must land in the prime field"
        return acc

    def order(self, u: int) -> int:
        if u == 0:
            raise ValueError("zero has no multiplicative order")
        n = self.q - 1
        for p in prime_factors(self.q - 1):
            while n % p == 0 and self.pow(u, n // p) == 1:
                n //= p
        return n

    # -- alpha-power basis ------------------------------------------------

    def alpha_coords_int(self, u: int) -> int:
        """Coordinates in {alpha, ..., alpha^s} packed so bit j-1 is a_j."""
        return gf2.mat_vec(self.to_alpha, u)

    def alpha_coords(self, u: int) -> tuple[int, ...]:
        c = self.alpha_coords_int(u)
        return tuple((c >> j) & 1 for j in range(self.s))

    def from_alpha_coords(self, coords) -> int:
        u = 0
        for j, bit in enumerate(coords):
            if bit:
                u ^= self.alpha_powers[j]
        return u

    def subvector_indices(self, i: int) -> tuple[int, ...]:
        """1-based coordinate indices (k*l^(m-1) - i for k = 1..l-1)."""
        p = self.params
        step = p.lm // p.l
        if not 0 <= i < step:
            raise ValueError(f"subvector index {i} outside 0..{step - 1}")
        return tuple(k * step - i for k in range(1, p.l))

    def subvector(self, u: int, i: int) -> tuple[int, ...]:
        c = self.alpha_coords_int(u)
        return tuple((c >> (j - 1)) & 1 for j in self.subvector_indices(i))

    # -- vectorised tables ------------------------------------------------

    @cached_property
    def exp_table(self) -> np.ndarray:
        """gamma^k for k in 0..q-2."""
        out = np.empty(self.q - 1, dtype=np.int64)
        x = 1
        for k in range(self.q - 1):
            out[k] = x
            x = self.mul(x, self.gamma)
        return out

    @cached_property
    def log_table(self) -> np.ndarray:
        out = np.full(self.q, -1, dtype=np.int64)
        out[self.exp_table] = np.arange(self.q - 1)
        return out

    def mul_array(self, u, v) -> np.ndarray:
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        lu, lv = self.log_table[u], self.log_table[v]
        out = self.exp_table[(lu + lv) % (self.q - 1)]
        return np.where((u == 0) | (v == 0), 0, out)

    def pow_array(self, u, k: int) -> np.ndarray:
        u = np.asarray(u, dtype=np.int64)
        out = self.exp_table[(self.log_table[u] * k) % (self.q - 1)]
        if k == 0:
            return np.ones_like(u)
        return np.where(u == 0, 0, out)

    def trace_array(self, u) -> np.ndarray:
        u = np.asarray(u, dtype=np.int64)
        return (np.bitwise_count(u & self.trace_mask) & 1).astype(np.uint8)

    def power_table(self, k: int) -> np.ndarray:
        """u^k for every u in F_q, indexed by u."""
        return self.pow_array(np.arange(self.q), k)

    @cached_property
    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    @cached_property
    def dual_coords(self) -> np.ndarray:
        """L(x) with bit j = Tr(x^j * x), so Tr(u*x) = parity(u & L(x))."""
        xs = self.elements
        out = np.zeros(self.q, dtype=np.int64)
        for j in range(self.s):
            out |= self.trace_array(self.mul_array(1 << j, xs)).astype(np.int64) << j
        return out

    @cached_property
    def alpha_coords_array(self) -> np.ndarray:
        xs = self.elements
        out = np.zeros(self.q, dtype=np.int64)
        for j, row in enumerate(self.to_alpha):
            out |= (np.bitwise_count(xs & row) & 1).astype(np.int64) << j
        return out

    def subfield(self, degree: int) -> list[int]:
        """Elements of the subfield GF(2^degree), sorted."""
        if self.s % degree:
            raise ValueError(f"GF(2^{degree}) is not a subfield of GF(2^{self.s})")
        frob = self.elements
        for _ in range(degree):
            frob = self.mul_array(frob, frob)
        return [int(u) for u in np.flatnonzero(frob == self.elements)]

    def __repr__(self) -> str:
        return f"FieldCtx(l={self.params.l}, m={self.params.m}, modulus={self.modulus})"


def _find_gamma(params: Params, modulus: int, alpha: int) -> int:
    """Smallest primitive element gamma with gamma^((q-1)/l^m) == alpha."""
    q = params.q
    primes = prime_factors(q - 1)

    def power(u: int, k: int) -> int:
        out = 1
        while k:
            if k & 1:
                out = poly_mulmod(out, u, modulus)
            u = poly_mulmod(u, u, modulus)
            k >>= 1
        return out

    for cand in range(2, q):
        if power(cand, params.exponent) != alpha:
            continue
        if all(power(cand, (q - 1) // p) != 1 for p in primes):
            return cand
    raise AssertionError("no primitive element maps onto alpha")


def make_field(params: Params) -> FieldCtx:
    modulus = cyclotomic_poly_gf2(params.l, params.m)
    f, s = modulus.bits, params.s
    alpha = poly_mulmod(0b10, 1, f)
    gamma = _find_gamma(params, f, alpha)

    powers = []
    x = 1
    for _ in range(s):
        x = poly_mulmod(x, alpha, f)
        powers.append(x)
    # column j of the basis matrix holds alpha^(j+1)
    basis_rows = [sum(((powers[j] >> i) & 1) << j for j in range(s)) for i in range(s)]
    to_alpha = gf2.inverse(basis_rows)

    trace_mask = 0
    for j in range(s):
        acc, y = 0, 1 << j
        for _ in range(s):
            acc ^= y
            y = poly_mulmod(y, y, f)
        assert acc in (0, 1)
        trace_mask |= acc << j

    ctx = FieldCtx(
        params=params,
        modulus=modulus,
        gamma=gamma,
        alpha=alpha,
        alpha_powers=tuple(powers),
        to_alpha=tuple(to_alpha),
        trace_mask=trace_mask,
    )
    assert ctx.pow(alpha, params.lm) == 1
    return ctx


def field_for(l: int, m: int) -> FieldCtx:
    return make_field(validate_params(l, m))


__all__ = ["FieldCtx", "field_for", "make_field"]
