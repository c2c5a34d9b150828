"""Parameter validation and the small amount of number theory the codes need.

Everything downstream assumes a :class:`Params` produced by
:func:`validate_params`, i.e. ``l`` an odd prime and 2 a primitive root
modulo ``l**m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt

MAX_DEGREE = 24


class ParameterError(ValueError):
    """Raised for (l, m) pairs outside the supported family."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for d in range(3, isqrt(n) + 1, 2):
        if n % d == 0:
            return False
    return True


def prime_factors(n: int) -> list[int]:
    """Distinct prime factors of ``n`` by trial division."""
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def euler_phi(l: int, m: int) -> int:
    """phi(l**m) for a prime ``l``."""
    if not is_prime(l):
        raise ParameterError(f"l={l} is not prime")
    if m < 1:
        raise ParameterError(f"m={m} must be a positive integer")
    return l ** (m - 1) * (l - 1)


def multiplicative_order(a: int, n: int) -> int:
    if n < 2 or a % n == 0:
        raise ValueError(f"{a} is not a unit modulo {n}")
    x, k = a % n, 1
    while x != 1:
        x = x * a % n
        k += 1
        if k > n:
            raise ValueError(f"{a} is not a unit modulo {n}")
    return k


def is_two_primitive_root(l: int, m: int) -> bool:
    """True iff 2 generates the unit group modulo ``l**m``."""
    if l == 2 or not is_prime(l) or m < 1:
        return False
    return multiplicative_order(2, l**m) == euler_phi(l, m)


@dataclass(frozen=True)
class Params:
    l: int
    m: int
    s: int
    q: int
    lm: int

    @property
    def sqrt_q(self) -> int:
        return 1 << (self.s // 2)

    @property
    def exponent(self) -> int:
        """(q - 1) / l**m, the exponent applied to x in the defining set."""
        return (self.q - 1) // self.lm

    def __str__(self) -> str:
        return f"(l={self.l}, m={self.m})"


def validate_params(l: int, m: int, max_degree: int = MAX_DEGREE) -> Params:
    if not is_prime(l) or l < 3:
        raise ParameterError(f"l={l} must be an odd prime")
    s = euler_phi(l, m)
    if not is_two_primitive_root(l, m):
        raise ParameterError(f"2 is not a primitive root mod {l ** m}")
    if s > max_degree:
        raise ParameterError(f"extension degree s={s} exceeds the supported maximum {max_degree}")
    lm = l**m
    q = 1 << s
    assert s % 2 == 0
    assert (q - 1) % lm == 0
    # sqrt(q) = 2^(s/2) = -1 mod l^m since 2 has even order s
    assert ((1 << (s // 2)) + 1) % lm == 0
    return Params(l=l, m=m, s=s, q=q, lm=lm)


@dataclass(frozen=True)
class Gf2Poly:
    """Polynomial over GF(2); bit j of ``bits`` is the coefficient of x^j."""

    bits: int

    @property
    def degree(self) -> int:
        return self.bits.bit_length() - 1

    def coefficients(self) -> list[int]:
        return [(self.bits >> j) & 1 for j in range(self.degree + 1)]

    def __str__(self) -> str:
        if self.bits == 0:
            return "0"
        terms = []
        for j in range(self.degree, -1, -1):
            if (self.bits >> j) & 1:
                terms.append("1" if j == 0 else "x" if j == 1 else f"x^{j}")
        return " + ".join(terms)


def poly_mulmod(a: int, b: int, f: int) -> int:
    deg = f.bit_length() - 1
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if (a >> deg) & 1:
            a ^= f
    return out


def poly_mod(a: int, f: int) -> int:
    deg = f.bit_length() - 1
    while a.bit_length() - 1 >= deg:
        a ^= f << (a.bit_length() - 1 - deg)
    return a


def poly_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, poly_mod(a, b)
    return a


def frobenius_power_of_x(f: int, d: int) -> int:
    """x^(2^d) mod f."""
    x = poly_mod(0b10, f)
    for _ in range(d):
        x = poly_mulmod(x, x, f)
    return x


def is_irreducible(f: int) -> bool:
    """Rabin-style test, checking every proper divisor of the degree."""
    s = f.bit_length() - 1
    if s < 1:
        return False
    if frobenius_power_of_x(f, s) != poly_mod(0b10, f):
        return False
    for d in range(1, s):
        if s % d == 0 and poly_gcd(f, frobenius_power_of_x(f, d) ^ 0b10) != 1:
            return False
    return True


def cyclotomic_poly_gf2(l: int, m: int) -> Gf2Poly:
    """Phi_{l^m}(x) = Phi_l(x^(l^(m-1))) reduced mod 2, checked irreducible."""
    params = validate_params(l, m)
    step = l ** (m - 1)
    bits = 0
    for i in range(l):
        bits |= 1 << (i * step)
    assert bits.bit_length() - 1 == params.s
    if not is_irreducible(bits):
        raise ParameterError(f"Phi_{params.lm} is reducible mod 2")
    return Gf2Poly(bits)


def gaussian_binomial(n: int, k: int) -> int:
    """Number of k-dimensional subspaces of GF(2)^n."""
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (i + 1)) - 1
    return num // den


__all__ = [
    "MAX_DEGREE",
    "Gf2Poly",
    "ParameterError",
    "Params",
    "cyclotomic_poly_gf2",
    "euler_phi",
    "gaussian_binomial",
    "is_irreducible",
    "is_prime",
    "is_two_primitive_root",
    "multiplicative_order",
    "prime_factors",
    "validate_params",
]
