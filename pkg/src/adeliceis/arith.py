"""Exact coefficient and residue arithmetic.

Coefficients are :class:`fractions.Fraction` values restricted to the ring of
p-integral rationals (denominator prime to ``p``).  Residue vectors are plain
tuples of ints reduced into ``[0, N)``.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


class IntegralityError(ValueError):
    """A value left the ring of p-integral rationals."""


def as_coefficient(x, p: int) -> Fraction:
    """Coerce ``x`` to a Fraction and check its denominator is prime to ``p``."""
    q = x if isinstance(x, Fraction) else Fraction(x)
    if q.denominator % p == 0:
        raise IntegralityError(f"{q} is not {p}-integral")
    return q


def coeff_arith(a, b, op: str, p: int) -> Fraction:
    a = as_coefficient(a, p)
    b = as_coefficient(b, p)
    if op == "add":
        r = a + b
    elif op == "sub":
        r = a - b
    elif op == "mul":
        r = a * b
    else:
        raise ValueError(f"unknown op {op!r}")
    return as_coefficient(r, p)


def coeff_div(a, b, p: int) -> Fraction:
    """Divide by a p-adic unit ``b``."""
    b = as_coefficient(b, p)
    if b == 0 or b.numerator % p == 0:
        raise IntegralityError(f"{b} is not a unit at {p}")
    return as_coefficient(a, p) / b


def int_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def p_valuation(a, p: int) -> int:
    q = Fraction(a)
    if q == 0:
        raise ValueError("valuation of zero")
    return int_valuation(q.numerator, p) - int_valuation(q.denominator, p)


def is_p_integral(a, p: int) -> bool:
    return Fraction(a).denominator % p != 0


def crt_combine(residues: Sequence[tuple[int, int]]) -> tuple[int, int]:
    """Combine ``[(value, modulus), ...]`` with pairwise coprime moduli.

    Returns ``(x, m)`` with ``0 <= x < m`` the product modulus.
    """
    x, m = 0, 1
    for value, mod in residues:
        if mod <= 0:
            raise ValueError("moduli must be positive")
        if gcd(m, mod) != 1:
            raise ValueError(f"moduli {m} and {mod} are not coprime")
        # x + m*t = value (mod mod)
        t = ((value - x) * pow(m, -1, mod)) % mod
        x, m = x + m * t, m * mod
    return x % m, m


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division (levels here are small)."""
    if n < 1:
        raise ValueError("factorize needs a positive integer")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def prime_divisors(n: int) -> list[int]:
    return sorted(factorize(n))


def divisors(n: int) -> list[int]:
    ds = [1]
    for q, e in factorize(n).items():
        ds = [d * q**i for d in ds for i in range(e + 1)]
    return sorted(ds)


def lcm(*ns: int) -> int:
    out = 1
    for n in ns:
        out = out * n // gcd(out, n)
    return out


def content(v: Iterable[int]) -> int:
    """gcd of the coordinates, nonnegative; 0 for the zero vector."""
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def reduce_vec(v: Iterable[int], n: int) -> tuple[int, ...]:
    return tuple(x % n for x in v)


def residue_vector(coords: Iterable[int], modulus: int, genus: int | None = None) -> tuple[int, ...]:
    """Validate and reduce a residue vector mod ``modulus``."""
    if modulus < 1:
        raise ValueError("modulus must be positive")
    r = reduce_vec(coords, modulus)
    if genus is not None and len(r) != 2 * genus:
        raise ValueError(f"expected {2 * genus} coordinates, got {len(r)}")
    return r


def residue_content(v: Sequence[int], n: int) -> int:
    """gcd(content(v), n): the largest divisor d of n with v in d V / n V."""
    return gcd(content(v), n)


def is_primitive(v: Sequence[int], n: int) -> bool:
    """True iff v is divisible mod n by no prime dividing n."""
    return residue_content(v, n) == 1


def format_coeff(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_coeff(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s))
