"""The distribution-relation module at a fixed level, and its canonical reduction.

At level N (weight k, genus n) the symbols are the nonzero residues mod N and the
relations are, for each prime ell | N and each nonzero residue u = ell v',

    e(u) = ell^k * sum_{w in V/ell} e(v' + (N/ell) w).

At prime-power levels these rewrite every non-primitive residue down to
primitive ones.  At composite levels residues whose ell-part vanishes can cycle
(u -> ell^{-1} u on the other components), so the quotient is computed by
elimination over Z_(p) instead: an echelon basis whose pivots have the form
p^e, with coefficients at pivot columns reduced into [0, p^e).  That gives a
unique representative for every class.
"""

from __future__ import annotations

import heapq
import threading
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterator

from .arith import factorize, int_valuation, is_primitive, p_valuation


def depth(u: tuple[int, ...], N: int) -> int:
    """Sum over ell | N of how many times ell divides u mod ell^{v_ell(N)}."""
    tot = 0
    for ell, e in factorize(N).items():
        q = ell ** e
        vals = [int_valuation(x % q, ell) for x in u if x % q]
        tot += min(vals) if vals else e
    return tot


def column_key(u: tuple[int, ...], N: int) -> tuple:
    """Elimination order: non-primitive residues first, deepest first, then by residue."""
    return (is_primitive(u, N), -depth(u, N), u)


def rewrite_terms(u: tuple[int, ...], N: int, d: int, k: int) -> list[tuple[tuple[int, ...], int]]:
    """e(u) = d^k sum_{x = u/d mod N/d} e(x) for d | N, u = 0 mod d, u != 0.

    For d prime this is a single relation; for composite d it is a consequence.
    """
    if N % d or d < 2:
        raise ValueError("d must be a divisor > 1 of the level")
    if all(x % N == 0 for x in u):
        raise ValueError("the zero residue has no symbol")
    if any(x % d for x in u):
        raise ValueError(f"residue is not divisible by {d}")
    Nd = N // d
    vp = tuple((x // d) % Nd for x in u)
    c = d ** k
    return [(tuple(a + Nd * b for a, b in zip(vp, w)), c)
            for w in product(range(d), repeat=len(u))]


def _unit_rep(x: Fraction, p: int, e: int) -> int:
    """Integer in [0, p^e) congruent to the p-integral x."""
    q = p ** e
    return x.numerator * pow(x.denominator, -1, q) % q if e else 0


class RelationModule:
    """Canonical reduction modulo the distribution relations at one level."""

    def __init__(self, n: int, N: int, k: int, p: int):
        self.n, self.N, self.k, self.p = n, N, k, p
        self.pivots: dict[tuple, dict] = {}   # column -> row (lead coefficient p^e)
        self.exps: dict[tuple, int] = {}
        self._key = {}
        self._single: dict = {}
        self._build()

    def key(self, u):
        kk = self._key.get(u)
        if kk is None:
            kk = self._key[u] = column_key(u, self.N)
        return kk

    def relations(self) -> Iterator[dict]:
        N, n, k = self.N, self.n, self.k
        if N == 1:
            return
        nonzero = [u for u in product(range(N), repeat=2 * n) if any(u)]
        # shallow residues first keeps fill-in small
        nonzero.sort(key=lambda u: (depth(u, N), u))
        for u in nonzero:
            for ell in sorted(factorize(N)):
                if all(x % ell == 0 for x in u):
                    row: dict = {u: Fraction(1)}
                    for x, c in rewrite_terms(u, N, ell, k):
                        row[x] = row.get(x, 0) - c
                    yield {s: c for s, c in row.items() if c}

    def _lead(self, row: dict):
        return min(row, key=self.key)

    def _val(self, c: Fraction) -> int:
        return p_valuation(c, self.p)

    def _sub(self, row: dict, c: Fraction, other: dict) -> None:
        for s, v in other.items():
            x = row.get(s, 0) - c * v
            if x:
                row[s] = x
            else:
                row.pop(s, None)

    def _normalize(self, row: dict) -> dict:
        lead = self._lead(row)
        c = row[lead]
        e = self._val(c)
        f = Fraction(self.p ** e) / c
        return {s: v * f for s, v in row.items()}

    def _insert(self, row: dict) -> None:
        while row:
            # eliminate existing pivot columns where the valuation allows it
            changed = True
            while changed and row:
                changed = False
                for s in sorted((s for s in row if s in self.pivots), key=self.key):
                    if s not in row:
                        continue
                    P = self.pivots[s]
                    if self._val(row[s]) >= self.exps[s]:
                        self._sub(row, row[s] / P[s], P)
                        changed = True
            if not row:
                return
            lead = self._lead(row)
            if lead not in self.pivots:
                row = self._normalize(row)
                self.pivots[lead] = row
                self.exps[lead] = self._val(row[lead])
                return
            # the new row has smaller valuation at an existing pivot: swap them
            old = self.pivots.pop(lead)
            self.exps.pop(lead)
            row = self._normalize(row)
            self.pivots[lead] = row
            self.exps[lead] = self._val(row[lead])
            row = dict(old)

    def _build(self) -> None:
        for rel in self.relations():
            self._insert(rel)

    def reduce(self, vec: dict) -> dict:
        """Canonical representative of the class of ``vec``.

        Reduce symbol by symbol (cached), add up, and reduce once more: the sum
        lies in the same class, and the representative of a class is unique.
        """
        # integer accumulation over a common denominator
        parts = []
        D = 1
        for s, c in vec.items():
            if not c:
                continue
            r = self._single.get(s)
            if r is None:
                r = self._single[s] = _as_int_row(self._reduce_raw({s: Fraction(1)}))
            c = Fraction(c)
            den = r[0] * c.denominator
            parts.append((c.numerator, den, r[1]))
            D = D * den // gcd(D, den)
        acc: dict = {}
        for num, den, row in parts:
            f = num * (D // den)
            for t, v in row.items():
                acc[t] = acc.get(t, 0) + f * v
        return self._reduce_raw({t: Fraction(v, D) for t, v in acc.items() if v})

    def _reduce_raw(self, vec: dict) -> dict:
        x = {s: Fraction(c) for s, c in vec.items() if c}
        heap = [(self.key(s), s) for s in x if s in self.pivots]
        heapq.heapify(heap)
        done = set()
        while heap:
            _, s = heapq.heappop(heap)
            if s in done or s not in x:
                continue
            done.add(s)
            P, e = self.pivots[s], self.exps[s]
            r = _unit_rep(x[s], self.p, e)
            q = (x[s] - r) / (self.p ** e)
            if q:
                for t, v in P.items():
                    y = x.get(t, 0) - q * v
                    if y:
                        x[t] = y
                    else:
                        x.pop(t, None)
                    if t != s and t in self.pivots and t not in done:
                        heapq.heappush(heap, (self.key(t), t))
        return x

    def free_symbols(self) -> list:
        """Columns without a pivot (a basis of the free part, plus torsion columns)."""
        N, n = self.N, self.n
        return [u for u in product(range(N), repeat=2 * n) if any(u) and u not in self.pivots]

    def torsion(self) -> dict:
        """Pivot columns with non-unit lead: symbol -> exponent e (order p^e part)."""
        return {s: e for s, e in self.exps.items() if e > 0}


def _as_int_row(row: dict) -> tuple[int, dict]:
    D = 1
    for v in row.values():
        D = D * v.denominator // gcd(D, v.denominator)
    return D, {t: int(v * D) for t, v in row.items()}


_CACHE: dict = {}
_LOCK = threading.Lock()


def relation_module(n: int, N: int, k: int, p: int) -> RelationModule:
    key = (n, N, k, p)
    with _LOCK:
        mod = _CACHE.get(key)
    if mod is None:
        mod = RelationModule(n, N, k, p)
        with _LOCK:
            mod = _CACHE.setdefault(key, mod)
    return mod
