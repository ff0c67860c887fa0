"""Formal Eisenstein classes: Z_(p)-combinations of symbols e(v, N) modulo the
distribution relations, with refinement between levels and the group action."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Mapping, Sequence

from .arith import IntegralityError, is_p_integral, is_primitive, lcm, reduce_vec
from .config import DEFAULT, EngineConfig
from .cosets import NotInvariantError, unit_at
from .matrix import (Matrix, cokernel_representatives, denominator, det, identity, mat_inv,
                     mat_mul, mat_vec, scale as mat_scale, to_int)
from .relations import relation_module, rewrite_terms
from .symplectic import (AdelicGroupElement, CongruenceSubgroup, FiniteLevelElement,
                         coset_representatives, standard_J)


@dataclass(frozen=True)
class EisSymbol:
    residue: tuple[int, ...]
    level: int
    weight: int = 0

    def __post_init__(self):
        r = reduce_vec(self.residue, self.level)
        if not any(r):
            raise ValueError("the zero residue has no symbol")
        object.__setattr__(self, "residue", r)

    def is_primitive(self) -> bool:
        return is_primitive(self.residue, self.level)


def admissible_multiple(N: int, cfg: EngineConfig = DEFAULT) -> int:
    """Smallest admissible multiple of N."""
    m = 1
    while not cfg.admissible_level(N * m):
        m += 1
    return N * m


@dataclass(frozen=True, eq=False)
class FormalEisensteinClass:
    genus: int
    weight: int
    level: int
    coeffs: Mapping
    p: int = DEFAULT.p

    def __post_init__(self):
        vals: dict = {}
        N, m = self.level, 2 * self.genus
        for r, c in self.coeffs.items():
            r = tuple(x % N for x in r)
            if len(r) != m:
                raise ValueError("residue length does not match the genus")
            if not any(r):
                raise ValueError("the zero residue has no symbol")
            if type(c) is not Fraction:
                c = Fraction(c)
            if r in vals:
                vals[r] += c
            elif c:
                vals[r] = c
        object.__setattr__(self, "coeffs", {r: c for r, c in vals.items() if c})
        if self.weight < 0:
            raise ValueError("weight must be nonnegative")

    # construction
    @classmethod
    def symbol(cls, v: Sequence[int], N: int, k: int = 0, coeff=1, p: int = DEFAULT.p):
        return cls(len(v) // 2, k, N, {tuple(v): coeff}, p)

    @classmethod
    def zero(cls, n: int, k: int, N: int = 1, p: int = DEFAULT.p):
        return cls(n, k, N, {}, p)

    def _like(self, level: int, coeffs) -> "FormalEisensteinClass":
        return FormalEisensteinClass(self.genus, self.weight, level, coeffs, self.p)

    # linear structure
    def _check(self, other: "FormalEisensteinClass"):
        if (self.genus, self.weight, self.p) != (other.genus, other.weight, other.p):
            raise ValueError("classes of different genus, weight or p cannot be combined")

    def __add__(self, other: "FormalEisensteinClass") -> "FormalEisensteinClass":
        self._check(other)
        N = lcm(self.level, other.level)
        a, b = self.refine(N, reduce=False), other.refine(N, reduce=False)
        out = dict(a.coeffs)
        for r, c in b.coeffs.items():
            out[r] = out.get(r, 0) + c
        return self._like(N, out)

    def __mul__(self, c) -> "FormalEisensteinClass":
        c = Fraction(c)
        return self._like(self.level, {r: c * x for r, x in self.coeffs.items()})

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    # normal forms
    def normal_form(self) -> "FormalEisensteinClass":
        if not self.is_integral():
            raise IntegralityError("class has coefficients outside Z_(p)")
        if self.level == 1 or not self.coeffs:
            return self._like(self.level, {})
        mod = relation_module(self.genus, self.level, self.weight, self.p)
        return self._like(self.level, mod.reduce(self.coeffs))

    def is_zero(self) -> bool:
        return not self.normal_form().coeffs

    def __eq__(self, other):
        if not isinstance(other, FormalEisensteinClass):
            return NotImplemented
        if (self.genus, self.weight, self.p) != (other.genus, other.weight, other.p):
            return False
        N = lcm(self.level, other.level)
        return self.refine(N).coeffs == other.refine(N).coeffs

    def __hash__(self):
        return hash((self.genus, self.weight, self.p))

    def identical(self, other: "FormalEisensteinClass") -> bool:
        """Same level and same coefficient map (no refinement, no reduction)."""
        return (self.genus, self.weight, self.level, self.coeffs) == \
            (other.genus, other.weight, other.level, other.coeffs)

    def refine(self, N: int, reduce: bool = True) -> "FormalEisensteinClass":
        """Pullback to level N: e(v, M) -> e((N/M) v, N)."""
        if N % self.level:
            raise ValueError("target level must be a multiple of the current level")
        d = N // self.level
        out = self._like(N, {tuple(d * x for x in r): c for r, c in self.coeffs.items()})
        return out.normal_form() if reduce else out

    def is_integral(self) -> bool:
        return all(is_p_integral(c, self.p) for c in self.coeffs.values())

    def is_normal(self) -> bool:
        return self.normal_form().coeffs == self.coeffs

    # group action
    def act_unit(self, u: FiniteLevelElement, reduce: bool = True) -> "FormalEisensteinClass":
        N = lcm(self.level, u.level)
        x = self.refine(N, reduce=False)
        u = unit_at(u, N)
        out = self._like(N, {u.act(r): c for r, c in x.coeffs.items()})
        return out.normal_form() if reduce else out

    def act(self, g, cp: int | None = None, level_bound: int | None = None
            ) -> "FormalEisensteinClass":
        """g . x for a supported element g = z_q m u (or a unit element)."""
        if isinstance(g, FiniteLevelElement):
            return self.act_unit(g)
        if cp is not None:
            g.check_admissible(cp)
        x = self.act_unit(g.unit_part, reduce=False) if g.unit_part is not None else self
        return x.act_rational(g.rational_part(), level_bound=level_bound)

    def act_rational(self, R: Matrix, level_bound: int | None = None) -> "FormalEisensteinClass":
        """Action of a rational similitude: R = z_a h with h^{-1} integral, z_a -> a^k."""
        Rinv = mat_inv(R)
        a = denominator(Rinv)
        h = mat_scale(R, Fraction(1, a))
        hinv = to_int(mat_scale(Rinv, a))
        out = self.act_expanding(h, hinv, level_bound=level_bound)
        return out * (Fraction(a) ** self.weight)

    def act_expanding(self, h: Matrix, hinv: Matrix, level_bound: int | None = None
                      ) -> "FormalEisensteinClass":
        """h . e(v, M) = sum_{w in hNV/NV} e(h d v + w, N), d = N/M, for h^{-1} integral.

        N is the least admissible multiple of M * den(h), so that h (N/M) is integral
        and h N V lies in V (the lattice sandwich).
        """
        M = self.level
        N = admissible_multiple(M * denominator(h))
        if level_bound is not None and N > level_bound:
            raise ValueError(f"no admissible level within the bound {level_bound}")
        d = N // M
        hN = to_int(mat_scale(h, N))
        hd = to_int(mat_scale(h, d))
        ws = [tuple(x % N for x in mat_vec(hN, r)) for r in cokernel_representatives(hinv)]
        out: dict = {}
        for v, c in self.coeffs.items():
            base = mat_vec(hd, v)
            for w in ws:
                key = tuple((b + x) % N for b, x in zip(base, w))
                out[key] = out.get(key, 0) + c
        return self._like(N, out).normal_form()

    def conjugate(self, g, M: int | None = None, N: int | None = None,
                  cp: int | None = None) -> "FormalEisensteinClass":
        """[g]^* from level M to level N (N defaults to the minimal valid level)."""
        x = self if M is None else self.refine(M)
        out = x.act(g, cp=cp)
        if N is not None:
            if N % out.level:
                # the requested level must be a multiple of the one computed
                raise ValueError(f"level {N} does not contain the minimal level {out.level}")
            out = out.refine(N)
        return out

    def invariants_check(self, K: CongruenceSubgroup) -> bool:
        N = lcm(self.level, K.level)
        x = self.refine(N)
        K = K.refine(N)
        return all(x.act_unit(g).coeffs == x.coeffs for g in K.generators)

    def pushforward(self, L: CongruenceSubgroup, K: CongruenceSubgroup,
                    reps: Sequence[FiniteLevelElement] | None = None, check: bool = True
                    ) -> "FormalEisensteinClass":
        """Trace from L to K: sum of gamma . x over gamma in K/L."""
        if check and not self.invariants_check(L):
            raise NotInvariantError("class is not L-invariant")
        N = lcm(self.level, K.level, L.level)
        if reps is None:
            reps = coset_representatives(K.refine(N), L.refine(N))
        x = self.refine(N, reduce=False)
        out: dict = {}
        for g in reps:
            g = unit_at(g, N)
            for r, c in x.coeffs.items():
                s = g.act(r)
                out[s] = out.get(s, 0) + c
        return self._like(N, out).normal_form()

    # rewriting (single steps; normal_form is the canonical reduction)
    def rewrite(self, u: Sequence[int], d: int) -> "FormalEisensteinClass":
        """Replace the symbol e(u) by its expansion along d | N (prime or composite)."""
        u = reduce_vec(u, self.level)
        c = self.coeffs.get(u)
        if not c:
            raise ValueError("symbol not present")
        out = dict(self.coeffs)
        del out[u]
        for x, m in rewrite_terms(u, self.level, d, self.weight):
            out[x] = out.get(x, 0) + c * m
        return self._like(self.level, out)

    def rewritable(self) -> list[tuple[tuple[int, ...], int]]:
        """(symbol, prime) pairs to which a prime rewrite applies."""
        from .arith import prime_divisors
        return [(u, ell) for u in sorted(self.coeffs) for ell in prime_divisors(self.level)
                if all(x % ell == 0 for x in u)]

    # io
    def to_json(self) -> dict:
        return {"format": 1, "weight": self.weight, "level": self.level,
                "terms": [{"residue": list(r), "coeff": _fmt(c)}
                          for r, c in sorted(self.coeffs.items())]}

    @classmethod
    def from_json(cls, d: dict, genus: int | None = None, p: int = DEFAULT.p):
        terms = d.get("terms", [])
        n = len(terms[0]["residue"]) // 2 if terms else (genus or int(d.get("genus", 1)))
        return cls(n, int(d["weight"]), int(d["level"]),
                   {tuple(t["residue"]): Fraction(str(t["coeff"])) for t in terms}, p)

    def __repr__(self):
        return f"FormalEisensteinClass(k={self.weight}, level={self.level}, terms={len(self.coeffs)})"


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def distribution_rewrite(s: EisSymbol, ell: int | None = None) -> FormalEisensteinClass:
    """One rewrite step of a non-primitive symbol along a prime ell | N."""
    from .arith import prime_divisors
    primes = [q for q in prime_divisors(s.level) if all(x % q == 0 for x in s.residue)]
    if not primes:
        raise ValueError("symbol is primitive; no rewrite applies")
    if ell is None:
        ell = primes[0]
    elif ell not in primes:
        raise ValueError(f"{ell} does not divide the residue and the level")
    x = FormalEisensteinClass.symbol(s.residue, s.level, s.weight)
    return x.rewrite(s.residue, ell)


# ---------------------------------------------------------------- isogeny kernels

@dataclass(frozen=True)
class IsogenyKernel:
    kernel_size: int
    k_gamma: int | None
    representatives: tuple
    isotropic: bool


def _int_root(x: int, r: int) -> int | None:
    y = round(x ** (1.0 / r))
    for z in (y - 1, y, y + 1):
        if z > 0 and z ** r == x:
            return z
    return None


def isogeny_kernel_data(g, M: int, N: int) -> IsogenyKernel:
    """g(NV)/NV inside V/NV, given g(N/M)V <= V <= gV.

    k_gamma is the 2n-th root of the kernel size when it exists (None otherwise);
    isotropy is checked for the symplectic form mod N.
    """
    R = g.rational_part() if isinstance(g, AdelicGroupElement) else g
    n2 = len(R)
    if N % M:
        raise ValueError("M must divide N")
    Rinv = mat_inv(R)
    if denominator(Rinv) != 1:
        raise ValueError("sandwich violated: V is not contained in gV")
    if denominator(mat_scale(R, N // M)) != 1:
        raise ValueError("sandwich violated: g(N/M)V is not contained in V")
    RN = to_int(mat_scale(R, N))
    reps = sorted({tuple(x % N for x in mat_vec(RN, r))
                   for r in cokernel_representatives(to_int(Rinv))})
    size = abs(int(det(to_int(Rinv))))
    if size != len(reps):
        raise AssertionError("cokernel count disagrees with the determinant")
    J = standard_J(n2 // 2)
    iso = all(sum(a * sum(J[i][j] * b[j] for j in range(n2)) for i, a in enumerate(x)) % N == 0
              for x in reps for b in reps)
    return IsogenyKernel(size, _int_root(size, n2), tuple(reps), iso)
