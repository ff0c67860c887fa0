"""Locally constant compactly supported functions on V(A_f) \\ {0}, valued in Z_(p).

A function lives in a frame (scale a, level N) as a sparse map residue -> value,
meaning sum_v value(v) ch((1/a)(v + N V)).  The zero residue never carries a
value: its coset contains the origin.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .arith import is_p_integral, lcm, reduce_vec
from .cosets import (CompactOpenSet, NotInvariantError, apply_element_values, descend,
                     refine_values, common_frame, unit_at, _check_frame)
from .symplectic import (AdelicGroupElement, CongruenceSubgroup, FiniteLevelElement,
                         coset_representatives)


@dataclass(frozen=True, eq=False)
class SchwartzFunction:
    genus: int
    scale: int
    level: int
    coeffs: Mapping

    def __post_init__(self):
        if self.scale < 1 or self.level < 1:
            raise ValueError("scale and level must be positive")
        vals = {}
        for r, x in self.coeffs.items():
            r = reduce_vec(r, self.level)
            if len(r) != 2 * self.genus:
                raise ValueError("residue length does not match the genus")
            x = Fraction(x)
            if x:
                vals[r] = vals.get(r, 0) + x
        vals = {r: x for r, x in vals.items() if x}
        if (0,) * (2 * self.genus) in vals:
            raise ValueError("a coset containing 0 cannot carry a value")
        object.__setattr__(self, "coeffs", vals)

    # construction
    @classmethod
    def zero(cls, n: int) -> "SchwartzFunction":
        return cls(n, 1, 1, {})

    @classmethod
    def xi(cls, v: Sequence[int], N: int) -> "SchwartzFunction":
        """Characteristic function of v + N V."""
        return cls(len(v) // 2, 1, N, {tuple(v): 1})

    @classmethod
    def from_set(cls, C: CompactOpenSet, value=1) -> "SchwartzFunction":
        return cls(C.genus, C.scale, C.level, {r: value for r in C.residues})

    # frames
    def in_frame(self, a: int, N: int) -> dict:
        return refine_values(self.coeffs, self.genus, self.scale, self.level, a, N)

    def canonical(self) -> "SchwartzFunction":
        a, N, vals = descend(self.coeffs, self.genus, self.scale, self.level)
        return SchwartzFunction(self.genus, a, N, vals)

    def check_frame(self, cp: int) -> None:
        c = self.canonical()
        _check_frame(c.scale, c.level, cp)

    def _aligned(self, other: "SchwartzFunction"):
        a, N = common_frame([(self.scale, self.level), (other.scale, other.level)])
        return a, N, self.in_frame(a, N), other.in_frame(a, N)

    # linear structure
    def __add__(self, other: "SchwartzFunction") -> "SchwartzFunction":
        a, N, x, y = self._aligned(other)
        out = dict(x)
        for r, v in y.items():
            out[r] = out.get(r, 0) + v
        return SchwartzFunction(self.genus, a, N, out).canonical()

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c) -> "SchwartzFunction":
        c = Fraction(c)
        return SchwartzFunction(self.genus, self.scale, self.level,
                                {r: c * x for r, x in self.coeffs.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, SchwartzFunction):
            return NotImplemented
        if self.genus != other.genus:
            return False
        a, b = self.canonical(), other.canonical()
        return (a.scale, a.level, a.coeffs) == (b.scale, b.level, b.coeffs)

    def __hash__(self):
        c = self.canonical()
        return hash((c.genus, c.scale, c.level, frozenset(c.coeffs.items())))

    def __call__(self, x: Sequence) -> Fraction:
        ax = [Fraction(t) * self.scale for t in x]
        if any(t.denominator != 1 for t in ax):
            return Fraction(0)
        return self.coeffs.get(tuple(int(t) % self.level for t in ax), Fraction(0))

    def support(self) -> CompactOpenSet:
        return CompactOpenSet(self.genus, self.scale, self.level, frozenset(self.coeffs))

    def level_sets(self) -> dict:
        """value -> CompactOpenSet where the function takes that value."""
        out: dict = {}
        for r, x in self.coeffs.items():
            out.setdefault(x, set()).add(r)
        return {x: CompactOpenSet(self.genus, self.scale, self.level, frozenset(rs))
                for x, rs in out.items()}

    # group action
    def act(self, g, cp: int | None = None) -> "SchwartzFunction":
        """(g.phi)(x) = phi(g^{-1} x); g adelic or a unit element at some level."""
        if isinstance(g, FiniteLevelElement):
            return self.act_unit(g)
        a, N, vals = apply_element_values(self.coeffs, self.genus, self.scale, self.level, g,
                                          "preimage", cp)
        return SchwartzFunction(self.genus, a, N, vals)

    def act_unit(self, u: FiniteLevelElement) -> "SchwartzFunction":
        N = lcm(self.level, u.level)
        u = unit_at(u, N)
        vals = self.in_frame(self.scale, N)
        return SchwartzFunction(self.genus, self.scale, N,
                                {u.act(r): x for r, x in vals.items()}).canonical()

    def invariants_check(self, K: CongruenceSubgroup) -> bool:
        N = lcm(self.level, K.level)
        K = K.refine(N)
        vals = self.in_frame(self.scale, N)
        return all({g.act(r): x for r, x in vals.items()} == vals for g in K.generators)

    def restrict(self, K: CongruenceSubgroup, L: CongruenceSubgroup) -> "SchwartzFunction":
        """Pullback along L <= K: the same function, now viewed as L-invariant."""
        if not L.is_subgroup_of(K):
            raise ValueError("L is not contained in K")
        if not self.invariants_check(K):
            raise NotInvariantError("function is not K-invariant")
        return self.canonical()

    def induce(self, L: CongruenceSubgroup, K: CongruenceSubgroup,
               reps: Sequence[FiniteLevelElement] | None = None) -> "SchwartzFunction":
        """Trace from L to K: sum of gamma.phi over gamma in K/L."""
        if not self.invariants_check(L):
            raise NotInvariantError("function is not L-invariant")
        N = lcm(self.level, K.level, L.level)
        if reps is None:
            reps = coset_representatives(K.refine(N), L.refine(N))
        vals = self.in_frame(self.scale, N)
        out: dict = {}
        for g in reps:
            g = unit_at(g, N)
            for r, x in vals.items():
                s = g.act(r)
                out[s] = out.get(s, 0) + x
        return SchwartzFunction(self.genus, self.scale, N, out).canonical()

    # integrality and io
    def is_integral(self, p: int) -> bool:
        return all(is_p_integral(x, p) for x in self.coeffs.values())

    def to_json(self) -> dict:
        c = self.canonical()
        return {"scale": c.scale, "level": c.level,
                "coeffs": [{"residue": list(r), "value": _fmt(x)}
                           for r, x in sorted(c.coeffs.items())]}

    @classmethod
    def from_json(cls, d: dict, genus: int | None = None) -> "SchwartzFunction":
        terms = d.get("coeffs", [])
        if terms:
            n = len(terms[0]["residue"]) // 2
        elif genus is not None:
            n = genus
        else:
            n = int(d.get("genus", 1))
        return cls(n, int(d["scale"]), int(d["level"]),
                   {tuple(t["residue"]): Fraction(str(t["value"])) for t in terms})

    def __repr__(self):
        return f"SchwartzFunction(scale={self.scale}, level={self.level}, terms={len(self.coeffs)})"


def _fmt(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def as_adelic(g) -> AdelicGroupElement:
    if isinstance(g, FiniteLevelElement):
        return AdelicGroupElement.unit(g)
    return g
