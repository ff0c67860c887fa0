"""Finite unions of scaled lattice cosets (1/a)(v + N V_Z^) and functions on them.

Everything is stored in a *frame* ``(scale a, level N)`` as a map from residues
mod N to values; the residue v stands for (1/a)(v + N V).  A rational point x
lies in (1/a)(v + N V) iff a*x is integral and a*x = v mod N.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd
from typing import Iterable, Mapping, Sequence

from .arith import lcm, prime_divisors, reduce_vec
from .matrix import Matrix, denominator, mat_vec, scale as mat_scale, smith_normal_form, to_int


class FrameError(ValueError):
    """A scale or level left the range allowed by the configuration (prime to cp)."""


class NotInvariantError(ValueError):
    """An input is not invariant under the subgroup it was declared for."""


# ---------------------------------------------------------------- frame kernels

def refine_values(values: Mapping, n: int, a: int, N: int, a2: int, N2: int) -> dict:
    """Re-express a frame (a, N) in a finer frame (a2, N2)."""
    if a2 % a:
        raise ValueError("target scale must be a multiple")
    f = a2 // a
    if N2 % (f * N):
        raise ValueError("target level incompatible with frame")
    if (a, N) == (a2, N2):
        return dict(values)
    step = f * N
    reps = list(product(range(N2 // step), repeat=2 * n))
    out = {}
    for v, val in values.items():
        base = [f * x for x in v]
        for w in reps:
            out[tuple((b + step * y) % N2 for b, y in zip(base, w))] = val
    return out


def common_frame(frames: Iterable[tuple[int, int]]) -> tuple[int, int]:
    frames = list(frames)
    A = lcm(*(a for a, _ in frames))
    return A, lcm(*(N * (A // a) for a, N in frames))


def descend(values: Mapping, n: int, a: int, N: int) -> tuple[int, int, dict]:
    """Minimal frame representing the same function; zero values dropped."""
    vals = {v: x for v, x in values.items() if x}
    if not vals:
        return 1, 1, {}
    changed = True
    while changed:
        changed = False
        for q in prime_divisors(N) if N > 1 else []:
            # scale descent: every support residue divisible by q
            if a % q == 0 and all(all(c % q == 0 for c in v) for v in vals):
                vals = {tuple(c // q for c in v): x for v, x in vals.items()}
                a, N = a // q, N // q
                changed = True
                break
            # level descent: values constant on fibres of mod N -> mod N/q
            Nq = N // q
            fibres: dict = {}
            for v, x in vals.items():
                fibres.setdefault(reduce_vec(v, Nq), []).append(x)
            size = q ** (2 * n)
            if all(len(xs) == size and all(y == xs[0] for y in xs) for xs in fibres.values()):
                vals = {k: xs[0] for k, xs in fibres.items()}
                N = Nq
                changed = True
                break
    return a, N, vals


def transport_values(values: Mapping, n: int, a: int, N: int, R: Matrix
                     ) -> tuple[int, int, dict]:
    """Image frame of a function's support under x -> R x (R rational, invertible).

    (1/a)(v + N V) maps to (1/(ab))(m v + N m V) with R = m/b, m integral;
    with t the exponent of V/mV the image is a union of level N*t cosets.
    """
    b = denominator(R)
    m = to_int(mat_scale(R, b))
    _, D, _ = smith_normal_form(m)
    t = max(D[i][i] for i in range(len(D)))
    N2 = N * t
    zs = list(product(range(t), repeat=2 * n))
    out = {}
    for v, val in values.items():
        for z in zs:
            x = mat_vec(m, [vi + N * zi for vi, zi in zip(v, z)])
            out[tuple(c % N2 for c in x)] = val
    return a * b, N2, out


def apply_unit_values(values: Mapping, u) -> dict:
    """Image under a unit element known mod the frame level."""
    return {u.act(v): x for v, x in values.items()}


def contains_point(a: int, N: int, v: Sequence[int], x: Sequence[Fraction]) -> bool:
    ax = [Fraction(c) * a for c in x]
    if any(c.denominator != 1 for c in ax):
        return False
    return all((int(c) - w) % N == 0 for c, w in zip(ax, v))


def _check_frame(a: int, N: int, cp: int | None):
    if cp is not None and (gcd(a, cp) != 1 or gcd(N, cp) != 1):
        raise FrameError(f"frame (scale {a}, level {N}) is not prime to cp={cp}")


# ---------------------------------------------------------------- sets

@dataclass(frozen=True)
class ElementaryCoset:
    """(1/scale)(residue + level V_Z^)."""

    scale: int
    level: int
    residue: tuple[int, ...]

    def __post_init__(self):
        if self.scale < 1 or self.level < 1:
            raise ValueError("scale and level must be positive")
        object.__setattr__(self, "residue", reduce_vec(self.residue, self.level))

    @property
    def genus(self) -> int:
        return len(self.residue) // 2

    def contains_zero(self) -> bool:
        return all(c == 0 for c in self.residue)

    def contains(self, x: Sequence[Fraction]) -> bool:
        return contains_point(self.scale, self.level, self.residue, x)

    def as_set(self) -> "CompactOpenSet":
        return CompactOpenSet(self.genus, self.scale, self.level, frozenset([self.residue]))


@dataclass(frozen=True)
class CompactOpenSet:
    """Finite disjoint union of cosets in one frame; zero-containing cosets allowed."""

    genus: int
    scale: int
    level: int
    residues: frozenset

    def __post_init__(self):
        object.__setattr__(self, "residues",
                           frozenset(reduce_vec(r, self.level) for r in self.residues))

    @classmethod
    def from_cosets(cls, cosets: Iterable[ElementaryCoset], cp: int | None = None) -> "CompactOpenSet":
        cosets = list(cosets)
        if not cosets:
            raise ValueError("need at least one coset (or use CompactOpenSet.empty)")
        n = cosets[0].genus
        out = cls.empty(n)
        for c in cosets:
            _check_frame(c.scale, c.level, cp)
            out = out.union(c.as_set())
        return out

    @classmethod
    def empty(cls, n: int) -> "CompactOpenSet":
        return cls(n, 1, 1, frozenset())

    @classmethod
    def lattice(cls, n: int, d: int = 1) -> "CompactOpenSet":
        """d V_Z^ (d a positive integer)."""
        return cls(n, 1, d, frozenset([(0,) * (2 * n)]))

    def values(self) -> dict:
        return {r: 1 for r in self.residues}

    def in_frame(self, a: int, N: int) -> frozenset:
        return frozenset(refine_values(self.values(), self.genus, self.scale, self.level, a, N))

    def refine(self, a: int, N: int) -> "CompactOpenSet":
        return CompactOpenSet(self.genus, a, N, self.in_frame(a, N))

    def canonicalize(self, cp: int | None = None) -> "CompactOpenSet":
        _check_frame(self.scale, self.level, cp)
        a, N, vals = descend(self.values(), self.genus, self.scale, self.level)
        return CompactOpenSet(self.genus, a, N, frozenset(vals))

    def contains_zero(self) -> bool:
        return (0,) * (2 * self.genus) in self.residues

    def contains(self, x: Sequence[Fraction]) -> bool:
        ax = [Fraction(c) * self.scale for c in x]
        if any(c.denominator != 1 for c in ax):
            return False
        return tuple(int(c) % self.level for c in ax) in self.residues

    def _binary(self, other: "CompactOpenSet", op) -> "CompactOpenSet":
        a, N = common_frame([(self.scale, self.level), (other.scale, other.level)])
        res = op(self.in_frame(a, N), other.in_frame(a, N))
        return CompactOpenSet(self.genus, a, N, frozenset(res)).canonicalize()

    def union(self, other):
        return self._binary(other, frozenset.__or__)

    def intersect(self, other):
        return self._binary(other, frozenset.__and__)

    def subtract(self, other):
        return self._binary(other, frozenset.__sub__)

    def set_op(self, other, op: str) -> "CompactOpenSet":
        return {"union": self.union, "intersect": self.intersect,
                "subtract": self.subtract}[op](other)

    def apply_element(self, g, direction: str = "preimage", cp: int | None = None) -> "CompactOpenSet":
        a, N, vals = apply_element_values(self.values(), self.genus, self.scale, self.level, g,
                                          direction, cp)
        return CompactOpenSet(self.genus, a, N, frozenset(vals)).canonicalize(cp)

    def is_invariant(self, K) -> bool:
        """Stable under every generator of K (after refining to a common level)."""
        N = lcm(self.level, K.level)
        S = self.in_frame(self.scale, N)
        K = K.refine(N)
        return all(frozenset(g.act(v) for v in S) == S for g in K.generators)

    def cosets(self) -> list[ElementaryCoset]:
        return [ElementaryCoset(self.scale, self.level, r) for r in sorted(self.residues)]

    def __eq__(self, other):
        if not isinstance(other, CompactOpenSet):
            return NotImplemented
        a, b = self.canonicalize(), other.canonicalize()
        return (a.scale, a.level, a.residues) == (b.scale, b.level, b.residues)

    def __hash__(self):
        c = self.canonicalize()
        return hash((c.scale, c.level, c.residues))

    def __len__(self):
        return len(self.residues)

    def to_json(self) -> dict:
        return {"scale": self.scale, "level": self.level,
                "residues": [list(r) for r in sorted(self.residues)]}

    @classmethod
    def from_json(cls, d: dict) -> "CompactOpenSet":
        res = [tuple(r) for r in d["residues"]]
        n = len(res[0]) // 2 if res else int(d.get("genus", 1))
        return cls(n, int(d["scale"]), int(d["level"]), frozenset(res))


def apply_element_values(values: Mapping, n: int, a: int, N: int, g, direction: str,
                         cp: int | None = None) -> tuple[int, int, dict]:
    """Image or preimage of a frame function's support under the right action x -> g^{-1} x.

    ``"preimage"`` is therefore the set g S (the support of g.phi) and
    ``"image"`` is g^{-1} S.
    """
    from .matrix import mat_inv

    R = g.rational_part()
    u = g.unit_part
    if direction == "preimage":
        if u is not None:
            M = lcm(N, u.level)
            values = refine_values(values, n, a, N, a, M)
            N = M
            values = apply_unit_values(values, unit_at(u, M))
        a, N, values = transport_values(values, n, a, N, R)
    elif direction == "image":
        a, N, values = transport_values(values, n, a, N, mat_inv(R))
        if u is not None:
            M = lcm(N, u.level)
            values = refine_values(values, n, a, N, a, M)
            N = M
            values = apply_unit_values(values, unit_at(u, M).inverse())
    else:
        raise ValueError("direction must be 'image' or 'preimage'")
    a, N, values = descend(values, n, a, N)
    _check_frame(a, N, cp)
    return a, N, values


def unit_at(u, level: int):
    """The unit part at a given level: reduction, or the canonical lift."""
    from .symplectic import lift_element

    if u.level % level == 0:
        return u.reduce(level)
    if level % u.level == 0:
        return lift_element(u, level)
    return lift_element(u, lcm(level, u.level)).reduce(level)
