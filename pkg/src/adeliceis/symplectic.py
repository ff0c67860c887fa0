"""GSp_2n over Z, Q and Z/N: elements, generators and congruence subgroups.

A congruence subgroup is anchored at an explicit level N and denotes the full
preimage in GSp_2n(Z^) of the subgroup of GSp_2n(Z/N) spanned by its
generators.  Enumeration is breadth-first closure; nothing here needs
Schreier-Sims at the sizes we run.
"""

from __future__ import annotations

import threading
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .arith import factorize, lcm
from .matrix import (Matrix, as_matrix, det, diag, identity, is_integral, mat_inv,
                     mat_mod, mat_mul, mat_vec, scale, to_int, transpose)


def standard_J(n: int) -> Matrix:
    m = 2 * n
    return tuple(tuple(1 if j == i + n else (-1 if i == j + n else 0) for j in range(m))
                 for i in range(m))


def is_symplectic_similitude(mat) -> tuple[bool, Fraction | None]:
    """Check g^t J g = c J exactly over Q; return (True, c) or (False, None)."""
    g = as_matrix(mat)
    m = len(g)
    if m == 0 or m % 2 or any(len(r) != m for r in g):
        raise ValueError("expected a square 2n x 2n matrix")
    J = standard_J(m // 2)
    lhs = mat_mul(mat_mul(transpose(g), J), g)
    c = Fraction(lhs[0][m // 2])
    if c == 0:
        return False, None
    if lhs != scale(J, c):
        return False, None
    return True, c


# ---------------------------------------------------------------- finite level

@dataclass(frozen=True)
class FiniteLevelElement:
    """An element of GSp_2n(Z/N), stored row-major with its similitude."""

    level: int
    matrix: Matrix
    similitude: int

    def __post_init__(self):
        N = self.level
        g = mat_mod(self.matrix, N)
        object.__setattr__(self, "matrix", g)
        object.__setattr__(self, "similitude", self.similitude % N)
        if gcd(self.similitude, N) != 1:
            raise ValueError("similitude must be a unit mod N")
        J = standard_J(len(g) // 2)
        lhs = mat_mod(mat_mul(mat_mul(transpose(g), J), g), N)
        if lhs != mat_mod(scale(J, self.similitude), N):
            raise ValueError("matrix is not a symplectic similitude mod N")

    @classmethod
    def from_matrix(cls, mat, level: int) -> "FiniteLevelElement":
        g = mat_mod(to_int(as_matrix(mat)), level)
        n = len(g) // 2
        c = mat_mul(mat_mul(transpose(g), standard_J(n)), g)[0][n] % level
        return cls(level, g, c)

    @classmethod
    def identity(cls, n: int, level: int) -> "FiniteLevelElement":
        return cls(level, identity(2 * n), 1)

    @property
    def genus(self) -> int:
        return len(self.matrix) // 2

    def __mul__(self, other: "FiniteLevelElement") -> "FiniteLevelElement":
        if self.level != other.level:
            raise ValueError("levels differ")
        return _fast(self.level, mat_mod(mat_mul(self.matrix, other.matrix), self.level),
                     self.similitude * other.similitude % self.level)

    def inverse(self) -> "FiniteLevelElement":
        # g^{-1} = c^{-1} J^{-1} g^t J
        n, N = self.genus, self.level
        J = standard_J(n)
        Jinv = scale(J, -1)
        cinv = pow(self.similitude, -1, N)
        inv = mat_mod(scale(mat_mul(mat_mul(Jinv, transpose(self.matrix)), J), cinv), N)
        return _fast(N, inv, cinv)

    def act(self, v: Sequence[int]) -> tuple[int, ...]:
        N = self.level
        return tuple(sum(a * x for a, x in zip(row, v)) % N for row in self.matrix)

    def reduce(self, m: int) -> "FiniteLevelElement":
        if self.level % m:
            raise ValueError(f"{m} does not divide level {self.level}")
        return _fast(m, mat_mod(self.matrix, m), self.similitude % m)

    def is_identity(self) -> bool:
        return self.matrix == identity(2 * self.genus)

    def key(self) -> tuple:
        return self.matrix

    def __hash__(self):
        return hash((self.level, self.matrix))

    def __eq__(self, other):
        return (isinstance(other, FiniteLevelElement) and self.level == other.level
                and self.matrix == other.matrix)


def _fast(level: int, matrix: Matrix, sim: int) -> FiniteLevelElement:
    """Construct without re-verifying (products of verified elements)."""
    e = object.__new__(FiniteLevelElement)
    object.__setattr__(e, "level", level)
    object.__setattr__(e, "matrix", matrix)
    object.__setattr__(e, "similitude", sim)
    return e


def _hensel_step(g: Matrix, c: int, ell: int, j: int) -> Matrix:
    """Lift a similitude mod ell^j to one mod ell^(j+1), keeping c."""
    n = len(g) // 2
    J = standard_J(n)
    mod = ell ** (j + 1)
    E = mat_mul(mat_mul(transpose(g), J), g)
    E = tuple(tuple(((x - c * y) // ell ** j) % ell for x, y in zip(r, s)) for r, s in zip(E, J))
    cinv = pow(c, -1, ell)
    # need c (S - S^t) = -E mod ell with S strictly upper triangular
    S = tuple(tuple((-E[i][k] * cinv) % ell if k > i else 0 for k in range(2 * n)) for i in range(2 * n))
    Y = scale(mat_mul(J, S), -1)  # Y = J^{-1} S
    X = mat_mul(g, Y)
    return mat_mod(tuple(tuple(a + ell ** j * b for a, b in zip(r, s)) for r, s in zip(g, X)), mod)


def lift_element(g: FiniteLevelElement, new_level: int) -> FiniteLevelElement:
    """Some preimage of g under GSp_2n(Z/new_level) -> GSp_2n(Z/level).

    Prime-power parts shared with the old level are Hensel-lifted; new primes
    get the identity.
    """
    N = g.level
    if new_level % N:
        raise ValueError("new level must be a multiple of the old one")
    if new_level == N:
        return g
    from .arith import crt_combine

    m = len(g.matrix)
    parts = []
    for ell, e_new in factorize(new_level).items():
        q_new = ell ** e_new
        e_old = 0
        while N % ell ** (e_old + 1) == 0:
            e_old += 1
        if e_old == 0:
            parts.append((identity(m), 1, q_new))
            continue
        c = g.similitude % ell ** e_old
        c_full = c  # keep c fixed as an integer; it stays a unit
        cur = mat_mod(g.matrix, ell ** e_old)
        for j in range(e_old, e_new):
            cur = _hensel_step(cur, c_full, ell, j)
        parts.append((cur, c_full, q_new))
    mat = tuple(tuple(crt_combine([(p[0][i][k], p[2]) for p in parts])[0] for k in range(m))
                for i in range(m))
    sim = crt_combine([(p[1], p[2]) for p in parts])[0]
    return FiniteLevelElement(new_level, mat, sim)


# ---------------------------------------------------------------- generators

def _unit(i: int, j: int, m: int) -> Matrix:
    return tuple(tuple(1 if (r, s) == (i, j) else 0 for s in range(m)) for r in range(m))


def root_elements(n: int, t: int = 1) -> list[Matrix]:
    """Integral elementary symplectic matrices x_alpha(t) for every root alpha.

    Includes the transvections A_{i,n+i}(t), their transposes, the symmetric
    off-diagonal block moves and the GL_n block elements diag(A, A^{-t}).
    """
    m = 2 * n
    I = identity(m)

    def plus(*units):
        out = [list(r) for r in I]
        for (i, j) in units:
            out[i][j] += t
        return as_matrix(out)

    mats = []
    for i in range(n):
        mats.append(plus((i, n + i)))
        mats.append(plus((n + i, i)))
        for j in range(i + 1, n):
            mats.append(plus((i, n + j), (j, n + i)))
            mats.append(plus((n + i, j), (n + j, i)))
    for i in range(n):
        for j in range(n):
            if i != j:
                out = [list(r) for r in I]
                out[i][j] += t
                out[n + j][n + i] -= t
                mats.append(as_matrix(out))
    return mats


def swap_element(n: int, i: int) -> Matrix:
    """B_{i,n+i}: swap coordinates i and n+i (with a sign so it is symplectic)."""
    m = 2 * n
    out = [list(r) for r in identity(m)]
    out[i][i] = out[n + i][n + i] = 0
    out[i][n + i] = 1
    out[n + i][i] = -1
    return as_matrix(out)


def unit_group_generators(N: int, M: int = 1) -> list[int]:
    """A generating set of {u in (Z/N)^x : u = 1 mod M}, found greedily."""
    units = [u for u in range(1, N) if gcd(u, N) == 1 and (u - 1) % M == 0] if N > 1 else []
    gens: list[int] = []
    span = {1 % N} if N > 1 else {0}
    for u in units:
        if u in span:
            continue
        gens.append(u)
        frontier = list(span)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = x * g % N
                    if y not in span:
                        span.add(y)
                        nxt.append(y)
            frontier = nxt
    return gens


def similitude_element(n: int, u: int) -> Matrix:
    return diag(*([1] * n + [u] * n))


def torus_element(n: int, i: int, u: int, N: int) -> Matrix:
    entries = [1] * (2 * n)
    entries[i] = u
    entries[n + i] = pow(u, -1, N)
    return diag(*entries)


def generators_mod_N(n: int, N: int) -> list[FiniteLevelElement]:
    """Generators of GSp_2n(Z/N)."""
    if N < 1:
        raise ValueError("level must be positive")
    gens = [FiniteLevelElement.from_matrix(g, N) for g in root_elements(n)]
    for u in unit_group_generators(N):
        gens.append(FiniteLevelElement(N, similitude_element(n, u), u))
    return _dedupe(gens)


def kernel_generators(n: int, N: int, M: int) -> list[FiniteLevelElement]:
    """Generators of the image of K_M in GSp_2n(Z/N), i.e. ker(mod N -> mod M)."""
    if N % M:
        raise ValueError("M must divide N")
    if M == 1:
        return generators_mod_N(n, N)
    gens = [FiniteLevelElement.from_matrix(g, N) for g in root_elements(n, M)]
    for u in unit_group_generators(N, M):
        gens.append(FiniteLevelElement(N, similitude_element(n, u), u))
        for i in range(n):
            gens.append(FiniteLevelElement(N, torus_element(n, i, u, N), 1))
    return _dedupe([g for g in gens if not g.is_identity()])


def _dedupe(gens):
    seen, out = set(), []
    for g in gens:
        if g.matrix not in seen:
            seen.add(g.matrix)
            out.append(g)
    return out


def closure(gens: Iterable[FiniteLevelElement], n: int, level: int,
            maxsize: int | None = None) -> set[FiniteLevelElement]:
    """Breadth-first multiplicative closure (the generated finite group)."""
    gens = list(gens)
    ident = FiniteLevelElement.identity(n, level)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                h = g * s
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if maxsize is not None and len(seen) > maxsize:
                        raise RuntimeError(f"closure exceeds {maxsize} elements")
        frontier = nxt
    return seen


def vector_orbit(v: Sequence[int], gens: Sequence[FiniteLevelElement], level: int
                 ) -> dict[tuple[int, ...], FiniteLevelElement]:
    """Orbit of v mod level with a transversal: point -> element mapping v to it."""
    v = tuple(x % level for x in v)
    n = len(v) // 2
    trans = {v: FiniteLevelElement.identity(n, level)}
    queue = deque([v])
    while queue:
        x = queue.popleft()
        gx = trans[x]
        for s in gens:
            y = s.act(x)
            if y not in trans:
                trans[y] = s * gx
                queue.append(y)
    return trans


# ---------------------------------------------------------------- subgroups

@dataclass(eq=False)
class CongruenceSubgroup:
    """Preimage in GSp_2n(Z^) of <generators> in GSp_2n(Z/level).

    ``principal`` records M when the group is known to be K_M (fast membership).
    """

    genus: int
    level: int
    generators: list[FiniteLevelElement]
    principal: int | None = None
    name: str = ""
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _elements: frozenset | None = field(default=None, repr=False)

    def __post_init__(self):
        for g in self.generators:
            if g.level != self.level:
                raise ValueError("generator level mismatch")

    # constructors
    @classmethod
    def principal_subgroup(cls, n: int, M: int, level: int | None = None) -> "CongruenceSubgroup":
        N = M if level is None else level
        gens = kernel_generators(n, N, M) if N > 1 else []
        return cls(n, N, gens, principal=M, name=f"K{M}")

    @classmethod
    def full(cls, n: int, level: int) -> "CongruenceSubgroup":
        return cls.principal_subgroup(n, 1, level)

    def admissible(self, cp: int) -> bool:
        return self.level >= 3 and gcd(self.level, cp) == 1

    def contains_principal(self, M: int) -> bool:
        """True iff K_M is contained in this group (M | level assumed)."""
        if self.level % M:
            M2 = gcd(M, self.level)
            if M2 != M:
                return False
        return all(self.contains(g) for g in kernel_generators(self.genus, self.level, M))

    # membership and enumeration
    def elements(self) -> frozenset:
        with self._lock:
            if self._elements is None:
                self._elements = frozenset(closure(self.generators, self.genus, self.level,
                                                   maxsize=2_000_000))
            return self._elements

    def order(self) -> int:
        """Order of the image mod level."""
        if self.principal is not None:
            return _principal_image_order(self.genus, self.level, self.principal)
        return len(self.elements())

    def contains(self, g: FiniteLevelElement) -> bool:
        if g.level != self.level:
            if g.level % self.level:
                raise ValueError("element level must be a multiple of the subgroup level")
            g = g.reduce(self.level)
        if self.principal is not None:
            M = self.principal
            return M == 1 or mat_mod(g.matrix, M) == mat_mod(identity(2 * self.genus), M)
        return g in self.elements()

    def is_subgroup_of(self, other: "CongruenceSubgroup") -> bool:
        a, b = _common(self, other)
        return all(b.contains(g) for g in a.generators)

    def refine(self, new_level: int) -> "CongruenceSubgroup":
        """The same profinite group anchored at a multiple of the level."""
        if new_level == self.level:
            return self
        if new_level % self.level:
            raise ValueError("can only refine to a multiple of the level")
        gens = [lift_element(g, new_level) for g in self.generators]
        gens += kernel_generators(self.genus, new_level, self.level)
        principal = self.principal
        return CongruenceSubgroup(self.genus, new_level, _dedupe(gens), principal=principal,
                                  name=self.name)

    def stabilizer(self, v: Sequence[int]) -> "CongruenceSubgroup":
        """Stabilizer of the residue v mod level (Schreier generators)."""
        from .orbits import stabilizer_generators
        gens = stabilizer_generators(v, self.generators, self.level)
        return CongruenceSubgroup(self.genus, self.level, gens, name=f"{self.name}_v{tuple(v)}")

    def conjugate(self, g: FiniteLevelElement) -> "CongruenceSubgroup":
        """g K g^{-1} for a unit element g at this level."""
        gi = g.inverse()
        gens = [g * s * gi for s in self.generators]
        principal = self.principal  # principal subgroups are normal in K_1
        return CongruenceSubgroup(self.genus, self.level, gens, principal=principal,
                                  name=f"{self.name}^g")

    def intersect(self, other: "CongruenceSubgroup") -> "CongruenceSubgroup":
        a, b = _common(self, other)
        els = [g for g in a.elements() if b.contains(g)]
        gens = _small_generating_set(els, self.genus, a.level)
        return CongruenceSubgroup(self.genus, a.level, gens, name=f"({a.name}&{b.name})")

    def __repr__(self):
        return f"CongruenceSubgroup({self.name or '?'}, genus={self.genus}, level={self.level})"


def _common(a: CongruenceSubgroup, b: CongruenceSubgroup):
    N = lcm(a.level, b.level)
    return a.refine(N), b.refine(N)


def _principal_image_order(n: int, N: int, M: int) -> int:
    """|ker(GSp_2n(Z/N) -> GSp_2n(Z/M))|, from local orders."""
    def gsp_order(q: int, e: int) -> int:
        # |GSp_2n(Z/q^e)| = q^{(e-1) dim} |GSp_2n(F_q)|, dim = 2n^2 + n + 1
        dim = 2 * n * n + n + 1
        sp = q ** (n * n)
        for i in range(1, n + 1):
            sp *= q ** (2 * i) - 1
        return q ** ((e - 1) * dim) * sp * (q - 1)

    out = 1
    for q, e in factorize(N).items() if N > 1 else []:
        f = 0
        while M % q ** (f + 1) == 0:
            f += 1
        out *= gsp_order(q, e) // (gsp_order(q, f) if f else 1)
    return out


def _small_generating_set(els, n: int, level: int) -> list[FiniteLevelElement]:
    els = sorted(els, key=lambda g: g.matrix)
    gens: list[FiniteLevelElement] = []
    span = {FiniteLevelElement.identity(n, level)}
    for g in els:
        if g not in span:
            gens.append(g)
            span = closure(gens, n, level)
    return gens


def coset_key(L: "CongruenceSubgroup"):
    """A function g -> hashable key identifying the left coset g L."""
    if L.principal is not None:
        M = L.principal
        return lambda g: mat_mod(g.matrix, M)
    els = list(L.elements())
    return lambda g: min((g * h).matrix for h in els)


def coset_representatives(K: CongruenceSubgroup, L: CongruenceSubgroup
                          ) -> list[FiniteLevelElement]:
    """Transversal of K/L (left cosets gamma L), identity first."""
    K, L = _common(K, L)
    if not L.is_subgroup_of(K):
        raise ValueError("L is not contained in K")
    key = coset_key(L)
    ident = FiniteLevelElement.identity(K.genus, K.level)
    reps = {key(ident): ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in K.generators:
                h = s * g
                kh = key(h)
                if kh not in reps:
                    reps[kh] = h
                    nxt.append(h)
        frontier = nxt
    return list(reps.values())


def double_coset_representatives(L: CongruenceSubgroup, K: CongruenceSubgroup,
                                 Lp: CongruenceSubgroup):
    """Transversal of L \\ K / L' with the groups L_gamma = L cap gamma L' gamma^{-1}."""
    N = lcm(L.level, K.level, Lp.level)
    L, K, Lp = L.refine(N), K.refine(N), Lp.refine(N)
    if not (L.is_subgroup_of(K) and Lp.is_subgroup_of(K)):
        raise ValueError("L and L' must lie in K")
    Lel, Lpel = L.elements(), Lp.elements()
    remaining = set(K.elements())
    out = []
    ident = FiniteLevelElement.identity(K.genus, N)
    order = [ident] + sorted(remaining - {ident}, key=lambda g: g.matrix)
    for g in order:
        if g not in remaining:
            continue
        dc = {a * g * b for a in Lel for b in Lpel}
        remaining -= dc
        Lg = L.intersect(Lp.conjugate(g))
        out.append((g, Lg))
    return out


# ---------------------------------------------------------------- adelic elements

@dataclass(frozen=True)
class AdelicGroupElement:
    """z_q * m * u: rational center scale, integral similitude matrix, unit part."""

    center_scale: Fraction
    integral_part: Matrix
    unit_part: FiniteLevelElement | None = None

    def __post_init__(self):
        object.__setattr__(self, "center_scale", Fraction(self.center_scale))
        m = to_int(as_matrix(self.integral_part))
        object.__setattr__(self, "integral_part", m)
        ok, c = is_symplectic_similitude(m)
        if not ok or c <= 0:
            raise ValueError("integral part must be a similitude with positive multiplier")
        if self.center_scale <= 0:
            raise ValueError("center scale must be positive")

    @property
    def genus(self) -> int:
        return len(self.integral_part) // 2

    @classmethod
    def identity(cls, n: int) -> "AdelicGroupElement":
        return cls(Fraction(1), identity(2 * n))

    @classmethod
    def center(cls, n: int, q) -> "AdelicGroupElement":
        return cls(Fraction(q), identity(2 * n))

    @classmethod
    def unit(cls, u: FiniteLevelElement) -> "AdelicGroupElement":
        return cls(Fraction(1), identity(2 * u.genus), u)

    @classmethod
    def from_rational(cls, mat, unit: FiniteLevelElement | None = None) -> "AdelicGroupElement":
        """Factor a rational similitude as z_q * m with m integral and primitive."""
        g = as_matrix(mat)
        from .matrix import denominator
        from .arith import content
        D = denominator(g)
        m = to_int(scale(g, D))
        cont = content(x for row in m for x in row)
        m = tuple(tuple(x // cont for x in row) for row in m)
        q = Fraction(cont, D)
        ok, c = is_symplectic_similitude(m)
        if not ok:
            raise ValueError("not a symplectic similitude")
        if c < 0:
            raise ValueError("negative similitude is outside the supported class")
        return cls(q, m, unit)

    def rational_part(self) -> Matrix:
        return scale(self.integral_part, self.center_scale)

    def similitude(self) -> Fraction:
        return is_symplectic_similitude(self.rational_part())[1]

    def check_admissible(self, cp: int) -> None:
        q = self.center_scale
        c = is_symplectic_similitude(self.integral_part)[1]
        if gcd(q.numerator, cp) != 1 or gcd(q.denominator, cp) != 1 or gcd(int(c), cp) != 1:
            raise ValueError("element is not in the supported class prime to cp")

    def __mul__(self, other: "AdelicGroupElement") -> "AdelicGroupElement":
        """Product when at most one side carries a unit part, or units commute past.

        Supported: (z m)(z' m') and (z m)(u) and (u)(z m) with m = 1.
        """
        if other.unit_part is None and self.unit_part is None:
            return AdelicGroupElement.from_rational(mat_mul(self.rational_part(), other.rational_part()))
        if other.integral_part == identity(2 * self.genus) and self.unit_part is None:
            return AdelicGroupElement(self.center_scale * other.center_scale, self.integral_part,
                                      other.unit_part)
        if self.integral_part == identity(2 * self.genus) and other.unit_part is None \
                and other.integral_part == identity(2 * self.genus):
            return AdelicGroupElement(self.center_scale * other.center_scale, self.integral_part,
                                      self.unit_part)
        if self.integral_part == identity(2 * self.genus) and other.integral_part == identity(2 * self.genus):
            u, v = self.unit_part, other.unit_part
            N = lcm(u.level, v.level)
            if u.level != v.level:
                raise ValueError("unit parts at different levels")
            return AdelicGroupElement(self.center_scale * other.center_scale, self.integral_part, u * v)
        raise NotImplementedError("product outside the supported factored class")

    def inverse(self) -> "AdelicGroupElement":
        if self.unit_part is None:
            return AdelicGroupElement.from_rational(mat_inv(self.rational_part()))
        if self.integral_part == identity(2 * self.genus):
            return AdelicGroupElement(1 / self.center_scale, self.integral_part, self.unit_part.inverse())
        raise NotImplementedError("inverse outside the supported factored class")

    def inverse_rational(self) -> Matrix:
        return mat_inv(self.rational_part())
