"""Symplectic orbits: Euclidean reduction over Z, local orbits over Z_ell,
global K_M-orbits mod N, and a breadth-first oracle to check them against."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from math import gcd
from typing import Sequence

from .arith import content, crt_combine, factorize, int_valuation, lcm
from .cosets import CompactOpenSet, ElementaryCoset
from .matrix import Matrix, as_matrix, identity, mat_mul, mat_vec
from .symplectic import FiniteLevelElement, kernel_generators, swap_element, vector_orbit


# ---------------------------------------------------------------- over Z

def _transvection(n: int, i: int, x: int) -> Matrix:
    """A_{i,n+i}(x): adds x * v_{n+i} to v_i."""
    out = [list(r) for r in identity(2 * n)]
    out[i][n + i] = x
    return as_matrix(out)


def _block(n: int, A: Sequence[Sequence[int]], Ainv_t: Sequence[Sequence[int]]) -> Matrix:
    """diag(A, (A^t)^{-1}) for A in GL_n(Z); the caller supplies (A^t)^{-1}."""
    m = 2 * n
    out = [[0] * m for _ in range(m)]
    for i in range(n):
        for j in range(n):
            out[i][j] = A[i][j]
            out[n + i][n + j] = Ainv_t[i][j]
    return as_matrix(out)


def _eye(n: int) -> list[list[int]]:
    return [[int(r == c) for c in range(n)] for r in range(n)]


def euclidean_reduce(v: Sequence[int]) -> tuple[int, Matrix]:
    """Return (alpha, W) with W in GSp_2n(Z) and W v = alpha e_1, alpha = gcd >= 0."""
    v = [int(x) for x in v]
    m = len(v)
    if m == 0 or m % 2:
        raise ValueError("vector must have even length")
    n = m // 2
    W = identity(m)

    def apply(g):
        nonlocal W, v
        W = mat_mul(g, W)
        v = list(mat_vec(g, v))

    # clear the second block pairwise: (v_i, v_{n+i}) -> (g_i, 0)
    for i in range(n):
        while v[n + i] != 0:
            q = v[i] // v[n + i]
            if q:
                apply(_transvection(n, i, -q))
            apply(swap_element(n, i))
    # Euclid inside the first block with GL_n elementary blocks
    for j in range(1, n):
        while v[j] != 0:
            if v[0] != 0:
                q = v[j] // v[0]
                E, Et = _eye(n), _eye(n)
                E[j][0] = -q
                Et[0][j] = q
                apply(_block(n, E, Et))
            if v[j] != 0:
                P = _eye(n)
                P[0][0] = P[j][j] = 0
                P[0][j] = P[j][0] = 1
                apply(_block(n, P, P))
    if v[0] < 0:
        D = _eye(n)
        D[0][0] = -1
        apply(_block(n, D, D))
    return v[0], W


# ---------------------------------------------------------------- over Z_ell

def _val(v: Sequence[int], ell: int) -> float:
    """min ell-valuation of the coordinates (inf for the zero vector)."""
    vals = [int_valuation(x, ell) for x in v if x != 0]
    return min(vals) if vals else float("inf")


@dataclass(frozen=True)
class OrbitDescriptor:
    """K_{R,I} v + J V_R for R = Z_ell, I = ell^i, J = ell^j.

    ``sphere``: d V \\ ell d V with d = ell^exponent.
    ``coset``: base + ell^exponent V.
    """

    kind: str
    ell: int
    exponent: int
    base: tuple[int, ...]

    def residues(self, j: int) -> frozenset:
        """The set as residues mod ell^j (j must bound the descriptor)."""
        q = self.ell ** j
        m = len(self.base)
        if self.kind == "sphere":
            return frozenset(x for x in product(range(q), repeat=m)
                             if _val(x, self.ell) == self.exponent)
        step = self.ell ** min(self.exponent, j)
        reps = product(range(q // step), repeat=m)
        return frozenset(tuple((b + step * y) % q for b, y in zip(self.base, w)) for w in reps)


def local_orbit(v: Sequence[int], ell: int, i: int, j: int) -> OrbitDescriptor:
    """Two-case orbit formula over a DVR (i = 0 means I = R)."""
    if j < 0 or i < 0:
        raise ValueError("exponents must be nonnegative")
    v = tuple(int(x) for x in v)
    s = _val(v, ell)
    if i == 0 and s < j:
        return OrbitDescriptor("sphere", ell, int(s), v)
    e = j if s == float("inf") else min(j, i + int(s))
    return OrbitDescriptor("coset", ell, e, tuple(x % ell ** e for x in v) if e else (0,) * len(v))


# ---------------------------------------------------------------- global

def _orbit_data(v: Sequence[int], M: int, N: int):
    d = content(v)
    b = gcd(M * d, N)
    S = [ell for ell in (factorize(N) if N > 1 else {})
         if M % ell and d != 0 and int_valuation(d, ell) < int_valuation(N, ell)]
    return d, b, S


def _local_descriptor(v: tuple, M: int, N: int) -> tuple:
    """Per prime of N: ("sphere", q, s) or ("coset", q, step, v mod step)."""
    d, b, S = _orbit_data(v, M, N)
    out = []
    for ell, e in (factorize(N).items() if N > 1 else []):
        q = ell ** e
        if ell in S:
            out.append(("sphere", ell, q, int_valuation(d, ell)))
        else:
            step = min(ell ** int_valuation(b, ell), q) if b % ell == 0 else 1
            out.append(("coset", ell, q, step, tuple(x % step for x in v)))
    return tuple(out)


@lru_cache(maxsize=4096)
def _orbit_set_from(desc: tuple, n2: int, N: int) -> frozenset:
    local = []
    for item in desc:
        if item[0] == "sphere":
            _, ell, q, s = item
            pts = [x for x in product(range(q), repeat=n2) if _val(x, ell) == s]
        else:
            _, ell, q, step, base = item
            pts = [tuple((b + step * y) % q for b, y in zip(base, w))
                   for w in product(range(q // step), repeat=n2)]
        local.append((q, pts))
    # CRT idempotents: e_i = 1 mod q_i and 0 mod the other prime powers
    idem = [crt_combine([(int(j == i), qq) for j, (qq, _) in enumerate(local)])[0]
            for i in range(len(local))]
    out = set()
    for combo in product(*(pts for _, pts in local)):
        out.add(tuple(sum(e * c[k] for e, c in zip(idem, combo)) % N for k in range(n2)))
    return frozenset(out)


def global_orbit_set(v: Sequence[int], M: int, N: int) -> CompactOpenSet:
    """K_M v + N V as a canonical-frame residue set at level N (scale 1).

    Prime by prime: a sphere d_v V \\ ell d_v V at ell in S, otherwise the coset
    v + b V, with b = gcd(M d_v, N).
    """
    if N % M:
        raise ValueError("M must divide N")
    v = tuple(int(x) for x in v)
    n2 = len(v)
    if N == 1:
        return CompactOpenSet(n2 // 2, 1, 1, frozenset([(0,) * n2]))
    return CompactOpenSet(n2 // 2, 1, N, _orbit_set_from(_local_descriptor(v, M, N), n2, N))


def orbit_bfs_oracle(v: Sequence[int], gens: Sequence[FiniteLevelElement], level: int | None = None
                     ) -> frozenset:
    if level is None:
        if not gens:
            raise ValueError("level required with an empty generator list")
        level = gens[0].level
    return frozenset(vector_orbit(v, gens, level))


def stabilizer_generators(v: Sequence[int], gens: Sequence[FiniteLevelElement], level: int
                          ) -> list[FiniteLevelElement]:
    """Schreier generators of the stabilizer of v (deduplicated)."""
    trans = vector_orbit(v, gens, level)
    out, seen = [], set()
    for x, tx in trans.items():
        for s in gens:
            y = s.act(x)
            h = trans[y].inverse() * s * tx
            if not h.is_identity() and h.matrix not in seen:
                seen.add(h.matrix)
                out.append(h)
    return out


def fixed_vectors(gens: Sequence[FiniteLevelElement], level: int, n: int) -> frozenset:
    return frozenset(x for x in product(range(level), repeat=2 * n)
                     if all(g.act(x) == x for g in gens))


def invariant_set_to_orbit_sum(C: CompactOpenSet, K, N: int | None = None
                               ) -> list[tuple[tuple[int, ...], CompactOpenSet]]:
    """Partition a K-invariant set into K-orbit sets; base = lexicographic minimum."""
    N = lcm(C.level, K.level) if N is None else N
    res = C.in_frame(C.scale, N)
    K = K.refine(N)
    remaining = set(res)
    out = []
    while remaining:
        base = min(remaining)
        orb = frozenset(vector_orbit(base, K.generators, N))
        if not orb <= remaining:
            raise ValueError("set is not K-invariant")
        remaining -= orb
        out.append((base, CompactOpenSet(C.genus, C.scale, N, orb)))
    return out


def sphere_difference_decomposition(v: Sequence[int], M: int, N: int
                                    ) -> list[tuple[int, ElementaryCoset]]:
    """Signed scale-1 cosets whose characteristic functions sum to K_M v + N V.

    Inclusion-exclusion over the sphere primes: each sphere is
    ch(ell^s V) - ch(ell^{s+1} V) locally, everything else a coset.
    """
    v = tuple(int(x) for x in v)
    d, b, S = _orbit_data(v, M, N)
    bprime = b
    for ell in S:
        while bprime % ell == 0:
            bprime //= ell
    out = []
    for mask in product((0, 1), repeat=len(S)):
        D = 1
        for ell, t in zip(S, mask):
            D *= ell ** (int_valuation(d, ell) + t)
        level = D * bprime
        w = tuple(crt_combine([(0, D), (x % bprime, bprime)])[0] for x in v)
        out.append(((-1) ** sum(mask), ElementaryCoset(1, level, w)))
    return out
