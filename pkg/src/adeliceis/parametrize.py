"""The weight-k map from K-invariant Schwartz functions to formal Eisenstein
classes, determined by  xi_{v,N} -> N^k e(v, N)  and  z_a -> a^k.

Three ways to evaluate it:

* ``canonical``: read the function in its minimal frame (a, N) and map each
  coset directly, a^{-k} N^k e(v, N);
* ``orbit``: split level sets into K_M-orbits, write each orbit as a signed sum
  of lattice cosets (spheres d V \\ ell d V become differences), and map cosets;
* ``stabilizer``: for each K-orbit, push the symbol of its base point forward
  from the stabilizer K_v to K.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Iterable

from .arith import divisors, lcm
from .config import DEFAULT, EngineConfig
from .cosets import _check_frame
from .eisenstein import FormalEisensteinClass, NotInvariantError, admissible_multiple
from .orbits import global_orbit_set, invariant_set_to_orbit_sum, sphere_difference_decomposition
from .schwartz import SchwartzFunction
from .symplectic import CongruenceSubgroup, vector_orbit

PATHS = ("canonical", "orbit", "stabilizer")


class PathDisagreement(AssertionError):
    """Two evaluation paths returned different normal forms."""


def _prepare(phi: SchwartzFunction, K: CongruenceSubgroup, cfg: EngineConfig):
    if not K.admissible(cfg.cp):
        raise ValueError(f"subgroup level {K.level} is not admissible for cp={cfg.cp}")
    c = phi.canonical()
    _check_frame(c.scale, c.level, cfg.cp)
    if not c.invariants_check(K):
        raise NotInvariantError("function is not K-invariant")
    T = lcm(c.level, K.level)
    return c, T


def _frame_class(scale: int, level: int, residues: Iterable, coeff, k: int, n: int,
                 cfg: EngineConfig) -> FormalEisensteinClass:
    """Image of coeff * ch((1/scale)(R + level V)) for a residue set R avoiding 0."""
    T = admissible_multiple(level, cfg)
    step = T // level
    lifts = list(product(range(step), repeat=2 * n))
    factor = Fraction(coeff) * Fraction(T, scale) ** k
    out: dict = {}
    for r in residues:
        if not any(x % level for x in r):
            raise ValueError("coset contains the origin")
        for w in lifts:
            x = tuple((a + level * b) % T for a, b in zip(r, w))
            out[x] = out.get(x, 0) + factor
    return FormalEisensteinClass(n, k, T, out, cfg.p)


def parametrize_canonical(phi, k, K, cfg=DEFAULT) -> FormalEisensteinClass:
    c, T = _prepare(phi, K, cfg)
    out = FormalEisensteinClass.zero(c.genus, k, 1, cfg.p)
    for r, val in c.coeffs.items():
        out = out + _frame_class(c.scale, c.level, [r], val, k, c.genus, cfg)
    return out.refine(admissible_multiple(lcm(out.level, T), cfg))


def _largest_principal(K: CongruenceSubgroup) -> int:
    """Largest M | level with K_M inside K (K always contains K_level)."""
    if K.principal is not None:
        return K.principal
    for M in sorted(divisors(K.level), reverse=True)[1:]:
        try:
            if K.contains_principal(M):
                return M
        except RuntimeError:      # enumeration too large; settle for what is known
            break
    return K.level


def parametrize_orbit(phi, k, K, cfg=DEFAULT) -> FormalEisensteinClass:
    c, T = _prepare(phi, K, cfg)
    n, a = c.genus, c.scale
    KT = K.refine(T)
    M = _largest_principal(K)
    zero_lattices: dict[int, Fraction] = {}
    out = FormalEisensteinClass.zero(n, k, 1, cfg.p)
    for val, C in SchwartzFunction(n, a, c.level, c.coeffs).level_sets().items():
        for _, orbit in invariant_set_to_orbit_sum(C, KT, T):
            remaining = set(orbit.residues)
            while remaining:
                base = min(remaining)
                remaining -= global_orbit_set(base, M, T).residues
                for sign, cos in sphere_difference_decomposition(base, M, T):
                    coeff = sign * val
                    if any(x % cos.level for x in cos.residue):
                        # scale a, level L, residue w: a^{-k} L^k e(w, L)
                        out = out + _frame_class(a, cos.level, [cos.residue], coeff, k, n, cfg)
                    else:
                        zero_lattices[cos.level] = zero_lattices.get(cos.level, 0) + coeff
    zero_lattices = {L: z for L, z in zero_lattices.items() if z}
    if zero_lattices:
        if sum(zero_lattices.values()) != 0:
            raise AssertionError("lattice terms do not cancel at the origin")
        D = lcm(*zero_lattices)
        for L, z in zero_lattices.items():
            t = D // L
            if t == 1:
                continue
            # ch(LV \ DV) = z_L ch(V \ tV), and z_L contributes L^k
            sphere = [u for u in product(range(t), repeat=2 * n) if any(u)]
            out = out + _frame_class(a, t, sphere, z * Fraction(L) ** k, k, n, cfg)
    return out.refine(admissible_multiple(lcm(out.level, T), cfg))


def parametrize_stabilizer(phi, k, K, cfg=DEFAULT) -> FormalEisensteinClass:
    c, T = _prepare(phi, K, cfg)
    n, a = c.genus, c.scale
    KT = K.refine(T)
    vals = c.in_frame(a, T)
    out = FormalEisensteinClass.zero(n, k, T, cfg.p)
    seen: set = set()
    for v in sorted(vals):
        if v in seen:
            continue
        trans = vector_orbit(v, KT.generators, T)
        seen.update(trans)
        Kv = KT.stabilizer(v)
        x = FormalEisensteinClass.symbol(v, T, k, vals[v] * Fraction(T, a) ** k, cfg.p)
        out = out + x.pushforward(Kv, KT, reps=list(trans.values()))
    return out.refine(admissible_multiple(lcm(out.level, T), cfg))


def parametrize(phi: SchwartzFunction, k: int, K: CongruenceSubgroup, path: str = "canonical",
                cfg: EngineConfig = DEFAULT):
    """Evaluate the map along one path, or all three with an agreement check."""
    fns = {"canonical": parametrize_canonical, "orbit": parametrize_orbit,
           "stabilizer": parametrize_stabilizer}
    if path == "all":
        results = {name: fns[name](phi, k, K, cfg) for name in PATHS}
        L = lcm(*(r.level for r in results.values()))
        results = {name: r.refine(L) for name, r in results.items()}
        ref = results["canonical"]
        for name, r in results.items():
            if not r.identical(ref):
                raise PathDisagreement(f"path {name} disagrees with canonical")
        return ref
    if path not in fns:
        raise ValueError(f"unknown path {path!r}")
    return fns[path](phi, k, K, cfg)
