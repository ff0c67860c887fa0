"""Property checks for functors on compact open subgroups with restriction,
induction and conjugation: the axioms C1-C3, G (Galois), Co (cohomological),
M (Mackey), and the property that compatibility with restriction and conjugation
implies compatibility with induction.

A functor is described by a :class:`FunctorInstance`; values at K are elements
invariant under K, pullback along L <= K is inclusion, pushforward is the trace
over K/L, and conjugation by g maps values at K to values at gKg^{-1}.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Sequence

from .arith import lcm
from .eisenstein import FormalEisensteinClass
from .matrix import sparse_rank
from .orbits import invariant_set_to_orbit_sum
from .schwartz import SchwartzFunction
from .symplectic import (CongruenceSubgroup, FiniteLevelElement, coset_representatives,
                         double_coset_representatives, generators_mod_N, lift_element)
from .cosets import CompactOpenSet

AXIOMS = ("C1", "C2", "C3", "G", "Co", "M", "res-conj-ind")


@dataclass
class FunctorInstance:
    name: str
    genus: int
    basis: Callable[..., list]          # basis(K, N=None): spanning set of M(K) at level N
    pullback: Callable[[Any, CongruenceSubgroup, CongruenceSubgroup], Any]
    pushforward: Callable[[Any, CongruenceSubgroup, CongruenceSubgroup], Any]
    conjugate: Callable[[Any, FiniteLevelElement], Any]
    add: Callable[[Any, Any], Any]
    scale: Callable[[Any, Fraction], Any]
    equal: Callable[[Any, Any], bool]
    zero: Callable[[], Any]
    coords: Callable[[Any, int], dict]                   # coordinates at a level
    serialize: Callable[[Any], dict]
    galois_required: bool = True


@dataclass
class AxiomReport:
    axiom: str
    status: str                 # verified | falsified | skipped
    witness: dict | None = None
    detail: str = ""
    required: bool = True

    def to_json(self) -> dict:
        return {"axiom": self.axiom, "status": self.status, "required": self.required,
                "detail": self.detail, "witness": self.witness}

    @property
    def ok(self) -> bool:
        return self.status != "falsified" or not self.required


def group_json(K: CongruenceSubgroup) -> dict:
    return {"genus": K.genus, "level": K.level, "name": K.name, "principal": K.principal,
            "generators": [[list(r) for r in g.matrix] for g in K.generators]}


def element_json(g: FiniteLevelElement) -> dict:
    return {"level": g.level, "matrix": [list(r) for r in g.matrix]}


# ---------------------------------------------------------------- instances

def _sum(F: FunctorInstance, xs):
    out = F.zero()
    for x in xs:
        out = F.add(out, x)
    return out


def _orbit_sums(K: CongruenceSubgroup, N: int | None = None) -> list[CompactOpenSet]:
    n = K.genus
    N = K.level if N is None else lcm(N, K.level)
    K = K.refine(N)
    C = CompactOpenSet.lattice(n, 1).subtract(CompactOpenSet.lattice(n, N))
    return [orb for _, orb in invariant_set_to_orbit_sum(C, K, N)]


def schwartz_instance(n: int = 1) -> FunctorInstance:
    def push(x, L, K):
        return x.induce(L, K)

    def pull(x, K, L):
        return x.restrict(K, L)

    return FunctorInstance(
        name="schwartz", genus=n,
        basis=lambda K, N=None: [SchwartzFunction.from_set(o) for o in _orbit_sums(K, N)],
        pullback=pull, pushforward=push,
        conjugate=lambda x, g: x.act_unit(g),
        add=lambda x, y: x + y, scale=lambda x, c: x * c,
        equal=lambda x, y: x == y, zero=lambda: SchwartzFunction.zero(n),
        coords=lambda x, N: {r: c for r, c in x.in_frame(x.scale, lcm(x.level, N)).items()},
        serialize=lambda x: x.to_json(),
        galois_required=True)


def eisenstein_instance(n: int = 1, k: int = 0, p: int = 5) -> FunctorInstance:
    def basis(K, N=None):
        out = []
        for o in _orbit_sums(K, N):
            out.append(FormalEisensteinClass(n, k, o.level, {r: 1 for r in o.residues}, p)
                       .normal_form())
        return out

    def pull(x, K, L):
        if not x.invariants_check(K):
            raise ValueError("class is not K-invariant")
        return x.refine(lcm(x.level, L.level))

    return FunctorInstance(
        name="eisenstein", genus=n, basis=basis,
        pullback=pull,
        pushforward=lambda x, L, K: x.pushforward(L, K),
        conjugate=lambda x, g: x.act_unit(g),
        add=lambda x, y: x + y, scale=lambda x, c: x * c,
        equal=lambda x, y: x == y, zero=lambda: FormalEisensteinClass.zero(n, k, 1, p),
        coords=lambda x, N: x.refine(lcm(x.level, N)).coeffs,
        serialize=lambda x: x.to_json(),
        galois_required=False)


def inject_fault(F: FunctorInstance, kind: str = "drop-coset") -> FunctorInstance:
    """A deliberately broken copy of an instance (for testing the harness)."""
    if kind == "drop-coset":
        def push(x, L, K):
            N = lcm(K.level, L.level)
            reps = coset_representatives(K.refine(N), L.refine(N))
            if len(reps) > 1:
                reps = reps[:-1]
            return _sum(F, [F.conjugate(x, g) for g in reps])
        return replace(F, name=F.name + "+drop-coset", pushforward=push)
    if kind == "twist-conjugation":
        return replace(F, name=F.name + "+twist", conjugate=lambda x, g: F.scale(F.conjugate(x, g), 2)
                       if not g.is_identity() else x)
    raise ValueError(f"unknown fault {kind!r}")


# ---------------------------------------------------------------- configuration

@dataclass
class HarnessConfig:
    groups: dict                       # name -> CongruenceSubgroup
    nested: list                       # (K, L) names with L <= K
    normal: list                       # (K, L) names with L normal in K
    chains: list                       # (K, L, L') names with L' <= L <= K
    mackey: list                       # (K, L, L') names with L, L' <= K
    elements: list                     # unit elements for conjugation checks
    seed: int = 0
    small_normal: list = field(default_factory=list)   # normal pairs of small index


def default_config(levels: Sequence[int] = (3, 9), n: int = 1, seed: int = 0) -> HarnessConfig:
    """Principal groups at the given levels, the full group, and a point stabilizer."""
    levels = sorted(levels)
    top = lcm(*levels)
    G = {"K1": CongruenceSubgroup.full(n, levels[0])}
    for N in levels:
        G[f"K{N}"] = CongruenceSubgroup.principal_subgroup(n, N)
    base = (1,) + (0,) * (2 * n - 1)
    G["B"] = G["K1"].stabilizer(base)
    nested = [("K1", f"K{N}") for N in levels] + [("K1", "B")]
    nested += [(f"K{a}", f"K{b}") for a in levels for b in levels if a < b and b % a == 0]
    normal = [(K, L) for K, L in nested if L != "B"]
    chains = [("K1", "B", f"K{levels[0]}")]
    chains += [("K1", f"K{a}", f"K{b}") for a in levels for b in levels if a < b and b % a == 0]
    mackey = [("K1", "B", "B"), ("K1", "B", f"K{levels[0]}"), ("K1", f"K{levels[0]}", "B")]
    # normal pairs of moderate index also exercise the Galois-style sum
    small = [(K, L) for K, L in normal if _index_estimate(G[K], G[L]) <= 100]
    mackey += [(K, L, L) for K, L in small]
    rng = random.Random(seed)
    gens = generators_mod_N(n, top)
    elements = []
    for _ in range(3):
        g = gens[rng.randrange(len(gens))]
        for _ in range(rng.randrange(1, 4)):
            g = g * gens[rng.randrange(len(gens))]
        elements.append(g)
    return HarnessConfig(G, nested, normal, chains, mackey, elements, seed, small)


# ---------------------------------------------------------------- checks

def _witness(**kw) -> dict:
    out = {}
    for k, v in kw.items():
        if isinstance(v, CongruenceSubgroup):
            out[k] = group_json(v)
        elif isinstance(v, FiniteLevelElement):
            out[k] = element_json(v)
        else:
            out[k] = v
    return out


def _index_estimate(K: CongruenceSubgroup, L: CongruenceSubgroup) -> int:
    N = lcm(K.level, L.level)
    return K.refine(N).order() // L.refine(N).order()


def _index(K: CongruenceSubgroup, L: CongruenceSubgroup) -> int:
    N = lcm(K.level, L.level)
    return len(coset_representatives(K.refine(N), L.refine(N)))


def check_C1(F, cfg) -> AxiomReport:
    for name, K in cfg.groups.items():
        for x in F.basis(K):
            if not (F.equal(F.pullback(x, K, K), x) and F.equal(F.pushforward(x, K, K), x)):
                return AxiomReport("C1", "falsified", _witness(group=K, value=F.serialize(x)),
                                   "identity maps are not the identity")
    return AxiomReport("C1", "verified", detail="pullback and pushforward along identities")


def check_C2(F, cfg) -> AxiomReport:
    """Functoriality: transitivity of pullbacks, pushforwards and conjugations."""
    G = cfg.groups
    for Kn, Ln, Lpn in cfg.chains:
        K, L, Lp = G[Kn], G[Ln], G[Lpn]
        for x in F.basis(K):
            if not F.equal(F.pullback(F.pullback(x, K, L), L, Lp), F.pullback(x, K, Lp)):
                return AxiomReport("C2", "falsified", _witness(K=K, L=L, Lp=Lp, value=F.serialize(x)),
                                   "pullbacks do not compose")
        for y in F.basis(Lp):
            if not F.equal(F.pushforward(F.pushforward(y, Lp, L), L, K), F.pushforward(y, Lp, K)):
                return AxiomReport("C2", "falsified", _witness(K=K, L=L, Lp=Lp, value=F.serialize(y)),
                                   "pushforwards do not compose")
    K = G["K1"]
    els = cfg.elements
    for x in F.basis(G[cfg.nested[-1][1]]):
        for g, h in zip(els, els[1:] + els[:1]):
            N = lcm(g.level, h.level)
            gh = lift_element(g, N) * lift_element(h, N)
            if not F.equal(F.conjugate(F.conjugate(x, h), g), F.conjugate(x, gh)):
                return AxiomReport("C2", "falsified", _witness(g=g, h=h, value=F.serialize(x)),
                                   "conjugations do not compose")
            if not F.equal(F.conjugate(F.conjugate(x, g), g.inverse()), x):
                return AxiomReport("C2", "falsified", _witness(g=g, value=F.serialize(x)),
                                   "conjugation by g^{-1} does not invert g")
    return AxiomReport("C2", "verified", detail="compositions along chains and products")


def check_C3(F, cfg) -> AxiomReport:
    for name, K in cfg.groups.items():
        for x in F.basis(K):
            for g in K.generators:
                if not F.equal(F.conjugate(x, g), x):
                    return AxiomReport("C3", "falsified", _witness(group=K, g=g, value=F.serialize(x)),
                                       "inner conjugation is not trivial")
    return AxiomReport("C3", "verified", detail="inner conjugations act trivially")


def _fixed_dim(F, vecs, gens, N) -> tuple[int, int]:
    """(rank of span(vecs), dim of the part fixed by gens), over Q."""
    rows = [F.coords(v, N) for v in vecs]
    indep, span = [], []
    for v, row in zip(vecs, rows):
        if sparse_rank(span + [row]) > len(span):
            span.append(row)
            indep.append(v)
    r = len(indep)
    moved = []
    for v in indep:
        row = {}
        for i, g in enumerate(gens):
            d = F.add(F.conjugate(v, g), F.scale(v, -1))
            for c, x in F.coords(d, N).items():
                row[(i, c)] = x
        moved.append(row)
    # dimension of the kernel of c -> sum c_i (g v_i - v_i)
    cols = {}
    for j, row in enumerate(moved):
        for c, x in row.items():
            cols.setdefault(c, {})[j] = x
    return r, r - sparse_rank(list(cols.values()))


def check_G(F, cfg) -> AxiomReport:
    G = cfg.groups
    required = F.galois_required
    details = []
    for Kn, Ln in cfg.normal:
        K, L = G[Kn], G[Ln]
        N = lcm(K.level, L.level)
        low = [F.pullback(x, K, L) for x in F.basis(K, N)]
        r_low = sparse_rank([F.coords(x, N) for x in low])
        _, fixed = _fixed_dim(F, F.basis(L, N), K.refine(N).generators, N)
        details.append(f"{Kn}/{Ln}: rank {r_low} vs fixed {fixed}")
        if r_low != fixed:
            return AxiomReport("G", "falsified", _witness(K=K, L=L, rank=r_low, fixed=fixed),
                               "; ".join(details), required)
    return AxiomReport("G", "verified", detail="; ".join(details), required=required)


def check_Co(F, cfg) -> AxiomReport:
    G = cfg.groups
    for Kn, Ln in cfg.nested:
        K, L = G[Kn], G[Ln]
        idx = _index(K, L)
        for x in F.basis(K):
            lhs = F.pushforward(F.pullback(x, K, L), L, K)
            if not F.equal(lhs, F.scale(x, idx)):
                return AxiomReport("Co", "falsified",
                                   _witness(K=K, L=L, index=idx, value=F.serialize(x),
                                            got=F.serialize(lhs)),
                                   f"pushforward of pullback is not {idx} times the identity")
    return AxiomReport("Co", "verified", detail="pushforward after pullback is the index")


def mackey_sides(F, x, K, L, Lp):
    """Both sides of the Mackey square for x in M(L')."""
    lhs = F.pullback(F.pushforward(x, Lp, K), K, L)
    rhs = F.zero()
    for g, Lg in double_coset_representatives(L, K, Lp):
        y = F.conjugate(x, g)
        rhs = F.add(rhs, F.pushforward(y, Lg, L))
    return lhs, rhs


def check_M(F, cfg) -> AxiomReport:
    G = cfg.groups
    for Kn, Ln, Lpn in cfg.mackey:
        K, L, Lp = G[Kn], G[Ln], G[Lpn]
        for x in F.basis(Lp):
            lhs, rhs = mackey_sides(F, x, K, L, Lp)
            if not F.equal(lhs, rhs):
                return AxiomReport("M", "falsified",
                                   _witness(K=K, L=L, Lp=Lp, value=F.serialize(x)),
                                   "Mackey square does not commute")
    return AxiomReport("M", "verified", detail="explicit double-coset decompositions")


def check_res_conj_ind(F, cfg) -> AxiomReport:
    """For L normal in K: pullback of pushforward equals the sum of conjugates,
    and agrees with the Mackey decomposition."""
    G = cfg.groups
    for Kn, Ln in cfg.small_normal:
        K, L = G[Kn], G[Ln]
        N = lcm(K.level, L.level)
        reps = coset_representatives(K.refine(N), L.refine(N))
        for x in F.basis(L):
            lhs = F.pullback(F.pushforward(x, L, K), K, L)
            galois = _sum(F, [F.conjugate(x, g) for g in reps])
            _, mack = mackey_sides(F, x, K, L, L)
            if not (F.equal(lhs, galois) and F.equal(galois, mack)):
                return AxiomReport("res-conj-ind", "falsified",
                                   _witness(K=K, L=L, value=F.serialize(x)),
                                   "normal-subgroup sum disagrees")
    return AxiomReport("res-conj-ind", "verified", detail="Galois-style sum equals Mackey sum")


CHECKS = {"C1": check_C1, "C2": check_C2, "C3": check_C3, "G": check_G, "Co": check_Co,
          "M": check_M, "res-conj-ind": check_res_conj_ind}


def check_axioms(F: FunctorInstance, cfg: HarnessConfig | None = None,
                 axioms: Sequence[str] = AXIOMS) -> list[AxiomReport]:
    cfg = cfg or default_config(n=F.genus)
    out = []
    for a in axioms:
        try:
            out.append(CHECKS[a](F, cfg))
        except Exception as e:      # a broken instance can fail by raising; report it
            required = a != "G" or F.galois_required
            out.append(AxiomReport(a, "falsified", {"error": f"{type(e).__name__}: {e}"},
                                   "instance raised during the check", required))
    return out


# ---------------------------------------------------------------- morphisms

def check_morphism(F: FunctorInstance, H: FunctorInstance, maps: Callable[[Any, CongruenceSubgroup], Any],
                   cfg: HarnessConfig | None = None, mode: str = "full") -> AxiomReport:
    """Check that maps(x, K): F(K) -> H(K) commutes with pullbacks and conjugations,
    and then (both modes) compute the induction squares directly.

    In ``pullbacks-only`` mode the hypotheses of that implication are also checked:
    pullbacks in H must be injective on the tested bases.
    """
    cfg = cfg or default_config(n=F.genus)
    G = cfg.groups
    if mode not in ("full", "pullbacks-only"):
        raise ValueError("mode must be 'full' or 'pullbacks-only'")
    for Kn, Ln in cfg.nested:
        K, L = G[Kn], G[Ln]
        for x in F.basis(K):
            a = maps(F.pullback(x, K, L), L)
            b = H.pullback(maps(x, K), K, L)
            if not H.equal(a, b):
                return AxiomReport("morphism", "falsified",
                                   _witness(square="pullback", K=K, L=L, value=F.serialize(x)),
                                   "pullback square does not commute")
    for name, K in cfg.groups.items():
        for x in F.basis(K):
            for g in cfg.elements:
                a = maps(F.conjugate(x, g), K.conjugate(_at(g, K.level)))
                b = H.conjugate(maps(x, K), g)
                if not H.equal(a, b):
                    return AxiomReport("morphism", "falsified",
                                       _witness(square="conjugation", K=K, g=g, value=F.serialize(x)),
                                       "conjugation square does not commute")
    if mode == "pullbacks-only":
        for Kn, Ln in cfg.nested:
            K, L = G[Kn], G[Ln]
            N = lcm(K.level, L.level)
            vecs = [H.coords(H.pullback(y, K, L), N) for y in H.basis(K)]
            before = sparse_rank([H.coords(y, N) for y in H.basis(K)])
            if sparse_rank(vecs) != before:
                return AxiomReport("morphism", "falsified", _witness(K=K, L=L),
                                   "restriction in the target is not injective")
    for Kn, Ln in cfg.nested:
        K, L = G[Kn], G[Ln]
        for y in F.basis(L):
            a = maps(F.pushforward(y, L, K), K)
            b = H.pushforward(maps(y, L), L, K)
            if not H.equal(a, b):
                return AxiomReport("morphism", "falsified",
                                   _witness(square="induction", K=K, L=L, value=F.serialize(y)),
                                   "induction square does not commute")
    return AxiomReport("morphism", "verified", detail=f"mode {mode}")


def _at(g: FiniteLevelElement, level: int) -> FiniteLevelElement:
    if g.level == level:
        return g
    if g.level % level == 0:
        return g.reduce(level)
    return lift_element(g, lcm(g.level, level)).reduce(level) if lcm(g.level, level) != level \
        else lift_element(g, level)
