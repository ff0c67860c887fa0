"""Executable acceptance criteria.  Each criterion returns a CriterionResult;
the self-test command and the acceptance tests both run these."""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd

from .arith import divisors, is_p_integral, is_primitive, prime_divisors
from .config import DEFAULT, EngineConfig
from .cosets import CompactOpenSet
from .eisenstein import FormalEisensteinClass, EisSymbol
from .matrix import mat_vec, sparse_rank
from .orbits import (euclidean_reduce, fixed_vectors, global_orbit_set, orbit_bfs_oracle)
from .parametrize import PATHS, parametrize
from .schwartz import SchwartzFunction
from .symplectic import (AdelicGroupElement, CongruenceSubgroup, FiniteLevelElement,
                         generators_mod_N, is_symplectic_similitude, kernel_generators,
                         vector_orbit)

# a fault name that selftest can inject; criteria consult it
FAULTS = ("none", "orbit-coset", "drop-coset", "twist-parametrize")


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0
    integral: bool = True          # every produced coefficient was p-integral
    witness: dict | None = None

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number}: {self.name} ({self.detail}; {self.seconds:.1f}s)"

    def to_json(self) -> dict:
        return {"criterion": self.number, "name": self.name, "passed": self.passed,
                "detail": self.detail, "integral": self.integral, "witness": self.witness}


def _timed(number, name):
    def deco(fn):
        def run(cfg: EngineConfig = DEFAULT, fault: str = "none", **kw) -> CriterionResult:
            t = time.perf_counter()
            res = fn(cfg, fault, **kw)
            res.number, res.name = number, name
            res.seconds = time.perf_counter() - t
            return res
        run.__name__ = fn.__name__
        run.number = number
        run.title = name
        return run
    return deco


def _integral(x, p) -> bool:
    return all(is_p_integral(c, p) for c in x.coeffs.values())


# ---------------------------------------------------------------- 1

@_timed(1, "orbit closed form equals breadth-first orbit")
def orbit_closed_form(cfg, fault, levels=(3, 9, 21, 63), genus2_levels=(3,)):
    checked = 0
    for n, Ns in ((1, levels), (2, genus2_levels)):
        for N in Ns:
            for M in divisors(N):
                gens = kernel_generators(n, N, M)
                oracle: dict = {}
                for v in product(range(N), repeat=2 * n):
                    got = global_orbit_set(v, M, N).residues
                    if fault == "orbit-coset" and n == 1 and N == 9 and M == 3:
                        got = got | {(0, 0)}
                    if v not in oracle:
                        # one breadth-first search per orbit serves every point in it
                        orb = orbit_bfs_oracle(v, gens, N) if gens else frozenset([v])
                        for x in orb:
                            oracle[x] = orb
                    if got != oracle[v]:
                        return CriterionResult(1, "", False, f"mismatch n={n} N={N} M={M}",
                                               witness={"v": list(v), "M": M, "N": N, "genus": n})
                    checked += 1
    return CriterionResult(1, "", True, f"{checked} vectors")


# ---------------------------------------------------------------- 2

@_timed(2, "Euclidean reduction witnesses")
def euclidean(cfg, fault, count=10_000):
    rng = random.Random(cfg.seed)
    for i in range(count):
        n = 1 + (i % 2)
        v = [rng.randint(-100, 100) for _ in range(2 * n)]
        alpha, W = euclidean_reduce(v)
        g = 0
        for x in v:
            g = gcd(g, x)
        ok, c = is_symplectic_similitude(W)
        if list(mat_vec(W, v)) != [alpha] + [0] * (2 * n - 1) or alpha != g or not ok \
                or c not in (1, -1):
            return CriterionResult(2, "", False, "bad witness", witness={"v": v})
    return CriterionResult(2, "", True, f"{count} vectors")


# ---------------------------------------------------------------- 3

def _random_rewrites(x: FormalEisensteinClass, rng: random.Random, steps: int):
    for _ in range(steps):
        options = x.rewritable()
        if not options:
            break
        u, ell = options[rng.randrange(len(options))]
        x = x.rewrite(u, ell)
    return x


@_timed(3, "rewrite confluence")
def confluence(cfg, fault, cases=((1, 63), (1, 9), (2, 9)), weights=(0, 1, 2), shuffles=20):
    rng = random.Random(cfg.seed)
    count = 0
    for n, N in cases:
        for k in weights:
            for u in product(range(N), repeat=2 * n):
                if not any(u) or is_primitive(u, N):
                    continue
                x = FormalEisensteinClass.symbol(u, N, k, p=cfg.p)
                ref = x.normal_form().coeffs
                variants = []
                for ell in prime_divisors(N):
                    if all(c % ell == 0 for c in u):
                        variants.append(("prime", ell, x.rewrite(u, ell)))
                for d in divisors(N):
                    if d > 1 and all(c % d == 0 for c in u):
                        variants.append(("divisor", d, x.rewrite(u, d)))
                # prime chain for each composite divisor: rewrite by one prime, then the rest
                for d in divisors(N):
                    ps = prime_divisors(d) if d > 1 else []
                    if len(ps) > 1 and all(c % d == 0 for c in u):
                        y = x.rewrite(u, ps[0])
                        for t, _ in sorted(y.coeffs.items()):
                            if all(c % ps[1] == 0 for c in t):
                                y = y.rewrite(t, ps[1])
                        variants.append(("chain", d, y))
                nshuf = shuffles if n == 1 else 2
                for s in range(nshuf):
                    variants.append(("shuffle", s, _random_rewrites(x, rng, rng.randint(1, 4))))
                for kind, d, y in variants:
                    if y.normal_form().coeffs != ref:
                        return CriterionResult(3, "", False, f"{kind} {d} differs",
                                               witness={"residue": list(u), "level": N, "k": k})
                count += 1
    return CriterionResult(3, "", True, f"{count} symbols")


# ---------------------------------------------------------------- 4

def _phi(phi, k, K, cfg, fault, path="all"):
    out = parametrize(phi, k, K, path, cfg)
    if fault == "twist-parametrize" and K.level == 9:
        out = out * 2
    return out


@_timed(4, "basis case: xi_{v,N} -> N^k e(v,N)")
def basis_case(cfg, fault, levels=(3, 9), weights=(0, 1, 2), n=1):
    integral = True
    count = 0
    for N in levels:
        K = CongruenceSubgroup.principal_subgroup(n, N)
        for k in weights:
            for v in product(range(N), repeat=2 * n):
                if not any(v):
                    continue
                got = _phi(SchwartzFunction.xi(v, N), k, K, cfg, fault)
                want = FormalEisensteinClass.symbol(v, N, k, N ** k, cfg.p).normal_form()
                integral &= _integral(got, cfg.p)
                if not got.identical(want):
                    return CriterionResult(4, "", False, "mismatch",
                                           witness={"v": list(v), "N": N, "k": k}, integral=integral)
                count += 1
    return CriterionResult(4, "", True, f"{count} basis functions", integral=integral)


# ---------------------------------------------------------------- 5

def _orbit_basis(K: CongruenceSubgroup, N: int | None = None) -> list[SchwartzFunction]:
    from .ric import _orbit_sums
    return [SchwartzFunction.from_set(o) for o in _orbit_sums(K, N)]


@_timed(5, "restriction and induction squares")
def functorial_squares(cfg, fault, pairs=((9, 3), (63, 21), (21, 3)), k=1):
    from .symplectic import coset_representatives
    integral = True
    count = 0
    for Ln, Kn in pairs:
        L = CongruenceSubgroup.principal_subgroup(1, Ln)
        K = CongruenceSubgroup.principal_subgroup(1, Kn)
        # pullback square on a spanning set of S(K)
        for phi in _orbit_basis(K):
            a = _phi(phi.restrict(K, L), k, L, cfg, fault, "canonical")
            b = _phi(phi, k, K, cfg, fault, "canonical").refine(a.level)
            integral &= _integral(a, cfg.p) and _integral(b, cfg.p)
            if not a.identical(b):
                return CriterionResult(5, "", False, "pullback square",
                                       witness={"L": Ln, "K": Kn, "phi": phi.to_json()})
            count += 1
        reps = coset_representatives(K.refine(Ln), L)
        for phi in _orbit_basis(L):
            a = _phi(phi.induce(L, K, reps), k, K, cfg, fault, "canonical")
            b = _phi(phi, k, L, cfg, fault, "canonical").pushforward(L, K, reps, check=False)
            integral &= _integral(a, cfg.p) and _integral(b, cfg.p)
            if a != b:
                return CriterionResult(5, "", False, "induction square",
                                       witness={"L": Ln, "K": Kn, "phi": phi.to_json()})
            count += 1
    # cohomological instance at (K9, K3)
    L = CongruenceSubgroup.principal_subgroup(1, 9)
    K = CongruenceSubgroup.principal_subgroup(1, 3)
    for kk in (0, 1, 2):
        for v in product(range(3), repeat=2):
            if any(v):
                x = FormalEisensteinClass.symbol(v, 3, kk, p=cfg.p)
                if x.refine(9).pushforward(L, K) != x * 81:
                    return CriterionResult(5, "", False, "pushforward after refine is not 81",
                                           witness={"v": list(v), "k": kk})
    return CriterionResult(5, "", True, f"{count} squares + index-81 instance", integral=integral)


# ---------------------------------------------------------------- 6

def conjugation_elements(cfg: EngineConfig):
    F = Fraction
    out = [("identity", AdelicGroupElement.identity(1)),
           ("z3", AdelicGroupElement.center(1, 3)),
           ("z7", AdelicGroupElement.center(1, 7)),
           ("diag(1,1/3)", AdelicGroupElement.from_rational([[1, 0], [0, F(1, 3)]]))]
    rng = random.Random(cfg.seed + 6)
    gens = generators_mod_N(1, 9)

    def random_unit():
        g = FiniteLevelElement.identity(1, 9)
        for _ in range(rng.randint(2, 6)):
            g = g * gens[rng.randrange(len(gens))]
        return g

    out.append(("diag(1/3,1)*unit",
                AdelicGroupElement.from_rational([[F(1, 3), 0], [0, 1]], random_unit())))
    for i in range(5):
        out.append((f"unit{i}", AdelicGroupElement.unit(random_unit())))
    return out


@_timed(6, "conjugation squares")
def equivariance_squares(cfg, fault, levels=(3, 9), weights=(0, 1, 2)):
    integral = True
    count = 0
    for name, g in conjugation_elements(cfg):
        for N in levels:
            K = CongruenceSubgroup.principal_subgroup(1, N)
            for v in product(range(N), repeat=2):
                if not any(v):
                    continue
                phi = SchwartzFunction.xi(v, N)
                gphi = phi.act(g, cfg.cp).canonical()
                Kg = CongruenceSubgroup.principal_subgroup(1, max(3, gphi.level))
                for k in weights:
                    a = _phi(gphi, k, Kg, cfg, fault, "canonical")
                    b = _phi(phi, k, K, cfg, fault, "canonical").act(g, cfg.cp)
                    integral &= _integral(a, cfg.p) and _integral(b, cfg.p)
                    if a != b:
                        return CriterionResult(6, "", False, f"square fails for {name}",
                                               witness={"g": name, "v": list(v), "N": N, "k": k})
                    count += 1
    return CriterionResult(6, "", True, f"{count} squares over 10 elements", integral=integral)


# ---------------------------------------------------------------- 7

def random_subgroup(n: int, N: int, rng: random.Random) -> CongruenceSubgroup:
    """Generated by K_N-kernel data plus a couple of random elements mod N."""
    gens = generators_mod_N(n, N)
    picked = []
    for _ in range(2):
        g = FiniteLevelElement.identity(n, N)
        for _ in range(rng.randint(1, 4)):
            g = g * gens[rng.randrange(len(gens))]
        picked.append(g)
    return CongruenceSubgroup(n, N, picked, name="random")


def random_invariant_function(K: CongruenceSubgroup, rng: random.Random, p: int) -> SchwartzFunction:
    from .ric import _orbit_sums
    orbits = _orbit_sums(K)
    out = SchwartzFunction.zero(K.genus)
    for o in rng.sample(orbits, min(len(orbits), rng.randint(1, 3))):
        den = rng.choice([1, 1, 2, 3, 7])
        while den % p == 0:
            den += 1
        out = out + SchwartzFunction.from_set(o) * Fraction(rng.randint(-5, 5) or 1, den)
    scale = rng.choice([1, 1, 3])
    if scale > 1:
        out = out.act(AdelicGroupElement.center(K.genus, scale))
    return out


@_timed(7, "three evaluation paths agree")
def three_paths(cfg, fault, count=200, levels=(3, 9, 21)):
    rng = random.Random(cfg.seed + 7)
    integral = True
    shapes = ("principal", "stabilizer", "random")
    for i in range(count):
        N = levels[i % len(levels)]
        shape = shapes[(i // len(levels)) % len(shapes)]
        if shape == "principal":
            K = CongruenceSubgroup.principal_subgroup(1, rng.choice([d for d in divisors(N) if d > 1]), N)
            K = K.refine(N) if K.level != N else K
        elif shape == "stabilizer":
            v = tuple(rng.randrange(N) for _ in range(2))
            K = CongruenceSubgroup.full(1, N).stabilizer(v)
        else:
            K = random_subgroup(1, N, rng)
        phi = random_invariant_function(K, rng, cfg.p)
        k = rng.randrange(3)
        outs = {path: _phi(phi, k, K, cfg, fault, path) for path in PATHS}
        ref = outs["canonical"]
        for path, r in outs.items():
            integral &= _integral(r, cfg.p)
            if not r.identical(ref):
                return CriterionResult(7, "", False, f"{path} disagrees", integral=integral,
                                       witness={"phi": phi.to_json(), "k": k, "shape": shape,
                                                "level": N})
    return CriterionResult(7, "", True, f"{count} functions x 3 paths", integral=integral)


# ---------------------------------------------------------------- 8 (aggregated by the runner)

def integrality(results: list[CriterionResult]) -> CriterionResult:
    bad = [r.number for r in results if r.number in (4, 5, 6, 7) and not r.integral]
    seen = sorted(r.number for r in results if r.number in (4, 5, 6, 7))
    return CriterionResult(8, "outputs are p-integral", not bad and bool(seen),
                           f"checked criteria {seen}" + (f"; failing {bad}" if bad else ""))


# ---------------------------------------------------------------- 9

@_timed(9, "RIC axiom suite")
def axiom_suite(cfg, fault, levels=(3, 9)):
    from .ric import check_axioms, default_config, eisenstein_instance, inject_fault, schwartz_instance
    hc = default_config(levels, 1, cfg.seed)
    S = schwartz_instance(1)
    if fault == "drop-coset":
        S = inject_fault(S, "drop-coset")
    lines = []
    ok = True
    for F in (S, eisenstein_instance(1, 1, cfg.p)):
        for r in check_axioms(F, hc):
            required = r.required and (r.axiom != "G" or F.galois_required)
            lines.append(f"{F.name}:{r.axiom}={r.status}")
            if r.status == "falsified" and required:
                ok = False
    return CriterionResult(9, "", ok, ", ".join(lines))


# ---------------------------------------------------------------- 10

@_timed(10, "span of basis functions and center translates")
def spanning(cfg, fault, levels=(3, 9, 21)):
    details = []
    for M in levels:
        N = 3 * M
        pts = [v for v in product(range(N), repeat=2) if any(v)]
        seen: set = set()
        orbits = 0
        for v in pts:
            if v not in seen:
                seen |= global_orbit_set(v, M, N).residues
                orbits += 1
        rows = []
        for a in divisors(N // M):
            for w in product(range(M), repeat=2):
                if any(w):
                    rows.append({x: 1 for x in pts
                                 if all((xi - a * wi) % (a * M) == 0 for xi, wi in zip(x, w))})
        rp = sparse_rank(rows, cfg.p)
        rq = sparse_rank(rows)
        details.append(f"M={M}: orbits {orbits}, rank {rp} mod {cfg.p}, {rq} over Q")
        if not (rp == rq == orbits):
            return CriterionResult(10, "", False, "; ".join(details))
    return CriterionResult(10, "", True, "; ".join(details))


# ---------------------------------------------------------------- 11

@_timed(11, "fixed vectors of K_3 on V/9V")
def fixed_points(cfg, fault, n=1):
    got = fixed_vectors(kernel_generators(n, 9, 3), 9, n)
    want = frozenset(v for v in product(range(9), repeat=2 * n) if all(x % 3 == 0 for x in v))
    return CriterionResult(11, "", got == want, f"{len(got)} fixed vectors")


CRITERIA = {1: orbit_closed_form, 2: euclidean, 3: confluence, 4: basis_case,
            5: functorial_squares, 6: equivariance_squares, 7: three_paths, 9: axiom_suite,
            10: spanning, 11: fixed_points}


def plan(genus: int = 1, levels=None) -> dict:
    """Criteria to run for a genus, with keyword overrides.  Genus 1 runs the
    full suite; higher genus runs the subset that stays exhaustive at small level."""
    if genus == 1:
        if levels is None:
            return {n: {} for n in CRITERIA}
        lv = tuple(levels)
        return {1: {"levels": lv}, 2: {}, 3: {}, 4: {"levels": tuple(N for N in lv if N <= 9)},
                5: {}, 6: {}, 7: {}, 9: {}, 10: {"levels": tuple(N for N in lv if N <= 21)}, 11: {}}
    lv = tuple(levels or (3,))
    return {1: {"levels": (), "genus2_levels": lv} if genus == 2 else None,
            2: {}, 4: {"levels": lv, "weights": (0, 1), "n": genus}, 11: {"n": genus}}


def run_criterion(number: int, cfg: EngineConfig = DEFAULT, fault: str = "none",
                  kwargs: dict | None = None) -> CriterionResult:
    return CRITERIA[number](cfg, fault, **(kwargs or {}))


def run_all(cfg: EngineConfig = DEFAULT, fault: str = "none", numbers=None, jobs: int = 1,
            levels=None) -> list[CriterionResult]:
    todo = {n: kw for n, kw in plan(cfg.genus, levels).items() if kw is not None}
    want8 = cfg.genus == 1 and (numbers is None or 8 in numbers)
    if numbers is not None:
        keep = set(numbers) | ({4, 5, 6, 7} if 8 in numbers else set())
        todo = {n: kw for n, kw in todo.items() if n in keep}
    order = sorted(todo)
    if jobs > 1 and len(order) > 1:
        from concurrent.futures import ProcessPoolExecutor
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(run_criterion, order, [cfg] * len(order),
                                  [fault] * len(order), [todo[n] for n in order]))
    else:
        results = [run_criterion(n, cfg, fault, todo[n]) for n in order]
    if want8:
        results.append(integrality(results))
    if numbers is not None:
        results = [r for r in results if r.number in numbers]
    return sorted(results, key=lambda r: r.number)
