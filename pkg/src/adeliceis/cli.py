"""Batch command-line front end.  Every command prints one JSON document.

Exit codes: 0 success, 1 malformed input, 2 precondition failure,
3 a verification ran and failed (selftest, axioms, eis parametrize --path all).
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .config import EngineConfig

OK, MALFORMED, PRECONDITION, FAILED = 0, 1, 2, 3


class Malformed(ValueError):
    pass


# ---------------------------------------------------------------- parsing

def _ints(s: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in s.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise Malformed(f"expected comma-separated integers, got {s!r}") from None


def _frac(s) -> Fraction:
    try:
        return Fraction(str(s).strip())
    except (ValueError, ZeroDivisionError):
        raise Malformed(f"not a rational number: {s!r}") from None


def _at(s: str) -> tuple[str, int]:
    if "@" not in s:
        raise Malformed(f"expected <...>@<level>, got {s!r}")
    head, lvl = s.rsplit("@", 1)
    N = _ints(lvl)
    if len(N) != 1 or N[0] < 1:
        raise Malformed(f"bad level in {s!r}")
    return head, N[0]


def _load_json(s: str):
    if s.startswith("@"):
        with open(s[1:]) as fh:
            return json.load(fh)
    try:
        return json.loads(s)
    except json.JSONDecodeError as e:
        raise Malformed(f"bad JSON: {e}") from None


def _split_terms(s: str) -> list[tuple[Fraction, str]]:
    """'2*a + b - 1/3*c' -> [(2, a), (1, b), (-1/3, c)]."""
    out = []
    sign = 1
    cur = ""
    for ch in s.replace(" ", "") + "+":
        if ch in "+-" and cur and not cur.endswith("*") and not cur.endswith(":") \
                and not cur.endswith(","):
            coeff, body = Fraction(1), cur
            if "*" in cur:
                c, body = cur.split("*", 1)
                coeff = _frac(c)
            out.append((sign * coeff, body))
            sign, cur = (1 if ch == "+" else -1), ""
        elif ch in "+-" and not cur:
            sign = -sign if ch == "-" else sign
        else:
            cur += ch
    return out


def parse_phi(s: str, genus: int | None = None):
    """basis:v@N, sphere:d@N (ch(dV minus NV)), sums like 2*basis:1,0@3+..., or JSON."""
    from .cosets import CompactOpenSet
    from .schwartz import SchwartzFunction

    s = s.strip()
    if s.startswith("{") or s.startswith("@"):
        d = _load_json(s)
        try:
            return SchwartzFunction.from_json(d, genus)
        except (KeyError, TypeError) as e:
            raise Malformed(f"bad Schwartz function JSON: {e}") from None
    out = None
    for c, term in _split_terms(s):
        kind, _, rest = term.partition(":")
        head, N = _at(rest)
        if kind == "basis":
            f = SchwartzFunction.xi(_ints(head), N)
        elif kind == "sphere":
            d = _ints(head)[0]
            n = genus or 1
            if d < 1 or N % d:
                raise Malformed("sphere:d@N needs d | N")
            res = {v for v in _residues(n, N) if all(x % d == 0 for x in v) and any(v)}
            f = SchwartzFunction.from_set(CompactOpenSet(n, 1, N, frozenset(res)))
        else:
            raise Malformed(f"unknown function syntax {kind!r}")
        f = f * c
        out = f if out is None else out + f
    if out is None:
        raise Malformed("empty function")
    return out


def _residues(n: int, N: int):
    from itertools import product
    return product(range(N), repeat=2 * n)


def parse_class(s: str, k: int | None, genus: int | None, p: int):
    """eps:v@N sums, or the JSON produced by the eis commands."""
    from .eisenstein import FormalEisensteinClass

    s = s.strip()
    if s.startswith("{") or s.startswith("@"):
        d = _load_json(s)
        if k is not None:
            d = dict(d, weight=k)
        try:
            return FormalEisensteinClass.from_json(d, genus, p)
        except (KeyError, TypeError) as e:
            raise Malformed(f"bad class JSON: {e}") from None
    out = None
    for c, term in _split_terms(s):
        kind, _, rest = term.partition(":")
        if kind != "eps":
            raise Malformed(f"unknown class syntax {kind!r}")
        head, N = _at(rest)
        x = FormalEisensteinClass.symbol(_ints(head), N, k or 0, c, p)
        out = x if out is None else out + x
    if out is None:
        raise Malformed("empty class")
    return out


def parse_group(s: str, genus: int, level: int | None = None):
    """principal:M[@L], full[:L], stabilizer:v@L, or JSON {"level", "generators"}."""
    from .symplectic import CongruenceSubgroup, FiniteLevelElement

    s = s.strip()
    if s.startswith("{") or s.startswith("@"):
        d = _load_json(s)
        try:
            L = int(d["level"])
            gens = [FiniteLevelElement.from_matrix(m, L) for m in d["generators"]]
        except (KeyError, TypeError) as e:
            raise Malformed(f"bad group JSON: {e}") from None
        return CongruenceSubgroup(genus, L, gens)
    kind, _, rest = s.partition(":")
    if kind == "full":
        L = _ints(rest)[0] if rest else level
        if not L:
            raise Malformed("full group needs a level")
        return CongruenceSubgroup.full(genus, L)
    if kind == "principal":
        if "@" in rest:
            head, L = _at(rest)
            return CongruenceSubgroup.principal_subgroup(genus, _ints(head)[0], L)
        M = _ints(rest)[0]
        return CongruenceSubgroup.principal_subgroup(genus, M, level if level and level % M == 0 else None)
    if kind == "stabilizer":
        head, L = _at(rest)
        return CongruenceSubgroup.full(genus, L).stabilizer(_ints(head))
    raise Malformed(f"unknown group syntax {s!r}")


def _rational_rows(s: str):
    return [[_frac(x) for x in row.split(",")] for row in s.split(";")]


def parse_element(s: str, genus: int):
    """Factors joined by '*': z:q, diag:a,b,..., matrix:r1;r2;..., unit:m11,...@N
    (row-major), or JSON {"center", "matrix", "unit": {"level", "matrix"}}."""
    from .matrix import identity
    from .symplectic import AdelicGroupElement, FiniteLevelElement

    s = s.strip()
    if s.startswith("{") or s.startswith("@"):
        d = _load_json(s)
        unit = None
        if d.get("unit"):
            unit = FiniteLevelElement.from_matrix(d["unit"]["matrix"], int(d["unit"]["level"]))
        m = d.get("matrix") or identity(2 * genus)
        g = AdelicGroupElement.from_rational([[_frac(x) for x in row] for row in m], unit)
        return AdelicGroupElement(g.center_scale * _frac(d.get("center", 1)), g.integral_part, unit)
    g = None
    for part in s.split("*"):
        kind, _, rest = part.partition(":")
        if kind == "z":
            h = AdelicGroupElement.center(genus, _frac(rest))
        elif kind == "diag":
            xs = [_frac(x) for x in rest.split(",")]
            if len(xs) != 2 * genus:
                raise Malformed(f"diag needs {2 * genus} entries")
            h = AdelicGroupElement.from_rational([[xs[i] if i == j else 0 for j in range(len(xs))]
                                                 for i in range(len(xs))])
        elif kind == "matrix":
            h = AdelicGroupElement.from_rational(_rational_rows(rest))
        elif kind == "unit":
            head, N = _at(rest)
            xs = _ints(head)
            m = 2 * genus
            if len(xs) != m * m:
                raise Malformed(f"unit needs {m * m} entries")
            h = AdelicGroupElement.unit(
                FiniteLevelElement.from_matrix([xs[i * m:(i + 1) * m] for i in range(m)], N))
        else:
            raise Malformed(f"unknown element syntax {kind!r}")
        g = h if g is None else g * h
    return g


# ---------------------------------------------------------------- commands

def _emit(obj) -> None:
    sys.stdout.write(json.dumps(dict({"format": 1}, **obj), sort_keys=True) + "\n")


def cmd_orbit(args, cfg: EngineConfig) -> int:
    from .orbits import euclidean_reduce, global_orbit_set, local_orbit, orbit_bfs_oracle

    v = _ints(args.v)
    if len(v) % 2:
        raise Malformed("vector length must be even")
    n = len(v) // 2
    if args.action == "reduce":
        alpha, W = euclidean_reduce(v)
        _emit({"alpha": alpha, "witness": [list(r) for r in W]})
    elif args.action == "local":
        d = local_orbit(v, args.ell, args.i, args.j)
        _emit({"kind": d.kind, "ell": d.ell, "exponent": d.exponent, "base": list(d.base),
               "residues": sorted(list(r) for r in d.residues(args.j))})
    elif args.action == "global":
        cfg.check_level(args.N)
        if args.N % args.M:
            raise ValueError("M must divide N")
        C = global_orbit_set(v, args.M, args.N)
        _emit({"level": args.N, "residues": sorted(list(r) for r in C.residues)})
    else:
        K = parse_group(args.group, n, args.N).refine(args.N)
        got = orbit_bfs_oracle(tuple(x % args.N for x in v), K.generators, args.N)
        _emit({"level": args.N, "residues": sorted(list(r) for r in got)})
    return OK


def cmd_schwartz(args, cfg: EngineConfig) -> int:
    phi = parse_phi(args.phi, cfg.genus)
    n = phi.genus
    if args.action == "canonical":
        phi.check_frame(cfg.cp)
        _emit({"function": phi.to_json()})
    elif args.action == "act":
        g = parse_element(args.g, n)
        _emit({"function": phi.act(g, cfg.cp).to_json()})
    elif args.action == "check":
        K = parse_group(args.group, n, phi.level)
        _emit({"invariant": phi.invariants_check(K)})
    elif args.action == "induce":
        L = parse_group(args.sub, n)
        K = parse_group(args.group, n)
        _emit({"function": phi.induce(L, K).to_json()})
    return OK


def cmd_eis(args, cfg: EngineConfig) -> int:
    from .parametrize import PathDisagreement, parametrize

    if args.action == "parametrize":
        phi = parse_phi(args.phi, cfg.genus)
        level = phi.canonical().level
        K = parse_group(args.group, phi.genus, level) if args.group \
            else parse_group(f"principal:{level}", phi.genus)
        try:
            out = parametrize(phi, args.k, K, args.path, cfg)
        except PathDisagreement as e:
            _emit({"agree": False, "detail": str(e)})
            return FAILED
        doc = {"class": out.to_json()}
        if args.path == "all":
            doc["agree"] = True
            doc["paths"] = ["canonical", "orbit", "stabilizer"]
        _emit(doc)
        return OK
    x = parse_class(args.cls, args.k, cfg.genus, cfg.p)
    if args.action == "normal-form":
        _emit({"class": x.normal_form().to_json()})
    else:
        g = parse_element(args.g, x.genus)
        _emit({"class": x.act(g, cfg.cp, cfg.level_bound).to_json()})
    return OK


def cmd_axioms(args, cfg: EngineConfig) -> int:
    from .ric import check_axioms, default_config, eisenstein_instance, inject_fault, schwartz_instance

    levels = _ints(args.levels)
    for N in levels:
        cfg.check_level(N)
    hc = default_config(levels, cfg.genus, cfg.seed)
    F = schwartz_instance(cfg.genus) if args.functor == "schwartz" \
        else eisenstein_instance(cfg.genus, args.k, cfg.p)
    if args.fault != "none":
        F = inject_fault(F, args.fault)
    reports = check_axioms(F, hc)
    ok = all(r.status != "falsified" or not r.required or (r.axiom == "G" and not F.galois_required)
             for r in reports)
    _emit({"functor": F.name, "levels": list(levels), "passed": ok,
           "reports": [r.to_json() for r in reports]})
    return OK if ok else FAILED


def cmd_selftest(args, cfg: EngineConfig) -> int:
    from .acceptance import run_all

    numbers = list(_ints(args.criteria)) if args.criteria else None
    levels = _ints(args.levels) if args.levels else None
    results = run_all(cfg, args.inject_fault, numbers, args.jobs, levels)
    for r in results:
        print(r.line(), file=sys.stderr)
    ok = all(r.passed for r in results)
    _emit({"config": cfg.to_json(), "fault": args.inject_fault, "passed": ok,
           "failed": [f"{r.number}: {r.name}" for r in results if not r.passed],
           "results": [r.to_json() for r in results]})
    return OK if ok else FAILED


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    from .acceptance import FAULTS

    ap = argparse.ArgumentParser(prog="adeliceis", description=__doc__.splitlines()[0])
    ap.add_argument("--genus", type=int)
    ap.add_argument("--p", type=int)
    ap.add_argument("--c", type=int)
    ap.add_argument("--level-bound", type=int)
    ap.add_argument("--seed", type=int)
    sub = ap.add_subparsers(dest="command", required=True)

    o = sub.add_parser("orbit", help="orbit closed forms and oracles")
    o.add_argument("action", choices=["reduce", "local", "global", "oracle"])
    o.add_argument("--v", required=True)
    o.add_argument("--ell", type=int)
    o.add_argument("--i", type=int, default=0)
    o.add_argument("--j", type=int, default=1)
    o.add_argument("--M", type=int, default=1)
    o.add_argument("--N", type=int)
    o.add_argument("--group", default="full")

    s = sub.add_parser("schwartz", help="Schwartz function operations")
    s.add_argument("action", choices=["act", "check", "canonical", "induce"])
    s.add_argument("--phi", required=True)
    s.add_argument("--g")
    s.add_argument("--group")
    s.add_argument("--sub", help="the smaller group for induce")

    e = sub.add_parser("eis", help="formal Eisenstein classes")
    e.add_argument("action", choices=["normal-form", "parametrize", "act"])
    e.add_argument("--phi")
    e.add_argument("--class", dest="cls")
    e.add_argument("--k", type=int)
    e.add_argument("--g")
    e.add_argument("--group")
    e.add_argument("--path", default="canonical", choices=["canonical", "orbit", "stabilizer", "all"])

    a = sub.add_parser("axioms", help="RIC axiom harness")
    a.add_argument("action", choices=["check"])
    a.add_argument("--functor", choices=["schwartz", "eisenstein"], required=True)
    a.add_argument("--levels", default="3,9")
    a.add_argument("--k", type=int, default=1)
    a.add_argument("--fault", default="none", choices=["none", "drop-coset", "twist-conjugation"])

    t = sub.add_parser("selftest", help="run the acceptance criteria")
    t.add_argument("--levels")
    t.add_argument("--jobs", type=int, default=1)
    t.add_argument("--inject-fault", default="none", choices=list(FAULTS))
    t.add_argument("--criteria", help="comma-separated criterion numbers")
    return ap


def _need(args, *names):
    for name in names:
        if getattr(args, name, None) is None:
            raise Malformed(f"--{name.replace('_', '-')} is required here")


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return OK if e.code == 0 else MALFORMED
    try:
        cfg = EngineConfig.load()
        over = {k: getattr(args, a) for k, a in (("genus", "genus"), ("p", "p"), ("c", "c"),
                                                 ("level_bound", "level_bound"), ("seed", "seed"))
                if getattr(args, a) is not None}
        cfg = cfg.with_overrides(**over)
    except (OSError, ValueError, TypeError) as e:
        print(f"error: bad configuration: {e}", file=sys.stderr)
        return MALFORMED
    required = {("orbit", "local"): ("ell",), ("orbit", "global"): ("N",),
                ("orbit", "oracle"): ("N",), ("schwartz", "act"): ("g",),
                ("schwartz", "check"): ("group",), ("schwartz", "induce"): ("sub", "group"),
                ("eis", "parametrize"): ("phi", "k"), ("eis", "normal-form"): ("cls",),
                ("eis", "act"): ("cls", "g")}
    cmds = {"orbit": cmd_orbit, "schwartz": cmd_schwartz, "eis": cmd_eis,
            "axioms": cmd_axioms, "selftest": cmd_selftest}
    try:
        _need(args, *required.get((args.command, getattr(args, "action", None)), ()))
        return cmds[args.command](args, cfg)
    except Malformed as e:
        print(f"error: {e}", file=sys.stderr)
        return MALFORMED
    except (ValueError, ArithmeticError, NotImplementedError) as e:
        print(f"precondition failed: {e}", file=sys.stderr)
        return PRECONDITION


if __name__ == "__main__":
    sys.exit(main())
