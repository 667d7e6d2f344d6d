"""Verification suites driven by the CLI and the acceptance tests.

A suite is a function ``(instance) -> list[Check]``.  An instance names one
(graph, group) pair, or just a group for the graph-free suites.  Witnesses are
rendered to JSON-safe values so reports are byte-stable for a fixed seed.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from . import ce as ce_mod
from . import poisson as po
from . import quantize as qz
from .algebra import Element, Gen
from .graph import (DirectedGraph, GaugeTheory, GraphMorphism, OrthogonalTuple, canonical_data,
                    catalog, check_pushforward, disjoint_union, gauge_theory, induce_object,
                    pointing_object, pushforward, validate_graph_morphism)
from .homology import homology
from .hopf import HopfAlgebra, group_from_spec, verify_actions, verify_hopf

SUITES = ("hopf", "ce", "cosimplicial", "poisson", "quantize", "prefactorization")
GRAPH_FREE = ("hopf", "prefactorization")

# Test-only fault injection.  Nothing in the CLI writes here.
#   FAULTS["lie_constant"] = (a, b, c, delta) shifts f^c_ab in every Lie algebra
#   the hopf and ce suites check.
FAULTS: dict = {}


def jsonable(w):
    """Deterministic JSON-safe rendering of a witness."""
    if w is None or isinstance(w, (bool, int, str)):
        return w
    if isinstance(w, Fraction):
        return str(w)
    if isinstance(w, Gen):
        return w.name
    if isinstance(w, Element):
        return repr(w)
    if isinstance(w, dict):
        return {str(jsonable(k)): jsonable(v) for k, v in sorted(w.items(), key=lambda kv: repr(kv[0]))}
    if isinstance(w, (tuple, list)):
        return [jsonable(x) for x in w]
    return repr(w)


@dataclass
class Instance:
    group: str
    graph_name: Optional[str] = None
    graph: Optional[DirectedGraph] = None
    level: int = 2
    bound: int = 2
    seed: int = 0

    @property
    def label(self) -> str:
        return self.group if self.graph_name is None else f"{self.group}/{self.graph_name}"

    def rng(self, salt: str) -> random.Random:
        # independent of scheduling: every check family gets its own stream
        return random.Random(f"{self.seed}:{self.label}:{salt}")


@dataclass
class Checks:
    """Accumulates {name, status, witness} records for one suite run."""

    prefix: str
    timings: bool = False
    items: list = field(default_factory=list)

    def add(self, name: str, witness, t0: Optional[float] = None) -> None:
        rec = {"name": f"{self.prefix}: {name}", "status": "pass" if witness is None else "fail"}
        if witness is not None:
            rec["witness"] = jsonable(witness)
        if self.timings and t0 is not None:
            rec["timing"] = round(time.perf_counter() - t0, 4)
        self.items.append(rec)

    def run(self, name: str, fn: Callable[[], object]) -> None:
        t0 = time.perf_counter()
        self.add(name, fn(), t0)


def _lie(H: HopfAlgebra):
    lie = H.lie()
    fault = FAULTS.get("lie_constant")
    return lie.corrupted(*fault) if fault else lie


def _first_bad(results):
    """First failing (name, witness) pair in a list of (name, witness) results, as a witness."""
    for name, w in results:
        if w is not None:
            return [name, w]
    return None


# graph-free suites


def suite_hopf(inst: Instance, timings: bool = False) -> list:
    H = group_from_spec(inst.group)
    out = Checks(inst.label, timings)
    t0 = time.perf_counter()
    for law, wit in verify_hopf(H, inst.rng("hopf"), count=50, length=3):
        out.add(law, wit, t0)
    t0 = time.perf_counter()
    for law, wit in verify_actions(H):
        out.add(law, wit, t0)
    lie = _lie(H)
    named = lambda w: None if w is None else [lie.basis[i].name for i in w]
    out.run("Lie bracket antisymmetric", lambda: named(lie.check_antisymmetric()))
    out.run("Lie bracket Jacobi", lambda: named(lie.check_jacobi()))
    return out.items


def _nested_fixture(H: HopfAlgebra):
    """Three-deep nesting of disjoint-union embeddings with two object slots."""
    cat = catalog()
    pt, E = cat["point"], cat["edge"]
    W1, i1 = disjoint_union(pt, pt, prefixes=["a", "b"])
    W2, i2 = disjoint_union(W1, E, pt, prefixes=["c", "d", "e"])
    W3, i3 = disjoint_union(W2, pt, prefixes=["f", "g"])
    if H.name.startswith("torus") and H.dim == 1:
        X = qz.gm_weight_object(1, gauge_theory(pt, H).space)
    else:
        X = pointing_object(pt, H, 2)
    Y = pointing_object(E, H, 2)
    f1 = OrthogonalTuple(W1, [i1[0]])
    fid = OrthogonalTuple(E, [GraphMorphism.identity(E)])
    g = OrthogonalTuple(W2, [i2[0], i2[1]])
    h = OrthogonalTuple(W3, [i3[0]])
    return X, Y, f1, fid, g, h


def suite_prefactorization(inst: Instance, timings: bool = False) -> list:
    H = group_from_spec(inst.group)
    out = Checks(inst.label, timings)
    graphs = {inst.graph_name: inst.graph} if inst.graph is not None else \
        {k: catalog()[k] for k in ("empty", "point", "edge", "loop")}
    for name, U in graphs.items():
        def empty(U=U):
            got = induce_object(OrthogonalTuple(U, []), [], H, inst.bound)
            ref = qz.build_pointing(gauge_theory(U, H).B, inst.bound)
            return None if got.to_json() == ref.to_json() else "differs"
        out.run(f"empty tuple on {name} is the pointing object", empty)

    X, Y, f1, fid, g, h = _nested_fixture(H)
    for k, f in enumerate(f1.maps + g.maps + h.maps):
        def functor(f=f):
            rep = validate_graph_morphism(f)
            if not rep["ok"]:
                return [rep["condition"], rep["witness"]]
            fstar, ftilde = pushforward(f, H, gauge_theory(f.source, H), gauge_theory(f.target, H))
            res = check_pushforward(f, fstar, ftilde, gauge_theory(f.source, H), gauge_theory(f.target, H))
            return _first_bad(sorted(res.items()))
        out.run(f"embedding {k} pushes forward del and the coaction", functor)
    t0 = time.perf_counter()
    inner = [induce_object(f1, [X], H), induce_object(fid, [Y], H)]
    nested = induce_object(h, [induce_object(g, inner, H)], H)
    direct_tuple = h.compose([g.compose([f1, fid])])
    direct = induce_object(direct_tuple, [X, Y], H)
    other = induce_object(h.compose([g]), inner, H)
    cd = canonical_data(direct)
    out.add("h(g(f1, id)) = (h g f) direct", None if canonical_data(nested) == cd else "differs", t0)
    out.add("(h g)(f1, id) = (h g f) direct", None if canonical_data(other) == cd else "differs")
    t0 = time.perf_counter()
    perm = induce_object(direct_tuple.permuted([1, 0]), [Y, X], H)
    out.add("permutation equivariance", None if canonical_data(perm) == cd else "differs", t0)
    t0 = time.perf_counter()
    rep = qz.validate_triple(direct)
    bad = [r for r in rep if r["status"] != "pass"]
    out.add("direct operation is a valid triple", bad[0] if bad else None, t0)
    return out.items


# per-graph suites


def _theory(inst: Instance) -> GaugeTheory:
    return gauge_theory(inst.graph, group_from_spec(inst.group))


def suite_ce(inst: Instance, timings: bool = False) -> list:
    out = Checks(inst.label, timings)
    L0 = _theory(inst).level(0)
    out.run("CE(g, B) delta^2 = 0", lambda: L0.verify()["delta^2"][1])
    out.run("CE(g, B) del^2 = 0", lambda: L0.verify()["del^2"][1])
    return out.items


def suite_ce_plane(timings: bool = False) -> list:
    """sl2 acting on Q[x, y] by vector fields."""
    out = Checks("sl2/Q[x,y]", timings)
    lie = ce_mod.sl2_lie()
    fault = FAULTS.get("lie_constant")
    if fault:
        lie = lie.corrupted(*fault)
    B = ce_mod.sl2_plane(lie)
    rho = [B.rho(a) for a in range(lie.dim)]
    out.run("action is a Lie homomorphism", lambda: ce_mod.check_lie_action(lie, rho, B.gens))
    C = ce_mod.build_ce(lie, B, check=False)
    out.run("delta^2 = 0", lambda: C.verify()["delta^2"][1])
    return out.items


def suite_cosimplicial(inst: Instance, timings: bool = False) -> list:
    out = Checks(inst.label, timings)
    T = _theory(inst)
    B, top = T.B, inst.level
    for n in range(top + 1):
        t0 = time.perf_counter()
        for law, (ok, wit) in T.level(n).verify().items():
            out.add(f"{law} @{n}", None if ok else wit, t0)
    t0 = time.perf_counter()
    for name, ok in ce_mod.cosimplicial_identities(B, top):
        out.add(name, None if ok else "identity fails on a generator", t0)
    for n in range(1, top + 1):
        for i in range(n + 1):
            t0 = time.perf_counter()
            res = ce_mod.check_map_differentials(ce_mod.coface(B, i, n), T.level(n - 1), T.level(n))
            out.add(f"d^{i} @{n - 1}->{n} commutes with del, delta", _first_bad(sorted(res.items())), t0)
    for n in range(top):
        for i in range(n + 1):
            t0 = time.perf_counter()
            res = ce_mod.check_map_differentials(ce_mod.codegeneracy(B, i, n), T.level(n + 1), T.level(n))
            out.add(f"s^{i} @{n + 1}->{n} commutes with del, delta", _first_bad(sorted(res.items())), t0)
    return out.items


def _lattice_agreement(T: GaugeTheory) -> Optional[tuple]:
    P = T.bracket(0)
    gens = P.alg.gens
    for x in gens:
        for y in gens:
            if P(P.gen(x), P.gen(y)) != T.lattice_bracket(x, y):
                return (x, y)
    return None


def _moment_agreement(T: GaugeTheory) -> Optional[tuple]:
    for v in T.U.vertices:
        for b in range(T.H.dim):
            lhs = T.gauge_moment(b, v)
            if Element(T.B.moment[T.antighost(b, v)].alg, lhs.terms) != T.moment(b, v):
                return (b, v)
    return None


def suite_poisson(inst: Instance, timings: bool = False) -> list:
    out = Checks(inst.label, timings)
    T = _theory(inst)
    space = T.space
    out.run("frame spans the tangent directions", space.check_frame)
    out.run("evaluation pairing is equivariant", space.check_evaluation_equivariance)
    out.run("moment map is equivariant", lambda: po.check_moment_equivariance(T.B))
    out.run("lattice Gauss law equals the moment map", lambda: _moment_agreement(T))
    out.run("level-0 bracket equals the lattice brackets", lambda: _lattice_agreement(T))
    brackets = {}
    for n in range(inst.level + 1):
        P = T.bracket(n)
        brackets[n] = P
        out.run(f"antisymmetry @{n}", lambda: po.check_antisymmetry(P))
        out.run(f"Jacobi @{n}", lambda: po.check_jacobi(P))
        out.run(f"cochain map @{n}", lambda: po.check_cochain_map(P))
        out.run(f"Leibniz on 100 random triples @{n}",
                lambda: po.check_leibniz(P, inst.rng(f"leibniz{n}"), count=100))
    t0 = time.perf_counter()
    for name, wit in po.check_simplicial(T.B, inst.level, brackets):
        out.add(f"{name} preserves brackets", wit, t0)
    return out.items


def suite_quantize(inst: Instance, timings: bool = False, pointing: bool = True) -> list:
    out = Checks(inst.label, timings)
    T = _theory(inst)
    Qs = {}
    for n in range(inst.level + 1):
        Q = qz.QuantizedAlgebra(T.bracket(n))
        Qs[n] = Q
        out.run(f"confluence on 100 random words @{n}",
                lambda: qz.check_confluence(Q, inst.rng(f"confluence{n}"), 100, 6))
        out.run(f"d_hbar^2 = 0 @{n}", lambda: qz.check_square_zero_q(Q))
        out.run(f"correspondence principle @{n}", lambda: qz.check_correspondence(Q))
        out.run(f"commutation table against operators @{n}",
                lambda: qz.check_relations_by_operators(Q, inst.rng(f"ops{n}")))
        out.run(f"d_hbar respects the relations @{n}", lambda: qz.check_d_respects_relations(Q))
        out.run(f"d_hbar table equals [d, -] @{n}",
                lambda: qz.check_d_by_commutator(Q, inst.rng(f"comm{n}"), 20))
    B = T.B
    maps = [(f"d^{i} @{n - 1}->{n}", lambda i=i, n=n: qz.quantized_coface(B, i, n, Qs))
            for n in range(1, inst.level + 1) for i in range(n + 1)]
    maps += [(f"s^{i} @{n + 1}->{n}", lambda i=i, n=n: qz.quantized_codegeneracy(B, i, n, Qs))
             for n in range(inst.level) for i in range(n + 1)]
    for name, make in maps:
        t0 = time.perf_counter()
        res = qz.check_quantized_map(make())
        for cond in ("relations", "d_hbar", "classical limit"):
            out.add(f"quantized {name}: {cond}", res[cond], t0)
    if pointing:
        out.items += pointing_checks(inst, timings, Qs[0])
    return out.items


def pointing_checks(inst: Instance, timings: bool = False, Q0=None) -> list:
    """validate_triple on the pointing object plus its two independent cross-checks."""
    out = Checks(inst.label, timings)
    T = _theory(inst)
    B = T.B
    Q0 = Q0 or qz.QuantizedAlgebra(T.bracket(0))
    t0 = time.perf_counter()
    P = qz.build_pointing(B, inst.bound, Q0)
    for k, r in enumerate(qz.validate_triple(P)):
        # the first record carries the time of the whole validation
        out.add(f"pointing object: {r['condition']}", None if r["status"] == "pass" else r.get("witness", "fail"),
                t0 if k == 0 else None)
    orc = qz.del_from_d_hbar(B, P, Q0)
    out.add("pointing del equals the d_hbar oracle", None if _same_matrix(orc, P.d) else "differs")
    climit = qz.classical_limit_matrix(P.d)
    cl = qz.classical_del(B, P)
    out.add("pointing del has the Koszul classical limit", None if _same_matrix(climit, cl) else "differs")
    return out.items


def _same_matrix(a: dict, b: dict) -> bool:
    keys = set(a) | set(b)
    for k in keys:
        ca = {i: v for i, v in a.get(k, {}).items() if v}
        cb = {i: v for i, v in b.get(k, {}).items() if v}
        if ca != cb:
            return False
    return True


# weight objects of G_m on a point


def gm_example(weights, timings: bool = False, seed: int = 0) -> tuple:
    """(checks, homology table) for weight objects on a point."""
    out = Checks("G_m", timings)
    table = []
    rng = random.Random(f"{seed}:gm")
    for n in weights:
        t0 = time.perf_counter()
        V = qz.gm_weight_object(n)
        for r in qz.validate_triple(V):
            out.add(f"weight {n}: {r['condition']}", None if r["status"] == "pass" else r.get("witness", "fail"), t0)
        c = qz.endo_complex_point(V)
        groups = homology(c)
        vals = [Fraction(rng.randint(-50, 50) or 1, rng.randint(1, 20)) for _ in range(5)]
        out.add(f"weight {n}: homology agrees with rank-nullity at 5 specializations",
                qz.check_homology_by_specialization(c, groups, vals))
        if n == 0:
            out.add("weight 0 is the pointing object", _differs_from_pointing())
        table.append({"weight": n, "homology": {str(c.start + k): h.describe() for k, h in enumerate(groups)}})
    return out.items, table


def _differs_from_pointing() -> Optional[list]:
    """Keys where O(0) on the point differs from the pointing object, ignoring labels."""
    T = gauge_theory(catalog()["point"], group_from_spec("torus:1"))
    a = qz.gm_weight_object(0, T.space).to_json()
    b = qz.build_pointing(T.B, 2).to_json()
    bad = sorted(k for k in set(a) | set(b) if k not in ("name", "basis", "filt", "bound") and a.get(k) != b.get(k))
    return bad or None


SUITE_FUNCS = {
    "hopf": suite_hopf,
    "ce": suite_ce,
    "cosimplicial": suite_cosimplicial,
    "poisson": suite_poisson,
    "quantize": suite_quantize,
    "prefactorization": suite_prefactorization,
}


def run_task(task: tuple) -> list:
    """Worker entry point: (suite, Instance, timings) -> checks."""
    suite, inst, timings, faults = task
    FAULTS.clear()
    FAULTS.update(faults)
    if suite == "ce" and inst.graph is None:
        return suite_ce_plane(timings)
    return SUITE_FUNCS[suite](inst, timings)
