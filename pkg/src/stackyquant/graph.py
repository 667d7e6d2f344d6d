"""Gauge theory on directed graphs: phase spaces, pushforwards, orthogonality.

Edge generators live at location ('E', id) and vertex generators at
('V', id).  Vertex and edge identifiers must therefore be distinct.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .algebra import Algebra, AlgebraError, Element, Gen, GradedMap, _acc, sort_monomial
from .ce import ChainCDGA, check_map_differentials
from .hopf import COACT, SCRATCH, GroupCopies, HopfAlgebra, group_from_spec, place_gen, relabel
from .poisson import AffineGSpace, PoissonBracket, ReducedCDGA, build_reduced, group_coframe
from .quantize import PerTriple, _addto, _prod, build_pointing


class GraphError(ValueError):
    """Malformed graph or morphism data."""


@dataclass(frozen=True, order=True)
class Edge:
    id: str
    src: str
    tgt: str


class DirectedGraph:
    def __init__(self, vertices: Iterable[str], edges: Iterable):
        self.vertices = tuple(sorted(str(v) for v in vertices))
        es = []
        for e in edges:
            if isinstance(e, Edge):
                es.append(e)
            elif isinstance(e, Mapping):
                try:
                    es.append(Edge(str(e["id"]), str(e["src"]), str(e["tgt"])))
                except KeyError as exc:
                    raise GraphError(f"edge record missing field {exc}") from None
            else:
                es.append(Edge(*map(str, e)))
        self.edges = tuple(sorted(es))
        self._validate()

    def _validate(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("duplicate vertex identifier")
        ids = [e.id for e in self.edges]
        if len(set(ids)) != len(ids):
            raise GraphError("duplicate edge identifier")
        clash = set(ids) & set(self.vertices)
        if clash:
            raise GraphError(f"identifier {sorted(clash)[0]!r} names both a vertex and an edge")
        vs = set(self.vertices)
        for e in self.edges:
            for end in (e.src, e.tgt):
                if end not in vs:
                    raise GraphError(f"edge {e.id} refers to unknown vertex {end!r}")

    @classmethod
    def from_json(cls, data) -> "DirectedGraph":
        if isinstance(data, str):
            data = json.loads(data)
        if not isinstance(data, Mapping) or "vertices" not in data:
            raise GraphError("graph JSON needs a 'vertices' list")
        return cls(data["vertices"], data.get("edges", []))

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices),
                "edges": [{"id": e.id, "src": e.src, "tgt": e.tgt} for e in self.edges]}

    def edge(self, eid: str) -> Edge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise GraphError(f"unknown edge {eid!r}")

    def out_edges(self, v: str) -> list:
        return [e for e in self.edges if e.src == v]

    def in_edges(self, v: str) -> list:
        return [e for e in self.edges if e.tgt == v]

    def __eq__(self, other) -> bool:
        return isinstance(other, DirectedGraph) and (self.vertices, self.edges) == (other.vertices, other.edges)

    def __hash__(self) -> int:
        return hash((self.vertices, self.edges))

    def __repr__(self) -> str:
        es = ", ".join(f"{e.id}:{e.src}->{e.tgt}" for e in self.edges)
        return f"DirectedGraph([{', '.join(self.vertices)}], [{es}])"


def vloc(v: str) -> tuple:
    return ("V", v)


def eloc(e: str) -> tuple:
    return ("E", e)


def disjoint_union(*graphs: DirectedGraph, prefixes: Optional[Sequence[str]] = None) -> tuple:
    """Disjoint union with renamed identifiers, plus the summand inclusions."""
    prefixes = prefixes or [f"{k}." for k in range(len(graphs))]
    vs, es = [], []
    for p, g in zip(prefixes, graphs):
        vs += [p + v for v in g.vertices]
        es += [Edge(p + e.id, p + e.src, p + e.tgt) for e in g.edges]
    U = DirectedGraph(vs, es)
    incs = [GraphMorphism(g, U, {v: p + v for v in g.vertices}, {e.id: p + e.id for e in g.edges})
            for p, g in zip(prefixes, graphs)]
    return U, incs


@dataclass
class GraphMorphism:
    source: DirectedGraph
    target: DirectedGraph
    vmap: dict
    emap: dict

    def compose(self, first: "GraphMorphism") -> "GraphMorphism":
        """self after first."""
        return GraphMorphism(first.source, self.target,
                             {v: self.vmap[w] for v, w in first.vmap.items()},
                             {e: self.emap[d] for e, d in first.emap.items()})

    @classmethod
    def identity(cls, U: DirectedGraph) -> "GraphMorphism":
        return cls(U, U, {v: v for v in U.vertices}, {e.id: e.id for e in U.edges})

    def image(self) -> tuple:
        return set(self.vmap.values()), set(self.emap.values())


def validate_graph_morphism(f: GraphMorphism) -> dict:
    """Conditions of the morphisms of D: injectivity, commuting squares, fiber bijections."""
    S, T = f.source, f.target
    if set(f.vmap) != set(S.vertices) or set(f.emap) != {e.id for e in S.edges}:
        raise GraphError("morphism tables must cover the source graph exactly")
    tv, te = set(T.vertices), {e.id for e in T.edges}
    for v, w in f.vmap.items():
        if w not in tv:
            raise GraphError(f"vertex {v} maps to unknown vertex {w!r}")
    for e, d in f.emap.items():
        if d not in te:
            raise GraphError(f"edge {e} maps to unknown edge {d!r}")

    def fail(cond: str, wit) -> dict:
        return {"ok": False, "condition": cond, "witness": wit}

    if len(set(f.vmap.values())) != len(f.vmap):
        return fail("injective on vertices", sorted(f.vmap)[0])
    if len(set(f.emap.values())) != len(f.emap):
        return fail("injective on edges", sorted(f.emap)[0])
    for e in S.edges:
        d = T.edge(f.emap[e.id])
        if d.src != f.vmap[e.src]:
            return fail("source square commutes", e.id)
        if d.tgt != f.vmap[e.tgt]:
            return fail("target square commutes", e.id)
    for v in S.vertices:
        w = f.vmap[v]
        if {f.emap[e.id] for e in S.out_edges(v)} != {d.id for d in T.out_edges(w)}:
            return fail("bijective on outgoing fibers", v)
        if {f.emap[e.id] for e in S.in_edges(v)} != {d.id for d in T.in_edges(w)}:
            return fail("bijective on incoming fibers", v)
    return {"ok": True, "condition": None, "witness": None}


def check_orthogonality(f1: GraphMorphism, f2: GraphMorphism) -> bool:
    if f1.target != f2.target:
        raise GraphError("orthogonality needs a common target")
    v1, e1 = f1.image()
    v2, e2 = f2.image()
    return not (v1 & v2) and not (e1 & e2)


# phase spaces


def edge_coord(H: HopfAlgebra, g: Gen, e: str) -> Gen:
    return place_gen(g, eloc(e), None)


def edge_momentum(H: HopfAlgebra, b: int, e: str, hat: bool = False) -> Gen:
    return Gen("mom", H.basis[b].label, eloc(e), None, hat, b)


def _placed(H: HopfAlgebra, legs_spec, g: Gen, alg: Algebra, antipode_leg: int) -> Element:
    """Iterated coproduct of g with legs placed as (loc, slot) and S applied to one leg."""
    locs = [l for l, _ in legs_spec]
    slots = [s for _, s in legs_spec]
    out = Element(alg, {})
    for c, legs in H.coproduct_gen(g, slots, locs):
        acc = Element.scalar(alg, c)
        for k, (h, e) in enumerate(legs):
            x = Element.from_factors(alg, [(h, e)])
            acc = acc * (H.antipode(x) if k == antipode_leg else x)
        out = out + acc
    return out


class GaugeTheory:
    """The phase space S(U) of G-gauge theory on a directed graph U."""

    def __init__(self, U: DirectedGraph, H: HopfAlgebra):
        self.U = U
        self.H = H
        self.G = GroupCopies(H, [vloc(v) for v in U.vertices])
        self.space = self._space()
        self.B = build_reduced(self.space, name=f"B({len(U.vertices)}v{len(U.edges)}e)")
        self._brackets: dict = {}

    def __repr__(self) -> str:
        return f"GaugeTheory({self.U!r}, {self.H.name})"

    def coords(self, e: str) -> list:
        return [edge_coord(self.H, g, e) for g in self.H.gens]

    def momenta(self, e: str, hat: bool = False) -> list:
        return [edge_momentum(self.H, b, e, hat) for b in range(self.H.dim)]

    def antighost(self, b: int, v: str, hat: bool = False) -> Gen:
        return self.G.basis[self.G.index(b, vloc(v))].antighost(hat)

    def _space(self) -> AffineGSpace:
        H, U, G = self.H, self.U, self.G
        coords = [x for e in U.edges for x in self.coords(e.id)]
        frame = [t for e in U.edges for t in self.momenta(e.id)]
        lie = H.lie()
        values, brackets = {}, {}
        for e in U.edges:
            for b, t in enumerate(self.momenta(e.id)):
                for x in self.coords(e.id):
                    val = H.action_gen(H.table(b), x, True)
                    if val:
                        values[(t, x)] = val
                for b2, t2 in enumerate(self.momenta(e.id)):
                    row = lie.const(b, b2)
                    if row:
                        brackets[(t, t2)] = {edge_momentum(H, c, e.id): v for c, v in row.items()}
        calg = Algebra(coords + frame + G.gens(COACT))
        coaction, frame_coaction = {}, {}
        for e in U.edges:
            spec = [(vloc(e.tgt), COACT), (eloc(e.id), None), (vloc(e.src), COACT)]
            for x in self.coords(e.id):
                coaction[x] = _placed(H, spec, x, calg, 0)
            N = H.adjoint_matrix(vloc(e.src), COACT)
            for c, t in enumerate(self.momenta(e.id)):
                acc = Element(calg, {})
                for b, tb in enumerate(self.momenta(e.id)):
                    if N[(b, c)]:
                        acc = acc + Element.gen(calg, tb) * Element(calg, N[(b, c)].terms)
                frame_coaction[t] = acc
        holder: list = []
        coframe = group_coframe(H, lambda: holder[0], lambda b, loc: edge_momentum(H, b, loc[1]),
                                [eloc(e.id) for e in U.edges])
        space = AffineGSpace(coords, frame, values, brackets, G, coaction, frame_coaction,
                             coframe=coframe, name=f"Con({len(U.edges)})")
        holder.append(space)
        return space

    def gauge_moment(self, b: int, v: str) -> Element:
        """-sum_{s(e)=v} t_e + sum_{t(e)=v} t_(0)e S(t_(1))_e for the basis element b at v."""
        if v not in self.U.vertices:
            raise GraphError(f"unknown vertex {v!r}")
        H, alg = self.H, self.space.AT
        out = Element(alg, {})
        for e in self.U.out_edges(v):
            out = out - Element.gen(alg, edge_momentum(H, b, e.id))
        for e in self.U.in_edges(v):
            M = H.coadjoint_matrix(eloc(e.id), None)
            for c in range(H.dim):
                if M[(b, c)]:
                    out = out + Element.gen(alg, edge_momentum(H, c, e.id)) * Element(alg, M[(b, c)].terms)
        return out

    def moment(self, b: int, v: str) -> Element:
        return self.B.moment[self.antighost(b, v)]

    def bracket(self, n: int) -> PoissonBracket:
        got = self._brackets.get(n)
        if got is None:
            got = PoissonBracket(self.B, n)
            self._brackets[n] = got
        return got

    def level(self, n: int):
        return self.B.level(n)

    def lattice_bracket(self, x: Gen, y: Gen) -> Element:
        """Level-0 brackets read directly off the lattice formulas (independent table)."""
        H = self.H
        alg = self.level(0).alg
        if x.kind == "mom" and y.kind == "coord" and x.loc == y.loc:
            return Element(alg, H.action_gen(H.table(x.index), y, True).terms)
        if x.kind == "coord" and y.kind == "mom":
            return -self.lattice_bracket(y, x)
        if x.kind == "mom" and y.kind == "mom" and x.loc == y.loc:
            acc = Element(alg, {})
            for c, v in H.lie().const(x.index, y.index).items():
                acc = acc + Element.gen(alg, edge_momentum(H, c, x.loc[1])).scale(v)
            return acc
        if {x.kind, y.kind} == {"anti", "ghost"} and x.loc == y.loc:
            return Element.scalar(alg, -1 if x.index == y.index else 0)
        return Element(alg, {})


def build_phase_space(U: DirectedGraph, group, max_level: int = 2, bound: int = 2) -> GaugeTheory:
    if max_level < 0 or max_level > bound:
        raise GraphError(f"level {max_level} outside the configured bound {bound}")
    T = GaugeTheory(U, group_from_spec(group))
    for n in range(max_level + 1):
        T.level(n)
    return T


def pushforward(f: GraphMorphism, H: HopfAlgebra, src: Optional[GaugeTheory] = None,
                tgt: Optional[GaugeTheory] = None) -> tuple:
    """(f_*, f~_*): chain CDGA map O(mu_U^-1(0)) -> O(mu_U'^-1(0)) and gauge Hopf map."""
    rep = validate_graph_morphism(f)
    if not rep["ok"]:
        raise GraphError(f"not a morphism of D: {rep['condition']} fails at {rep['witness']}")
    src = src or GaugeTheory(f.source, H)
    tgt = tgt or GaugeTheory(f.target, H)

    def move(g: Gen) -> Gen:
        kind, ident = g.loc
        new = f.emap[ident] if kind == "E" else f.vmap[ident]
        return place_gen(g, (kind, new))

    table = {g: Element.gen(tgt.B.alg, move(g)) for g in src.B.gens}
    fstar = GradedMap(src.B.alg, tgt.B.alg, table, "f_*")
    hsrc = Algebra(src.G.gens(COACT))
    htgt = Algebra(tgt.G.gens(COACT))
    ftilde = GradedMap(hsrc, htgt, {g: Element.gen(htgt, move(g)) for g in hsrc.gens}, "f~_*")
    return fstar, ftilde


def check_pushforward(f: GraphMorphism, fstar: GradedMap, ftilde: GradedMap,
                      src: GaugeTheory, tgt: GaugeTheory) -> dict:
    """del-compatibility and equivariance rho' f_* = (f_* (x) f~_*) rho on generators."""
    out = {"del": None, "coaction": None}
    for g in src.B.gens:
        if fstar(src.B.d[g]) != Element(tgt.B.alg, tgt.B.d[move_gen(f, g)].terms):
            out["del"] = g
            break
    calg = tgt.B.coaction_alg()
    both = GradedMap(src.B.coaction_alg(), calg,
                     {**{g: Element(calg, fstar.on_gen(g).terms) for g in src.B.gens},
                      **{g: Element(calg, ftilde.on_gen(g).terms) for g in src.G.gens(COACT)}})
    for g in src.B.gens:
        lhs = Element(calg, tgt.B.coaction[move_gen(f, g)].terms)
        if both(src.B.coaction[g]) != lhs:
            out["coaction"] = g
            break
    return out


def move_gen(f: GraphMorphism, g: Gen) -> Gen:
    kind, ident = g.loc
    return place_gen(g, (kind, f.emap[ident] if kind == "E" else f.vmap[ident]))


# a fixed catalog of small graphs


def catalog() -> dict:
    """Named graphs with at most 3 vertices and 4 edges."""
    G = DirectedGraph
    return {
        "empty": G([], []),
        "point": G(["v1"], []),
        "two-points": G(["v1", "v2"], []),
        "edge": G(["v1", "v2"], [("e1", "v1", "v2")]),
        "loop": G(["v1"], [("e1", "v1", "v1")]),
        "double-loop": G(["v1"], [("e1", "v1", "v1"), ("e2", "v1", "v1")]),
        "multi-edge": G(["v1", "v2"], [("e1", "v1", "v2"), ("e2", "v1", "v2")]),
        "cycle2": G(["v1", "v2"], [("e1", "v1", "v2"), ("e2", "v2", "v1")]),
        "path": G(["v1", "v2", "v3"], [("e1", "v1", "v2"), ("e2", "v2", "v3")]),
        "triangle": G(["v1", "v2", "v3"], [("e1", "v1", "v2"), ("e2", "v2", "v3"), ("e3", "v3", "v1")]),
        "loop-edge": G(["v1", "v2"], [("e1", "v1", "v1"), ("e2", "v1", "v2")]),
        "triangle-chord": G(["v1", "v2", "v3"], [("e1", "v1", "v2"), ("e2", "v2", "v3"),
                                                  ("e3", "v3", "v1"), ("e4", "v1", "v3")]),
    }


def small_catalog(max_vertices: int, max_edges: int) -> dict:
    return {k: g for k, g in catalog().items()
            if len(g.vertices) <= max_vertices and len(g.edges) <= max_edges}


# prefactorization operations

_THEORIES: dict = {}
_POINTINGS: dict = {}
_CACHE_LOCK = threading.Lock()


def gauge_theory(U: DirectedGraph, H: HopfAlgebra) -> GaugeTheory:
    """Shared GaugeTheory per (graph, group); instances are treated as immutable."""
    key = (U, H.name)
    with _CACHE_LOCK:
        got = _THEORIES.get(key)
    if got is None:
        got = GaugeTheory(U, H)
        with _CACHE_LOCK:
            got = _THEORIES.setdefault(key, got)
    return got


def pointing_object(U: DirectedGraph, H: HopfAlgebra, bound: int = 2) -> PerTriple:
    key = (U, H.name, bound)
    with _CACHE_LOCK:
        got = _POINTINGS.get(key)
    if got is None:
        got = build_pointing(gauge_theory(U, H).B, bound)
        with _CACHE_LOCK:
            got = _POINTINGS.setdefault(key, got)
    return got


@dataclass
class OrthogonalTuple:
    """Morphisms of D into a common target with pairwise disjoint images."""

    target: DirectedGraph
    maps: list = field(default_factory=list)

    def __post_init__(self):
        for f in self.maps:
            if f.target != self.target:
                raise GraphError("every morphism of the tuple must land in the common target")
            rep = validate_graph_morphism(f)
            if not rep["ok"]:
                raise GraphError(f"not a morphism of D: {rep['condition']} fails at {rep['witness']}")
        for i, f in enumerate(self.maps):
            for g in self.maps[i + 1:]:
                if not check_orthogonality(f, g):
                    raise GraphError("morphisms of the tuple have overlapping images")

    def __len__(self) -> int:
        return len(self.maps)

    def compose(self, inner: Sequence["OrthogonalTuple"]) -> "OrthogonalTuple":
        """Operadic composition: the i-th inner tuple is plugged into the i-th slot."""
        if len(inner) != len(self.maps):
            raise GraphError("need one inner tuple per slot")
        maps = []
        for g, tup in zip(self.maps, inner):
            if tup.target != g.source:
                raise GraphError("inner tuple target does not match the slot's source")
            maps += [g.compose(f) for f in tup.maps]
        return OrthogonalTuple(self.target, maps)

    def permuted(self, perm: Sequence[int]) -> "OrthogonalTuple":
        return OrthogonalTuple(self.target, [self.maps[i] for i in perm])

    def complement(self) -> DirectedGraph:
        """Vertices and edges outside every image; fiber bijectivity makes it a subgraph."""
        vs, es = set(), set()
        for f in self.maps:
            v, e = f.image()
            vs |= v
            es |= e
        edges = [e for e in self.target.edges if e.id not in es]
        for e in edges:
            if e.src in vs or e.tgt in vs:
                raise GraphError(f"edge {e.id} leaves the complement")
        return DirectedGraph([v for v in self.target.vertices if v not in vs], edges)


def _mover(f: GraphMorphism):
    def move(g: Gen) -> Gen:
        if g.loc is None:
            raise GraphError(f"{g.name} is not placed on the graph")
        return move_gen(f, g)
    return move


def _rehome(x: Element, alg: Algebra, move=None) -> Element:
    if move is None:
        return Element(alg, x.terms)
    return relabel(x, move, alg)


def _filt(T: PerTriple, k: int) -> int:
    return 0 if T.filt is None else T.filt[k]


def induce_object(tup: OrthogonalTuple, objects: Sequence[PerTriple], H: HopfAlgebra,
                  bound: int = 2, name: Optional[str] = None) -> PerTriple:
    """The object B_hbar(f) (x) V_1 (x) ... (x) V_n of the target.

    B_hbar(f) is the pointing object of the complement of the images; the
    factors V_i are carried along their morphisms.  Basis elements are
    (complement word, key_1, ..., key_n) with total filtration <= bound; for
    the empty tuple the key is the bare word, so the result is exactly the
    pointing object of the target.
    """
    if len(objects) != len(tup.maps):
        raise GraphError("need one object per morphism")
    target = gauge_theory(tup.target, H)
    space = target.space
    for f, V in zip(tup.maps, objects):
        src = gauge_theory(f.source, H).space
        if set(V.space.coords) != set(src.coords) or set(V.space.frame) != set(src.frame) \
                or V.space.group.locs != src.group.locs:
            raise GraphError("object does not live on the source of its morphism")
    comp = tup.complement()
    P = pointing_object(comp, H, bound)
    factors = [(P, None)] + [(V, _mover(f)) for f, V in zip(tup.maps, objects)]
    A = space.A
    CA = Algebra(list(A.gens) + space.group.gens(COACT))

    # basis: product of factor bases with total filtration <= bound
    basis_idx = []

    def rec(j: int, acc: tuple, used: int):
        if j == len(factors):
            basis_idx.append(acc)
            return
        T = factors[j][0]
        for k in range(T.rank):
            f = _filt(T, k)
            if used + f <= bound:
                rec(j + 1, acc + (k,), used + f)
    rec(0, (), 0)
    if not objects:
        keys = [P.basis[ix[0]] for ix in basis_idx]
    else:
        keys = [tuple(T.basis[k] for (T, _), k in zip(factors, ix)) for ix in basis_idx]
    where = {ix: n for n, ix in enumerate(basis_idx)}
    degrees = [sum(T.degrees[k] for (T, _), k in zip(factors, ix)) for ix in basis_idx]
    filt = [sum(_filt(T, k) for (T, _), k in zip(factors, ix)) for ix in basis_idx]

    def coef(j: int, x: Element, alg: Algebra) -> Element:
        return _rehome(x, alg, factors[j][1])

    def sign_before(ix: tuple, j: int) -> int:
        return -1 if sum(factors[l][0].degrees[ix[l]] for l in range(j)) % 2 else 1

    d: dict = {}
    for n, ix in enumerate(basis_idx):
        col: dict = {}
        for j, (T, _) in enumerate(factors):
            s = sign_before(ix, j)
            for i, c in T.d.get(ix[j], {}).items():
                tgt = where.get(ix[:j] + (i,) + ix[j + 1:])
                if tgt is None:
                    raise GraphError("differential leaves the truncation")
                _addto(col, tgt, coef(j, c, A).scale(s))
        d[n] = col

    owner: dict = {}
    for j, (T, move) in enumerate(factors):
        for v in T.space.frame:
            owner[v if move is None else move(v)] = (j, v)
        for b in T.space.group.basis:
            t = b.antighost()
            owner[t if move is None else move(t)] = (j, t)

    def raised(mat_of, odd: bool) -> dict:
        out: dict = {}
        for g in sorted(mat_of, key=lambda g: g.key):
            j, local = owner[g]
            T = factors[j][0]
            mat = mat_of[g]
            cols: dict = {}
            for n, ix in enumerate(basis_idx):
                if filt[n] >= bound or ix[j] not in mat.get(local, {}):
                    continue
                s = sign_before(ix, j) if odd else 1
                col: dict = {}
                for i, c in mat[local][ix[j]].items():
                    tgt = where.get(ix[:j] + (i,) + ix[j + 1:])
                    if tgt is None:
                        raise GraphError("operator leaves the truncation")
                    _addto(col, tgt, coef(j, c, A).scale(s))
                cols[n] = col
            out[g] = cols
        return out

    frames = {v: None for v in space.frame}
    antis = {b.antighost(): None for b in space.group.basis}
    nabla = raised({v: {owner[v][1]: factors[owner[v][0]][0].nabla.get(owner[v][1], {})} for v in frames}, False)
    psi = raised({t: {owner[t][1]: factors[owner[t][0]][0].psi.get(owner[t][1], {})} for t in antis}, True)

    coaction: dict = {}
    for n, ix in enumerate(basis_idx):
        partial = {(): Element.scalar(CA, 1)}
        for j, (T, _) in enumerate(factors):
            nxt: dict = {}
            for pre, c in partial.items():
                for i, v in T.coaction[ix[j]].items():
                    val = _prod(c, coef(j, v, CA))
                    if val:
                        nxt[pre + (i,)] = nxt[pre + (i,)] + val if pre + (i,) in nxt else val
            partial = nxt
        col: dict = {}
        for jx, c in partial.items():
            tgt = where.get(jx)
            if tgt is None:
                raise GraphError("coaction leaves the truncation")
            _addto(col, tgt, c)
        coaction[n] = col

    return PerTriple(space, keys, degrees, d, nabla, psi, coaction, filt, bound,
                     name=name or (P.name if not objects else f"A(f)[{len(objects)}]"),
                     parts=list(zip(tup.maps, objects)),
                     complement_words=[P.basis[ix[0]] for ix in basis_idx])


# canonical flattening for coherence and equivariance


def _flatten(T: PerTriple, k: int, move_loc, atoms: list) -> None:
    """Append the atoms of basis element k: letters (g, e) then leaves, in tensor order."""
    parts = T.parts
    if parts is None:
        raise GraphError("only induced objects can be flattened")
    for g, e in T.complement_words[k]:
        atoms.append(("w", place_gen(g, move_loc(g.loc)), e))
    if not parts:
        return
    for (f, V), key in zip(parts, T.basis[k][1:]):
        kk = V.index[key]

        def sub(loc, f=f):
            return move_loc((loc[0], f.emap[loc[1]] if loc[0] == "E" else f.vmap[loc[1]]))
        if V.parts is not None:
            _flatten(V, kk, sub, atoms)
        else:
            anchor = (tuple(sorted(sub(vloc(v))[1] for v in f.source.vertices)),
                      tuple(sorted(sub(eloc(e.id))[1] for e in f.source.edges)))
            atoms.append(("leaf", anchor, key, V.degrees[kk] % 2))


def canonical_key(T: PerTriple, k: int) -> tuple:
    """(sign, key): letters merged into one normal word, leaves sorted by image position."""
    atoms: list = []
    _flatten(T, k, lambda loc: loc, atoms)

    def sort_key(a):
        return (0, a[1].key) if a[0] == "w" else (1, a[1])

    def odd(a):
        return (a[1].odd and a[2] % 2 == 1) if a[0] == "w" else a[3] == 1

    sign = 1
    arr = list(atoms)
    # insertion sort, counting swaps of odd neighbours
    for i in range(1, len(arr)):
        j = i
        while j > 0 and sort_key(arr[j - 1]) > sort_key(arr[j]):
            if odd(arr[j - 1]) and odd(arr[j]):
                sign = -sign
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            j -= 1
    word = tuple((a[1], a[2]) for a in arr if a[0] == "w")
    leaves = tuple((a[1], a[2]) for a in arr if a[0] == "leaf")
    return sign, (word, leaves)


def canonical_data(T: PerTriple) -> dict:
    """Matrices re-indexed by canonical keys with the reordering signs applied."""
    keys = [canonical_key(T, k) for k in range(T.rank)]

    def mat(m: Mapping) -> dict:
        out = {}
        for k, col in m.items():
            sk, ck = keys[k]
            for i, v in col.items():
                si, ci = keys[i]
                out[(ck, ci)] = v.scale(sk * si).terms
        return out

    return {
        "basis": {ck: (T.degrees[k], None if T.filt is None else T.filt[k]) for k, (_, ck) in enumerate(keys)},
        "d": mat(T.d),
        "nabla": {v: mat(m) for v, m in T.nabla.items()},
        "psi": {t: mat(m) for t, m in T.psi.items()},
        "coaction": mat(T.coaction),
    }
