"""Chevalley-Eilenberg stacky CDGAs and the cosimplicial resolution of [Y/G].

Level n of the resolution is CE(g^{n+1}, B (x) H^{(x)n}).  Its generators
are the generators of B, the Hopf generators h^<k> (slot k = 1..n, one copy
per group location) and the ghosts theta^<j> (slot j = 0..n).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .algebra import (Algebra, AlgebraError, Derivation, Element, Gen, GradedMap,
                      LazyDerivation, _acc, check_anticommute, check_square_zero)
from .hopf import COACT, GroupCopies, HopfAlgebra, LieAlgebraData, place_gen, sl2_lie


class ActionError(AlgebraError):
    """A Lie action that is not a Lie algebra homomorphism, or not compatible with d."""


class EquivarianceError(AlgebraError):
    pass


class IndexRangeError(AlgebraError, IndexError):
    pass


def _zero() -> Element:
    return Element(None, {})


@dataclass
class ChainCDGA:
    """Chain CDGA B with chain differential on generators and a G-symmetry.

    The symmetry is either an H-coaction (``coaction[g]`` is an element whose
    H-leg generators sit at slot COACT) or a bare Lie action
    (``action[a][g]``).
    """

    gens: list
    d: dict
    group: Optional[GroupCopies] = None
    coaction: Optional[dict] = None
    lie: Optional[LieAlgebraData] = None
    action: Optional[dict] = None
    name: str = "B"
    _levels: dict = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def __post_init__(self):
        self.gens = sorted(self.gens, key=lambda g: g.key)
        self.alg = Algebra(self.gens, self.name)
        for g in self.gens:
            if g.kind not in ("coord", "mom", "anti") or g.slot is not None:
                raise AlgebraError(f"{g.name} cannot be a generator of a chain CDGA")
            self.d.setdefault(g, _zero())
        if self.group is not None and self.lie is None:
            self.lie = self.group.lie
        if self.coaction is not None and self.group is None:
            raise AlgebraError("a coaction needs a group")

    def chain_differential(self) -> Derivation:
        return Derivation(self.alg, self.d, (0, -1), name="del")

    def check(self) -> Optional[Gen]:
        ok, g, _ = check_square_zero(self.chain_differential(), witness=True)
        return None if ok else g

    def coaction_alg(self) -> Algebra:
        return Algebra(list(self.gens) + self.group.gens(COACT))

    def rho(self, a: int) -> Derivation:
        """Induced Lie action rho_B(t_a)(b) = b_(0) t_a(b_(1))."""
        if self.action is not None:
            return Derivation(self.alg, {g: self.action[a].get(g, _zero()) for g in self.gens}, (0, 0),
                              name=f"rho[{a}]")
        G = self.group
        table = {}
        for g in self.gens:
            table[g] = G.contract(self.coaction[g], COACT, lambda m, a=a: G.t_eval(a, m), self.alg)
        return Derivation(self.alg, table, (0, 0), name=f"rho[{a}]")

    def check_coaction(self) -> Optional[tuple]:
        """Counit and coassociativity of the coaction on generators; (law, gen) on failure."""
        if self.coaction is None:
            return None
        G = self.group
        for g in self.gens:
            if G.contract(self.coaction[g], COACT, G.counit_mono) != Element.gen(self.alg, g):
                return ("counit", g)
        two = Algebra(list(self.gens) + G.gens(COACT) + G.gens(1))
        for g in self.gens:
            lhs = self._coact_twice(g, two)
            rhs = self._coact_then_coproduct(g, two)
            if lhs != rhs:
                return ("coassociativity", g)
        return None

    def _coact_twice(self, g: Gen, alg: Algebra) -> Element:
        # (rho (x) id) rho: old leg to slot 1, apply rho to the B part
        out = Element.scalar(alg, 0)
        for (m, p), c in self.coaction[g].terms.items():
            acc = Element.scalar(alg, c).scale(1, p)
            for h, e in m:
                if h.slot == COACT:
                    acc = acc * Element.from_factors(alg, [(place_gen(h, slot=1), e)])
                else:
                    img = self.coaction[h]
                    acc = acc * (img ** e if e > 0 else img.inverse() ** (-e))
            out = out + acc
        return out

    def _coact_then_coproduct(self, g: Gen, alg: Algebra) -> Element:
        out = Element.scalar(alg, 0)
        H = self.group.H
        for (m, p), c in self.coaction[g].terms.items():
            acc = Element.scalar(alg, c).scale(1, p)
            for h, e in m:
                if h.slot == COACT:
                    img = H.coproduct(Element.from_factors(alg, [(h, 1)]), (COACT, 1), alg)
                    acc = acc * (img ** e if e > 0 else img.inverse() ** (-e))
                else:
                    acc = acc * Element.from_factors(alg, [(h, e)])
            out = out + acc
        return out

    def level(self, n: int) -> "CosimplicialLevel":
        if n < 0:
            raise IndexRangeError("levels start at 0")
        with self._lock:
            got = self._levels.get(n)
        if got is None:
            got = build_level(n, self)
            with self._lock:
                got = self._levels.setdefault(n, got)
        return got


class StackyCDGA:
    """Bigraded commutative algebra with del of bidegree (0,-1) and delta of bidegree (1,0)."""

    def __init__(self, alg: Algebra, d_chain: Derivation, delta: Derivation,
                 lie: Optional[LieAlgebraData] = None, ghosts: Sequence[Gen] = (), name: str = ""):
        self.alg = alg
        self.d_chain = d_chain
        self.delta = delta
        self.lie = lie
        self.ghosts = list(ghosts)
        self.name = name
        self._total = None

    def __repr__(self) -> str:
        return f"StackyCDGA({self.name}, {len(self.alg.gens)} generators)"

    def gen(self, name: str) -> Element:
        return self.alg.gen(name)

    @property
    def total(self) -> Derivation:
        """The total differential d = del + delta."""
        if self._total is None:
            self._total = self.d_chain + self.delta
            self._total.name = "d"
        return self._total

    def verify(self) -> dict:
        """Square-zero and anticommutation on generators; name -> (ok, witness)."""
        out = {}
        ok, g, _ = check_square_zero(self.d_chain, witness=True)
        out["del^2"] = (ok, g)
        ok, g, _ = check_square_zero(self.delta, witness=True)
        out["delta^2"] = (ok, g)
        ok, g, _ = check_anticommute(self.d_chain, self.delta, witness=True)
        out["del delta + delta del"] = (ok, g)
        return out

    def ok(self) -> bool:
        return all(v[0] for v in self.verify().values())


def _ghost_delta(lie: LieAlgebraData, ghosts: Sequence[Gen], alg: Algebra) -> dict:
    table = {}
    for c, gc in enumerate(ghosts):
        acc: dict = {}
        for (a, b), row in lie.f.items():
            v = row.get(c)
            if v:
                for (m, p), cc in Element.from_factors(alg, [(ghosts[a], 1), (ghosts[b], 1)]).terms.items():
                    _acc(acc, (m, p), -Fraction(1, 2) * v * cc)
        table[gc] = Element(alg, acc)
    return table


def check_lie_action(lie: LieAlgebraData, rhos: Sequence[Derivation], gens: Iterable[Gen]) -> Optional[tuple]:
    """First (a, b, generator) where [rho_a, rho_b] != f^c_ab rho_c, or None."""
    gens = list(gens)
    for a in range(lie.dim):
        for b in range(a + 1, lie.dim):
            for g in gens:
                lhs = rhos[a](rhos[b].on_gen(g)) - rhos[b](rhos[a].on_gen(g))
                rhs = _zero()
                for c, v in lie.const(a, b).items():
                    rhs = rhs + rhos[c].on_gen(g).scale(v)
                if lhs != rhs:
                    return (a, b, g)
    return None


def build_ce(lie: LieAlgebraData, B: ChainCDGA, rho: Optional[Sequence[Derivation]] = None,
             ghosts: Optional[Sequence[Gen]] = None, extra_gens: Sequence[Gen] = (),
             d_extra: Optional[Mapping] = None, check: bool = True, name: str = "") -> StackyCDGA:
    """CE(g, B): delta(b) = theta^a rho(t_a)(b), delta(theta^a) = -1/2 f^a_bc theta^b theta^c.

    ``extra_gens`` are further degree-(0,0) generators (the h^<k> of a level)
    on which ``rho`` must also be defined; ``d_extra`` gives del on them (default 0).
    """
    ghosts = list(ghosts) if ghosts is not None else [b.ghost() for b in lie.basis]
    if len(ghosts) != lie.dim:
        raise AlgebraError("one ghost per basis element is required")
    rho = list(rho) if rho is not None else [B.rho(a) for a in range(lie.dim)]
    base = list(B.gens) + list(extra_gens)
    alg = Algebra(base + ghosts, name or f"CE({B.name})")
    if check:
        bad = check_lie_action(lie, rho, base)
        if bad is not None:
            a, b, g = bad
            raise ActionError(f"action is not a Lie homomorphism on the pair "
                              f"({lie.basis[a].name}, {lie.basis[b].name}), witness {g.name}")
    dtab = {}
    for g in base:
        dtab[g] = B.d.get(g) if g in B.d else (d_extra or {}).get(g, _zero())
    for g in ghosts:
        dtab[g] = _zero()
    deltab = {}
    for g in base:
        acc = Element(alg, {})
        for a, th in enumerate(ghosts):
            r = rho[a].on_gen(g)
            if r:
                acc = acc + Element.gen(alg, th) * Element(alg, r.terms)
        deltab[g] = acc
    deltab.update(_ghost_delta(lie, ghosts, alg))
    d_chain = Derivation(alg, {g: Element(alg, v.terms) for g, v in dtab.items()}, (0, -1), name="del")
    delta = Derivation(alg, deltab, (1, 0), name="delta")
    return StackyCDGA(alg, d_chain, delta, lie, ghosts, alg.name)


# CE modules


class CEModule:
    """Finite free graded module over a chain CDGA B with a compatible g-action.

    ``degrees[k]`` is the chain degree of basis vector s_k.  ``dmat[(i, k)]``
    is the B-coefficient of s_i in del_V(s_k) and ``rhomat[a][(i, k)]`` that
    of rho_V(t_a)(s_k).
    """

    def __init__(self, B: ChainCDGA, degrees: Sequence[int], dmat: Mapping, rhomat: Sequence[Mapping],
                 names: Optional[Sequence[str]] = None):
        self.B = B
        self.degrees = list(degrees)
        self.rank = len(self.degrees)
        self.dmat = {k: v for k, v in dmat.items() if v}
        self.rhomat = [{k: v for k, v in r.items() if v} for r in rhomat]
        self.names = list(names) if names else [f"s{k}" for k in range(self.rank)]

    def column(self, mat: Mapping, k: int) -> dict:
        return {i: v for (i, kk), v in mat.items() if kk == k}


def _add(out: dict, k, v: Element) -> None:
    if not v:
        return
    got = out.get(k)
    s = v if got is None else got + v
    if s:
        out[k] = s
    else:
        out.pop(k, None)


def _clean(x: dict) -> dict:
    return {k: v for k, v in x.items() if v}


class CEModuleComplex:
    """CE(g, V) = CE(g, B) (x)_B V; elements are {basis index: CE(g, B) coefficient}.

    delta(xi s) = delta(xi) s + (-1)^|xi| xi theta^a rho_V(t_a)(s) and
    del(xi s) = del(xi) s + (-1)^|xi| xi del_V(s).
    """

    def __init__(self, ce: StackyCDGA, V: CEModule):
        self.ce = ce
        self.V = V
        self.alg = ce.alg
        self._dV = {k: {i: Element(self.alg, r.terms) for i, r in V.column(V.dmat, k).items()}
                    for k in range(V.rank)}
        self._deltaV = {}
        for k in range(V.rank):
            out: dict = {}
            for a, th in enumerate(ce.ghosts):
                for i, r in V.column(V.rhomat[a], k).items():
                    _add(out, i, Element.gen(self.alg, th) * Element(self.alg, r.terms))
            self._deltaV[k] = out

    def basis(self, k: int) -> dict:
        return {k: Element.scalar(self.alg, 1)}

    def _extend(self, x: Mapping, D: Derivation, table: dict) -> dict:
        out: dict = {}
        for k, c in x.items():
            if not c:
                continue
            _add(out, k, D(c))
            sign = -1 if c.parity() else 1
            for i, r in table[k].items():
                _add(out, i, (c * r).scale(sign))
        return _clean(out)

    def delta(self, x: Mapping) -> dict:
        return self._extend(x, self.ce.delta, self._deltaV)

    def d_chain(self, x: Mapping) -> dict:
        return self._extend(x, self.ce.d_chain, self._dV)

    def verify(self) -> dict:
        """Square-zero and anticommutation on basis vectors; name -> (ok, witness)."""
        checks = (
            ("delta^2", lambda x: self.delta(self.delta(x))),
            ("del^2", lambda x: self.d_chain(self.d_chain(x))),
            ("del delta + delta del", lambda x: _sum(self.d_chain(self.delta(x)), self.delta(self.d_chain(x)))),
        )
        out = {}
        for name, fn in checks:
            wit = next((self.V.names[k] for k in range(self.V.rank) if fn(self.basis(k))), None)
            out[name] = (wit is None, wit)
        return out

    def ok(self) -> bool:
        return all(v[0] for v in self.verify().values())


def _sum(x: dict, y: dict) -> dict:
    out = dict(x)
    for k, v in y.items():
        _add(out, k, v)
    return _clean(out)


def _module_op(V: CEModule, x: Mapping, D: Derivation, mat: Mapping, odd: bool) -> dict:
    """Extend an operator on V given on the basis: op(c s) = D(c) s + (+/-) c op(s)."""
    out: dict = {}
    for k, c in x.items():
        _add(out, k, D(c))
        sign = -1 if odd and c.parity() else 1
        for i, r in V.column(mat, k).items():
            _add(out, i, (c * r).scale(sign))
    return _clean(out)


def check_module_compatibility(V: CEModule, rho: Sequence[Derivation]) -> Optional[tuple]:
    """rho_V(t_a) must commute with del_V on the basis; (a, basis index) on failure.

    The Leibniz rule rho_V(t)(b s) = rho(t)(b) s + b rho_V(t)(s) holds by
    construction on a free module once rho_V is given on the basis.
    """
    dB = V.B.chain_differential()
    for a, R in enumerate(V.rhomat):
        for k in range(V.rank):
            s = {k: Element.scalar(V.B.alg, 1)}
            lhs = _module_op(V, _module_op(V, s, dB, V.dmat, True), rho[a], R, False)
            rhs = _module_op(V, _module_op(V, s, rho[a], R, False), dB, V.dmat, True)
            if lhs != rhs:
                return (a, k)
    return None


def build_ce_module(lie: LieAlgebraData, V: CEModule, ce: Optional[StackyCDGA] = None,
                    check: bool = True) -> CEModuleComplex:
    ce = ce or build_ce(lie, V.B)
    if check:
        rho = [V.B.rho(a) for a in range(lie.dim)]
        bad = check_module_compatibility(V, rho)
        if bad is not None:
            raise ActionError(f"module action of {lie.basis[bad[0]].name} on {V.names[bad[1]]} "
                              f"does not commute with del")
    return CEModuleComplex(ce, V)


# cosimplicial levels


class CosimplicialLevel(StackyCDGA):
    """CE(g^{n+1}, B (x) H^{(x)n})."""

    def __init__(self, n: int, B: ChainCDGA, ce: StackyCDGA, rho: list):
        super().__init__(ce.alg, ce.d_chain, ce.delta, ce.lie, ce.ghosts, f"level {n}")
        self.n = n
        self.B = B
        self.G = B.group
        self.rho = rho

    def ghost(self, i: int, j: int) -> Gen:
        return self.G.basis[i].ghost(j)

    def h_gens(self, k: int) -> list:
        return self.G.gens(k)

    def gens_by_type(self) -> dict:
        out = {"B": list(self.B.gens), "h": [], "theta": []}
        for g in self.alg.gens:
            if g.kind == "ghost":
                out["theta"].append(g)
            elif g.slot is not None:
                out["h"].append(g)
        return out


def level_lie(G: GroupCopies, n: int) -> tuple[LieAlgebraData, list]:
    """g^{n+1} with basis (entry i, slot j) flattened as j * dim + i; ghosts theta^{i<j>}."""
    dim = G.dim
    basis, ghosts, f = [], [], {}
    for j in range(n + 1):
        for i in range(dim):
            basis.append(G.basis[i])
            ghosts.append(G.basis[i].ghost(j))
    for (a, b), row in G.lie.f.items():
        for j in range(n + 1):
            f[(j * dim + a, j * dim + b)] = {j * dim + c: v for c, v in row.items()}
    return LieAlgebraData(basis, f), ghosts


def build_level(n: int, B: ChainCDGA) -> CosimplicialLevel:
    if B.group is None or B.coaction is None:
        raise AlgebraError("levels need an H-coaction on B")
    bad = B.check_coaction()
    if bad is not None:
        raise AlgebraError(f"coaction fails the {bad[0]} law on {bad[1].name}")
    G = B.group
    dim = G.dim
    lie, ghosts = level_lie(G, n)
    hgens = [g for k in range(1, n + 1) for g in G.gens(k)]
    base_rho = [B.rho(i) for i in range(dim)]
    alg_guess = Algebra(list(B.gens) + hgens)
    rho = []
    for j in range(n + 1):
        for i in range(dim):
            rho.append(_level_action(G, B, base_rho[i], i, j, n, alg_guess))
    ce = build_ce(lie, B, rho, ghosts, hgens, check=False, name=f"level {n}")
    return CosimplicialLevel(n, B, ce, rho)


def _level_action(G: GroupCopies, B: ChainCDGA, rb: Derivation, i: int, j: int, n: int,
                  alg: Algebra) -> LazyDerivation:
    L = G.action(i, True)
    R = G.action(i, False)

    def fn(g: Gen) -> Element:
        if g.slot is None and g.kind != "ghost":
            return rb.on_gen(g) if j == 0 else _zero()
        if g.kind == "coord":
            if g.slot == j:
                return L.on_gen(g)
            if g.slot == j + 1:
                return R.on_gen(g)
        return _zero()
    return LazyDerivation(fn, (0, 0), alg, f"rho[{i}<{j}>]")


def _gen_el(alg: Algebra, g: Gen) -> Element:
    return Element.from_factors(alg, [(g, 1)])


def coface(B: ChainCDGA, i: int, n: int) -> GradedMap:
    """d^i : level n-1 -> level n."""
    if n < 1 or not 0 <= i <= n:
        raise IndexRangeError(f"coface d^{i} into level {n} out of range")
    src, tgt = B.level(n - 1), B.level(n)
    G = B.group
    table = {}
    for g in src.alg.gens:
        if g.kind == "ghost":
            table[g] = _gen_el(tgt.alg, place_gen(g, slot=g.slot + 1 if i <= g.slot else g.slot))
        elif g.slot is None:
            if i == 0:
                table[g] = _shift_coaction(B.coaction[g], tgt.alg)
            else:
                table[g] = _gen_el(tgt.alg, g)
        else:
            j = g.slot
            if i < j:
                table[g] = _gen_el(tgt.alg, place_gen(g, slot=j + 1))
            elif i == j:
                table[g] = G.H.coproduct(_gen_el(tgt.alg, g), (j, j + 1), tgt.alg)
            else:
                table[g] = _gen_el(tgt.alg, g)
    return GradedMap(src.alg, tgt.alg, table, f"d^{i}")


def _shift_coaction(x: Element, alg: Algebra, slot: int = 1) -> Element:
    terms: dict = {}
    for (m, p), c in x.terms.items():
        factors = [(place_gen(g, slot=slot) if g.slot == COACT else g, e) for g, e in m]
        for (mm, _), c2 in Element.from_factors(alg, factors).terms.items():
            _acc(terms, (mm, p), c * c2)
    return Element(alg, terms)


def codegeneracy(B: ChainCDGA, i: int, n: int) -> GradedMap:
    """s^i : level n+1 -> level n."""
    if n < 0 or not 0 <= i <= n:
        raise IndexRangeError(f"codegeneracy s^{i} onto level {n} out of range")
    src, tgt = B.level(n + 1), B.level(n)
    G = B.group
    table = {}
    for g in src.alg.gens:
        if g.kind == "ghost":
            j = g.slot
            table[g] = _gen_el(tgt.alg, place_gen(g, slot=j - 1 if i <= j - 1 else j))
        elif g.slot is None:
            table[g] = _gen_el(tgt.alg, g)
        else:
            j = g.slot
            if i <= j - 2:
                table[g] = _gen_el(tgt.alg, place_gen(g, slot=j - 1))
            elif i == j - 1:
                table[g] = Element.scalar(tgt.alg, G.H.counit_gen(g))
            else:
                table[g] = _gen_el(tgt.alg, g)
    return GradedMap(src.alg, tgt.alg, table, f"s^{i}")


def commutes_with(phi: GradedMap, D_src: Derivation, D_tgt: Derivation) -> Optional[Gen]:
    """First generator g with phi(D g) != D'(phi g), or None."""
    for g in phi.source.gens:
        if phi(D_src.on_gen(g)) != D_tgt(phi.on_gen(g)):
            return g
    return None


def check_map_differentials(phi: GradedMap, src: StackyCDGA, tgt: StackyCDGA) -> dict:
    return {
        "del": commutes_with(phi, src.d_chain, tgt.d_chain),
        "delta": commutes_with(phi, src.delta, tgt.delta),
    }


def ce_map(kappa: GradedMap, kappa_tilde: Mapping[Gen, Element], src: StackyCDGA, tgt: StackyCDGA,
           check: bool = True) -> GradedMap:
    """(kappa*, kappa~*) : CE(g, B) -> CE(g', B'); ghosts go through the linear map kappa~*."""
    table = {}
    for g in src.alg.gens:
        if g.kind == "ghost":
            img = kappa_tilde.get(g, _zero())
        else:
            img = kappa.on_gen(g)
        table[g] = Element(tgt.alg, img.terms)
    phi = GradedMap(src.alg, tgt.alg, table, "ce_map")
    if check:
        for name, wit in check_map_differentials(phi, src, tgt).items():
            if wit is not None:
                raise EquivarianceError(f"ce_map does not commute with {name}; witness generator {wit.name}")
    return phi


def cosimplicial_identities(B: ChainCDGA, n_max: int = 2) -> list:
    """All cosimplicial identities on generators up to level n_max; list of (name, ok)."""
    out = []

    def eq(f: GradedMap, g: GradedMap) -> bool:
        return all(f.on_gen(x) == g.on_gen(x) for x in f.source.gens)

    def comp(f: GradedMap, g: GradedMap) -> GradedMap:
        return f.compose(g)

    for n in range(1, n_max):
        # d^j d^i = d^i d^{j-1}, i < j; maps level n-1 -> n+1
        for j in range(n + 2):
            for i in range(j):
                lhs = comp(coface(B, j, n + 1), coface(B, i, n))
                rhs = comp(coface(B, i, n + 1), coface(B, j - 1, n))
                out.append((f"d^{j}d^{i}=d^{i}d^{j - 1} @{n - 1}", eq(lhs, rhs)))
    for n in range(0, n_max - 1):
        # s^j s^i = s^i s^{j+1}, i <= j; level n+2 -> n
        for j in range(n + 1):
            for i in range(j + 1):
                lhs = comp(codegeneracy(B, j, n), codegeneracy(B, i, n + 1))
                rhs = comp(codegeneracy(B, i, n), codegeneracy(B, j + 1, n + 1))
                out.append((f"s^{j}s^{i}=s^{i}s^{j + 1} @{n + 2}", eq(lhs, rhs)))
    for n in range(1, n_max):
        # s^j d^i on level n: d^i: n -> n+1, s^j: n+1 -> n
        for j in range(n + 1):
            for i in range(n + 2):
                lhs = comp(codegeneracy(B, j, n), coface(B, i, n + 1))
                if i < j:
                    rhs = comp(coface(B, i, n), codegeneracy(B, j - 1, n - 1))
                elif i in (j, j + 1):
                    rhs = None
                else:
                    rhs = comp(coface(B, i - 1, n), codegeneracy(B, j, n - 1))
                if rhs is None:
                    ok = all(lhs.on_gen(x) == _gen_el(lhs.target, x) for x in lhs.source.gens)
                else:
                    ok = eq(lhs, rhs)
                out.append((f"s^{j}d^{i} @{n}", ok))
    # level 0 also has s^0 d^0 = s^0 d^1 = id
    for i in (0, 1):
        lhs = comp(codegeneracy(B, 0, 0), coface(B, i, 1))
        ok = all(lhs.on_gen(x) == _gen_el(lhs.target, x) for x in lhs.source.gens)
        out.append((f"s^0d^{i} @0", ok))
    return out


def sl2_plane(lie: Optional[LieAlgebraData] = None) -> ChainCDGA:
    """sl2 acting on Q[x, y] by e = x d/dy, f = y d/dx, h = x d/dx - y d/dy."""
    lie = lie or sl2_lie()
    x, y = Gen("coord", "px", index=0), Gen("coord", "py", index=1)
    alg = Algebra([x, y])
    X, Y = Element.gen(alg, x), Element.gen(alg, y)
    zero = Element(alg, {})
    action = [
        {x: zero, y: X},
        {x: X, y: -Y},
        {x: Y, y: zero},
    ]
    return ChainCDGA([x, y], {}, lie=lie, action=action, name="Q[x,y]")
