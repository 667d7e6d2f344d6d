"""Commutative Hopf algebras O(G) for tori and SL2, with Sweedler calculus.

Tensor powers H^{(x)n} are not separate objects: a pure tensor is a monomial
whose generators carry distinct ``slot`` tags, so every tensor expression is
an ordinary ``Element`` of a commutative algebra.  Copies of the group
indexed by graph vertices (gauge groups G^V) are handled the same way via
the ``loc`` tag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from typing import Callable, Iterable, Optional, Sequence

from .algebra import Algebra, AlgebraError, Element, Gen, LazyDerivation, _acc, sort_monomial

# scratch slots used internally for Sweedler legs; never appear in results
SCRATCH = (901, 902, 903, 904)
# slot carrying the H-leg of a coaction B -> B (x) H
COACT = 0


class HopfError(AlgebraError):
    pass


def place_gen(g: Gen, loc=..., slot=..., hat=None) -> Gen:
    return Gen(g.kind, g.label,
               g.loc if loc is ... else loc,
               g.slot if slot is ... else slot,
               g.hat if hat is None else hat,
               g.index, g.inv, g.sl2)


def relabel(x: Element, fn: Callable[[Gen], Gen], alg: Algebra) -> Element:
    """Rename generators of x through fn (a bijection on the generators used)."""
    terms: dict = {}
    for (m, p), c in x.terms.items():
        factors = [(fn(g), e) for g, e in m]
        for c2, m2 in _sorted(factors):
            _acc(terms, (m2, p), c * c2)
    return Element(alg, terms)


def _sorted(factors):
    return sort_monomial(factors)


@dataclass(frozen=True)
class LieBasis:
    """One basis vector t_a of a Lie algebra; ``loc`` selects a group copy."""

    label: str
    index: int
    loc: object = None
    ghost_label: str = "theta"

    def ghost(self, slot: Optional[int] = None, hat: bool = False) -> Gen:
        return Gen("ghost", self.ghost_label, self.loc, slot, hat, self.index)

    def antighost(self, hat: bool = False) -> Gen:
        return Gen("anti", self.label, self.loc, None, hat, self.index)

    @property
    def name(self) -> str:
        return self.label if self.loc is None else f"{self.label}_{self.loc[1]}"


class LieAlgebraData:
    """Basis and structure constants [t_a, t_b] = f^c_ab t_c (indices into ``basis``)."""

    def __init__(self, basis: Sequence[LieBasis], f: dict):
        self.basis = list(basis)
        self.dim = len(self.basis)
        self.f = {k: {c: Fraction(v) for c, v in d.items() if v} for k, d in f.items()}
        self.pos = {b: i for i, b in enumerate(self.basis)}

    def const(self, a: int, b: int) -> dict:
        return self.f.get((a, b), {})

    def is_abelian(self) -> bool:
        return not any(self.f.values())

    def check_antisymmetric(self) -> Optional[tuple]:
        for a in range(self.dim):
            for b in range(self.dim):
                fab, fba = self.const(a, b), self.const(b, a)
                for c in set(fab) | set(fba):
                    if fab.get(c, 0) + fba.get(c, 0):
                        return (a, b)
        return None

    def check_jacobi(self) -> Optional[tuple]:
        """First triple (a,b,c) violating Jacobi, or None."""
        def br(x: dict, y: dict) -> dict:
            out: dict = {}
            for i, ci in x.items():
                for j, cj in y.items():
                    for k, ck in self.const(i, j).items():
                        out[k] = out.get(k, 0) + ci * cj * ck
            return {k: v for k, v in out.items() if v}
        for a in range(self.dim):
            for b in range(self.dim):
                for c in range(self.dim):
                    tot: dict = {}
                    for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                        for k, v in br({x: 1}, br({y: 1}, {z: 1})).items():
                            tot[k] = tot.get(k, 0) + v
                    if any(tot.values()):
                        return (a, b, c)
        return None

    def corrupted(self, a: int, b: int, c: int, delta) -> "LieAlgebraData":
        """Copy with f^c_ab shifted by delta (antisymmetry kept); test hook."""
        f = {k: dict(v) for k, v in self.f.items()}
        f.setdefault((a, b), {})[c] = f.get((a, b), {}).get(c, 0) + delta
        f.setdefault((b, a), {})[c] = f.get((b, a), {}).get(c, 0) - delta
        return LieAlgebraData(self.basis, f)


def sl2_lie() -> LieAlgebraData:
    """Abstract sl2 with basis e, h, f: [h,e]=2e, [h,f]=-2f, [e,f]=h."""
    e, h, f = (LieBasis(n, i, None, f"theta_{n}") for i, n in enumerate("ehf"))
    return LieAlgebraData([e, h, f], {
        (1, 0): {0: 2}, (0, 1): {0: -2},
        (1, 2): {2: -2}, (2, 1): {2: 2},
        (0, 2): {1: 1}, (2, 0): {1: -1},
    })


class HopfAlgebra:
    """O(G) for G a torus of rank k or SL2, with its Lie algebra.

    Prototype generators have ``loc`` and ``slot`` None; placed copies are
    produced with ``place_gen``.  Every table is stated on prototypes.
    """

    def __init__(self, kind: str, rank: int = 1):
        self.kind = kind
        if kind == "torus":
            if rank < 1:
                raise HopfError("torus rank must be positive")
            self.rank = rank
            names = ["x"] if rank == 1 else [f"x{i + 1}" for i in range(rank)]
            blabels = ["t"] if rank == 1 else [f"t{i + 1}" for i in range(rank)]
            glabels = ["theta"] if rank == 1 else [f"theta{i + 1}" for i in range(rank)]
            self.gens = tuple(Gen("coord", n, index=i, inv=True) for i, n in enumerate(names))
            self.basis = [LieBasis(b, i, None, gl) for i, (b, gl) in enumerate(zip(blabels, glabels))]
            self._tables = [{g: Fraction(int(i == j)) for j, g in enumerate(self.gens)}
                            for i in range(rank)]
        elif kind == "sl2":
            self.rank = 3
            self.gens = tuple(Gen("coord", r, index=i, sl2=r) for i, r in enumerate("abcd"))
            a, b, c, d = self.gens
            self.basis = [LieBasis(n, i, None, f"theta_{n}") for i, n in enumerate("ehf")]
            zero = {g: Fraction(0) for g in self.gens}
            self._tables = [
                {**zero, c: Fraction(1)},
                {**zero, a: Fraction(-1), d: Fraction(1)},
                {**zero, b: Fraction(1)},
            ]
        else:
            raise HopfError(f"unknown group kind {kind!r}")
        self.alg = Algebra(self.gens, f"O({self.name})")
        self.dim = len(self.basis)
        self._lie = None
        self._actions: dict = {}

    @property
    def name(self) -> str:
        return "SL2" if self.kind == "sl2" else f"Gm^{self.rank}"

    def __repr__(self) -> str:
        return f"HopfAlgebra({self.name})"

    def spec(self) -> dict:
        return {"type": "sl2"} if self.kind == "sl2" else {"type": "torus", "rank": self.rank}

    @staticmethod
    def proto(g: Gen) -> Gen:
        return place_gen(g, None, None, False)

    def owns(self, g: Gen) -> bool:
        return g.kind == "coord" and self.proto(g) in self.alg.genset

    # generator tables

    def counit_gen(self, g: Gen) -> Fraction:
        if self.kind == "torus":
            return Fraction(1)
        return Fraction(1) if g.sl2 in ("a", "d") else Fraction(0)

    def coproduct_gen(self, g: Gen, slots: Sequence, locs: Optional[Sequence] = None) -> list:
        """Iterated coproduct of one placed generator into len(slots) legs.

        Returns (coefficient, [(leg generator, exponent) per leg]).  The SL2
        matrix rule is iterated along index paths.
        """
        n = len(slots)
        locs = locs if locs is not None else [g.loc] * n
        if self.kind == "torus":
            return [(1, [(place_gen(g, locs[k], slots[k]), 1) for k in range(n)])]
        i, j = divmod("abcd".index(g.sl2), 2)
        out = []
        for path in iproduct(range(2), repeat=n - 1):
            idx = (i,) + path + (j,)
            legs = []
            for k in range(n):
                role = "abcd"[2 * idx[k] + idx[k + 1]]
                legs.append((Gen("coord", role, locs[k], slots[k], g.hat, "abcd".index(role), False, role), 1))
            out.append((1, legs))
        return out

    def antipode_gen(self, g: Gen) -> list:
        """S(g) as a list of (coefficient, factors) with g's placement."""
        if self.kind == "torus":
            return [(1, [(g, -1)])]
        role = {"a": "d", "b": "b", "c": "c", "d": "a"}[g.sl2]
        sign = -1 if g.sl2 in ("b", "c") else 1
        return [(sign, [(g.sl2_partner(role), 1)])]

    def table(self, a: int) -> dict:
        return self._tables[a]

    # extensions to elements

    def counit(self, x: Element) -> Fraction:
        tot = Fraction(0)
        for (m, p), c in x.terms.items():
            if p:
                raise HopfError("counit of an hbar-dependent element")
            tot += c * self.counit_mono(m)
        return tot

    def counit_mono(self, m: tuple) -> Fraction:
        v = Fraction(1)
        for g, e in m:
            eg = self.counit_gen(g)
            if e < 0:
                if not eg:
                    raise HopfError("counit of an inverse of a non-unit")
                v *= eg ** e
            else:
                v *= eg ** e
        return v

    def counit_apply(self, x: Element, slot, alg: Optional[Algebra] = None) -> Element:
        """(epsilon on the leg at ``slot``) (x) id."""
        terms: dict = {}
        for (m, p), c in x.terms.items():
            leg = tuple((g, e) for g, e in m if g.slot == slot)
            v = self.counit_mono(leg)
            if v:
                _acc(terms, (tuple((g, e) for g, e in m if g.slot != slot), p), c * v)
        return Element(alg or x.alg, terms)

    def coproduct(self, x: Element, slots: Sequence, alg: Optional[Algebra] = None,
                  locs: Optional[Sequence] = None) -> Element:
        """Iterated coproduct of x with legs at the given slots."""
        alg = alg or self.tensor_algebra(slots, {g.loc for g in x.gens_used()})
        res_terms: dict = {}
        for (m, p), c in x.terms.items():
            acc = Element.scalar(alg, 1)
            for g, e in m:
                img = self._coproduct_gen_elem(g, tuple(slots), alg, locs)
                if e < 0:
                    img = img.inverse()
                    e = -e
                acc = acc * (img ** e if e != 1 else img)
            for k, v in acc.terms.items():
                _acc(res_terms, (k[0], k[1] + p), v * c)
        return Element(alg, res_terms)

    def _coproduct_gen_elem(self, g: Gen, slots: tuple, alg: Algebra, locs) -> Element:
        terms: dict = {}
        for c, legs in self.coproduct_gen(g, slots, locs):
            for c2, m in _sorted(legs):
                _acc(terms, (m, 0), Fraction(c * c2))
        return Element(alg, terms)

    def antipode(self, x: Element) -> Element:
        terms: dict = {}
        for (m, p), c in x.terms.items():
            acc = Element.scalar(x.alg, 1)
            for g, e in m:
                img_terms: dict = {}
                for c1, fs in self.antipode_gen(g):
                    for c2, mm in _sorted(fs):
                        _acc(img_terms, (mm, 0), Fraction(c1 * c2))
                img = Element(x.alg, img_terms)
                if e < 0:
                    img = img.inverse()
                    e = -e
                acc = acc * (img ** e if e != 1 else img)
            for k, v in acc.terms.items():
                _acc(terms, (k[0], k[1] + p), v * c)
        return Element(x.alg, terms)

    def tensor_algebra(self, slots: Iterable, locs: Iterable = (None,), extra: Iterable[Gen] = ()) -> Algebra:
        gens = [place_gen(g, loc, s) for s in slots for loc in locs for g in self.gens]
        return Algebra(list(gens) + list(extra))

    # counit-derivations

    def evaluate_derivation(self, table: dict, m: tuple, loc=..., slot=...) -> Fraction:
        """t(m) for a counit-derivation given on prototypes; only generators
        matching loc/slot (when given) are differentiated, others take counits."""
        tot = Fraction(0)
        for idx, (g, e) in enumerate(m):
            if (loc is not ... and g.loc != loc) or (slot is not ... and g.slot != slot):
                continue
            tg = table.get(self.proto(g), 0)
            if not tg:
                continue
            term = e * tg * self.counit_gen(g) ** (e - 1)
            for jdx, (h, f) in enumerate(m):
                if jdx != idx:
                    term *= self.counit_gen(h) ** f
            tot += term
        return tot

    def derivation_value(self, table: dict, x: Element) -> Fraction:
        tot = Fraction(0)
        for (m, p), c in x.terms.items():
            tot += c * self.evaluate_derivation(table, m)
        return tot

    def lie_bracket(self, s: dict, t: dict) -> dict:
        """Convolution commutator s*t - t*s, returned as a table on prototypes."""
        out = {}
        for g in self.gens:
            val = Fraction(0)
            for c, legs in self.coproduct_gen(g, (SCRATCH[0], SCRATCH[1]), [None, None]):
                p1, p2 = self.proto(legs[0][0]), self.proto(legs[1][0])
                val += c * (s.get(p1, 0) * t.get(p2, 0) - t.get(p1, 0) * s.get(p2, 0))
            out[g] = val
        return out

    def lift(self, a: int, loc=None, slot=None, alg: Optional[Algebra] = None) -> Element:
        """Representative of theta^a in the augmentation ideal H^+."""
        gens = [place_gen(g, loc, slot) for g in self.gens]
        alg = alg or Algebra(gens)
        if self.kind == "torus":
            return Element.gen(alg, gens[a]) - 1
        a_, b_, c_, d_ = (Element.gen(alg, g) for g in gens)
        label = self.basis[a].label
        if label == "e":
            return c_
        if label == "f":
            return b_
        return (d_ - a_).scale(Fraction(1, 2))

    def decompose(self, table: dict) -> dict:
        """Coordinates of a counit-derivation in the basis, via the dual lifts."""
        out = {}
        for a in range(self.dim):
            v = self.derivation_value(table, self.lift(a))
            if v:
                out[a] = v
        # reconstruct to make sure the table lies in the span
        for g in self.gens:
            rec = sum((c * self._tables[a][g] for a, c in out.items()), Fraction(0))
            if rec != table.get(g, 0):
                raise HopfError("table is not a counit-derivation of this Hopf algebra")
        return out

    def lie(self) -> LieAlgebraData:
        if self._lie is None:
            f = {}
            for a in range(self.dim):
                for b in range(self.dim):
                    br = self.lie_bracket(self._tables[a], self._tables[b])
                    dec = self.decompose(br)
                    if dec:
                        f[(a, b)] = dec
            self._lie = LieAlgebraData(self.basis, f)
        return self._lie

    # induced actions on H

    def rho_L(self, table: dict, x: Element) -> Element:
        """h_(1) t(h_(2)); a derivation, result keeps x's placement."""
        return self._action(table, True)(x)

    def rho_R(self, table: dict, x: Element) -> Element:
        """t(S(h_(1))) h_(2)."""
        return self._action(table, False)(x)

    def _action(self, table: dict, left: bool) -> LazyDerivation:
        key = (tuple(sorted((g.key, v) for g, v in table.items())), left)
        got = self._actions.get(key)
        if got is None:
            got = LazyDerivation(lambda g: self.action_gen(table, g, left), (0, 0), None,
                                 "rhoL" if left else "rhoR")
            self._actions[key] = got
        return got

    def action_gen(self, table: dict, g: Gen, left: bool) -> Element:
        """rho^L(t)(g) or rho^R(t)(g) for one placed generator."""
        alg = Algebra([place_gen(h, g.loc, g.slot, g.hat) for h in self.gens])
        terms: dict = {}
        for c, legs in self.coproduct_gen(g, (g.slot, g.slot)):
            (g1, _), (g2, _) = legs
            if left:
                val = table.get(self.proto(g2), 0)
                kept = g1
            else:
                s_elem = self.antipode(Element.gen(alg, g1))
                val = sum((sc * self.evaluate_derivation(table, sm) for (sm, _), sc in s_elem.terms.items()),
                          Fraction(0))
                kept = g2
            if val:
                _acc(terms, (((kept, 1),), 0), c * val)
        return Element(alg, terms)

    # coactions on the Lie algebra and its dual

    @lru_cache(maxsize=None)
    def coadjoint_matrix(self, loc=None, slot: int = COACT) -> dict:
        """M with rho(theta^a) = sum_b theta^b (x) M[b, a], entries placed at (loc, slot)."""
        s1, s2, s3 = SCRATCH[0], SCRATCH[1], SCRATCH[2]
        alg3 = self.tensor_algebra((s1, s2, s3))
        out_alg = Algebra([place_gen(g, loc, slot) for g in self.gens])
        M = {}
        for a in range(self.dim):
            d2 = self.coproduct(self.lift(a), (s1, s2, s3), alg3)
            acc = {b: {} for b in range(self.dim)}
            for (m, p), c in d2.terms.items():
                leg = {s: tuple((g, e) for g, e in m if g.slot == s) for s in (s1, s2, s3)}
                mid = leg[s2]
                proj = {b: self.evaluate_derivation(self._tables[b], mid) for b in range(self.dim)}
                if not any(proj.values()):
                    continue
                left = Element.from_factors(out_alg, [(place_gen(g, loc, slot), e) for g, e in leg[s1]])
                right = Element.from_factors(out_alg, [(place_gen(g, loc, slot), e) for g, e in leg[s3]])
                coef = self.antipode(left) * right
                for b, v in proj.items():
                    if v:
                        for k, cv in coef.terms.items():
                            _acc(acc[b], k, cv * v * c)
            for b in range(self.dim):
                M[(b, a)] = Element(out_alg, acc[b])
        return M

    @lru_cache(maxsize=None)
    def adjoint_matrix(self, loc=None, slot: int = COACT) -> dict:
        """N with rho(t_c) = sum_b t_b (x) N[b, c]; N[b, c] = S(M[c, b])."""
        M = self.coadjoint_matrix(loc, slot)
        return {(b, c): self.antipode(M[(c, b)]) for b in range(self.dim) for c in range(self.dim)}

    def adjoint_coaction(self, a: int, loc=None, slot: int = COACT) -> dict:
        """rho_g(t_a) as {b: coefficient in H}."""
        N = self.adjoint_matrix(loc, slot)
        return {b: N[(b, a)] for b in range(self.dim) if N[(b, a)]}

    def coadjoint_coaction(self, a: int, loc=None, slot: int = COACT) -> dict:
        M = self.coadjoint_matrix(loc, slot)
        return {b: M[(b, a)] for b in range(self.dim) if M[(b, a)]}


def comultiply_iterated(H: HopfAlgebra, h: Element, n: int) -> "SweedlerTensor":
    if n < 1:
        raise HopfError("iterated coproduct needs n >= 1")
    slots = tuple(range(1, n + 2))
    return SweedlerTensor(H, H.coproduct(h, slots), slots)


class SweedlerTensor:
    """Element of H^{(x)k} stored as slot-tagged monomials."""

    def __init__(self, H: HopfAlgebra, elem: Element, slots: Sequence[int]):
        self.H = H
        self.elem = elem
        self.slots = tuple(slots)

    def legs(self) -> dict:
        """{(prototype monomial per leg): coefficient}."""
        out: dict = {}
        for (m, p), c in self.elem.terms.items():
            key = tuple(tuple((HopfAlgebra.proto(g), e) for g, e in m if g.slot == s) for s in self.slots)
            out[key] = out.get(key, 0) + c
        return {k: v for k, v in out.items() if v}

    def __eq__(self, other) -> bool:
        return isinstance(other, SweedlerTensor) and self.legs() == other.legs()

    def __repr__(self) -> str:
        from .algebra import mono_str
        parts = []
        for k, v in sorted(self.legs().items(), key=repr):
            parts.append(f"{v}*" + " (x) ".join(mono_str(m) for m in k))
        return " + ".join(parts) if parts else "0"


def group_from_spec(spec) -> HopfAlgebra:
    """Accepts {"type": "torus", "rank": k}, {"type": "sl2"}, or 'torus:k' / 'sl2'."""
    if isinstance(spec, HopfAlgebra):
        return spec
    if isinstance(spec, str):
        if spec == "sl2":
            return HopfAlgebra("sl2")
        if spec.startswith("torus"):
            _, _, k = spec.partition(":")
            return HopfAlgebra("torus", int(k or 1))
        raise HopfError(f"unknown group spec {spec!r}")
    kind = spec.get("type")
    if kind == "sl2":
        return HopfAlgebra("sl2")
    if kind == "torus":
        return HopfAlgebra("torus", int(spec.get("rank", 1)))
    raise HopfError(f"unknown group spec {spec!r}")


class GroupCopies:
    """G^L for a list of locations L (a single copy when L = [None]).

    The Lie algebra is the direct sum of copies of g; basis entry i is the
    pair (H.basis[a], loc).  Counit-derivations of a copy only see the
    generators placed at that copy's location.
    """

    def __init__(self, H: HopfAlgebra, locs: Sequence = (None,)):
        self.H = H
        self.locs = list(locs)
        self.entries = [(a, loc) for loc in self.locs for a in range(H.dim)]
        self.basis = [LieBasis(H.basis[a].label, a, loc, H.basis[a].ghost_label) for a, loc in self.entries]
        base = H.lie()
        f = {}
        for i, (a, la) in enumerate(self.entries):
            for j, (b, lb) in enumerate(self.entries):
                if la != lb:
                    continue
                row = {}
                for c, v in base.const(a, b).items():
                    row[self.entries.index((c, la))] = v
                if row:
                    f[(i, j)] = row
        self.lie = LieAlgebraData(self.basis, f)
        self._actions: dict = {}

    def __repr__(self) -> str:
        return f"GroupCopies({self.H.name}, {len(self.locs)})"

    @property
    def dim(self) -> int:
        return len(self.entries)

    def gens(self, slot=None, hat: bool = False) -> list:
        return [place_gen(g, loc, slot, hat) for loc in self.locs for g in self.H.gens]

    def owns(self, g: Gen) -> bool:
        return self.H.owns(g) and g.loc in self.locs

    def index(self, a: int, loc=None) -> int:
        return self.entries.index((a, loc))

    def t_eval(self, i: int, m: tuple) -> Fraction:
        """Counit-derivation of entry i on a monomial of placed H generators."""
        a, loc = self.entries[i]
        return self.H.evaluate_derivation(self.H.table(a), m, loc=loc)

    def counit_mono(self, m: tuple) -> Fraction:
        return self.H.counit_mono(m)

    def contract(self, x: Element, slot: int, functional: Callable[[tuple], Fraction],
                 alg: Optional[Algebra] = None) -> Element:
        """Apply a functional to the H-leg at ``slot`` (coordinate generators there)."""
        terms: dict = {}
        for (m, p), c in x.terms.items():
            leg = tuple((g, e) for g, e in m if g.slot == slot and g.kind == "coord")
            if not leg and slot is not None:
                rest = m
            else:
                rest = tuple((g, e) for g, e in m if not (g.slot == slot and g.kind == "coord"))
            v = functional(leg)
            if v:
                _acc(terms, (rest, p), c * v)
        return Element(alg or x.alg, terms)

    def action(self, i: int, left: bool) -> LazyDerivation:
        """rho^L(t_i) or rho^R(t_i) acting on every placed H generator of copy i."""
        key = (i, left)
        got = self._actions.get(key)
        if got is None:
            a, loc = self.entries[i]
            table = self.H.table(a)
            H = self.H

            def fn(g: Gen, table=table, loc=loc, left=left) -> Element:
                if g.kind != "coord" or g.loc != loc or not H.owns(g):
                    return Element(None, {})
                return H.action_gen(table, g, left)
            got = LazyDerivation(fn, (0, 0), None, ("rhoL" if left else "rhoR") + f"[{i}]")
            self._actions[key] = got
        return got

    def coproduct(self, x: Element, slots: Sequence, alg: Optional[Algebra] = None) -> Element:
        if alg is None:
            alg = Algebra([place_gen(g, loc, s) for g in self.H.gens for loc in self.locs for s in slots])
        return self.H.coproduct(x, slots, alg)

    def antipode(self, x: Element) -> Element:
        return self.H.antipode(x)

    def adjoint_matrix(self, i: int, j: int, slot: int = COACT) -> Element:
        """N[i, j] for the block-diagonal adjoint coaction (zero across copies)."""
        a, la = self.entries[i]
        b, lb = self.entries[j]
        if la != lb:
            return Element(None, {})
        return self.H.adjoint_matrix(la, slot)[(a, b)]

    def coadjoint_matrix(self, i: int, j: int, slot: int = COACT) -> Element:
        a, la = self.entries[i]
        b, lb = self.entries[j]
        if la != lb:
            return Element(None, {})
        return self.H.coadjoint_matrix(la, slot)[(a, b)]

    def lift(self, i: int, slot=None, alg: Optional[Algebra] = None) -> Element:
        a, loc = self.entries[i]
        return self.H.lift(a, loc, slot, alg)


# verification of the Hopf axioms


def _substitute(x: Element, alg: Algebra, image: Callable[[Gen], Optional[Element]]) -> Element:
    """Algebra map sending g to image(g) (or g itself when image returns None)."""
    out = Element(alg, {})
    for (m, p), c in x.terms.items():
        acc = Element.scalar(alg, c).scale(1, p)
        for g, e in m:
            img = image(g)
            if img is None:
                img = Element.from_factors(alg, [(g, 1)])
            if e < 0:
                img, e = img.inverse(), -e
            acc = acc * img ** e
        out = out + acc
    return out


def random_product(H: HopfAlgebra, rng, length: int = 3) -> Element:
    """A product of up to ``length`` generators (inverses allowed for Laurent generators)."""
    factors = []
    for _ in range(rng.randint(1, length)):
        g = rng.choice(H.gens)
        factors.append((g, -1 if g.inv and rng.random() < 0.3 else 1))
    return Element.from_factors(H.alg, factors)


def verify_hopf(H: HopfAlgebra, rng, count: int = 50, length: int = 3) -> list:
    """Coassociativity, counit and antipode laws on generators and random products.

    Returns (law, witness or None) pairs; the witness is the first failing element.
    """
    s1, s2, s3 = SCRATCH[0], SCRATCH[1], SCRATCH[2]
    one = H.alg
    two = H.tensor_algebra((s1, s2))
    three = H.tensor_algebra((s1, s2, s3))
    samples = [Element.gen(one, g) for g in H.gens] + [random_product(H, rng, length) for _ in range(count)]

    def at(g: Gen, slot) -> Gen:
        return place_gen(g, None, slot)

    def split(slot_from, slots_to):
        def image(g: Gen):
            if g.slot != slot_from:
                return None
            return H.coproduct(Element.gen(H.alg, H.proto(g)), slots_to, three)
        return image

    def to_slot(x: Element, slot, alg: Algebra) -> Element:
        return _substitute(x, alg, lambda g: Element.gen(alg, at(g, slot)))

    laws = {"coassociativity": None, "counit": None, "antipode": None, "S^2 = id": None}
    for x in samples:
        if laws["coassociativity"] is None:
            d13 = H.coproduct(x, (s1, s3), three)
            left = _substitute(d13, three, split(s1, (s1, s2)))
            right = _substitute(d13, three, split(s3, (s2, s3)))
            direct = H.coproduct(x, (s1, s2, s3), three)
            if not (left == right == direct):
                laws["coassociativity"] = x
        d = H.coproduct(x, (s1, s2), two)
        if laws["counit"] is None:
            lhs = to_slot(x, s2, two)
            eps1 = Element(two, H.counit_apply(d, s1).terms)
            eps2 = H.counit_apply(d, s2)
            if eps1 != lhs or to_slot(eps2, None, one) != x:
                laws["counit"] = x
        if laws["antipode"] is None:
            eps = Element.scalar(one, H.counit(x))
            for leg in (s1, s2):
                merged = Element(one, {})
                for (m, p), c in d.terms.items():
                    acc = Element.scalar(one, c).scale(1, p)
                    for g, e in m:
                        y = Element.from_factors(one, [(H.proto(g), e)])
                        acc = acc * (H.antipode(y) if g.slot == leg else y)
                    merged = merged + acc
                if merged != eps:
                    laws["antipode"] = x
        if laws["S^2 = id"] is None and H.antipode(H.antipode(x)) != x:
            laws["S^2 = id"] = x
    return list(laws.items())


def verify_actions(H: HopfAlgebra) -> list:
    """Lie-homomorphism property of rho^L and rho^R and their commutation, on generators."""
    out = []
    lie = H.lie()
    gens = [Element.gen(H.alg, g) for g in H.gens]
    tables = [H.table(a) for a in range(H.dim)]

    def br_table(a: int, b: int) -> dict:
        t = {g: Fraction(0) for g in H.gens}
        for c, v in lie.const(a, b).items():
            for g in H.gens:
                t[g] += v * tables[c].get(g, 0)
        return t

    for name, act in (("rho_L", H.rho_L), ("rho_R", H.rho_R)):
        bad = None
        for a in range(H.dim):
            for b in range(H.dim):
                for x in gens:
                    lhs = act(tables[a], act(tables[b], x)) - act(tables[b], act(tables[a], x))
                    if lhs != act(br_table(a, b), x):
                        bad = bad or (a, b, x)
        out.append((f"{name} is a Lie homomorphism", bad))
    bad = None
    for a in range(H.dim):
        for b in range(H.dim):
            for x in gens:
                if H.rho_L(tables[a], H.rho_R(tables[b], x)) != H.rho_R(tables[b], H.rho_L(tables[a], x)):
                    bad = bad or (a, b, x)
    out.append(("[rho_L, rho_R] = 0", bad))
    return out
