"""Quantization by differential operators.

The level-n algebra is generated by hatted copies of the classical
generators subject to x^y^ - (-1)^{|x||y|} y^x^ = hbar {x,y}^.  Words are
brought to normal order (the generator key order: ghosts, functions,
momenta, antighosts) by rewriting, so normal forms are ordinary sorted
monomials and reuse ``Element``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product as iproduct
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .algebra import (Algebra, AlgebraError, Derivation, Element, Gen, GradedMap, _acc,
                      _normalize_relations, mono_mul, mono_odd)
from .ce import codegeneracy, coface
from .homology import FreeComplex, HomologyGroup, homology, specialize
from .hopf import COACT, GroupCopies, HopfAlgebra, place_gen
from .poisson import AffineGSpace, PoissonBracket, ReducedCDGA, moment_map
from .scalars import Scalar

STRATEGIES = ("left", "right")


def hat_gen(g: Gen) -> Gen:
    return g.with_hat(True)


def unhat_gen(g: Gen) -> Gen:
    return g.with_hat(False)


class QAlgebra(Algebra):
    """Free-associative ambient algebra; products go through ``rewriter``."""

    mode = "nc"

    def __init__(self, gens: Iterable[Gen], rewriter: "QuantizedAlgebra", name: str = ""):
        super().__init__(gens, name)
        self.rewriter = rewriter


class QuantizedAlgebra:
    """The noncommutative dg-algebra quantizing level n of the resolution."""

    def __init__(self, P: PoissonBracket, name: str = ""):
        self.P = P
        self.n = P.n
        self.level = P.level
        self.classical = P.alg
        self.alg = QAlgebra([hat_gen(g) for g in self.classical.gens], self, name or f"A_hbar^{self.n}")
        self.rel: dict = {}
        for (x, y), val in P.table.items():
            self.rel[(hat_gen(x), hat_gen(y))] = self.hat(val)
        self._nf: dict = {}
        self._dtab: dict = {}
        self._ext: dict = {}

    def __repr__(self) -> str:
        return f"QuantizedAlgebra(level {self.n}, {len(self.alg.gens)} generators)"

    # hats

    def hat(self, x: Element, alg: Optional[Algebra] = None) -> Element:
        """Normal-order lift: the sorted classical monomial read as a word."""
        terms: dict = {}
        for (m, p), c in x.terms.items():
            _acc(terms, (tuple((hat_gen(g) if _quantized(g) else g, e) for g, e in m), p), c)
        return Element(alg or self._ambient(x), terms)

    def _ambient(self, x: Element) -> Algebra:
        extra = [g for g in x.gens_used() if not _quantized(g)]
        return self.extended(extra) if extra else self.alg

    def extended(self, extra: Iterable[Gen]) -> QAlgebra:
        """Same rewriting with further commuting generators (e.g. coaction legs)."""
        extra = frozenset(extra) - self.alg.genset
        if not extra:
            return self.alg
        got = self._ext.get(extra)
        if got is None:
            got = QAlgebra(list(self.alg.gens) + sorted(extra, key=lambda g: g.key), self)
            self._ext[extra] = got
        return got

    def classical_limit(self, x: Element, alg: Optional[Algebra] = None) -> Element:
        """Drop hbar-positive terms and strip hats."""
        terms: dict = {}
        for (m, p), c in x.terms.items():
            if p:
                continue
            _acc(terms, (tuple((unhat_gen(g), e) for g, e in m), 0), c)
        return Element(alg or self.classical, terms)

    def gen(self, g: Gen) -> Element:
        return Element.gen(self.alg, g if g.hat else hat_gen(g))

    # rewriting

    def word_nf(self, word: tuple, strategy: str = "left") -> dict:
        """Normal form of a word of (generator, exponent) factors as {(mono, hbar power): c}."""
        key = (word, strategy)
        got = self._nf.get(key)
        if got is not None:
            return got
        res = self._word_nf(word, strategy)
        if len(self._nf) > 500_000:
            self._nf.clear()
        self._nf[key] = res
        return res

    def _word_nf(self, word: tuple, strategy: str) -> dict:
        w = []
        for g, e in word:
            if e == 0:
                continue
            if w and w[-1][0] is g:
                if g.odd:
                    return {}
                e2 = w[-1][1] + e
                w.pop()
                if e2:
                    w.append((g, e2))
            else:
                if g.odd and e != 1:
                    return {}
                w.append((g, e))
        w = tuple(w)
        inv = [i for i in range(len(w) - 1) if w[i][0].key > w[i + 1][0].key]
        if not inv:
            out: dict = {}
            for c, m in _normalize_relations(w, 1):
                _acc(out, (m, 0), Fraction(c))
            return out
        i = inv[0] if strategy == "left" else inv[-1]
        (x, e), (y, f) = w[i], w[i + 1]
        br = self.rel.get((x, y))
        if br is None:
            sign = -1 if (x.odd and y.odd) else 1
            return self._scaled(w[:i] + ((y, f), (x, e)) + w[i + 2:], strategy, sign, 0)
        left = w[:i] + (((x, e - 1),) if e != 1 else ())
        right = w[i + 2:]
        if f != 1 and y.kind != "coord":
            right = ((y, f - 1),) + right
            f = 1
        sign = -1 if (x.odd and y.odd) else 1
        out = dict(self._scaled(left + ((y, f), (x, 1)) + right, strategy, sign, 0))
        if f == 1:
            corr = br
        else:
            # {x, y^f} = f y^(f-1) {x, y} for a coordinate y
            ypow = Element.from_factors(br.alg, [(y, f - 1)], f)
            corr = _cmul(ypow, br)
        for (cm, cp), cc in corr.terms.items():
            for k, v in self.word_nf(left + cm + right, strategy).items():
                _acc(out, (k[0], k[1] + cp + 1), cc * v)
        return out

    def _scaled(self, word: tuple, strategy: str, c, hp: int) -> dict:
        res = self.word_nf(word, strategy)
        if c == 1 and hp == 0:
            return res
        return {(m, p + hp): v * c for (m, p), v in res.items()}

    def nf(self, x: Element, strategy: str = "left") -> Element:
        """Normal form of an element whose monomials are read as (possibly unsorted) words."""
        terms: dict = {}
        for (m, p), c in x.terms.items():
            for (m2, p2), c2 in self.word_nf(m, strategy).items():
                _acc(terms, (m2, p + p2), c * c2)
        return Element(x.alg, terms)

    def mul(self, x: Element, y: Element) -> Element:
        alg = x.alg if y.alg is None or (x.alg is not None and y.alg.genset <= x.alg.genset) else y.alg
        if x.alg is not None and not x.alg.genset <= alg.genset:
            alg = self.extended(set(x.alg.genset) | set(y.alg.genset))
        terms: dict = {}
        for (m1, p1), c1 in x.terms.items():
            for (m2, p2), c2 in y.terms.items():
                for (m, p), c in self.word_nf(m1 + m2).items():
                    _acc(terms, (m, p + p1 + p2), c * c1 * c2)
        return Element(alg, terms)

    def word(self, factors: Sequence, alg: Optional[Algebra] = None) -> Element:
        """Normal form of the product of the given (generator, exponent) factors."""
        terms: dict = {}
        for (m, p), c in self.word_nf(tuple(factors)).items():
            _acc(terms, (m, p), c)
        return Element(alg or self.extended({g for g, _ in factors if not _quantized(g)}), terms)

    # the quantized differential

    def d_gen(self, g: Gen) -> Element:
        got = self._dtab.get(g)
        if got is None:
            got = self.hat(self.level.total.on_gen(unhat_gen(g)), self.alg)
            self._dtab[g] = got
        return got

    def d(self, x: Element) -> Element:
        """Graded Leibniz extension of the generator table d(g^) = (d g)^ to normal words."""
        terms: dict = {}
        for (m, p), c in x.terms.items():
            for (m2, p2), c2 in self._d_word(m).items():
                _acc(terms, (m2, p + p2), c * c2)
        return Element(x.alg, terms)

    def _d_word(self, m: tuple) -> dict:
        key = ("d", m)
        got = self._nf.get(key)
        if got is not None:
            return got
        letters = []
        for g, e in m:
            if g.kind == "coord" or not _quantized(g):
                letters.append((g, e))
            else:
                letters.extend([(g, 1)] * e)
        out: dict = {}
        odd_before = 0
        for idx, (g, e) in enumerate(letters):
            if _quantized(g):
                dg = self.d_gen(g)
                if dg.terms:
                    sign = -1 if odd_before % 2 else 1
                    left = letters[:idx] + ([(g, e - 1)] if e != 1 else [])
                    right = letters[idx + 1:]
                    for (dm, dp), dc in dg.terms.items():
                        for (k, kp), v in self.word_nf(tuple(left) + dm + tuple(right)).items():
                            _acc(out, (k, kp + dp), sign * e * dc * v)
            if g.odd:
                odd_before += 1
        self._nf[key] = out
        return out


def _quantized(g: Gen) -> bool:
    return g.hat or not (g.kind == "coord" and g.slot == COACT)


def _cmul(x: Element, y: Element) -> Element:
    """Commutative product of two elements whose generators all commute."""
    from .algebra import mono_mul
    terms: dict = {}
    for (m1, p1), c1 in x.terms.items():
        for (m2, p2), c2 in y.terms.items():
            for c, m in mono_mul(m1, m2):
                _acc(terms, (m, p1 + p2), c * c1 * c2)
    return Element(y.alg, terms)


def nc_normal_form(x: Element, strategy: str = "left") -> Element:
    return x.alg.rewriter.nf(x, strategy)


def random_word(Q: QuantizedAlgebra, rng: random.Random, length: int = 6) -> tuple:
    gens = list(Q.alg.gens)
    if not gens:
        return ()
    return tuple((rng.choice(gens), 1) for _ in range(rng.randint(1, length)))


def check_confluence(Q: QuantizedAlgebra, rng: random.Random, count: int = 100, length: int = 6) -> Optional[tuple]:
    for _ in range(count):
        w = random_word(Q, rng, length)
        if Q.word_nf(w, "left") != Q.word_nf(w, "right"):
            return w
    return None


def check_square_zero_q(Q: QuantizedAlgebra) -> Optional[Gen]:
    for g in Q.alg.gens:
        if Q.d(Q.d_gen(g)):
            return g
    return None


def check_d_respects_relations(Q: QuantizedAlgebra) -> Optional[tuple]:
    """d applied to the word x^y^ letter by letter equals d of its normal form."""
    for x in Q.alg.gens:
        for y in Q.alg.gens:
            raw = Element(Q.alg, {(((x, 1), (y, 1)), 0): Fraction(1)})
            # Leibniz on the raw word, then normal order
            lhs = Q.mul(Q.d_gen(x), Q.gen(y)) + Q.mul(Q.gen(x), Q.d_gen(y)).scale(-1 if x.odd else 1)
            rhs = Q.d(Q.nf(raw))
            if lhs != rhs:
                return (x, y)
    return None


def check_correspondence(Q: QuantizedAlgebra) -> Optional[tuple]:
    """classical_limit([x^, y^]/hbar) = {x, y} on generator pairs."""
    P = Q.P
    for x in Q.alg.gens:
        for y in Q.alg.gens:
            sign = -1 if (x.odd and y.odd) else 1
            comm = Q.mul(Q.gen(x), Q.gen(y)) - Q.mul(Q.gen(y), Q.gen(x)).scale(sign)
            if comm.hbar_part(0):
                return (x, y)
            lim = Q.classical_limit(Element(comm.alg, {(m, p - 1): c for (m, p), c in comm.terms.items()}))
            if lim != P(P.gen(unhat_gen(x)), P.gen(unhat_gen(y))):
                return (x, y)
    return None


# operator realization: the oracle for relations and for d_hbar = [d, -]


class OperatorRealization:
    """Hatted generators as operators on functions of ghosts, coordinates and h's.

    Functions act by multiplication; a momentum or antighost x acts by
    f -> hbar {x, f}.  The classical total differential acts on the same space.
    """

    def __init__(self, Q: QuantizedAlgebra):
        self.Q = Q
        self.P = Q.P
        self.alg = Q.classical
        self.fgens = [g for g in self.alg.gens if g.kind in ("ghost", "coord")]
        self._memo: dict = {}
        self._unhat: dict = {}

    def letter(self, g: Gen, e: int, f: Element) -> Element:
        c = self._unhat.get(g)
        if c is None:
            c = self._unhat[g] = unhat_gen(g)
        if c.kind in ("ghost", "coord"):
            # multiplication operator, applied monomial by monomial
            lead = ((c, e),)
            out: dict = {}
            for (m, p), v in f.terms.items():
                for s, m2 in mono_mul(lead, m):
                    _acc(out, (m2, p), v if s == 1 else -v if s == -1 else v * s)
            return Element(self.alg, out)
        key = (c, e, frozenset(f.terms.items()))
        got = self._memo.get(key)
        if got is None:
            got = self._memo[key] = self._derivation_letter(c, e, f)
        return got

    def _derivation_letter(self, c: Gen, e: int, f: Element) -> Element:
        for _ in range(e):
            f = self.P(Element.gen(self.alg, c), f).scale(1, 1)
        return f

    def act(self, x: Element, f: Element) -> Element:
        out: dict = {}
        for (m, p), c in x.terms.items():
            val = f
            for g, e in reversed(m):
                val = self.letter(g, e, val)
                if not val:
                    break
            for (m2, p2), c2 in val.terms.items():
                _acc(out, (m2, p2 + p), c2 if c == 1 else c2 * c)
        return Element(self.alg, out)

    def commutator_d(self, x: Element, f: Element) -> Element:
        """[d, x](f) = d(x f) - (-1)^{|x|} x(d f)."""
        d = self.Q.level.total
        sign = -1 if x.parity() else 1
        return d(self.act(x, f)) - self.act(x, d(f)).scale(sign)

    def test_functions(self, rng: random.Random, count: int = 30) -> list:
        out = [Element.scalar(self.alg, 1)] + [Element.gen(self.alg, g) for g in self.fgens]
        for _ in range(count if self.fgens else 0):
            fac = [(rng.choice(self.fgens), 1) for _ in range(rng.randint(2, 3))]
            f = Element.from_factors(self.alg, fac)
            if f:
                out.append(f)
        return out


def check_relations_by_operators(Q: QuantizedAlgebra, rng: random.Random) -> Optional[tuple]:
    """Every rewrite x^y^ -> normal form agrees as an operator on test functions."""
    R = OperatorRealization(Q)
    fs = R.test_functions(rng)
    for x in Q.alg.gens:
        for y in Q.alg.gens:
            if x.key <= y.key:
                continue
            raw = Element(Q.alg, {(((x, 1), (y, 1)), 0): Fraction(1)})
            normal = Q.nf(raw)
            # products of multiplication operators are determined by their value on 1
            mult = all(unhat_gen(g).kind in ("ghost", "coord") for g in (x, y))
            for f in (fs[:1] if mult else fs):
                if R.act(raw, f) != R.act(normal, f):
                    return (x, y)
    return None


def check_d_by_commutator(Q: QuantizedAlgebra, rng: random.Random, count: int = 50, length: int = 4) -> Optional[Element]:
    """d_hbar from the table against [d, -] on random words and test functions."""
    R = OperatorRealization(Q)
    fs = R.test_functions(rng, 10)
    words = [Q.gen(g) for g in Q.alg.gens]
    for _ in range(count):
        words.append(Q.nf(Element(Q.alg, {(random_word(Q, rng, length), 0): Fraction(1)})))
    for w in words:
        if not w:
            continue
        dw = Q.d(w)
        for f in fs:
            if R.act(dw, f) != R.commutator_d(w, f):
                return w
    return None


# quantized cosimplicial maps


class QuantizedMap:
    """Algebra map of quantized levels given by the hatted classical table."""

    def __init__(self, phi: GradedMap, Qs: QuantizedAlgebra, Qt: QuantizedAlgebra):
        self.phi = phi
        self.Qs, self.Qt = Qs, Qt
        self.table = {hat_gen(g): Qt.hat(phi.on_gen(g), Qt.alg) for g in phi.source.gens}
        self.name = phi.name

    def on_gen(self, g: Gen) -> Element:
        return self.table[g]

    def __call__(self, x: Element) -> Element:
        out = Element(self.Qt.alg, {})
        for (m, p), c in x.terms.items():
            acc = Element.scalar(self.Qt.alg, 1)
            for g, e in m:
                img = self.table[g]
                if e < 0:
                    img = img.inverse()
                    e = -e
                for _ in range(e):
                    acc = self.Qt.mul(acc, img)
            out = out + acc.scale(c, p)
        return out


def quantized_coface(B: ReducedCDGA, i: int, n: int, Q: Mapping) -> QuantizedMap:
    return QuantizedMap(coface(B, i, n), Q[n - 1], Q[n])


def quantized_codegeneracy(B: ReducedCDGA, i: int, n: int, Q: Mapping) -> QuantizedMap:
    return QuantizedMap(codegeneracy(B, i, n), Q[n + 1], Q[n])


def check_quantized_map(F: QuantizedMap) -> dict:
    """Relations, d_hbar-compatibility and classical limit on generators; name -> witness."""
    Qs, Qt = F.Qs, F.Qt
    out = {"relations": None, "d_hbar": None, "classical limit": None}
    gens = Qs.alg.gens
    for x in gens:
        for y in gens:
            sign = -1 if (x.odd and y.odd) else 1
            lhs = Qt.mul(F.on_gen(x), F.on_gen(y)) - Qt.mul(F.on_gen(y), F.on_gen(x)).scale(sign)
            br = Qs.rel.get((x, y))
            rhs = F(br).scale(1, 1) if br is not None else Element(Qt.alg, {})
            if lhs != rhs:
                out["relations"] = (x, y)
                break
        if out["relations"]:
            break
    for x in gens:
        if F(Qs.d_gen(x)) != Qt.d(F.on_gen(x)):
            out["d_hbar"] = x
            break
    for x in gens:
        if Qt.classical_limit(F.on_gen(x)) != F.phi.on_gen(unhat_gen(x)):
            out["classical limit"] = x
            break
    return out


# per_hbar triples


def _z(alg=None) -> Element:
    return Element(alg, {})


def _addto(vec: dict, k, v: Element) -> None:
    if not v:
        return
    got = vec.get(k)
    s = v if got is None else got + v
    if s:
        vec[k] = s
    else:
        vec.pop(k, None)


class OutOfRange(KeyError):
    """An operator column that the truncation does not determine."""


@dataclass
class PerTriple:
    """Finite free module over A[hbar] with coaction, connection and antighost action.

    Matrices are stored by columns: ``d[k]`` maps basis indices i to the
    A[hbar]-coefficient of s_i in del(s_k); likewise ``nabla[v][k]`` and
    ``psi[t][k]``.  ``coaction[k][i]`` is the A (x) H coefficient of s_i in
    rho_V(s_k), H-legs at slot COACT.  For truncated modules ``filt`` gives
    each basis vector's filtration degree and ``bound`` the cut-off; columns
    that leave the truncation are absent.
    """

    space: AffineGSpace
    basis: list
    degrees: list
    d: dict
    nabla: dict
    psi: dict
    coaction: dict
    filt: Optional[list] = None
    bound: Optional[int] = None
    name: str = "V"
    criterion: str = "finite free over A[hbar]"
    # tensor structure, for objects built from pointing data: the factor
    # objects with their graph morphisms and the complement word per basis index
    parts: Optional[list] = None
    complement_words: Optional[list] = None

    def __post_init__(self):
        self.index = {b: i for i, b in enumerate(self.basis)}
        self.A = self.space.A
        G = self.space.group
        self.CA = Algebra(list(self.A.gens) + (G.gens(COACT) if G is not None else []))
        self.rank = len(self.basis)

    # structure

    def headroom(self, k: int) -> Optional[int]:
        if self.bound is None or self.filt is None:
            return None
        return self.bound - self.filt[k]

    def in_range(self, k: int, raising: int) -> bool:
        h = self.headroom(k)
        return h is None or h >= raising

    def unit(self, k: int) -> dict:
        return {k: Element.scalar(self.A, 1)}

    def _col(self, mat: Mapping, k: int) -> dict:
        try:
            return mat[k]
        except KeyError:
            raise OutOfRange(k) from None

    def _linear(self, mat: Mapping, vec: Mapping) -> dict:
        out: dict = {}
        for k, c in vec.items():
            for i, v in self._col(mat, k).items():
                _addto(out, i, _prod(c, v))
        return out

    def apply_d(self, vec: Mapping) -> dict:
        return self._linear(self.d, vec)

    def apply_psi(self, t: Gen, vec: Mapping) -> dict:
        return self._linear(self.psi.get(t, {}), vec) if t in self.psi else self._linear_zero(vec)

    def _linear_zero(self, vec: Mapping) -> dict:
        return {}

    def frame_derivation(self, v: Gen, alg: Algebra) -> Derivation:
        sp = self.space
        table = {g: (Element(alg, sp.values[(v, g)].terms) if g in sp.A.genset else Element(alg, {}))
                 for g in alg.gens}
        return Derivation(alg, table, (0, 0))

    def apply_nabla(self, v: Gen, vec: Mapping) -> dict:
        """nabla_v(c s) = hbar v(c) s + c nabla_v(s)."""
        out: dict = {}
        mat = self.nabla.get(v, {})
        for k, c in vec.items():
            alg = c.alg if c.alg is not None else self.A
            D = self.frame_derivation(v, alg if alg.genset >= self.A.genset else self.CA)
            _addto(out, k, D(c).scale(1, 1))
            for i, val in self._col(mat, k).items():
                _addto(out, i, _prod(c, val))
        return out

    def apply_nabla_field(self, field: Mapping, vec: Mapping) -> dict:
        """nabla_X for X = sum_v field[v] v with A-coefficients."""
        out: dict = {}
        for v, c in field.items():
            for i, val in self.apply_nabla(v, vec).items():
                _addto(out, i, _prod(c, val))
        return out

    def rho_A_map(self) -> GradedMap:
        sp = self.space
        return GradedMap(self.A, self.CA, {x: Element(self.CA, sp.coaction[x].terms) for x in sp.coords})

    def apply_coaction(self, vec: Mapping) -> dict:
        rA = self.rho_A_map()
        out: dict = {}
        for k, c in vec.items():
            cc = rA(Element(self.A, c.terms)) if c.alg is None or c.alg.genset <= self.A.genset else c
            for i, val in self.coaction[k].items():
                _addto(out, i, _prod(cc, val))
        return out

    def apply_rho(self, i: int, vec: Mapping) -> dict:
        """rho_V(t_i)(c s) = rho_A(t_i)(c) s + c rho_V(t_i)(s)."""
        G = self.space.group
        rA = Derivation(self.A, self.space.rho_A(i), (0, 0)) if self.space.coords else None
        out: dict = {}
        for k, c in vec.items():
            if rA is not None:
                _addto(out, k, rA(Element(self.A, c.terms)))
            for j, val in self.coaction[k].items():
                w = G.contract(val, COACT, lambda m, i=i: G.t_eval(i, m), self.A)
                _addto(out, j, _prod(c, w))
        return out

    def to_json(self) -> dict:
        def col(mat):
            return {str(k): {str(i): v.to_json() for i, v in sorted(c.items())} for k, c in sorted(mat.items())}
        return {
            "name": self.name,
            "criterion": self.criterion,
            "basis": [_key_str(b) for b in self.basis],
            "degrees": list(self.degrees),
            "filt": self.filt,
            "bound": self.bound,
            "d": col(self.d),
            "nabla": {g.name: col(m) for g, m in sorted(self.nabla.items(), key=lambda kv: kv[0].key)},
            "psi": {g.name: col(m) for g, m in sorted(self.psi.items(), key=lambda kv: kv[0].key)},
            "coaction": col(self.coaction),
        }


def _key_str(b) -> str:
    if isinstance(b, tuple) and all(isinstance(x, tuple) and len(x) == 2 and isinstance(x[0], Gen) for x in b):
        from .algebra import mono_str
        return mono_str(b)
    return repr(b)


def _prod(x: Element, y: Element) -> Element:
    if x.alg is None:
        return Element(y.alg, {k: v for k, v in _cmul(x, y).terms.items()})
    if y.alg is None:
        return _cmul(y, x) if False else Element(x.alg, _cmul(x, y).terms)
    big = x.alg if y.alg.genset <= x.alg.genset else y.alg
    return Element(big, _cmul(x, y).terms)


def _vec_eq(a: Mapping, b: Mapping) -> bool:
    keys = set(a) | set(b)
    return all(a.get(k, _z()).terms == b.get(k, _z()).terms for k in keys)


def _vec_sub(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, v in b.items():
        _addto(out, k, -v)
    return out


def _vec_scale(a: Mapping, c, hp: int = 0) -> dict:
    return {k: v.scale(c, hp) for k, v in a.items() if v}


def _witness(T: PerTriple, k: int, defect: Mapping) -> dict:
    return {"basis": _key_str(T.basis[k]),
            "defect": {_key_str(T.basis[i]): repr(v) for i, v in sorted(defect.items())}}


def _moment_field(T: PerTriple, i: int) -> dict:
    """mu*(t_i) as {frame element: A-coefficient}."""
    mu = moment_map(T.space, i)
    out: dict = {}
    for (m, p), c in mu.terms.items():
        fr = [g for g, _ in m if g.kind == "mom"]
        rest = tuple((g, e) for g, e in m if g.kind != "mom")
        _addto(out, fr[0], Element(T.A, {(rest, p): c}))
    return out


def validate_triple(T: PerTriple) -> list:
    """Report entries {condition, status, witness} for the per_hbar object conditions."""
    report = []
    G = T.space.group
    antis = [b.antighost() for b in G.basis] if G is not None else []
    frame = list(T.space.frame)

    def run(name: str, raising: int, fn: Callable[[int], Optional[dict]]):
        wit = None
        try:
            for k in range(T.rank):
                if not T.in_range(k, raising):
                    continue
                defect = fn(k)
                if defect:
                    wit = _witness(T, k, defect)
                    break
        except OutOfRange as exc:
            wit = {"basis": _key_str(T.basis[exc.args[0]]), "defect": "operator column missing"}
        report.append({"condition": name, "status": "pass" if wit is None else "fail", "witness": wit})

    report.append({"condition": "finite free", "status": "pass", "witness": None,
                   "note": T.criterion})
    bad = None
    for k, col in T.d.items():
        for i in col:
            if T.degrees[i] != T.degrees[k] - 1:
                bad = {"basis": _key_str(T.basis[k]), "defect": "del does not lower degree by one"}
    for t, mat in T.psi.items():
        for k, col in mat.items():
            for i in col:
                if T.degrees[i] != T.degrees[k] + 1:
                    bad = {"basis": _key_str(T.basis[k]), "defect": f"Psi_{t.name} does not raise degree by one"}
    report.append({"condition": "degrees", "status": "pass" if bad is None else "fail", "witness": bad})

    run("del^2 = 0", 0, lambda k: T.apply_d(T.apply_d(T.unit(k))))
    run("coaction counit", 0, lambda k: _vec_sub(_counit(T, T.apply_coaction(T.unit(k))), T.unit(k)))
    run("coaction coassociative", 0, lambda k: _coassoc_defect(T, k))
    if G is not None:
        run("del equivariant", 0, lambda k: _vec_sub(T.apply_coaction(T.apply_d(T.unit(k))),
                                                     _d_on_coact(T, T.apply_coaction(T.unit(k)))))
    for v in frame:
        run(f"nabla_{v.name} equivariant", 1, lambda k, v=v: _nabla_equiv_defect(T, v, k))
        run(f"nabla_{v.name} chain map", 1,
            lambda k, v=v: _vec_sub(T.apply_d(T.apply_nabla(v, T.unit(k))), T.apply_nabla(v, T.apply_d(T.unit(k)))))
    for c, t in enumerate(antis):
        run(f"Psi_{t.name} equivariant", 1, lambda k, c=c, t=t: _psi_equiv_defect(T, c, t, k))
    # (i_hbar)
    for v, w in combinations(frame, 2):
        def flat(k, v=v, w=w):
            s = T.unit(k)
            lhs = _vec_sub(T.apply_nabla(v, T.apply_nabla(w, s)), T.apply_nabla(w, T.apply_nabla(v, s)))
            rhs: dict = {}
            for u, cu in T.space.brackets.get((v, w), {}).items():
                for i, val in T.apply_nabla(u, s).items():
                    _addto(rhs, i, val.scale(cu, 1))
            return _vec_sub(lhs, rhs)
        run(f"flatness [{v.name},{w.name}]", 2, flat)
    for v in frame:
        for t in antis:
            run(f"[nabla_{v.name}, Psi_{t.name}] = 0", 2,
                lambda k, v=v, t=t: _vec_sub(T.apply_nabla(v, T.apply_psi(t, T.unit(k))),
                                             T.apply_psi(t, T.apply_nabla(v, T.unit(k)))))
    for t, u in [(t, u) for i, t in enumerate(antis) for u in antis[i:]]:
        run(f"Psi_{t.name} Psi_{u.name} + Psi_{u.name} Psi_{t.name} = 0", 2,
            lambda k, t=t, u=u: _sum(T.apply_psi(t, T.apply_psi(u, T.unit(k))),
                                     T.apply_psi(u, T.apply_psi(t, T.unit(k)))))
    # (ii_hbar)
    for c, t in enumerate(antis):
        fieldc = _moment_field(T, c)

        def gauss(k, c=c, t=t, fieldc=fieldc):
            s = T.unit(k)
            lhs = _sum(T.apply_d(T.apply_psi(t, s)), T.apply_psi(t, T.apply_d(s)))
            rhs = _sum(T.apply_nabla_field(fieldc, s), _vec_scale(T.apply_rho(c, s), 1, 1))
            return _vec_sub(lhs, rhs)
        run(f"Gauss law for {t.name}", 1, gauss)
    return report


def report_ok(report: list) -> bool:
    return all(r["status"] == "pass" for r in report)


def _sum(a: Mapping, b: Mapping) -> dict:
    out = dict(a)
    for k, v in b.items():
        _addto(out, k, v)
    return out


def _counit(T: PerTriple, vec: Mapping) -> dict:
    G = T.space.group
    if G is None:
        return dict(vec)
    return {k: G.contract(v, COACT, G.counit_mono, T.A) for k, v in vec.items()
            if G.contract(v, COACT, G.counit_mono, T.A)}


def _move_slot(x: Element, src, dst, alg: Algebra) -> Element:
    terms: dict = {}
    for (m, p), c in x.terms.items():
        fac = [(place_gen(g, slot=dst) if (g.slot == src and g.kind == "coord") else g, e) for g, e in m]
        for (mm, _), c2 in Element.from_factors(alg, fac).terms.items():
            _acc(terms, (mm, p), c * c2)
    return Element(alg, terms)


def _coassoc_defect(T: PerTriple, k: int) -> dict:
    G = T.space.group
    if G is None:
        return {}
    two = Algebra(list(T.A.gens) + G.gens(COACT) + G.gens(1))
    once = T.apply_coaction(T.unit(k))
    # (rho (x) id) rho: the old H-leg moves to slot 1
    lhs: dict = {}
    rA = GradedMap(T.A, two, {x: Element(two, T.space.coaction[x].terms) for x in T.space.coords})
    for j, c in once.items():
        moved = _move_slot(c, COACT, 1, two)
        # split A-part of the coefficient through rho_A
        for (m, p), cc in moved.terms.items():
            apart = tuple((g, e) for g, e in m if g.slot is None)
            hpart = tuple((g, e) for g, e in m if g.slot is not None)
            coef = rA(Element(T.A, {(apart, p): cc})) * Element(two, {(hpart, 0): Fraction(1)})
            for i, val in T.coaction[j].items():
                _addto(lhs, i, coef * Element(two, val.terms))
    rhs: dict = {}
    H = G.H
    for i, c in once.items():
        acc = Element(two, {})
        for (m, p), cc in c.terms.items():
            term = Element.scalar(two, cc).scale(1, p)
            for g, e in m:
                if g.slot == COACT:
                    img = H.coproduct(Element.from_factors(two, [(g, 1)]), (COACT, 1), two)
                    term = term * (img ** e if e > 0 else img.inverse() ** (-e))
                else:
                    term = term * Element.from_factors(two, [(g, e)])
            acc = acc + term
        _addto(rhs, i, acc)
    return _vec_sub(lhs, rhs)


def _d_on_coact(T: PerTriple, vec: Mapping) -> dict:
    """(del (x) id) applied to a vector with A (x) H coefficients."""
    out: dict = {}
    for k, c in vec.items():
        for i, v in T.d[k].items():
            _addto(out, i, _prod(c, v))
    return out


def _nabla_equiv_defect(T: PerTriple, v: Gen, k: int) -> dict:
    lhs = T.apply_coaction(T.apply_nabla(v, T.unit(k)))
    coact = T.apply_coaction(T.unit(k))
    rhs: dict = {}
    for w, K in T.space.frame_coefficients(v).items():
        for i, val in T.apply_nabla(w, coact).items():
            _addto(rhs, i, _prod(Element(T.CA, K.terms), val))
    return _vec_sub(lhs, rhs)


def _psi_equiv_defect(T: PerTriple, c: int, t: Gen, k: int) -> dict:
    G = T.space.group
    lhs = T.apply_coaction(T.apply_psi(t, T.unit(k)))
    coact = T.apply_coaction(T.unit(k))
    rhs: dict = {}
    for b, tb in enumerate(b.antighost() for b in G.basis):
        N = G.adjoint_matrix(b, c)
        if not N:
            continue
        for i, val in T._linear(T.psi.get(tb, {}), coact).items():
            _addto(rhs, i, _prod(Element(T.CA, N.terms), val))
    return _vec_sub(lhs, rhs)


def validate_morphism(L: Mapping, degree: int, T: PerTriple, T2: PerTriple) -> list:
    """Conditions on an A-linear map L : T -> T2 of chain degree ``degree``."""
    report = []

    def apply_L(vec: Mapping) -> dict:
        out: dict = {}
        for k, c in vec.items():
            for i, v in L.get(k, {}).items():
                _addto(out, i, _prod(c, v))
        return out

    def run(name: str, fn, raising: int = 1):
        wit = None
        try:
            for k in range(T.rank):
                if not (T.in_range(k, raising)):
                    continue
                defect = fn(k)
                if defect:
                    wit = _witness(T2, next(iter(defect)), defect) if defect else None
                    wit["source"] = _key_str(T.basis[k])
                    break
        except OutOfRange:
            wit = {"defect": "operator column missing"}
        report.append({"condition": name, "status": "pass" if wit is None else "fail", "witness": wit})

    for k, col in L.items():
        for i in col:
            if T2.degrees[i] != T.degrees[k] + degree:
                raise ValueError("morphism is not homogeneous of the stated degree")
    run("coaction", lambda k: _vec_sub(T2.apply_coaction(apply_L(T.unit(k))),
                                       _L_on_coact(apply_L, T.apply_coaction(T.unit(k)))), 0)
    for v in T.space.frame:
        run(f"nabla_{v.name}", lambda k, v=v: _vec_sub(T2.apply_nabla(v, apply_L(T.unit(k))),
                                                       apply_L(T.apply_nabla(v, T.unit(k)))))
    sign = -1 if degree % 2 else 1
    G = T.space.group
    for t in ([b.antighost() for b in G.basis] if G is not None else []):
        run(f"Psi_{t.name}", lambda k, t=t: _vec_sub(T2.apply_psi(t, apply_L(T.unit(k))),
                                                     _vec_scale(apply_L(T.apply_psi(t, T.unit(k))), sign)))
    run("closed", lambda k: _vec_sub(T2.apply_d(apply_L(T.unit(k))),
                                     _vec_scale(apply_L(T.apply_d(T.unit(k))), sign)), 0)
    return report


def _L_on_coact(apply_L, vec: Mapping) -> dict:
    out: dict = {}
    for k, c in vec.items():
        for i, v in apply_L({k: Element(None, {((), 0): Fraction(1)})}).items():
            _addto(out, i, _prod(c, v))
    return out


# the torus at a point


def point_space(H: HopfAlgebra) -> AffineGSpace:
    """X = point with G acting trivially; A = Q."""
    return AffineGSpace([], [], {}, {}, GroupCopies(H, [None]), {}, {}, name="pt")


def gm_weight_object(n: int, space: Optional[AffineGSpace] = None, psi_scale=1) -> PerTriple:
    """V = Q[hbar] s + Q[hbar] t s with del(t s) = hbar n s and Psi(s) = t s."""
    space = space or point_space(HopfAlgebra("torus", 1))
    G = space.group
    if G.H.kind != "torus" or G.H.rank != 1 or len(G.locs) != 1 or space.coords:
        raise ValueError("weight objects live on the rank-one torus at a point")
    t = G.basis[0].antighost()
    x = G.gens(COACT)[0]
    CA = Algebra(G.gens(COACT))
    xn = Element.from_factors(CA, [(x, n)])
    A = space.A
    return PerTriple(
        space=space,
        basis=["s", "ts"],
        degrees=[0, 1],
        d={0: {}, 1: ({0: Element.scalar(A, n).scale(1, 1)} if n else {})},
        nabla={},
        psi={t: {0: {1: Element.scalar(A, psi_scale)}, 1: {}}},
        coaction={0: {0: xn}, 1: {1: xn}},
        name=f"O({n})",
    )


def _nullspace(rows: list, ncols: int) -> list:
    import sympy
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    M = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])
    out = []
    for v in M.nullspace():
        out.append([Fraction(int(sympy.fraction(e)[0]), int(sympy.fraction(e)[1])) for e in v])
    return out


def endo_complex_point(T: PerTriple) -> FreeComplex:
    """End(T) over Q[hbar] for an object over a point; constraints must be hbar-free.

    A map of chain degree p sits in cochain degree -p; its differential is
    [del, L] = del L - (-1)^p L del.
    """
    if T.space.coords:
        raise ValueError("endomorphism complexes are only computed over a point")
    G = T.space.group
    antis = [b.antighost() for b in G.basis]
    degs = sorted(set(T.degrees))
    ps = list(range(min(degs) - max(degs), max(degs) - min(degs) + 1))
    spaces = {}
    for p in ps:
        pairs = [(i, k) for k in range(T.rank) for i in range(T.rank) if T.degrees[i] == T.degrees[k] + p]
        rows = []
        # coaction: sum_i L[i,k] R[.,i] = sum_j R[j,k] L[.,j]
        for k in range(T.rank):
            for out_i in range(T.rank):
                eqs: dict = {}
                for col, (i, kk) in enumerate(pairs):
                    if kk == k:
                        for (m, _), c in T.coaction[i].get(out_i, _z()).terms.items():
                            eqs.setdefault(m, {})[col] = eqs.setdefault(m, {}).get(col, 0) + c
                    if i == out_i:
                        for (m, _), c in T.coaction[k].get(kk, _z()).terms.items():
                            eqs.setdefault(m, {})[col] = eqs.setdefault(m, {}).get(col, 0) - c
                for row in eqs.values():
                    rows.append([row.get(c, Fraction(0)) for c in range(len(pairs))])
        sign = -1 if p % 2 else 1
        for t in antis:
            mat = T.psi.get(t, {})
            for k in range(T.rank):
                for out_i in range(T.rank):
                    row = [Fraction(0)] * len(pairs)
                    for col, (i, kk) in enumerate(pairs):
                        # (Psi L)(s_k) at s_out: L[i,k] Psi[out,i]
                        if kk == k:
                            row[col] += mat.get(i, {}).get(out_i, _z()).constant().coeffs[0] if mat.get(i, {}).get(out_i) else 0
                        # (L Psi)(s_k) at s_out: Psi[kk,k] L[out,kk]
                        if i == out_i and mat.get(k, {}).get(kk):
                            row[col] -= sign * mat[k][kk].constant().coeffs[0]
                    if any(row):
                        rows.append(row)
        spaces[p] = (pairs, _nullspace(rows, len(pairs)))
    # cochain degree -p, increasing: p from max down to min
    order = sorted(ps, reverse=True)
    ranks = [len(spaces[p][1]) for p in order]
    diffs = []
    for a, b in zip(order, order[1:]):
        diffs.append(_bracket_matrix(T, spaces[a], spaces[b], a))
    return FreeComplex(ranks, diffs, start=-order[0])


def _bracket_matrix(T: PerTriple, src, tgt, p: int) -> list:
    pairs_s, basis_s = src
    pairs_t, basis_t = tgt
    sign = -1 if p % 2 else 1
    cols = []
    for vec in basis_s:
        L = {}
        for (i, k), c in zip(pairs_s, vec):
            if c:
                L[(i, k)] = Scalar([c])
        out: dict = {}
        for (i, k), c in L.items():
            # del L: L[i,k] then del column of i
            for j, v in T.d.get(i, {}).items():
                out[(j, k)] = out.get((j, k), Scalar()) + c * _scalar_of(v)
            # L del: del[kk, k] then L[i, kk] with kk = column of L
        for k in range(T.rank):
            for kk, v in T.d.get(k, {}).items():
                for (i, k2), c in L.items():
                    if k2 == kk:
                        out[(i, k)] = out.get((i, k), Scalar()) - sign * c * _scalar_of(v) if False else \
                            out.get((i, k), Scalar()) + Scalar([-sign]) * c * _scalar_of(v)
        cols.append(_coords_in(out, pairs_t, basis_t))
    # matrix rows = target basis, columns = source basis
    return [[cols[j][i] for j in range(len(cols))] for i in range(len(basis_t))]


def _scalar_of(v: Element) -> Scalar:
    if any(m for m, _ in v.terms):
        raise ValueError("endomorphism complexes need constant matrices")
    return v.constant()


def _coords_in(out: dict, pairs: list, basis: list) -> list:
    """Coefficients over Q[hbar] of a vector in the span of rational basis vectors."""
    if not basis:
        if any(v for v in out.values()):
            raise ValueError("bracket leaves the constrained subspace")
        return []
    # pivot positions from the first nonzero coordinates after elimination
    import sympy
    M = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in b] for b in basis]).T
    _, piv = M.rref()
    sub = M.extract(list(_pivot_rows(M, len(basis))), list(range(len(basis))))
    inv = sub.inv()
    rows = list(_pivot_rows(M, len(basis)))
    y = [out.get(pairs[r], Scalar()) for r in rows]
    coeffs = []
    for a in range(len(basis)):
        acc = Scalar()
        for b in range(len(basis)):
            e = inv[a, b]
            if e:
                acc = acc + Scalar([Fraction(int(sympy.fraction(e)[0]), int(sympy.fraction(e)[1]))]) * y[b]
        coeffs.append(acc)
    # verify the vector lies in the span
    for r, key in enumerate(pairs):
        rec = Scalar()
        for a in range(len(basis)):
            if basis[a][r]:
                rec = rec + coeffs[a] * Scalar([basis[a][r]])
        if rec != out.get(key, Scalar()):
            raise ValueError("bracket leaves the constrained subspace")
    return coeffs


def _pivot_rows(M, r: int):
    _, piv = M.T.rref()
    return piv[:r]


def endo_homology_point(n: int) -> list:
    return homology(endo_complex_point(gm_weight_object(n)))


def specialized_dimensions(c: FreeComplex, value) -> list:
    """Rank-nullity dimensions of the homology over Q at hbar = value (sympy ranks)."""
    import sympy
    mats = specialize(c, value)
    ranks = [sympy.Matrix(m).rank() if m and m[0] else 0 for m in mats]
    out = []
    for k, r in enumerate(c.ranks):
        out.append(r - (ranks[k] if k < len(ranks) else 0) - (ranks[k - 1] if k >= 1 else 0))
    return out


def check_homology_by_specialization(c: FreeComplex, groups: list, values: Sequence) -> Optional[tuple]:
    """Universal coefficients: at hbar = v the Q-dimension in degree k is the free
    rank plus the torsion factors of degrees k and k+1 that vanish at v."""
    def vanishing(k: int, v) -> int:
        if 0 <= k < len(groups):
            return sum(1 for t in groups[k].torsion if t.evaluate(v) == 0)
        return 0
    for v in values:
        v = Fraction(v)
        dims = specialized_dimensions(c, v)
        for k, (g, dim) in enumerate(zip(groups, dims)):
            want = g.free_rank + vanishing(k, v) + vanishing(k + 1, v)
            if dim != want:
                return (v, g.degree, dim, want)
    return None


# pointing objects


def momentum_words(frame: Sequence[Gen], antis: Sequence[Gen], bound: int) -> list:
    """Normal-order words v^...t^... of total degree <= bound (hatted), sorted by (degree, key)."""
    fr = sorted((hat_gen(g) for g in frame), key=lambda g: g.key)
    an = sorted((hat_gen(g) for g in antis), key=lambda g: g.key)
    out = []

    def rec_v(idx: int, left: int, acc: list):
        yield tuple(acc)
        for j in range(idx, len(fr)):
            if left == 0:
                break
            if acc and acc[-1][0] is fr[j]:
                continue
            for e in range(1, left + 1):
                yield from rec_v(j + 1, left - e, acc + [(fr[j], e)])

    for vw in rec_v(0, bound, []):
        used = sum(e for _, e in vw)
        for k in range(0, min(bound - used, len(an)) + 1):
            for ts in combinations(an, k):
                out.append(vw + tuple((t, 1) for t in ts))
    out.sort(key=lambda w: (sum(e for _, e in w), tuple((g.key, e) for g, e in w)))
    return out


class Pointing:
    """Helper holding the quantized level-0 algebra used to build B_hbar."""

    def __init__(self, B: ReducedCDGA, Q: Optional[QuantizedAlgebra] = None):
        self.B = B
        self.Q = Q or QuantizedAlgebra(PoissonBracket(B, 0))
        self.space = B.space
        G = B.group
        self.G = G
        self.antis = [b.antighost() for b in G.basis] if G is not None else []

    def element(self, vec: Mapping, basis: Sequence) -> Element:
        """sum_k c_k^ s_k as an element of the quantized algebra."""
        out = Element(self.Q.alg, {})
        for k, c in vec.items():
            out = out + self.Q.mul(self.Q.hat(c), Element(self.Q.alg, {(basis[k], 0): Fraction(1)}))
        return out

    def vector(self, x: Element, index: Mapping, A: Algebra, strict: bool = True) -> dict:
        """Split normal-ordered terms into A-coefficient times momentum word."""
        out: dict = {}
        for (m, p), c in x.terms.items():
            if any(g.kind == "ghost" for g, _ in m):
                raise AlgebraError("ghost factor in a module element")
            coef = tuple((unhat_gen(g) if g.hat else g, e) for g, e in m if g.kind == "coord")
            word = tuple((g, e) for g, e in m if g.kind in ("mom", "anti"))
            k = index.get(word)
            if k is None:
                if strict:
                    raise OutOfRange(word)
                continue
            cur = out.get(k)
            term = Element(A, {(coef, p): c})
            out[k] = term if cur is None else cur + term
        return {k: v for k, v in out.items() if v}

    def del_word(self, word: tuple) -> Element:
        """The closed formula for del(D^ (x) t^_1 ... t^_n)."""
        Q = self.Q
        D = tuple((g, e) for g, e in word if g.kind == "mom")
        ts = [g for g, _ in word if g.kind == "anti"]
        Del = Element(Q.alg, {(D, 0): Fraction(1)})
        out = Element(Q.alg, {})
        G = self.G
        for i, t in enumerate(ts):
            sign = -1 if i % 2 else 1
            rest = tuple((u, 1) for j, u in enumerate(ts) if j != i)
            c = next(a for a, b in enumerate(G.basis) if b.antighost(True) is t)
            mu = Q.hat(self.B.moment[unhat_gen(t)])
            term = Q.mul(Q.mul(Del, mu), Element(Q.alg, {(rest, 0): Fraction(1)}))
            prefix = Element(Q.alg, {(tuple((u, 1) for u in ts[:i]), 0): Fraction(1)})
            suffix = Element(Q.alg, {(tuple((u, 1) for u in ts[i + 1:]), 0): Fraction(1)})
            for b, basis_b in enumerate(G.basis):
                r = self.B.rho(b).on_gen(unhat_gen(t))
                if not r:
                    continue
                th = Q.gen(basis_b.ghost(0))
                comm = Q.mul(prefix, th) - Q.mul(th, prefix).scale(-1 if i % 2 else 1)
                if comm:
                    term = term + Q.mul(Q.mul(Q.mul(Del, comm), Q.hat(r)), suffix)
            out = out + term.scale(sign)
        return out


def build_pointing(B: ReducedCDGA, bound: int = 2, Q: Optional[QuantizedAlgebra] = None) -> PerTriple:
    """The rank-one object B_hbar = DiffOp_hbar(A) (x) Sym g[-1], truncated at ``bound``."""
    Pt = Pointing(B, Q)
    Q = Pt.Q
    space = B.space
    words = momentum_words(space.frame, Pt.antis, bound)
    index = {w: k for k, w in enumerate(words)}
    A = space.A
    filt = [sum(e for _, e in w) for w in words]
    degrees = [sum(1 for g, _ in w if g.kind == "anti") for w in words]
    d = {k: Pt.vector(Pt.del_word(w), index, A) for k, w in enumerate(words)}
    nabla: dict = {}
    for v in space.frame:
        col = {}
        for k, w in enumerate(words):
            if filt[k] < bound:
                col[k] = Pt.vector(Q.mul(Q.gen(v), Element(Q.alg, {(w, 0): Fraction(1)})), index, A)
        nabla[v] = col
    psi: dict = {}
    for t in Pt.antis:
        col = {}
        for k, w in enumerate(words):
            if filt[k] < bound:
                col[k] = Pt.vector(Q.mul(Q.gen(t), Element(Q.alg, {(w, 0): Fraction(1)})), index, A)
        psi[t] = col
    coaction = {k: _word_coaction(B, Q, w, index) for k, w in enumerate(words)}
    return PerTriple(space, words, degrees, d, nabla, psi, coaction, filt, bound,
                     name=f"B_hbar[{B.name}]", parts=[], complement_words=words)


def _word_coaction(B: ReducedCDGA, Q: QuantizedAlgebra, word: tuple, index: Mapping) -> dict:
    """Tensor-product coaction on a momentum word: product of the letters' coactions."""
    G = B.group
    CA = Algebra(list(B.space.A.gens) + G.gens(COACT))
    acc = Element.scalar(Q.extended(G.gens(COACT)), 1)
    for g, e in word:
        img = Q.hat(B.coaction[unhat_gen(g)])
        for _ in range(e):
            acc = Q.mul(acc, img)
    out: dict = {}
    for (m, p), c in acc.terms.items():
        coef = tuple((unhat_gen(g) if g.hat else g, e) for g, e in m if g.kind == "coord")
        w = tuple((g, e) for g, e in m if g.kind in ("mom", "anti"))
        _addto(out, index[w], Element(CA, {(coef, p): c}))
    return out


def del_from_d_hbar(B: ReducedCDGA, T: PerTriple, Q: QuantizedAlgebra) -> dict:
    """Oracle for del on B_hbar: the ghost-free part of d_hbar(word)."""
    Pt = Pointing(B, Q)
    out = {}
    for k, w in enumerate(T.basis):
        dw = Q.d(Element(Q.alg, {(w, 0): Fraction(1)}))
        free = Element(Q.alg, {key: c for key, c in dw.terms.items()
                               if not any(g.kind == "ghost" for g, _ in key[0])})
        out[k] = Pt.vector(free, T.index, T.A)
    return out


def classical_del(B: ReducedCDGA, T: PerTriple) -> dict:
    """The Koszul differential of Sym_A(T_A <- g[-1]) on the same words, hbar = 0."""
    D = B.chain_differential()
    out = {}
    for k, w in enumerate(T.basis):
        cl = D(Element(B.alg, {(tuple((unhat_gen(g), e) for g, e in w), 0): Fraction(1)}))
        vec: dict = {}
        for (m, p), c in cl.terms.items():
            coef = tuple((g, e) for g, e in m if g.kind == "coord")
            word = tuple((hat_gen(g), e) for g, e in m if g.kind != "coord")
            _addto(vec, T.index[word], Element(T.A, {(coef, p): c}))
        out[k] = vec
    return out


def classical_limit_matrix(mat: Mapping) -> dict:
    return {k: {i: v.hbar_part(0) for i, v in col.items() if v.hbar_part(0)} for k, col in mat.items()}
