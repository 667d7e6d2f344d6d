"""Derived symplectic reduction of T*X by G and the unshifted Poisson brackets.

X = Spec A is described by coordinates, a global frame of vector fields
v_alpha (with their values on coordinates and constant structure functions
among themselves) and H-coactions on coordinates and frame.  The chain CDGA
of the reduction is Sym_A(T_A <- A (x) g[-1]) with del(t) = mu*(t).
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from typing import Callable, Mapping, Optional, Sequence

from .algebra import (Algebra, AlgebraError, Derivation, Element, Gen, GradedMap, _acc,
                      mono_mul, mono_odd)
from .ce import ChainCDGA, CosimplicialLevel, codegeneracy, coface
from .hopf import COACT, SCRATCH, GroupCopies, place_gen


class FrameError(AlgebraError):
    """The action does not expand in the frame, or the frame data are inconsistent."""


def _zero() -> Element:
    return Element(None, {})


def _linear(x: Element) -> bool:
    for (m, _), _c in x.terms.items():
        if sum(e for _, e in m) > 1 or any(e < 0 for _, e in m):
            return False
    return True


class AffineGSpace:
    """Affine G-space with a tangent frame.

    ``values[(v, x)]`` is v(x) in A, ``brackets[(v, w)]`` maps frame
    elements u to the constant coefficient of u in [v, w].  ``coaction[x]``
    and ``frame_coaction[v]`` have their H-legs at slot COACT; the latter is
    linear in the frame.  ``coframe`` turns a derivation of A (given by its
    values on coordinates) into frame coefficients; by default the frame is
    assumed to be the coordinate frame d/dx_alpha.
    """

    def __init__(self, coords: Sequence[Gen], frame: Sequence[Gen], values: Mapping, brackets: Mapping,
                 group: Optional[GroupCopies], coaction: Mapping, frame_coaction: Mapping,
                 coframe: Optional[Callable[[Mapping], dict]] = None, name: str = "X"):
        self.coords = sorted(coords, key=lambda g: g.key)
        self.frame = sorted(frame, key=lambda g: g.key)
        self.A = Algebra(self.coords, f"O({name})")
        self.AT = Algebra(self.coords + self.frame, f"Sym T_{name}")
        self.group = group
        self.name = name
        self.values = {}
        for v in self.frame:
            for x in self.coords:
                val = values.get((v, x), _zero())
                if not _linear(val):
                    raise FrameError(f"{v.name}({x.name}) = {val} is not linear in the coordinates")
                self.values[(v, x)] = Element(self.A, val.terms)
        self.brackets = {k: {u: Fraction(c) for u, c in row.items() if c} for k, row in brackets.items()}
        self.coaction = dict(coaction)
        self.frame_coaction = dict(frame_coaction)
        self._coframe = coframe
        if coframe is None:
            for v in self.frame:
                for x in self.coords:
                    want = 1 if self.frame.index(v) == self.coords.index(x) else 0
                    if self.values[(v, x)] != want:
                        raise FrameError("the default coframe needs the coordinate frame")
        self._derivs: dict = {}

    def __repr__(self) -> str:
        return f"AffineGSpace({self.name}, {len(self.coords)} coords, {len(self.frame)} frame)"

    def derivation(self, v: Gen) -> Derivation:
        got = self._derivs.get(v)
        if got is None:
            got = Derivation(self.A, {x: self.values[(v, x)] for x in self.coords}, (0, 0), name=v.name)
            self._derivs[v] = got
        return got

    def coframe(self, D: Mapping) -> dict:
        if self._coframe is None:
            return {v: D.get(x, _zero()) for v, x in zip(self.frame, self.coords) if D.get(x, _zero())}
        return self._coframe(D)

    def expand(self, D: Mapping) -> dict:
        """Frame coefficients c_alpha in A with D = sum c_alpha v_alpha, verified on coordinates."""
        coeffs = {v: Element(self.A, c.terms) for v, c in self.coframe(D).items() if c}
        for x in self.coords:
            rec = Element(self.A, {})
            for v, c in coeffs.items():
                rec = rec + c * self.values[(v, x)]
            if rec != Element(self.A, D.get(x, _zero()).terms):
                raise FrameError(f"derivation is not expressible in the frame (fails on {x.name})")
        return coeffs

    def rho_A(self, i: int) -> dict:
        """Induced action rho_A(t_i)(x) = x_(0) t_i(x_(1)) on coordinates."""
        G = self.group
        return {x: G.contract(self.coaction[x], COACT, lambda m, i=i: G.t_eval(i, m), self.A)
                for x in self.coords}

    def check_frame(self) -> Optional[str]:
        """Frame brackets against derivation commutators, and Jacobi of the structure constants."""
        for v in self.frame:
            for w in self.frame:
                Dv, Dw = self.derivation(v), self.derivation(w)
                for x in self.coords:
                    lhs = Dv(self.values[(w, x)]) - Dw(self.values[(v, x)])
                    rhs = Element(self.A, {})
                    for u, c in self.brackets.get((v, w), {}).items():
                        rhs = rhs + self.values[(u, x)].scale(c)
                    if lhs != rhs:
                        return f"[{v.name},{w.name}] on {x.name}"
        for u, v, w in combinations(self.frame, 3):
            tot: dict = {}
            for a, b, c in ((u, v, w), (v, w, u), (w, u, v)):
                for y, cy in self.brackets.get((b, c), {}).items():
                    for z, cz in self.brackets.get((a, y), {}).items():
                        tot[z] = tot.get(z, 0) + cy * cz
            if any(tot.values()):
                return f"Jacobi({u.name},{v.name},{w.name})"
        return None

    def frame_coefficients(self, v: Gen) -> dict:
        """rho_T(v) as {w: coefficient in A (x) H}."""
        out: dict = {}
        for (m, p), c in self.frame_coaction[v].terms.items():
            fr = [(g, e) for g, e in m if g.kind == "mom"]
            if len(fr) != 1 or fr[0][1] != 1:
                raise FrameError(f"frame coaction of {v.name} is not linear in the frame")
            rest = tuple((g, e) for g, e in m if g.kind != "mom")
            _acc(out.setdefault(fr[0][0], {}), (rest, p), c)
        return {w: Element(None, t) for w, t in out.items() if t}

    def check_evaluation_equivariance(self) -> Optional[tuple]:
        """rho_A(v(x)) = v_(0)(x_(0)) (x) v_(1) x_(1) on frame/coordinate pairs."""
        G = self.group
        if G is None:
            return None
        big = Algebra(self.coords + G.gens(COACT))
        rho = GradedMap(self.A, big, {x: Element(big, self.coaction[x].terms) for x in self.coords})
        for v in self.frame:
            coeffs = self.frame_coefficients(v)
            for x in self.coords:
                lhs = rho(self.values[(v, x)])
                rhs = Element(big, {})
                for w, c in coeffs.items():
                    Dw = Derivation(big, {g: (Element(big, self.values[(w, g)].terms) if g in self.A
                                              else Element(big, {})) for g in big.gens}, (0, 0))
                    rhs = rhs + Element(big, c.terms) * Dw(Element(big, self.coaction[x].terms))
                if lhs != rhs:
                    return (v, x)
        return None


def group_coframe(H, space_of: Callable[[], AffineGSpace], frame_of: Callable[[int, object], Gen],
                  copies: Sequence) -> Callable[[Mapping], dict]:
    """Coframe of a left-invariant frame on a product of group copies.

    For the copy at ``loc`` the coefficient of the frame element with basis
    index b is S(th_(1)) D(th_(2)) with th the chosen lift of theta^b.
    """
    def coframe(D: Mapping) -> dict:
        space = space_of()
        A = space.A
        Dd = Derivation(A, {x: Element(A, D.get(x, _zero()).terms) for x in A.gens}, (0, 0))
        out = {}
        for loc in copies:
            alg2 = Algebra([place_gen(g, loc, s) for g in H.gens for s in SCRATCH[:2]])
            for b in range(H.dim):
                co = H.coproduct(H.lift(b, loc, None), SCRATCH[:2], alg2, [loc, loc])
                acc = Element(A, {})
                for (m, p), c in co.terms.items():
                    l1 = [(place_gen(g, slot=None), e) for g, e in m if g.slot == SCRATCH[0]]
                    l2 = [(place_gen(g, slot=None), e) for g, e in m if g.slot == SCRATCH[1]]
                    s1 = H.antipode(Element.from_factors(A, l1))
                    d2 = Dd(Element.from_factors(A, l2))
                    if s1 and d2:
                        acc = acc + (s1 * d2).scale(c, p)
                if acc:
                    out[frame_of(b, loc)] = acc
        return out
    return coframe


def moment_map(space: AffineGSpace, i: int) -> Element:
    """mu*(t_i) = -sum_alpha c_alpha v_alpha where rho_A(t_i) = sum_alpha c_alpha v_alpha."""
    coeffs = space.expand(space.rho_A(i))
    out = Element(space.AT, {})
    for v, c in coeffs.items():
        out = out - Element(space.AT, c.terms) * Element.gen(space.AT, v)
    return out


class ReducedCDGA(ChainCDGA):
    """O(mu^{-1}(0)) as a chain CDGA; ``space`` and ``moment`` keep the inputs."""

    space: Optional[AffineGSpace] = None
    moment: Optional[dict] = None


def build_reduced(space: AffineGSpace, name: str = "B", check: bool = True) -> ReducedCDGA:
    G = space.group
    antis = [b.antighost() for b in G.basis] if G is not None else []
    moment = {t: moment_map(space, i) for i, t in enumerate(antis)}
    gens = space.coords + space.frame + antis
    coaction = None
    if G is not None:
        calg = Algebra(gens + G.gens(COACT))
        coaction = {}
        for x in space.coords:
            coaction[x] = Element(calg, space.coaction[x].terms)
        for v in space.frame:
            coaction[v] = Element(calg, space.frame_coaction[v].terms)
        for c, t in enumerate(antis):
            acc = Element(calg, {})
            for b, tb in enumerate(antis):
                n = G.adjoint_matrix(b, c)
                if n:
                    acc = acc + Element.gen(calg, tb) * Element(calg, n.terms)
            coaction[t] = acc
    B = ReducedCDGA(gens, {t: m for t, m in moment.items()}, G, coaction, name=name)
    B.space = space
    B.moment = moment
    for t in antis:
        B.d[t] = Element(B.alg, moment[t].terms)
    if check and G is not None:
        bad = check_moment_equivariance(B)
        if bad is not None:
            from .ce import EquivarianceError
            raise EquivarianceError(f"moment map is not equivariant on {bad.name}")
    return B


def check_moment_equivariance(B: ReducedCDGA) -> Optional[Gen]:
    """rho(del t) = (del (x) id) rho(t) on antighosts."""
    calg = B.coaction_alg()
    rho = GradedMap(B.alg, calg, {g: Element(calg, B.coaction[g].terms) for g in B.gens})
    dB = Derivation(calg, {g: (Element(calg, B.d[g].terms) if g in B.alg else Element(calg, {}))
                           for g in calg.gens}, (0, -1))
    for t in B.gens:
        if t.kind != "anti":
            continue
        if rho(B.d[t]) != dB(B.coaction[t]):
            return t
    return None


# Poisson brackets at level n

LEG_ORDERS = ("descending", "ascending", "no-antipode")


class PoissonBracket:
    """Unshifted Poisson bracket on level n of the resolution of B.

    Nonzero generator brackets: {v, x} = v(x), {v, w} = [v, w] and
    {t_c, theta^{a<j>}} = -<theta^a, t_(0)> S(t_(1))^<j> ... S(t_(j))^<1>,
    with the legs read off the iterated adjoint coaction.  ``legs`` selects
    the slot assignment of the antipode chain; only "descending" is the
    construction proper, the others exist to test that they fail.
    """

    def __init__(self, B: ReducedCDGA, n: int, legs: str = "descending", level: Optional[CosimplicialLevel] = None):
        if legs not in LEG_ORDERS:
            raise ValueError(f"unknown leg order {legs!r}")
        self.B = B
        self.n = n
        self.legs = legs
        self.level = level if level is not None else B.level(n)
        self.alg = self.level.alg
        self.space = B.space
        self.table: dict = {}
        self._build()
        self._mg: dict = {}
        self._mm: dict = {}

    def _el(self, x: Element) -> Element:
        return Element(self.alg, x.terms)

    def _build(self) -> None:
        sp, G, alg = self.space, self.B.group, self.alg
        for v in sp.frame:
            for x in sp.coords:
                val = sp.values[(v, x)]
                if val:
                    self.table[(v, x)] = self._el(val)
                    self.table[(x, v)] = -self._el(val)
            for w in sp.frame:
                row = sp.brackets.get((v, w), {})
                if row:
                    acc = Element(alg, {})
                    for u, c in row.items():
                        acc = acc + Element.gen(alg, u).scale(c)
                    self.table[(v, w)] = acc
        if G is None:
            return
        for c, (_, loc) in enumerate(G.entries):
            t = G.basis[c].antighost()
            for a, (_, loca) in enumerate(G.entries):
                if loca != loc:
                    continue
                for j in range(self.n + 1):
                    th = G.basis[a].ghost(j)
                    val = self.antighost_ghost(c, a, j)
                    if val:
                        self.table[(t, th)] = val
                        self.table[(th, t)] = val

    def antighost_ghost(self, c: int, a: int, j: int) -> Element:
        """{t_c, theta^{a<j>}} as an element of the level algebra."""
        G = self.B.group
        alg = self.alg
        if j == 0:
            return Element.scalar(alg, -1 if a == c else 0)
        same = [i for i, (_, l) in enumerate(G.entries) if l == G.entries[c][1]]
        # chains a = b_1, b_2, ..., b_j, b_{j+1} = c; factor k sits at leg k
        total = Element(alg, {})

        def leg_matrix(k: int, lo: int, hi: int) -> Element:
            # the k-th Sweedler leg S(N[lo, hi]) = M[hi, lo]
            slot = {"descending": j - k + 1, "ascending": k, "no-antipode": j - k + 1}[self.legs]
            if self.legs == "no-antipode":
                return G.adjoint_matrix(lo, hi, slot)
            return G.coadjoint_matrix(hi, lo, slot)

        def rec(k: int, lo: int, acc: Element) -> None:
            nonlocal total
            if k == j:
                m = leg_matrix(k, lo, c)
                if m:
                    total = total + acc * Element(alg, m.terms)
                return
            for b in same:
                m = leg_matrix(k, lo, b)
                if m:
                    rec(k + 1, b, acc * Element(alg, m.terms))
        rec(1, a, Element.scalar(alg, 1))
        return -total

    def gen_bracket(self, x: Gen, y: Gen) -> Element:
        return self.table.get((x, y), _zero())

    def active(self) -> list:
        """Generators with some nonzero bracket; the others are Poisson-central."""
        return sorted({x for x, _ in self.table}, key=lambda g: g.key)

    # biderivation extension

    def _mono_gen(self, m: tuple, y: Gen) -> dict:
        key = (m, y)
        got = self._mg.get(key)
        if got is not None:
            return got
        terms: dict = {}
        for idx, (g, e) in enumerate(m):
            val = self.table.get((g, y))
            if val is None:
                continue
            right = m[idx + 1:]
            sign = -1 if (y.odd and mono_odd(right)) else 1
            left = m[:idx] + (((g, e - 1),) if e != 1 else ())
            for (vm, vp), vc in val.terms.items():
                for c1, lm in mono_mul(left, vm):
                    for c2, full in mono_mul(lm, right):
                        _acc(terms, (full, vp), sign * e * vc * c1 * c2)
        self._mg[key] = terms
        return terms

    def _mono_mono(self, X: tuple, Y: tuple) -> dict:
        key = (X, Y)
        got = self._mm.get(key)
        if got is not None:
            return got
        terms: dict = {}
        xodd = mono_odd(X)
        for jdx, (h, f) in enumerate(Y):
            br = self._mono_gen(X, h)
            if not br:
                continue
            before = Y[:jdx]
            sign = -1 if (xodd and mono_odd(before)) else 1
            left = before + (((h, f - 1),) if f != 1 else ())
            right = Y[jdx + 1:]
            for (bm, bp), bc in br.items():
                for c1, lm in mono_mul(left, bm):
                    for c2, full in mono_mul(lm, right):
                        _acc(terms, (full, bp), sign * f * bc * c1 * c2)
        self._mm[key] = terms
        return terms

    def __call__(self, x: Element, y: Element) -> Element:
        terms: dict = {}
        for (m1, p1), c1 in x.terms.items():
            for (m2, p2), c2 in y.terms.items():
                for (m, p), c in self._mono_mono(m1, m2).items():
                    _acc(terms, (m, p + p1 + p2), c * c1 * c2)
        return Element(self.alg, terms)

    def gen(self, g: Gen) -> Element:
        return Element.gen(self.alg, g)


def _parity(g: Gen) -> int:
    return 1 if g.odd else 0


def check_antisymmetry(P: PoissonBracket) -> Optional[tuple]:
    gens = P.alg.gens
    for x in gens:
        for y in gens:
            lhs = P(P.gen(x), P.gen(y))
            rhs = P(P.gen(y), P.gen(x))
            sign = -1 if (x.odd and y.odd) else 1
            if lhs != rhs.scale(-sign):
                return (x, y)
    return None


def check_jacobi(P: PoissonBracket) -> Optional[tuple]:
    """Graded Jacobi on triples of active generators (inactive ones are central)."""
    act = P.active()
    for x, y, z in combinations_with_replacement(act, 3):
        for a, b, c in {(x, y, z), (x, z, y), (y, x, z)}:
            if jacobiator(P, a, b, c):
                return (a, b, c)
    return None


def jacobiator(P: PoissonBracket, x: Gen, y: Gen, z: Gen) -> Element:
    X, Y, Z = P.gen(x), P.gen(y), P.gen(z)
    px, py, pz = _parity(x), _parity(y), _parity(z)
    out = P(X, P(Y, Z)).scale((-1) ** (px * pz))
    out = out + P(Y, P(Z, X)).scale((-1) ** (py * px))
    out = out + P(Z, P(X, Y)).scale((-1) ** (pz * py))
    return out


def check_cochain_map(P: PoissonBracket) -> Optional[tuple]:
    """d{x,y} = {dx,y} + (-1)^|x| {x,dy} on generator pairs, d = del + delta."""
    d = P.level.total
    gens = P.alg.gens
    for x in gens:
        dx = d.on_gen(x)
        for y in gens:
            lhs = d(P(P.gen(x), P.gen(y)))
            rhs = P(dx, P.gen(y)) + P(P.gen(x), d.on_gen(y)).scale(-1 if x.odd else 1)
            if lhs != rhs:
                return (x, y)
    return None


def check_leibniz(P: PoissonBracket, rng: random.Random, count: int = 100, terms: int = 2) -> Optional[tuple]:
    """{x, yz} = {x,y}z + (-1)^{|x||y|} y{x,z} on random homogeneous elements."""
    for _ in range(count):
        x, y, z = (random_homogeneous(P.alg, rng, terms) for _ in range(3))
        lhs = P(x, y * z)
        sign = -1 if (x.parity() and y.parity()) else 1
        rhs = P(x, y) * z + (y * P(x, z)).scale(sign)
        if lhs != rhs:
            return (x, y, z)
    return None


def random_homogeneous(alg: Algebra, rng: random.Random, terms: int = 2, length: int = 2) -> Element:
    """A random element of fixed parity built from short generator products."""
    gens = list(alg.gens)
    out = Element(alg, {})
    if not gens:
        return out
    parity = rng.randrange(2)
    tries = 0
    while len(out.terms) < terms and tries < 50:
        tries += 1
        k = rng.randint(1, length)
        fac = [(rng.choice(gens), 1) for _ in range(k)]
        if sum(1 for g, _ in fac if g.odd) % 2 != parity:
            continue
        out = out + Element.from_factors(alg, fac, rng.randint(-3, 3) or 1)
    return out


def check_simplicial(B: ReducedCDGA, n_max: int = 2, brackets: Optional[dict] = None) -> list:
    """Cofaces and codegeneracies preserve brackets on generator pairs; list of (name, witness)."""
    br = brackets if brackets is not None else {}

    def P(n: int) -> PoissonBracket:
        if n not in br:
            br[n] = PoissonBracket(B, n)
        return br[n]

    out = []
    for n in range(1, n_max + 1):
        for i in range(n + 1):
            out.append((f"d^{i} @{n - 1}->{n}", _preserves(coface(B, i, n), P(n - 1), P(n))))
    for n in range(0, n_max):
        for i in range(n + 1):
            out.append((f"s^{i} @{n + 1}->{n}", _preserves(codegeneracy(B, i, n), P(n + 1), P(n))))
    return out


def _preserves(phi: GradedMap, Ps: PoissonBracket, Pt: PoissonBracket) -> Optional[tuple]:
    gens = Ps.alg.gens
    for x in gens:
        for y in gens:
            lhs = phi(Ps(Ps.gen(x), Ps.gen(y)))
            rhs = Pt(phi.on_gen(x), phi.on_gen(y))
            if lhs != rhs:
                return (x, y)
    return None
