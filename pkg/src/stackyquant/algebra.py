"""Bigraded commutative monomial algebras over Q[hbar] with Koszul signs.

Generators are interned ``Gen`` objects carrying a bidegree (cochain i, chain j);
the total degree is i - j and only its parity enters sign rules.  Elements are
finite sums of sorted monomials with exact rational coefficients, where the
central even parameter hbar is tracked as a separate power so that a term is
keyed by ``(monomial, hbar_power)``.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Callable, Iterable, Mapping, Optional

from .scalars import Scalar

KIND_RANK = {"ghost": 0, "coord": 1, "mom": 2, "anti": 3}
KIND_BIDEG = {"ghost": (1, 0), "coord": (0, 0), "mom": (0, 0), "anti": (0, 1)}


class AlgebraError(ValueError):
    pass


class AmbientMismatch(AlgebraError):
    pass


class MissingGenerator(AlgebraError, KeyError):
    pass


def _loc_key(loc) -> tuple:
    if loc is None:
        return (0, "", "")
    return (1, loc[0], loc[1])


class Gen:
    """An interned generator symbol.

    ``kind`` is one of ghost / coord / mom / anti.  ``loc`` places the
    generator on a graph edge or vertex, ``slot`` is the tensor slot
    (h^<k> or theta^<j>), ``index`` orders basis elements, ``inv`` marks
    Laurent generators and ``sl2`` holds the role a/b/c/d for coordinates of
    an SL2 copy.
    """

    __slots__ = ("kind", "label", "loc", "slot", "hat", "index", "inv", "sl2",
                 "bideg", "odd", "name", "key", "_hash", "__weakref__")

    _pool: dict = {}

    def __new__(cls, kind: str, label: str, loc=None, slot: Optional[int] = None,
                hat: bool = False, index: int = 0, inv: bool = False,
                sl2: Optional[str] = None):
        ident = (kind, label, loc, slot, hat)
        got = cls._pool.get(ident)
        if got is not None:
            if (got.index, got.inv, got.sl2) != (index, inv, sl2):
                raise AlgebraError(f"generator {got.name} redeclared with different data")
            return got
        if kind not in KIND_RANK:
            raise AlgebraError(f"unknown generator kind {kind!r}")
        self = object.__new__(cls)
        self.kind = kind
        self.label = label
        self.loc = loc
        self.slot = slot
        self.hat = hat
        self.index = index
        self.inv = inv
        self.sl2 = sl2
        self.bideg = KIND_BIDEG[kind]
        self.odd = (self.bideg[0] - self.bideg[1]) % 2 == 1
        name = ("^" if hat else "") + label
        if slot is not None:
            name += f"<{slot}>"
        if loc is not None:
            name += f"_{loc[1]}"
        self.name = name
        self.key = (KIND_RANK[kind], -1 if slot is None else slot, _loc_key(loc), index, label, hat)
        self._hash = hash(ident)
        cls._pool[ident] = self
        return self

    def __reduce__(self):
        return (Gen, (self.kind, self.label, self.loc, self.slot, self.hat,
                      self.index, self.inv, self.sl2))

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other) -> bool:
        return self is other

    def __lt__(self, other: "Gen") -> bool:
        return self.key < other.key

    def __repr__(self) -> str:
        return self.name

    @property
    def total(self) -> int:
        return self.bideg[0] - self.bideg[1]

    def moved(self, loc=None, slot=None, hat=None, keep_loc=False, keep_slot=False) -> "Gen":
        """Same symbol with a different placement."""
        return Gen(self.kind, self.label,
                   self.loc if keep_loc else loc,
                   self.slot if keep_slot else slot,
                   self.hat if hat is None else hat,
                   self.index, self.inv, self.sl2)

    def with_slot(self, slot: Optional[int]) -> "Gen":
        return Gen(self.kind, self.label, self.loc, slot, self.hat, self.index, self.inv, self.sl2)

    def with_hat(self, hat: bool) -> "Gen":
        return Gen(self.kind, self.label, self.loc, self.slot, hat, self.index, self.inv, self.sl2)

    def sl2_partner(self, role: str) -> "Gen":
        return Gen(self.kind, role, self.loc, self.slot, self.hat, "abcd".index(role), False, role)


# monomials: tuples of (Gen, exponent), sorted by Gen.key

def mono_bideg(m: tuple) -> tuple[int, int]:
    i = j = 0
    for g, e in m:
        i += g.bideg[0] * e
        j += g.bideg[1] * e
    return (i, j)


def mono_odd(m: tuple) -> bool:
    n = 0
    for g, e in m:
        if g.odd:
            n += 1
    return n % 2 == 1


def mono_str(m: tuple) -> str:
    if not m:
        return "1"
    return "*".join(g.name if e == 1 else f"{g.name}^{e}" for g, e in m)


def _merge(m1: tuple, m2: tuple):
    """Product of two sorted monomials before relations: (sign, mono) or None."""
    if not m1:
        return 1, m2
    if not m2:
        return 1, m1
    out = []
    sign = 1
    i = j = 0
    n1, n2 = len(m1), len(m2)
    # odd generators of m1 not yet emitted
    odd_left = sum(1 for g, _ in m1 if g.odd)
    while i < n1 and j < n2:
        g1, e1 = m1[i]
        g2, e2 = m2[j]
        if g1 is g2:
            if g1.odd:
                return None
            e = e1 + e2
            if e:
                out.append((g1, e))
            i += 1
            j += 1
        elif g1.key < g2.key:
            out.append(m1[i])
            if g1.odd:
                odd_left -= 1
            i += 1
        else:
            out.append(m2[j])
            if g2.odd and odd_left % 2:
                sign = -sign
            j += 1
    if i < n1:
        out.extend(m1[i:])
    elif j < n2:
        for g2, e2 in m2[j:]:
            out.append((g2, e2))
    return sign, tuple(out)


def _sl2_reduce(m: tuple) -> Optional[list]:
    """Apply ad -> 1 + bc where some SL2 copy has both a and d; None if reduced."""
    for idx, (g, e) in enumerate(m):
        if g.sl2 != "a":
            continue
        dg = g.sl2_partner("d")
        for jdx in range(idx + 1, len(m)):
            if m[jdx][0] is dg:
                break
        else:
            continue
        ea, ed = e, m[jdx][1]
        k = min(ea, ed)
        rest = []
        for pos, (h, f) in enumerate(m):
            if pos == idx:
                if ea > k:
                    rest.append((h, ea - k))
            elif pos == jdx:
                if ed > k:
                    rest.append((h, ed - k))
            else:
                rest.append((h, f))
        rest = tuple(rest)
        bg, cg = g.sl2_partner("b"), g.sl2_partner("c")
        out = []
        for r in range(k + 1):
            if r == 0:
                out.append((comb(k, 0), rest))
                continue
            bc = ((bg, r), (cg, r))
            _, merged = _merge(rest, bc)
            out.append((comb(k, r), merged))
        return out
    return None


_MUL_CACHE: dict = {}


def mono_mul(m1: tuple, m2: tuple) -> list:
    """Normal-form product of monomials as a list of (coefficient, mono)."""
    key = (m1, m2)
    got = _MUL_CACHE.get(key)
    if got is not None:
        return got
    merged = _merge(m1, m2)
    if merged is None:
        res: list = []
    else:
        sign, m = merged
        res = _normalize_relations(m, sign)
    if len(_MUL_CACHE) > 2_000_000:
        _MUL_CACHE.clear()
    _MUL_CACHE[key] = res
    return res


def _normalize_relations(m: tuple, coeff) -> list:
    red = _sl2_reduce(m)
    if red is None:
        return [(coeff, m)]
    out = []
    for c, mm in red:
        out.extend(_normalize_relations(mm, coeff * c))
    return out


def sort_monomial(factors: Iterable[tuple]) -> list:
    """Normal form of an arbitrary ordered product of (Gen, exponent) factors."""
    res = [(1, ())]
    for g, e in factors:
        if e == 0:
            continue
        if g.odd and e > 1:
            return []
        if e < 0 and not g.inv:
            raise AlgebraError(f"negative power of non-invertible {g.name}")
        nxt = []
        for c, m in res:
            for c2, m2 in mono_mul(m, ((g, e),)):
                nxt.append((c * c2, m2))
        res = nxt
    return res


class Algebra:
    """A commutative bigraded algebra on a finite generator set."""

    mode = "commutative"

    def __init__(self, gens: Iterable[Gen], name: str = ""):
        gens = sorted(set(gens), key=lambda g: g.key)
        names = {}
        for g in gens:
            if g.name in names:
                raise AlgebraError(f"duplicate generator name {g.name}")
            names[g.name] = g
        self.gens = tuple(gens)
        self.genset = frozenset(gens)
        self.by_name = names
        self.name = name

    def __repr__(self) -> str:
        return f"Algebra({self.name or len(self.gens)})"

    def __contains__(self, g: Gen) -> bool:
        return g in self.genset

    def gen(self, name: str) -> "Element":
        return Element.gen(self, self.by_name[name])

    def __getitem__(self, name: str) -> Gen:
        return self.by_name[name]

    def one(self) -> "Element":
        return Element(self, {((), 0): Fraction(1)})

    def zero(self) -> "Element":
        return Element(self, {})

    def scalar(self, c) -> "Element":
        return Element.scalar(self, c)

    def union(self, other: "Algebra", name: str = "") -> "Algebra":
        return Algebra(self.genset | other.genset, name)

    def issubalgebra(self, other: "Algebra") -> bool:
        return self is other or self.genset <= other.genset


_SUB_CACHE: dict = {}


def common_algebra(a: Optional[Algebra], b: Optional[Algebra]) -> Optional[Algebra]:
    """Smallest of the two ambient algebras containing both; None is the scalar ring."""
    if a is b or b is None:
        return a
    if a is None:
        return b
    key = (id(a), id(b))
    got = _SUB_CACHE.get(key)
    if got is not None and got[0] is a and got[1] is b:
        return got[2]
    if a.genset <= b.genset:
        res = b
    elif b.genset <= a.genset:
        res = a
    else:
        raise AmbientMismatch(f"elements of {a} and {b} cannot be combined")
    _SUB_CACHE[key] = (a, b, res)
    return res


def _as_fraction(c) -> Fraction:
    return c if isinstance(c, Fraction) else Fraction(c)


class Element:
    """Finite linear combination of normal-form monomials.

    ``terms`` maps (monomial, hbar_power) to a nonzero Fraction.
    """

    __slots__ = ("alg", "terms")

    def __init__(self, alg: Algebra, terms: Optional[dict] = None):
        self.alg = alg
        self.terms = terms if terms is not None else {}

    # constructors

    @classmethod
    def gen(cls, alg: Algebra, g: Gen, exp: int = 1) -> "Element":
        if g not in alg.genset:
            raise MissingGenerator(f"{g.name} is not a generator of {alg}")
        return cls.from_factors(alg, [(g, exp)])

    @classmethod
    def from_factors(cls, alg: Algebra, factors, coeff=1, hpow: int = 0) -> "Element":
        terms: dict = {}
        c0 = _as_fraction(coeff)
        for c, m in sort_monomial(factors):
            _acc(terms, (m, hpow), c0 * c)
        return cls(alg, terms)

    @classmethod
    def scalar(cls, alg: Algebra, c) -> "Element":
        if isinstance(c, Scalar):
            return cls(alg, {((), p): v for p, v in enumerate(c.coeffs) if v})
        c = _as_fraction(c)
        return cls(alg, {((), 0): c} if c else {})

    @classmethod
    def from_mono(cls, alg: Algebra, mono: tuple, coeff=1, hpow: int = 0) -> "Element":
        c = _as_fraction(coeff)
        return cls(alg, {(mono, hpow): c} if c else {})

    # basic protocol

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.terms == {((), 0): Fraction(other)}
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def copy(self) -> "Element":
        return Element(self.alg, dict(self.terms))

    def coerce(self, alg: Algebra) -> "Element":
        if not self.alg.genset <= alg.genset:
            raise AmbientMismatch(f"{self.alg} is not contained in {alg}")
        return Element(alg, self.terms)

    def _other(self, other) -> "Element":
        if isinstance(other, Element):
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return Element.scalar(self.alg, other)
        raise TypeError(f"cannot combine Element with {type(other).__name__}")

    def __add__(self, other) -> "Element":
        other = self._other(other)
        alg = common_algebra(self.alg, other.alg)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            _acc(terms, k, v)
        return Element(alg, terms)

    __radd__ = __add__

    def __neg__(self) -> "Element":
        return Element(self.alg, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "Element":
        return self + (-self._other(other))

    def __rsub__(self, other) -> "Element":
        return self._other(other) - self

    def scale(self, c, hpow: int = 0) -> "Element":
        """Multiply by the constant c * hbar**hpow."""
        if c == 1:
            if not hpow:
                return self
            return Element(self.alg, {(m, p + hpow): v for (m, p), v in self.terms.items()})
        c = _as_fraction(c)
        if not c:
            return Element(self.alg, {})
        return Element(self.alg, {(m, p + hpow): v * c for (m, p), v in self.terms.items()})

    def __mul__(self, other) -> "Element":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Scalar):
            return self * Element.scalar(self.alg, other)
        if not isinstance(other, Element):
            return NotImplemented
        return multiply(self, other)

    def __rmul__(self, other) -> "Element":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, Scalar):
            return Element.scalar(self.alg, other) * self
        return NotImplemented

    def __pow__(self, n: int) -> "Element":
        if n < 0:
            return self.inverse() ** (-n)
        result = Element.scalar(self.alg, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "Element":
        """Inverse of a single term c*m with m a Laurent monomial."""
        if len(self.terms) != 1:
            raise AlgebraError("only single-term elements are inverted")
        (m, p), c = next(iter(self.terms.items()))
        if p:
            raise AlgebraError("hbar is not invertible")
        for g, e in m:
            if not g.inv:
                raise AlgebraError(f"{g.name} is not invertible")
        inv_m = tuple((g, -e) for g, e in m)
        return Element(self.alg, {(inv_m, 0): 1 / c})

    # inspection

    def monomials(self) -> set:
        return {m for m, _ in self.terms}

    def coeff(self, mono: tuple) -> Scalar:
        powers = {p: v for (m, p), v in self.terms.items() if m == mono}
        if not powers:
            return Scalar()
        return Scalar([powers.get(i, 0) for i in range(max(powers) + 1)])

    def constant(self) -> Scalar:
        return self.coeff(())

    def bidegrees(self) -> set:
        return {mono_bideg(m) for m, _ in self.terms}

    def bidegree(self) -> Optional[tuple[int, int]]:
        """Bidegree of a homogeneous element; None for zero."""
        degs = self.bidegrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise AlgebraError(f"inhomogeneous element with bidegrees {sorted(degs)}")
        return next(iter(degs))

    def total_degree(self) -> Optional[int]:
        bd = self.bidegree()
        return None if bd is None else bd[0] - bd[1]

    def parity(self) -> int:
        """Parity of a homogeneous element (0 for zero)."""
        odd = {mono_odd(m) for m, _ in self.terms}
        if len(odd) > 1:
            raise AlgebraError("element of mixed parity")
        return int(odd.pop()) if odd else 0

    def component(self, bideg: tuple[int, int]) -> "Element":
        return Element(self.alg, {k: v for k, v in self.terms.items() if mono_bideg(k[0]) == bideg})

    def hbar_part(self, p: int) -> "Element":
        """Coefficient of hbar**p, as an hbar-free element."""
        return Element(self.alg, {(m, 0): v for (m, q), v in self.terms.items() if q == p})

    def max_hbar(self) -> int:
        return max((p for _, p in self.terms), default=-1)

    def at_hbar(self, value) -> "Element":
        """Specialize hbar to a rational number."""
        value = _as_fraction(value)
        terms: dict = {}
        for (m, p), v in self.terms.items():
            _acc(terms, (m, 0), v * value ** p)
        return Element(self.alg, terms)

    def gens_used(self) -> set:
        return {g for m, _ in self.terms for g, _ in m}

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (_mono_sort_key(kv[0][0]), kv[0][1]))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (m, p), v in self.sorted_terms():
            c = str(v)
            h = "" if p == 0 else ("hbar*" if p == 1 else f"hbar^{p}*")
            parts.append(f"{c}*{h}{mono_str(m)}")
        return " + ".join(parts)

    def to_json(self) -> list:
        grouped: dict = {}
        for (m, p), v in self.terms.items():
            grouped.setdefault(m, []).append((p, v))
        out = []
        for m in sorted(grouped, key=_mono_sort_key):
            out.append({
                "monomial": [[g.name, e] for g, e in m],
                "coeff": [[p, v.numerator, v.denominator] for p, v in sorted(grouped[m])],
            })
        return out

    @classmethod
    def from_json(cls, alg: Algebra, data: list) -> "Element":
        terms: dict = {}
        for item in data:
            factors = [(alg.by_name[n], e) for n, e in item["monomial"]]
            for p, num, den in item["coeff"]:
                for c, m in sort_monomial(factors):
                    _acc(terms, (m, p), Fraction(num, den) * c)
        return cls(alg, terms)


def _mono_sort_key(m: tuple) -> tuple:
    return tuple((g.key, e) for g, e in m)


def _acc(terms: dict, key, val) -> None:
    if not val:
        return
    got = terms.get(key)
    if got is None:
        terms[key] = val
    else:
        s = got + val
        if s:
            terms[key] = s
        else:
            del terms[key]


def multiply(x: Element, y: Element) -> Element:
    for alg in (x.alg, y.alg):
        if getattr(alg, "mode", "commutative") != "commutative":
            # free-associative ambient: defer to its rewriting system
            return alg.rewriter.mul(x, y)
    alg = common_algebra(x.alg, y.alg)
    terms: dict = {}
    for (m1, p1), c1 in x.terms.items():
        for (m2, p2), c2 in y.terms.items():
            c12 = c1 * c2
            for c, m in mono_mul(m1, m2):
                _acc(terms, (m, p1 + p2), c12 if c == 1 else (-c12 if c == -1 else c12 * c))
    return Element(alg, terms)


def normal_form(x: Element) -> Element:
    """Re-sort every monomial of x; a no-op on elements built through this module."""
    if x.alg.mode != "commutative":
        raise AlgebraError("free-associative elements use quantize.nc_normal_form")
    terms: dict = {}
    for (m, p), c in x.terms.items():
        for c2, m2 in sort_monomial(m):
            _acc(terms, (m2, p), c * c2)
    return Element(x.alg, terms)


def product(alg: Algebra, elems: Iterable[Element]) -> Element:
    res = alg.one()
    for e in elems:
        res = res * e
    return res


class Derivation:
    """A derivation of fixed bidegree given by its values on generators."""

    def __init__(self, alg: Algebra, table: Mapping[Gen, Element], bideg: Optional[tuple[int, int]],
                 target: Optional[Algebra] = None, name: str = "", odd: Optional[bool] = None):
        # bideg None means a sum of components (e.g. d = del + delta); parity is then explicit
        self.alg = alg
        self.target = target or alg
        self.table = dict(table)
        self.bideg = tuple(bideg) if bideg is not None else None
        self.odd = odd if bideg is None else (self.bideg[0] - self.bideg[1]) % 2 == 1
        self.name = name
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"Derivation({self.name or '?'}, bideg={self.bideg})"

    def on_gen(self, g: Gen) -> Element:
        try:
            return self.table[g]
        except KeyError:
            raise MissingGenerator(f"derivation {self.name or ''} has no value on {g.name}") from None

    def on_mono(self, m: tuple) -> Element:
        got = self._cache.get(m)
        if got is not None:
            return got
        tgt = self.target
        terms: dict = {}
        odd_before = 0
        for idx, (g, e) in enumerate(m):
            dg = self.on_gen(g)
            if dg.terms:
                sign = -1 if (self.odd and odd_before % 2) else 1
                left = m[:idx] + (((g, e - 1),) if e != 1 else ())
                right = m[idx + 1:]
                coef = sign * e
                for (dm, dp), dc in dg.terms.items():
                    for c1, lm in mono_mul(left, dm):
                        for c2, full in mono_mul(lm, right):
                            _acc(terms, (full, dp), coef * dc * c1 * c2)
            if g.odd:
                odd_before += 1
        res = Element(tgt, terms)
        self._cache[m] = res
        return res

    def __call__(self, x: Element) -> Element:
        terms: dict = {}
        for (m, p), c in x.terms.items():
            for (m2, p2), c2 in self.on_mono(m).terms.items():
                _acc(terms, (m2, p + p2), c * c2)
        return Element(self.target if self.target is not None else x.alg, terms)

    def __add__(self, other: "Derivation") -> "Derivation":
        if other.odd != self.odd:
            raise AlgebraError("sum of derivations of different parity")
        table = dict(self.table)
        for g, v in other.table.items():
            table[g] = table[g] + v if g in table else v
        bideg = self.bideg if self.bideg == other.bideg else None
        return Derivation(self.alg, table, bideg, self.target, f"{self.name}+{other.name}", self.odd)


class LazyDerivation(Derivation):
    """Derivation whose generator values come from a function, computed on demand."""

    def __init__(self, fn: Callable[[Gen], Element], bideg: tuple[int, int], alg: Algebra,
                 name: str = ""):
        super().__init__(alg, {}, bideg, alg, name)
        self.fn = fn

    def on_gen(self, g: Gen) -> Element:
        got = self.table.get(g)
        if got is None:
            got = self.fn(g)
            self.table[g] = got
        return got


def apply_derivation(D: Derivation, x: Element) -> Element:
    return D(x)


def check_square_zero(D: Derivation, witness: bool = False):
    """True iff D(D(g)) = 0 on every generator; D must be odd."""
    if not D.odd:
        raise AlgebraError("square-zero check on generators needs an odd derivation")
    for g in D.alg.gens:
        val = D(D.on_gen(g))
        if val:
            return (False, g, val) if witness else False
    return (True, None, None) if witness else True


def check_anticommute(D1: Derivation, D2: Derivation, witness: bool = False):
    """True iff D1 D2 + D2 D1 vanishes on every generator; both must be odd."""
    if not (D1.odd and D2.odd):
        raise AlgebraError("anticommutation check on generators needs odd derivations")
    for g in D1.alg.gens:
        val = D1(D2.on_gen(g)) + D2(D1.on_gen(g))
        if val:
            return (False, g, val) if witness else False
    return (True, None, None) if witness else True


class GradedMap:
    """Algebra morphism given on generators, extended multiplicatively."""

    def __init__(self, source: Algebra, target: Algebra, table: Mapping[Gen, Element], name: str = ""):
        self.source = source
        self.target = target
        self.table = dict(table)
        self.name = name
        self._cache: dict = {}

    def __repr__(self) -> str:
        return f"GradedMap({self.name or '?'})"

    def on_gen(self, g: Gen) -> Element:
        try:
            return self.table[g]
        except KeyError:
            raise MissingGenerator(f"map {self.name or ''} has no value on {g.name}") from None

    def on_mono(self, m: tuple) -> Element:
        got = self._cache.get(m)
        if got is not None:
            return got
        res = Element.scalar(self.target, 1)
        for g, e in m:
            img = self.on_gen(g)
            if e < 0:
                img = img.inverse()
                e = -e
            res = res * (img ** e if e != 1 else img)
            if not res:
                break
        res = Element(self.target, res.terms)
        self._cache[m] = res
        return res

    def __call__(self, x: Element) -> Element:
        terms: dict = {}
        for (m, p), c in x.terms.items():
            for (m2, p2), c2 in self.on_mono(m).terms.items():
                _acc(terms, (m2, p + p2), c * c2)
        return Element(self.target, terms)

    def compose(self, first: "GradedMap") -> "GradedMap":
        """self after first."""
        table = {g: self(img) for g, img in first.table.items()}
        return GradedMap(first.source, self.target, table, f"{self.name}.{first.name}")

    def preserves_bidegree(self) -> tuple[bool, Optional[Gen]]:
        for g, img in self.table.items():
            if img and img.bidegrees() != {g.bideg}:
                return False, g
        return True, None


def apply_morphism(phi: GradedMap, x: Element) -> Element:
    return phi(x)


def identity_map(alg: Algebra) -> GradedMap:
    return GradedMap(alg, alg, {g: Element.gen(alg, g) for g in alg.gens}, "id")


def derivation_from_function(alg: Algebra, fn: Callable[[Gen], Element], bideg, name: str = "",
                             target: Optional[Algebra] = None) -> Derivation:
    return Derivation(alg, {g: fn(g) for g in alg.gens}, bideg, target, name)
