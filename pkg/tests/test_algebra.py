from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import invariant_factors

from stackyquant.algebra import (Algebra, AlgebraError, AmbientMismatch, Derivation, Element, Gen,
                                 GradedMap, apply_morphism, check_anticommute, check_square_zero,
                                 identity_map, normal_form)
from stackyquant.ce import build_ce, sl2_plane
from stackyquant.homology import FreeComplex, NotAComplex, homology, smith_normal_form
from stackyquant.hopf import sl2_lie
from stackyquant.scalars import Scalar

TH1 = Gen("ghost", "ta", index=0)
TH2 = Gen("ghost", "tb", index=1)
A = Gen("coord", "pa", index=0)
Y = Gen("coord", "pb", index=1)
T = Gen("anti", "ant", index=0)
ALG = Algebra([TH1, TH2, A, Y, T])


def el(*factors, c=1, h=0):
    return Element.from_factors(ALG, [(g, 1) for g in factors], c, h)


def test_generator_bidegrees_and_parity():
    assert TH1.bideg == (1, 0) and TH1.odd
    assert A.bideg == (0, 0) and not A.odd
    assert T.bideg == (0, 1) and T.odd and T.total == -1


def test_odd_generators_anticommute():
    assert el(TH2, TH1) == -el(TH1, TH2)
    assert el(T, TH1) == -el(TH1, T)
    assert el(TH1, TH1) == 0
    assert el(T, T) == 0


def test_unit_law():
    x = el(A)
    assert ALG.one() * x == x
    assert x * ALG.one() == x


def test_difference_of_squares_with_hbar():
    x, y = el(A), el(Y)
    hy = y.scale(1, 1)
    assert (x + hy) * (x - hy) == x * x - (y * y).scale(1, 2)


def test_even_plus_odd_square():
    a, t = el(A), el(T)
    assert (a + t) * (a + t) == a * a + (a * t).scale(2)


def test_hbar_is_central_and_even():
    x = el(TH1, h=2)
    assert x.max_hbar() == 2
    assert x.hbar_part(2) == el(TH1)
    assert x.at_hbar(3) == el(TH1, c=9)


def test_json_roundtrip():
    x = el(A, TH1, c=Fraction(-3, 4), h=1) + el(Y)
    assert Element.from_json(ALG, x.to_json()) == x


def test_mismatched_ambients_are_refused():
    other = Algebra([Gen("coord", "zz")])
    with pytest.raises(AmbientMismatch):
        el(A) + Element.gen(other, other.gens[0])


def test_duplicate_generator_redeclaration_is_refused():
    with pytest.raises(AlgebraError):
        Gen("coord", "pa", index=5)


def test_normal_form_is_idempotent():
    x = el(A, TH1) + el(T, Y, c=2)
    assert normal_form(normal_form(x)) == normal_form(x)


# derivations


def _sl2_ce():
    lie = sl2_lie()
    return build_ce(lie, sl2_plane(lie)), lie


def test_ce_delta_of_theta_e():
    ce, lie = _sl2_ce()
    e, h = (ce.alg[b.ghost().name] for b in lie.basis[:2])
    th_e, th_h = Element.gen(ce.alg, e), Element.gen(ce.alg, h)
    assert ce.delta.on_gen(e) == (th_h * th_e).scale(-2)


def test_derivation_kills_unit_and_coordinates():
    ce, _ = _sl2_ce()
    assert ce.d_chain(ce.alg.one()) == 0
    for g in ce.alg.gens:
        if g.kind == "coord":
            assert ce.d_chain.on_gen(g) == 0


def test_square_zero_on_sl2_ce():
    ce, _ = _sl2_ce()
    assert check_square_zero(ce.delta)
    zero = Derivation(ce.alg, {g: ce.alg.zero() for g in ce.alg.gens}, (1, 0))
    assert check_square_zero(zero)


def _corrupted_delta(ce, lie, coeff):
    e, h = (ce.alg[b.ghost().name] for b in lie.basis[:2])
    table = dict(ce.delta.table)
    table[e] = (Element.gen(ce.alg, h) * Element.gen(ce.alg, e)).scale(coeff)
    return Derivation(ce.alg, table, (1, 0)), e


def test_corrupted_delta_fails_square_zero():
    ce, lie = _sl2_ce()
    bad, _ = _corrupted_delta(ce, lie, 1)
    assert not check_square_zero(bad)


def test_corrupted_delta_defect_sits_on_theta_h():
    # delta'^2(theta^e) still vanishes; the defect is (c + 2) theta^e theta^h theta^f on theta^h
    ce, lie = _sl2_ce()
    e, h, f = (ce.alg[b.ghost().name] for b in lie.basis)
    cube = Element.from_factors(ce.alg, [(e, 1), (h, 1), (f, 1)])
    for c in (1, 5, Fraction(-1, 3), -2):
        bad, _ = _corrupted_delta(ce, lie, c)
        assert bad(bad.on_gen(e)) == 0
        assert bad(bad.on_gen(h)) == cube.scale(c + 2)


def test_chain_and_cochain_differentials_anticommute():
    ce, _ = _sl2_ce()
    assert check_anticommute(ce.d_chain, ce.delta)


# morphisms


def test_identity_morphism():
    x = el(A, TH1) + el(T, c=3)
    assert apply_morphism(identity_map(ALG), x) == x


def test_morphism_is_multiplicative():
    tgt = ALG
    phi = GradedMap(ALG, tgt, {TH1: el(TH2), TH2: el(TH1), A: el(Y), Y: el(A), T: el(T)})
    x, y = el(A), el(TH1)
    assert phi(x * y) == phi(x) * phi(y)
    assert phi(el(TH1, TH2)) == -el(TH1, TH2)


def test_morphism_sending_a_generator_to_zero():
    phi = GradedMap(ALG, ALG, {g: (ALG.zero() if g is A else Element.gen(ALG, g)) for g in ALG.gens})
    assert phi(el(A, TH1)) == 0
    assert phi(el(Y)) == el(Y)


monomials = st.lists(st.sampled_from([TH1, TH2, A, Y, T]), min_size=0, max_size=4)


@given(monomials, monomials, monomials)
def test_multiplication_is_associative(m1, m2, m3):
    x, y, z = el(*m1), el(*m2), el(*m3)
    assert (x * y) * z == x * (y * z)


@given(monomials, monomials)
def test_graded_commutativity(m1, m2):
    x, y = el(*m1), el(*m2)
    sign = -1 if (x.parity() and y.parity()) else 1
    if x and y:
        assert x * y == (y * x).scale(sign)


# homology over Q[hbar]


def test_two_term_complex_times_n_hbar():
    for n in (1, -1, 3):
        c = FreeComplex([1, 1], [[[Scalar.hbar(1, n)]]])
        h0, h1 = homology(c)
        assert h0.is_zero()
        assert h1.free_rank == 0 and [t.coeffs for t in h1.torsion] == [Scalar.hbar().coeffs]


def test_zero_differential_gives_the_modules():
    c = FreeComplex([2, 1], [[[0, 0]]])
    assert [h.free_rank for h in homology(c)] == [2, 1]


def test_isomorphism_is_acyclic():
    c = FreeComplex([1, 1], [[[1]]])
    assert all(h.is_zero() for h in homology(c))


def test_not_a_complex_is_rejected():
    with pytest.raises(NotAComplex):
        FreeComplex([1, 1, 1], [[[1]], [[1]]])


X = sympy.symbols("x")
polys = st.lists(st.integers(-3, 3), min_size=1, max_size=3)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_smith_normal_form_against_sympy(r, c, data):
    entries = [[data.draw(polys) for _ in range(c)] for _ in range(r)]
    ours = smith_normal_form([[Scalar(p) for p in row] for row in entries])
    M = sympy.Matrix([[sum(k * X ** i for i, k in enumerate(p)) for p in row] for row in entries])
    theirs = [sympy.Poly(f, X) for f in invariant_factors(M, domain=sympy.QQ[X]) if f != 0]
    assert len(ours) == len(theirs)
    for a, b in zip(ours, theirs):
        mine = [a.monic().coeffs[i] for i in range(len(a.coeffs))]
        ref = b.monic().all_coeffs()[::-1]
        assert mine == [Fraction(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in ref]
