import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from stackyquant.algebra import Element
from stackyquant.graph import GaugeTheory, catalog
from stackyquant.homology import homology
from stackyquant.hopf import group_from_spec
from stackyquant.quantize import (QuantizedAlgebra, build_pointing, check_confluence, check_correspondence,
                                  check_d_by_commutator, check_d_respects_relations, check_homology_by_specialization,
                                  check_quantized_map, check_relations_by_operators, check_square_zero_q,
                                  del_from_d_hbar, endo_complex_point, endo_homology_point,
                                  gm_weight_object, quantized_codegeneracy, quantized_coface, random_word,
                                  report_ok, validate_morphism, validate_triple)

CAT = catalog()


def theory(graph="edge", group="torus:1"):
    return GaugeTheory(CAT[graph], group_from_spec(group))


EDGE = theory()
Q0 = QuantizedAlgebra(EDGE.bracket(0))


def hat(Q, name):
    return Q.alg["^" + name]


# rewriting


def test_antighost_ghost_relation():
    tv, th = hat(Q0, "t_v1"), hat(Q0, "theta<0>_v1")
    got = Q0.word([(tv, 1), (th, 1)])
    assert got == -Q0.word([(th, 1), (tv, 1)]) - Q0.alg.one().scale(1, 1)


def test_momentum_coordinate_relation():
    te, xe = hat(Q0, "t_e1"), hat(Q0, "x_e1")
    got = Q0.word([(te, 1), (xe, 1)])
    assert got == Q0.word([(xe, 1), (te, 1)]) + Q0.gen(xe).scale(1, 1)


def test_normal_words_are_fixed():
    word = ((hat(Q0, "theta<0>_v1"), 1), (hat(Q0, "x_e1"), 2), (hat(Q0, "t_e1"), 1), (hat(Q0, "t_v2"), 1))
    assert Q0.word_nf(word) == {(word, 0): 1}


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_normal_form_is_idempotent(seed):
    Q = QuantizedAlgebra(theory("edge", "sl2").bracket(1))
    w = Q.word(random_word(Q, random.Random(seed), 5))
    assert Q.nf(w) == w


@pytest.mark.parametrize("group", ["torus:1", "sl2"])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_rewriting_is_confluent(group, n):
    Q = QuantizedAlgebra(theory("edge", group).bracket(n))
    assert check_confluence(Q, random.Random(n), count=30) is None


# quantized differential


def test_d_hbar_examples():
    # -1/2 f^e_bc theta^b theta^c = -2 theta^h theta^e = 2 theta^e theta^h
    Q = QuantizedAlgebra(theory("edge", "sl2").bracket(0))
    e, h = hat(Q, "theta_e<0>_v1"), hat(Q, "theta_h<0>_v1")
    assert Q.d(Q.gen(e)) == Q.word([(e, 1), (h, 1)]).scale(2)
    assert Q0.d(Q0.gen(hat(Q0, "t_v1"))) == -Q0.gen(hat(Q0, "t_e1"))
    assert Q0.d(Q0.alg.one()) == 0


@pytest.mark.parametrize("group", ["torus:1", "sl2"])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_d_hbar_squares_to_zero_and_respects_relations(group, n):
    Q = QuantizedAlgebra(theory("edge", group).bracket(n))
    assert check_square_zero_q(Q) is None
    assert check_d_respects_relations(Q) is None


@pytest.mark.parametrize("group", ["torus:1", "sl2"])
def test_commutator_oracle_agrees_with_table(group):
    Q = QuantizedAlgebra(theory("edge", group).bracket(1))
    assert check_d_by_commutator(Q, random.Random(3), count=10) is None


# classical limit


def test_classical_limit_examples():
    xe = hat(Q0, "x_e1")
    assert Q0.classical_limit(Q0.gen(xe)) == Element.gen(Q0.classical, Q0.classical["x_e1"])
    assert Q0.classical_limit(Q0.gen(xe).scale(5, 1)) == 0


@pytest.mark.parametrize("group", ["torus:1", "sl2"])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_correspondence_principle(group, n):
    assert check_correspondence(QuantizedAlgebra(theory("edge", group).bracket(n))) is None


# the operator realization is an independent oracle for the relations


def test_operator_table_agrees():
    Q = QuantizedAlgebra(theory("edge", "sl2").bracket(0))
    assert check_relations_by_operators(Q, random.Random(0)) is None


def test_mutated_relation_is_caught_by_operators():
    Q = QuantizedAlgebra(EDGE.bracket(0))
    key = (hat(Q, "t_e1"), hat(Q, "x_e1"))
    Q.rel[key] = Q.rel[key].scale(2)
    assert check_relations_by_operators(Q, random.Random(0)) is not None


# quantized cosimplicial maps


def _qs(T, top):
    return {n: QuantizedAlgebra(T.bracket(n)) for n in range(top + 1)}


def test_quantized_coface_keeps_momenta():
    Qs = _qs(EDGE, 1)
    F = quantized_coface(EDGE.B, 0, 1, Qs)
    assert F.on_gen(hat(Qs[0], "t_e1")) == Qs[1].gen(hat(Qs[1], "t_e1"))


@pytest.mark.parametrize("group", ["torus:1", "sl2"])
def test_quantized_maps_are_compatible(group):
    T = theory("edge", group)
    Qs = _qs(T, 2)
    maps = [quantized_coface(T.B, i, n, Qs) for n in (1, 2) for i in range(n + 1)]
    maps += [quantized_codegeneracy(T.B, i, n, Qs) for n in (0, 1) for i in range(n + 1)]
    for F in maps:
        assert all(w is None for w in check_quantized_map(F).values()), check_quantized_map(F)


def test_quantized_identity_d1_d0():
    Qs = _qs(EDGE, 2)
    for g in Qs[0].alg.gens:
        lhs = quantized_coface(EDGE.B, 1, 2, Qs)(quantized_coface(EDGE.B, 0, 1, Qs).on_gen(g))
        rhs = quantized_coface(EDGE.B, 0, 2, Qs)(quantized_coface(EDGE.B, 0, 1, Qs).on_gen(g))
        assert lhs == rhs


def test_quantized_s0_d0_is_identity():
    Qs = _qs(EDGE, 1)
    for g in Qs[0].alg.gens:
        assert quantized_codegeneracy(EDGE.B, 0, 0, Qs)(quantized_coface(EDGE.B, 0, 1, Qs).on_gen(g)) == Qs[0].gen(g)


# per_hbar triples


def test_weight_object_passes():
    for n in (0, 1, -1, 2, 3):
        assert report_ok(validate_triple(gm_weight_object(n)))


def test_doubled_psi_breaks_the_gauss_law():
    (bad,) = [r for r in validate_triple(gm_weight_object(3, psi_scale=2)) if r["status"] != "pass"]
    assert bad["condition"].startswith("Gauss law")
    assert bad["witness"]["basis"] == "'s'"
    assert bad["witness"]["defect"] == {"'s'": "3*hbar*1"}


def test_zero_module_passes():
    T = gm_weight_object(0)
    zero = type(T)(space=T.space, basis=[], degrees=[], d={}, nabla={}, psi={t: {} for t in T.psi},
                   coaction={}, name="0")
    assert report_ok(validate_triple(zero))


def _unit_map(T, c=1, hp=0):
    one = T.space.A.one()
    return {k: {k: one.scale(c, hp)} for k in range(T.rank)}


def test_morphism_examples():
    T1, T2 = gm_weight_object(1), gm_weight_object(2)
    assert report_ok(validate_morphism(_unit_map(T1), 0, T1, T1))
    assert report_ok(validate_morphism(_unit_map(T1, 1, 1), 0, T1, T1))
    failed = {r["condition"] for r in validate_morphism(_unit_map(T1), 0, T1, T2) if r["status"] != "pass"}
    assert "coaction" in failed


def test_morphism_of_wrong_degree_is_rejected():
    T1 = gm_weight_object(1)
    with pytest.raises(ValueError):
        validate_morphism({0: {0: T1.space.A.one()}}, 1, T1, T1)


# pointing objects


def test_pointing_differential_examples():
    P = build_pointing(EDGE.B, 2, Q0)
    tv1, tv2, te = (hat(Q0, n) for n in ("t_v1", "t_v2", "t_e1"))
    k = P.basis.index(((tv1, 1),))
    assert {P.basis[i]: str(v) for i, v in P.d[k].items()} == {((te, 1),): "-1*1"}
    assert P.d.get(P.basis.index(()), {}) == {}
    k2 = P.basis.index(((tv1, 1), (tv2, 1)))
    assert {P.basis[i]: str(v) for i, v in P.d[k2].items()} == {((te, 1), (tv2, 1)): "-1*1",
                                                                ((te, 1), (tv1, 1)): "-1*1"}
    assert P.apply_d(P.apply_d(P.unit(k2))) == {}


@pytest.mark.parametrize("group", ["torus:1", "sl2"])
def test_pointing_object_is_valid(group):
    T = theory("edge", group)
    Q = QuantizedAlgebra(T.bracket(0))
    P = build_pointing(T.B, 2, Q)
    assert report_ok(validate_triple(P))
    assert del_from_d_hbar(T.B, P, Q) == P.d


# endomorphism homology at a point


def test_homology_shapes():
    assert [h.describe() for h in endo_homology_point(0)] == ["Q[hbar]", "Q[hbar]", "0"]
    assert [h.describe() for h in endo_homology_point(3)] == ["0", "Q[hbar]/(1*hbar)", "0"]
    assert [h.describe() for h in endo_homology_point(-1)] == [h.describe() for h in endo_homology_point(1)]


@pytest.mark.parametrize("n", [0, 1, -1, 2, 3])
def test_homology_against_specialization(n):
    c = endo_complex_point(gm_weight_object(n))
    values = [Fraction(1, 3), Fraction(-2), Fraction(5, 7), Fraction(11), Fraction(-3, 4)]
    assert check_homology_by_specialization(c, homology(c), values) is None
