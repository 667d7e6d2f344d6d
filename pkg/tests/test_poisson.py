import random

import pytest
from hypothesis import given, settings, strategies as st

from stackyquant.algebra import Algebra, Element, Gen
from stackyquant.graph import GaugeTheory, catalog
from stackyquant.hopf import HopfAlgebra, group_from_spec
from stackyquant.poisson import (AffineGSpace, FrameError, PoissonBracket, build_reduced, check_antisymmetry,
                                 check_cochain_map, check_jacobi, check_leibniz, check_moment_equivariance,
                                 check_simplicial, moment_map, random_homogeneous)
from stackyquant.quantize import QuantizedAlgebra, check_d_respects_relations, check_square_zero_q, point_space

CAT = catalog()


def theory(graph, group="torus:1"):
    return GaugeTheory(CAT[graph], group_from_spec(group))


def gen_el(alg, name):
    return Element.gen(alg, alg[name])


# moment maps


def test_one_edge_moment_map():
    T = theory("edge")
    alg = T.moment(0, "v1").alg
    assert T.moment(0, "v1") == -gen_el(alg, "t_e1")
    assert T.moment(0, "v2") == gen_el(alg, "t_e1")


def test_self_loop_moment_vanishes():
    T = theory("loop")
    assert T.moment(0, T.U.vertices[0]) == 0


@pytest.mark.parametrize("group", ["torus:1", "torus:2", "sl2"])
@pytest.mark.parametrize("graph", ["edge", "loop", "multi-edge", "triangle"])
def test_frame_moment_agrees_with_gauss_law(graph, group):
    # the frame expansion and the two-term lattice formula are independent routes
    T = theory(graph, group)
    for v in T.U.vertices:
        for b in range(T.H.dim):
            assert T.moment(b, v).to_json() == Element(T.moment(b, v).alg, T.gauge_moment(b, v).terms).to_json()


def test_trivial_action_has_zero_moment():
    assert moment_map(point_space(HopfAlgebra("torus", 1)), 0) == 0


def test_no_group_gives_zero_differential():
    x, v = Gen("coord", "q", index=0), Gen("mom", "dq", index=0)
    space = AffineGSpace([x], [v], {(v, x): Algebra([x]).one()}, {}, None, {}, {})
    B = build_reduced(space)
    assert [g.name for g in B.gens] == ["q", "dq"]
    assert all(not B.d[g] for g in B.gens)


def test_point_has_closed_antighost():
    B = build_reduced(point_space(HopfAlgebra("torus", 1)))
    (t,) = [g for g in B.gens if g.kind == "anti"]
    assert B.d[t] == 0


def test_nonlinear_frame_is_rejected():
    x, v = Gen("coord", "q", index=0), Gen("mom", "dq", index=0)
    X = Element.gen(Algebra([x]), x)
    with pytest.raises(FrameError):
        AffineGSpace([x], [v], {(v, x): X * X}, {}, None, {}, {})


@pytest.mark.parametrize("group", ["torus:1", "sl2"])
def test_moment_map_is_equivariant(group):
    assert check_moment_equivariance(theory("triangle", group).B) is None


# brackets at level 0


def test_momentum_acts_on_edge_coordinate():
    T = theory("edge")
    alg = T.level(0).alg
    assert T.bracket(0).gen_bracket(alg["t_e1"], alg["x_e1"]) == gen_el(alg, "x_e1")


def test_antighost_ghost_pairing():
    T = theory("edge")
    alg = T.level(0).alg
    P = T.bracket(0)
    assert P.gen_bracket(alg["t_v1"], alg["theta<0>_v1"]) == -alg.one()
    assert P.gen_bracket(alg["t_v1"], alg["theta<0>_v2"]) == 0


def test_abelian_level_one_antipode_chain_collapses():
    T = theory("edge")
    alg = T.level(1).alg
    assert T.bracket(1).gen_bracket(alg["t_v1"], alg["theta<1>_v1"]) == -alg.one()


@pytest.mark.parametrize("group", ["torus:1", "sl2"])
@pytest.mark.parametrize("graph", ["edge", "loop", "multi-edge"])
def test_level_zero_matches_lattice_table(graph, group):
    T = theory(graph, group)
    P = T.bracket(0)
    gens = P.alg.gens
    for x in gens:
        for y in gens:
            assert P.gen_bracket(x, y) == T.lattice_bracket(x, y), (x.name, y.name)


# Poisson axioms


@pytest.mark.parametrize("group", ["torus:1", "sl2"])
@pytest.mark.parametrize("n", [0, 1, 2])
def test_poisson_axioms_on_generators(group, n):
    P = theory("edge", group).bracket(n)
    assert check_antisymmetry(P) is None
    assert check_jacobi(P) is None
    assert check_cochain_map(P) is None
    assert check_leibniz(P, random.Random(n), count=30) is None


@pytest.mark.parametrize("group", ["torus:1", "sl2"])
def test_brackets_are_simplicial(group):
    results = check_simplicial(theory("edge", group).B, 2)
    assert [name for name, wit in results if wit is not None] == []


SL2_EDGE = theory("edge", "sl2")


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 2))
def test_antisymmetry_on_random_elements(seed, n):
    P = SL2_EDGE.bracket(n)
    rng = random.Random(seed)
    x, y = random_homogeneous(P.alg, rng), random_homogeneous(P.alg, rng)
    sign = -1 if (x.parity() and y.parity()) else 1
    assert P(x, y) == P(y, x).scale(-sign)


# the leg-order reading of the level-n antighost/ghost bracket


def test_descending_legs_respect_the_relations():
    T = theory("edge", "sl2")
    for n in (1, 2):
        Q = QuantizedAlgebra(PoissonBracket(T.B, n, "descending"))
        assert check_d_respects_relations(Q) is None


def test_other_leg_orders_break_the_relations():
    T = theory("edge", "sl2")
    assert check_d_respects_relations(QuantizedAlgebra(PoissonBracket(T.B, 2, "ascending"))) is not None
    assert check_d_respects_relations(QuantizedAlgebra(PoissonBracket(T.B, 1, "no-antipode"))) is not None


def test_square_zero_does_not_pick_the_leg_order():
    T = theory("edge", "sl2")
    for legs in ("ascending", "no-antipode"):
        assert check_square_zero_q(QuantizedAlgebra(PoissonBracket(T.B, 2, legs))) is None


def test_unknown_leg_order():
    with pytest.raises(ValueError):
        PoissonBracket(theory("edge").B, 1, "sideways")
