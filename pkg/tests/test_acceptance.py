"""The eight acceptance criteria, each at its stated scale and time limit.

Every test records one PASS/FAIL line, printed in the terminal summary.
Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import time
from fractions import Fraction

import pytest

from stackyquant import suites as S
from stackyquant.graph import catalog, small_catalog
from stackyquant.homology import homology
from stackyquant.quantize import endo_complex_point, gm_weight_object

GROUPS = ("torus:1", "sl2")


def instances(graphs, level=2, bound=2):
    return [S.Instance(g, name, U, level, bound) for g in GROUPS for name, U in graphs.items()]


def failures(records):
    return [r for r in records if r["status"] != "pass"]


def record(acceptance, k, summary, bad, secs, limit=None):
    ok = not bad and (limit is None or secs < limit)
    note = summary if limit is None else f"{summary} (limit {limit:g}s)"
    if bad:
        note += f"; {len(bad)} failing, first: {bad[0]['name']}"
    acceptance[k] = ("PASS" if ok else "FAIL", secs, note)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'} {secs:.2f}s {note}")
    assert not bad, bad[:3]
    if limit is not None:
        assert secs < limit, f"took {secs:.1f}s"


def test_criterion_1_hopf(acceptance):
    t0 = time.perf_counter()
    recs = []
    for spec in ("torus:1", "torus:2", "torus:3", "sl2"):
        recs += S.suite_hopf(S.Instance(spec))
    secs = time.perf_counter() - t0
    assert len(recs) >= 4 * 9
    record(acceptance, 1, "Hopf laws and action brackets, torus ranks 1-3 and SL2", failures(recs), secs, 5)


def test_criterion_2_ce(acceptance):
    t0 = time.perf_counter()
    recs = S.suite_ce_plane()
    for inst in instances(catalog()):
        recs += S.suite_ce(inst)
    secs = time.perf_counter() - t0
    record(acceptance, 2, "delta^2 = 0 for sl2 on Q[x,y] and every graph instance", failures(recs), secs, 5)


def test_criterion_3_resolution(acceptance):
    t0 = time.perf_counter()
    recs = []
    for inst in instances(catalog()):
        recs += S.suite_cosimplicial(inst)
    secs = time.perf_counter() - t0
    names = {r["name"].split(": ", 1)[1] for r in recs}
    # every identity family and both map families appear
    assert any(n.startswith("d^2d^0") for n in names) and any(n.startswith("s^0s^0=s^0s^1") for n in names)
    assert any(n.startswith("s^0d^") for n in names) and any("commutes with del, delta" in n for n in names)
    record(acceptance, 3, f"resolution levels n <= 2, {len(catalog())} graphs x 2 groups", failures(recs), secs, 120)


def test_criterion_4_poisson(acceptance):
    t0 = time.perf_counter()
    recs = []
    for inst in instances(catalog()):
        recs += S.suite_poisson(inst)
    secs = time.perf_counter() - t0
    record(acceptance, 4, "Poisson axioms, cochain map, Leibniz x100, simplicial compatibility",
           failures(recs), secs)


def test_criterion_5_quantization(acceptance):
    t0 = time.perf_counter()
    recs = []
    for inst in instances(catalog()):
        recs += S.suite_quantize(inst, pointing=False)
    secs = time.perf_counter() - t0
    record(acceptance, 5, "d_hbar^2, commutator tables, correspondence, confluence, quantized cofaces",
           failures(recs), secs, 120)


def test_criterion_6_gm_example(acceptance):
    t0 = time.perf_counter()
    weights = [0, 1, -1, 2, 3]
    recs, _ = S.gm_example(weights)
    bad = failures(recs)
    for n in weights:
        groups = homology(endo_complex_point(gm_weight_object(n)))
        nonzero = [h for h in groups if not h.is_zero()]
        if n == 0:
            ok = len(nonzero) == 2 and all(h.free_rank == 1 and not h.torsion for h in nonzero)
        else:
            ok = any(h.free_rank == 0 and [t.coeffs for t in h.torsion] == [(Fraction(0), Fraction(1))]
                     for h in nonzero)
        if not ok:
            bad.append({"name": f"homology shape for weight {n}", "status": "fail"})
    secs = time.perf_counter() - t0
    record(acceptance, 6, "G_m weights 0, +-1, 2, 3: Gauss law, homology, 5 specializations", bad, secs, 5)


def test_criterion_7_pointing(acceptance):
    t0 = time.perf_counter()
    recs = []
    graphs = small_catalog(2, 2)
    for inst in instances(graphs):
        recs += S.pointing_checks(inst)
    secs = time.perf_counter() - t0
    assert any("del^2" in r["name"] for r in recs)
    record(acceptance, 7, f"pointing objects, {len(graphs)} graphs x 2 groups, bound 2", failures(recs), secs, 60)


def test_criterion_8_prefactorization(acceptance):
    t0 = time.perf_counter()
    recs = []
    for g in GROUPS:
        recs += S.suite_prefactorization(S.Instance(g))
    secs = time.perf_counter() - t0
    names = " ".join(r["name"] for r in recs)
    assert "empty tuple" in names and "permutation equivariance" in names and "h(g(f1, id))" in names
    record(acceptance, 8, "empty tuple, 3-deep nesting coherence, permutation equivariance", failures(recs), secs)


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
