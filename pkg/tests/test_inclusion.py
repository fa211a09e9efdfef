import json

import numpy as np
import pytest

from wzwfusion.affine import AffineWeight, AlgebraLabel
from wzwfusion.inclusion import (
    ConformalInclusion,
    automorphism_orbits,
    builtin_inclusion,
    exponents,
    inclusion_from_json,
    inclusion_to_json,
    kw_inequality_check,
    kw_scan,
    label_disjoint,
    solve_branching,
    trivial_inclusion,
    verify_branching,
)
from wzwfusion.modular import modular_data, s_matrix_suNk


def P(N, k, *parts):
    return AffineWeight.from_partition(N, k, parts)


def D(N, k, *dynkin):
    return AffineWeight(N, k, dynkin)


def rows(incl):
    return {lab: set(incl.row(lab)) for lab in incl.amb.labels}


def test_e6_table_is_the_published_decomposition():
    incl = builtin_inclusion("su3_9_in_e6")
    r = rows(incl)
    assert r["0"] == {P(3, 9, *p) for p in [(0, 0), (9, 0), (9, 9), (8, 4), (5, 1), (5, 4)]}
    assert r["1"] == r["2"] == {P(3, 9, *p) for p in [(4, 2), (7, 2), (7, 5)]}
    assert set(incl.b.ravel()) == {0, 1}


def test_e6_table_agrees_with_solver():
    from wzwfusion.inclusion import _solved

    assert np.array_equal(_solved("su3_9_in_e6").b, builtin_inclusion("su3_9_in_e6").b)


def test_solved_small_inclusions():
    so8 = rows(builtin_inclusion("su3_3_in_so8"))
    assert so8["1"] == {D(3, 3, 0, 0), D(3, 3, 3, 0), D(3, 3, 0, 3)}
    assert so8["v"] == so8["s"] == so8["c"] == {D(3, 3, 1, 1)}

    su6 = rows(builtin_inclusion("su4_2_in_su6"))
    assert su6["0"] == {D(4, 2, 0, 0, 0), D(4, 2, 0, 2, 0)}
    assert su6["1"] == su6["5"] == {D(4, 2, 0, 1, 0)}
    assert su6["2"] == su6["4"] == {D(4, 2, 1, 0, 1)}
    assert su6["3"] == {D(4, 2, 0, 0, 2), D(4, 2, 2, 0, 0)}


def test_series_vacuum_rows():
    assert rows(builtin_inclusion("series_b_2"))["0"] == {D(2, 4, 0), D(2, 4, 4)}
    assert rows(builtin_inclusion("series_b_3"))["0"] == {D(3, 5, 0, 0), D(3, 5, 2, 2)}
    assert rows(builtin_inclusion("series_a_4"))["0"] == {D(4, 2, 0, 0, 0), D(4, 2, 0, 2, 0)}
    assert rows(builtin_inclusion("series_a_5"))["0"] == {D(5, 3, 0, 0, 0, 0), D(5, 3, 0, 1, 1, 0)}


@pytest.mark.parametrize("name", ["su3_3_in_so8", "su4_2_in_su6", "su3_9_in_e6", "series_b_2", "series_a_5",
                                  "product_2_3"])
def test_builtins_verify(name):
    report = verify_branching(builtin_inclusion(name))
    assert report.passed, [c.name for c in report.checks if not c.passed]
    assert report["S-intertwining"].max_deviation < 1e-8


def test_row_dimensions_match_index():
    # sum_lam b_{0 lam} d_lam: the index of the inclusion
    incl = builtin_inclusion("su3_9_in_e6")
    dims = incl.b @ incl.sub.quantum_dims
    assert np.allclose(dims, dims[0])
    assert dims[0] == pytest.approx(1 / incl.sub.S[0, 0].real * incl.amb.S[0, 0].real)


def test_unknown_name():
    with pytest.raises(KeyError):
        builtin_inclusion("su2_10_in_sp4")
    with pytest.raises(KeyError):
        builtin_inclusion("series_a_3")


def test_example2_violation():
    incl = builtin_inclusion("su3_3_in_so8")
    adj = D(3, 3, 1, 1)
    hits = [v for v in kw_scan(incl) if (v.i, v.lam, v.j, v.mu) == ("v", adj, "v", adj)]
    assert len(hits) == 1
    assert abs(hits[0].value - (-0.25)) < 1e-9


def test_example3_violation():
    incl = builtin_inclusion("su4_2_in_su6")
    mu = P(4, 2, 1, 1, 0)
    assert incl.multiplicity("1", mu) == 1
    hits = [v for v in kw_scan(incl) if (v.i, v.lam, v.j, v.mu) == ("1", mu, "1", mu)]
    assert len(hits) == 1
    assert abs(hits[0].value - np.exp(-2j * np.pi / 6) / 6) < 1e-9


def test_e6_violations_exist():
    violations = kw_scan(builtin_inclusion("su3_9_in_e6"))
    assert violations
    for v in violations[:20]:
        assert v.value.real < -1e-9 or abs(v.value.imag) > 1e-9


def test_kw_holds_for_trivial_inclusion():
    assert kw_scan(trivial_inclusion(s_matrix_suNk(3, 2))) == []


@pytest.mark.parametrize("name,triples", [("su3_3_in_so8", 400), ("su4_2_in_su6", 600), ("su3_9_in_e6", 9075)])
def test_inequality(name, triples):
    report = kw_inequality_check(builtin_inclusion(name))
    assert report.passed
    assert report.results["triples"] == triples
    assert report.results["failures"] == 0
    assert report.results["strict"] + report.results["equalities"] == triples


def test_inequality_detects_broken_branching():
    incl = builtin_inclusion("su3_3_in_so8")
    b = incl.b.copy()
    b[1, incl.sub.index(D(3, 3, 1, 1))] = 3
    assert not kw_inequality_check(incl.with_matrix(b)).passed


def test_disjointness_and_exponents():
    e6 = builtin_inclusion("su3_9_in_e6")
    assert not label_disjoint(e6)
    assert label_disjoint(trivial_inclusion(modular_data("so8@1")))
    ex = exponents(builtin_inclusion("su3_3_in_so8"))
    assert ex[(D(3, 3, 1, 1), "v")] == 1
    assert sum(ex.values()) == 6


def test_fault_injection():
    incl = builtin_inclusion("su3_9_in_e6")
    b = incl.b.copy()
    b[1] = 0
    report = verify_branching(incl.with_matrix(b))
    assert not report["S-intertwining"].passed
    b = incl.b.copy()
    b[0, incl.sub.index(P(3, 9, 4, 2))] = 1  # h = 4/3 next to the vacuum
    report = verify_branching(incl.with_matrix(b))
    assert not report["h-integrality"].passed


def test_shape_validation():
    incl = builtin_inclusion("su3_3_in_so8")
    with pytest.raises(ValueError):
        ConformalInclusion("bad", incl.sub, incl.amb, np.zeros((3, 3), dtype=int))


def test_json_round_trip():
    for name in ["su3_9_in_e6", "product_2_3"]:
        incl = builtin_inclusion(name)
        doc = inclusion_to_json(incl)
        back = inclusion_from_json(json.dumps(doc))
        assert back.name == incl.name
        assert np.array_equal(back.b, incl.b)
        assert back.sub.labels == incl.sub.labels
    doc["version"] = 99
    with pytest.raises(ValueError):
        inclusion_from_json(doc)


def test_solver_on_trivial_embedding():
    data = modular_data("so8@1")
    candidates = solve_branching(data, data)
    # every triality permutation is an intertwiner; they form one relabeling orbit
    assert len(candidates) == 6
    assert any(np.array_equal(c, np.eye(4, dtype=int)) for c in candidates)
    assert len(automorphism_orbits(data, candidates)) == 1


def test_solver_rejects_impossible_pair():
    # su(2)_1 is not conformally included in su(3)_1 (different central charge)
    sub = modular_data(AlgebraLabel.su1(2))
    amb = modular_data(AlgebraLabel.su1(3))
    assert solve_branching(sub, amb) == []
