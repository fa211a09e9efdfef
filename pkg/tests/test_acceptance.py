"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]`` / ``[FAIL]`` line (shown even without
``-s``) and then asserts.  Caches are cleared first so timings are cold.
"""
import time

import numpy as np
import pytest

from wzwfusion import inclusion, levelrank, modular
from wzwfusion.affine import AffineWeight
from wzwfusion.fusion import dim_identity_check, fusion_table, quantum_dim, verify_fusion
from wzwfusion.inclusion import builtin_inclusion, kw_inequality_check, kw_scan, verify_branching
from wzwfusion.modular import modular_data, s_matrix_suNk, verify_modular


@pytest.fixture
def announce(capsys):
    def _announce(number, text, ok, elapsed=None):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {text}"
        if elapsed is not None:
            line += f" ({elapsed:.2f} s)"
        with capsys.disabled():
            print("\n" + line)
        assert ok, line

    return _announce


def cold():
    modular._suNk.cache_clear()
    modular._level1.cache_clear()
    inclusion._solved.cache_clear()
    return time.perf_counter()


def test_criterion_1_so8_counterexample(announce):
    t0 = cold()
    adj = AffineWeight(3, 3, (1, 1))
    s_aa = s_matrix_suNk(3, 3).s(adj, adj)
    s_vv = modular_data("so8@1").s("v", "v")
    violations = kw_scan(builtin_inclusion("su3_3_in_so8"))
    hit = any(abs(v.value - (-0.25)) < 1e-9 for v in violations)
    elapsed = time.perf_counter() - t0
    ok = abs(s_aa + 0.5) < 1e-9 and abs(s_vv - 0.5) < 1e-9 and hit and elapsed < 1.0
    announce(1, f"S_aa = {s_aa.real:.12g}, S_vv = {s_vv.real:.12g}, violation -0.25 found: {hit}", ok, elapsed)


def test_criterion_2_su6_counterexample(announce):
    t0 = cold()
    mu = AffineWeight.from_partition(4, 2, (1, 1, 0))
    s_mm = s_matrix_suNk(4, 2).s(mu, mu)
    s_ww = modular_data("su6@1").s("1", "1")
    target = np.exp(-2j * np.pi / 6) / 6
    violations = kw_scan(builtin_inclusion("su4_2_in_su6"))
    hit = any(abs(v.value - target) < 1e-9 for v in violations)
    elapsed = time.perf_counter() - t0
    ok = (abs(s_mm - 1 / np.sqrt(6)) < 1e-9 and abs(s_ww - np.exp(2j * np.pi / 6) / np.sqrt(6)) < 1e-9
          and hit and elapsed < 1.0)
    announce(2, f"S_mumu = 1/sqrt6, S_ww = exp(2 pi i/6)/sqrt6, violation exp(-2 pi i/6)/6 found: {hit}", ok, elapsed)


def test_criterion_3_e6_counterexample(announce):
    t0 = cold()
    incl = builtin_inclusion("su3_9_in_e6")
    report = verify_branching(incl)
    violations = kw_scan(incl)
    elapsed = time.perf_counter() - t0
    residual = report["S-intertwining"].max_deviation
    ok = (report.passed and residual < 1e-8 and report["h-integrality"].passed and len(violations) > 0
          and elapsed < 5.0)
    announce(3, f"su3_9_in_e6 verifies (residual {residual:.1e}), {len(violations)} KW violations", ok, elapsed)


def test_criterion_4_dimension_identities(announce):
    cold()
    data = s_matrix_suNk(3, 9)
    w = {p: AffineWeight.from_partition(3, 9, p) for p in [(2, 1), (4, 2), (5, 1)]}
    d21, d42 = quantum_dim(data, w[(2, 1)]), quantum_dim(data, w[(4, 2)])
    sig = {"sigma0": 1.0, "sigma1": 1.0, "sigma2": 1.0}
    a = w[(2, 1)]
    reports = [
        dim_identity_check(data, [(1, [a, a])], [(6, [a]), (1, ["sigma0"]), (1, ["sigma1"]), (1, ["sigma2"])], sig),
        dim_identity_check(data, [(1, [w[(4, 2)]])], [(2, [a]), (1, ["sigma0"]), (1, ["sigma2"])], sig),
        dim_identity_check(data, [(1, [w[(5, 1)]])], [(2, [a]), (1, ["sigma1"])], sig),
    ]
    ok = (abs(d21 - (3 + 2 * np.sqrt(3))) < 1e-8 and abs(d42 - (8 + 4 * np.sqrt(3))) < 1e-8
          and all(r.passed for r in reports))
    announce(4, f"d(2,1) = {d21:.12g}, d(4,2) = {d42:.12g}, sector identities hold: "
                f"{all(r.passed for r in reports)}", ok)


def test_criterion_5_inequality(announce):
    t0 = cold()
    counts = {}
    ok = True
    for name in ["su3_3_in_so8", "su4_2_in_su6", "su3_9_in_e6"]:
        report = kw_inequality_check(builtin_inclusion(name))
        counts[name] = (report.results["triples"], report.results["failures"])
        ok &= report.passed and report.results["failures"] == 0
    elapsed = time.perf_counter() - t0
    ok &= counts["su3_3_in_so8"][0] == 400 and counts["su3_9_in_e6"][0] == 9075 and elapsed < 30.0
    announce(5, f"inequality (triples, failures): {counts}", ok, elapsed)


def test_criterion_6_positive_kw(announce):
    cold()
    sizes = {(m, n): len(kw_scan(levelrank.build_product_inclusion(m, n))) for m, n in [(2, 3), (2, 4), (3, 3)]}
    announce(6, f"violations in product inclusions: {sizes}", all(v == 0 for v in sizes.values()))


def test_criterion_7_level_rank(announce):
    cold()
    bad_orbits = [(m, n) for m in range(2, 7) for n in range(2, 7) if not levelrank.orbit_bijection_check(m, n).passed]
    residuals = {}
    ok = not bad_orbits
    for m, n in [(2, 3), (3, 2), (2, 4), (3, 3), (3, 4)]:
        report = verify_branching(levelrank.build_product_inclusion(m, n))
        residuals[(m, n)] = report["S-intertwining"].max_deviation
        ok &= report.passed and residuals[(m, n)] < 1e-8
    worst = max(residuals.values())
    announce(7, f"orbit bijection failures {bad_orbits}, worst S-residual {worst:.1e}", ok)


def test_criterion_8_level_rank_subrings(announce):
    t0 = cold()
    ok = True
    sizes = {}
    for n in (2, 3):
        report = levelrank.verify_th42(n)
        sizes[n] = report.results["closure_sizes"]
        ok &= report.passed and report["structure constants agree"].detail is None
    row = builtin_inclusion("series_a_4")
    solver_row = sorted(row.sub.labels[k] for k in np.flatnonzero(row.b[0]))
    ok &= levelrank.ll_subsectors(2) == solver_row
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60.0
    announce(8, f"fusion subrings isomorphic for n = 2, 3 (closure sizes {sizes}); "
                f"subsectors of su(4)_2 match the solver", ok, elapsed)


def test_criterion_9_property_suites(announce):
    cold()
    data = [s_matrix_suNk(N, k) for N in range(2, 5) for k in range(1, 7)]
    data += [s_matrix_suNk(3, 9), s_matrix_suNk(3, 5), s_matrix_suNk(5, 3), s_matrix_suNk(4, 6)]
    data += [modular_data(x) for x in ["so8@1", "so10@1", "su6@1", "su10@1", "e6@1", "e7@1"]]
    data += [levelrank.build_product_inclusion(2, 3).sub, levelrank.build_product_inclusion(3, 4).sub]
    axioms = all(verify_modular(d, 1e-9).passed for d in data)

    integral = all(verify_fusion(s_matrix_suNk(N, k)).passed for N in range(2, 5) for k in range(1, 7))

    def cg(k, a, b, c):
        return int(abs(a - b) <= c <= min(a + b, 2 * k - a - b) and (a + b + c) % 2 == 0)

    clebsch = True
    for k in range(1, 11):
        N = fusion_table(s_matrix_suNk(2, k)).full()
        oracle = np.array([[[cg(k, a, b, c) for c in range(k + 1)] for b in range(k + 1)] for a in range(k + 1)])
        clebsch &= np.array_equal(N, oracle)
    announce(9, f"modular axioms ({len(data)} theories) {axioms}, Verlinde integrality {integral}, "
                f"su(2)_k Clebsch-Gordan {clebsch}", axioms and integral and clebsch)
