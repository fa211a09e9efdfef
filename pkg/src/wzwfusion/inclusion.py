"""Conformal inclusions G_k in H_1: branching matrices and the Kac-Wakimoto tests."""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Hashable

import numpy as np
import scipy.linalg
from scipy.optimize import linprog

from .affine import AffineWeight, AlgebraLabel
from .fusion import fusion_table
from .modular import ModularData, ProductModularData, modular_automorphisms, modular_data, tensor
from .report import Report

__all__ = [
    "INTERTWINE_TOL",
    "KW_TOL",
    "ConformalInclusion",
    "KwViolation",
    "SearchBudgetExceeded",
    "AmbiguousBranching",
    "builtin_inclusion",
    "builtin_names",
    "table_matches_solver",
    "trivial_inclusion",
    "solve_branching",
    "automorphism_orbits",
    "verify_branching",
    "kw_scan",
    "kw_inequality_check",
    "label_disjoint",
    "exponents",
    "describe_data",
    "data_from_descriptor",
    "label_string",
    "inclusion_to_json",
    "inclusion_from_json",
]

INTERTWINE_TOL = 1e-8
KW_TOL = 1e-9
FORMAT_VERSION = 1


class SearchBudgetExceeded(RuntimeError):
    pass


class AmbiguousBranching(RuntimeError):
    def __init__(self, name: str, count: int):
        super().__init__(f"{name}: branching solver found {count} candidates, expected exactly one")
        self.count = count


@dataclass(frozen=True, eq=False)
class ConformalInclusion:
    """``b[i, lam]`` is the multiplicity of sub primary ``lam`` in amb primary ``i``."""

    name: str
    sub: ModularData
    amb: ModularData
    b: np.ndarray

    def __post_init__(self):
        b = np.array(self.b, dtype=np.int64)
        if b.shape != (len(self.amb), len(self.sub)):
            raise ValueError(f"branching matrix has shape {b.shape}, expected {(len(self.amb), len(self.sub))}")
        b.setflags(write=False)
        object.__setattr__(self, "b", b)

    def multiplicity(self, i: Hashable, lam: Hashable) -> int:
        return int(self.b[self.amb.index(i), self.sub.index(lam)])

    def row(self, i: Hashable) -> dict:
        r = self.b[self.amb.index(i)]
        return {self.sub.labels[k]: int(r[k]) for k in np.flatnonzero(r)}

    def with_matrix(self, b: np.ndarray, name: str | None = None) -> "ConformalInclusion":
        return ConformalInclusion(name or self.name, self.sub, self.amb, b)


@dataclass(frozen=True)
class KwViolation:
    i: Hashable
    lam: Hashable
    j: Hashable
    mu: Hashable
    value: complex


# ---------------------------------------------------------------------------
# solver


def _allowed_entries(sub: ModularData, amb: ModularData) -> list[tuple[int, int]]:
    entries = []
    for i, hi in enumerate(amb.h):
        for lam, hl in enumerate(sub.h):
            if i != 0 and lam == 0:
                continue
            if (hi - hl).denominator == 1:
                entries.append((i, lam))
    return entries


def _intertwiner_system(sub: ModularData, amb: ModularData, entries):
    H, G = len(amb), len(sub)
    A = np.zeros((H, G, len(entries)), dtype=complex)
    for e, (i, lam) in enumerate(entries):
        A[:, lam, e] += amb.S[:, i]
        A[i, :, e] -= sub.S[lam, :]
    A = A.reshape(H * G, len(entries))
    return np.vstack([A.real, A.imag])


def _null_space(M: np.ndarray, rcond: float = 1e-9) -> np.ndarray:
    # economy SVD; scipy's null_space builds the full left factor
    _, sv, vh = np.linalg.svd(M, full_matrices=M.shape[0] < M.shape[1])
    rank = int(np.sum(sv > rcond * (sv[0] if sv.size else 1.0)))
    return vh[rank:].conj().T


def _lp_range(c, A_ub, b_ub, A_eq, b_eq, offset):
    out = []
    for sign in (1.0, -1.0):
        res = linprog(sign * c, A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                      bounds=[(None, None)] * len(c), method="highs")
        if res.status == 2:
            return None
        if res.status != 0:
            raise RuntimeError(f"LP bound failed: {res.message}")
        out.append(sign * res.fun + offset)
    return out[0], out[1]


def solve_branching(
    sub: ModularData,
    amb: ModularData,
    *,
    d_max: float | None = None,
    node_budget: int = 20000,
    safety: float = 1.1,
) -> list[np.ndarray]:
    """All nonnegative integer ``b`` intertwining S and T with ``b[0, 0] = 1``.

    Entries with non-integral ``h_i - h_lam`` are zero from the start; the S
    relation ``S_amb b = b S_sub`` is then solved exactly as a linear system and
    the remaining freedom is searched by branch and bound on integer points,
    each row's total quantum dimension bounded by ``d_max``.
    """
    entries = _allowed_entries(sub, amb)
    dims = sub.quantum_dims
    if d_max is None:
        d_max = safety * math.sqrt(float(np.sum(dims ** 2)))
    E = len(entries)
    H, G = len(amb), len(sub)
    unit = np.zeros(E)
    unit[entries.index((0, 0))] = 1.0
    M = np.vstack([_intertwiner_system(sub, amb, entries), unit])
    rhs = np.zeros(M.shape[0])
    rhs[-1] = 1.0
    xp, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    if np.max(np.abs(M @ xp - rhs)) > 1e-8:
        return []
    Z = _null_space(M)
    K = Z.shape[1]

    row_of = np.zeros((H, E))
    for e, (i, lam) in enumerate(entries):
        row_of[i, e] = dims[lam]

    def to_matrix(x):
        b = np.zeros((H, G), dtype=np.int64)
        for e, (i, lam) in enumerate(entries):
            b[i, lam] = int(round(x[e]))
        return b

    def accept(x):
        r = np.rint(x)
        return (np.max(np.abs(x - r), initial=0.0) < 1e-6 and np.all(r >= 0)
                and np.all(row_of @ r <= d_max + 1e-9))

    if K == 0:
        return [to_matrix(xp)] if accept(xp) else []

    # pivot on K entries of x so that fixing them fixes t
    _, _, perm = scipy.linalg.qr(Z.T, pivoting=True)
    pivots = list(perm[:K])
    A_ub = np.vstack([-Z, row_of @ Z])
    b_ub = np.concatenate([xp, d_max - row_of @ xp])

    found: list[np.ndarray] = []
    nodes = 0

    def dfs(fixed: list[int]):
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise SearchBudgetExceeded(f"integer search exceeded {node_budget} nodes")
        m = len(fixed)
        if m == K:
            t = np.linalg.solve(Z[pivots], np.array(fixed, float) - xp[pivots])
            x = xp + Z @ t
            if accept(x):
                found.append(to_matrix(x))
            return
        A_eq = Z[pivots[:m]] if m else None
        b_eq = (np.array(fixed, float) - xp[pivots[:m]]) if m else None
        p = pivots[m]
        rng = _lp_range(Z[p], A_ub, b_ub, A_eq, b_eq, xp[p])
        if rng is None:
            return
        lo, hi = math.ceil(rng[0] - 1e-7), math.floor(rng[1] + 1e-7)
        for v in range(max(lo, 0), hi + 1):
            dfs(fixed + [v])

    dfs([])
    found.sort(key=lambda b: tuple(b.ravel()))
    return found


# ---------------------------------------------------------------------------
# verification and the Kac-Wakimoto tests


def verify_branching(incl: ConformalInclusion, tol: float = INTERTWINE_TOL) -> Report:
    sub, amb, b = incl.sub, incl.amb, incl.b
    report = Report(f"branching of {incl.name}")
    vac = b[0, 0] == 1 and not np.any(b[1:, 0])
    report.add("vacuum", bool(vac))
    report.add("nonnegative", bool(np.all(b >= 0)))

    residual = float(np.max(np.abs(amb.S @ b - b @ sub.S)))
    report.add("S-intertwining", residual < tol, residual)

    bad = [
        [str(amb.labels[i]), label_string(sub.labels[lam])]
        for i, lam in zip(*np.nonzero(b))
        if (amb.h[i] - sub.h[lam]).denominator != 1
    ]
    report.add("h-integrality", not bad, 0.0, bad or None)

    dims = b @ sub.quantum_dims
    conj_ok = np.array_equal(b, b[np.array(amb.conj)][:, np.array(sub.conj)])
    # column 0 of the intertwining relation: sum_lam b_{i lam} d_lam = d_i sum_lam b_{0 lam} d_lam
    expected = amb.quantum_dims * dims[0]
    dim_dev = float(np.max(np.abs(dims - expected)) / max(abs(dims[0]), 1.0))
    report.add("conjugation symmetry", bool(conj_ok))
    report.add("row dimensions", bool(np.all(np.isfinite(dims))) and dim_dev < tol, dim_dev,
               [float(d) for d in dims])
    return report


def kw_scan(incl: ConformalInclusion, tol: float = KW_TOL) -> list[KwViolation]:
    """Quadruples with ``b_{i lam} b_{j mu} > 0`` where ``S_{lam mu} conj(S_ij)`` is not >= 0."""
    sub, amb = incl.sub, incl.amb
    support = list(zip(*np.nonzero(incl.b)))
    out = []
    for i, lam in support:
        for j, mu in support:
            value = complex(sub.S[lam, mu] * np.conj(amb.S[i, j]))
            if value.real < -tol or abs(value.imag) > tol:
                out.append(KwViolation(amb.labels[i], sub.labels[lam], amb.labels[j], sub.labels[mu], value))
    return out


def kw_pair_count(incl: ConformalInclusion) -> int:
    n = int(np.count_nonzero(incl.b))
    return n * n


def kw_inequality_check(incl: ConformalInclusion) -> Report:
    """``sum_nu N_{mu1 mu2}^nu b_{i nu} >= sum_{j,k} N_{jbar i}^k b_{k mu2} b_{j mu1}`` for all triples."""
    sub, amb, b = incl.sub, incl.amb, incl.b
    NG = fusion_table(sub).full()
    NH = fusion_table(amb).full()
    lhs = np.einsum("abn,in->abi", NG, b)
    NH_bar = NH[np.array(amb.conj)]  # [j, i, k] = N_{jbar i}^k
    rhs = np.einsum("ja,jik,kb->abi", b, NH_bar, b)
    fail = np.argwhere(lhs < rhs)
    report = Report(f"fusion/branching inequality for {incl.name}")
    failures = [
        [label_string(sub.labels[a]), label_string(sub.labels[c]), str(amb.labels[i])] for a, c, i in fail[:20]
    ]
    report.add("inequality", len(fail) == 0, 0.0, failures or None)
    report.results = {
        "triples": int(lhs.size),
        "failures": int(len(fail)),
        "strict": int(np.count_nonzero(lhs > rhs)),
        "equalities": int(np.count_nonzero(lhs == rhs)),
    }
    return report


def label_disjoint(incl: ConformalInclusion) -> bool:
    """True iff no sub primary occurs in two different amb primaries."""
    return bool(np.all(np.count_nonzero(incl.b, axis=0) <= 1))


def exponents(incl: ConformalInclusion) -> Counter:
    """``{(sub label, amb label): b}`` over the support of ``b``."""
    out: Counter = Counter()
    for i, lam in zip(*np.nonzero(incl.b)):
        out[(incl.sub.labels[lam], incl.amb.labels[i])] = int(incl.b[i, lam])
    return out


# ---------------------------------------------------------------------------
# built-in inclusions

# SU(3)_9 in E6, partitions (lambda_1, lambda_2); E6 label "0" is the vacuum
_E6_TABLE = {
    "0": [(0, 0), (9, 0), (9, 9), (8, 4), (5, 1), (5, 4)],
    "1": [(4, 2), (7, 2), (7, 5)],
    "2": [(4, 2), (7, 2), (7, 5)],
}


def trivial_inclusion(data: ModularData) -> ConformalInclusion:
    return ConformalInclusion(f"identity_{data}", data, data, np.eye(len(data), dtype=np.int64))


def _e6_hardcoded() -> ConformalInclusion:
    sub = modular_data(AlgebraLabel.su(3, 9))
    amb = modular_data(AlgebraLabel.e6())
    b = np.zeros((len(amb), len(sub)), dtype=np.int64)
    for i, parts in _E6_TABLE.items():
        for p in parts:
            b[amb.index(i), sub.index(AffineWeight.from_partition(3, 9, p))] += 1
    return ConformalInclusion("su3_9_in_e6", sub, amb, b)


def _solver_pair(name: str) -> tuple[AlgebraLabel, AlgebraLabel]:
    fixed = {
        "su3_9_in_e6": (AlgebraLabel.su(3, 9), AlgebraLabel.e6()),
        "su3_3_in_so8": (AlgebraLabel.su(3, 3), AlgebraLabel.so1(8)),
        "su4_2_in_su6": (AlgebraLabel.su(4, 2), AlgebraLabel.su1(6)),
    }
    if name in fixed:
        return fixed[name]
    family, _, arg = name.rpartition("_")
    if family in ("series_a", "series_b") and arg.isdigit():
        N = int(arg)
        if family == "series_a":
            if N < 4:
                raise KeyError(f"{name}: series a needs N >= 4")
            return AlgebraLabel.su(N, N - 2), AlgebraLabel.su1(N * (N - 1) // 2)
        if N < 2:
            raise KeyError(f"{name}: series b needs N >= 2")
        return AlgebraLabel.su(N, N + 2), AlgebraLabel.su1(N * (N + 1) // 2)
    raise KeyError(f"unknown inclusion {name!r}")


def builtin_names() -> list[str]:
    return ["su3_9_in_e6", "su3_3_in_so8", "su4_2_in_su6", "product_<m>_<n>", "series_a_<N>", "series_b_<N>"]


def automorphism_orbits(amb: ModularData, candidates: list[np.ndarray]) -> list[list[np.ndarray]]:
    """Group candidates that differ only by relabeling amb via a modular automorphism."""
    autos = modular_automorphisms(amb)
    orbits: list[list[np.ndarray]] = []
    for c in candidates:
        for orbit in orbits:
            if any(np.array_equal(c[list(p)], orbit[0]) for p in autos):
                orbit.append(c)
                break
        else:
            orbits.append([c])
    return orbits


@lru_cache(maxsize=None)
def _solved(name: str) -> ConformalInclusion:
    sub_label, amb_label = _solver_pair(name)
    sub, amb = modular_data(sub_label), modular_data(amb_label)
    candidates = solve_branching(sub, amb)
    orbits = automorphism_orbits(amb, candidates)
    if len(orbits) != 1:
        raise AmbiguousBranching(name, len(candidates))
    # members of one orbit are the same inclusion up to relabeling amb; the
    # first in sorted order is the representative
    return ConformalInclusion(name, sub, amb, orbits[0][0])


def builtin_inclusion(name: str, *, cross_check: bool = True, verify: bool = True) -> ConformalInclusion:
    """Named inclusion with its branching matrix.

    ``su3_9_in_e6`` uses the literature table (cross-checked against the
    solver); ``product_<m>_<n>`` comes from the level-rank pairing; the rest
    are solved from modular invariance.
    """
    if name.startswith("product_"):
        from .levelrank import build_product_inclusion

        try:
            m, n = (int(x) for x in name.split("_")[1:])
        except ValueError:
            raise KeyError(f"unknown inclusion {name!r}") from None
        incl = build_product_inclusion(m, n)
    elif name == "su3_9_in_e6":
        incl = _e6_hardcoded()
    else:
        incl = _solved(name)
    if verify:
        report = verify_branching(incl)
        if not report.passed:
            failed = [c.name for c in report.checks if not c.passed]
            raise RuntimeError(f"{name}: branching fails {failed}")
    if name == "su3_9_in_e6" and cross_check and not table_matches_solver(incl):
        raise RuntimeError("su3_9_in_e6: solver disagrees with the tabulated branching rules")
    return incl


def table_matches_solver(incl: ConformalInclusion) -> bool:
    return bool(np.array_equal(_solved(incl.name).b, incl.b))


# ---------------------------------------------------------------------------
# persistence


def label_string(label) -> str:
    if isinstance(label, tuple):
        return "(" + ",".join(label_string(x) for x in label) + ")"
    return str(label)


def describe_data(data: ModularData) -> str:
    if isinstance(data, ProductModularData):
        return "*".join(describe_data(f) for f in data.factors)
    return str(data.algebra)


def data_from_descriptor(text: str) -> ModularData:
    parts = text.split("*")
    if len(parts) == 1:
        return modular_data(parts[0])
    return tensor([modular_data(p) for p in parts])


def inclusion_to_json(incl: ConformalInclusion) -> dict:
    return {
        "format": "wzwfusion.inclusion",
        "version": FORMAT_VERSION,
        "name": incl.name,
        "sub": describe_data(incl.sub),
        "amb": describe_data(incl.amb),
        "sub_labels": [label_string(x) for x in incl.sub.labels],
        "amb_labels": [label_string(x) for x in incl.amb.labels],
        "b": incl.b.tolist(),
    }


def inclusion_from_json(doc: dict | str) -> ConformalInclusion:
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("format") != "wzwfusion.inclusion":
        raise ValueError("not an inclusion table")
    if doc.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported inclusion table version {doc.get('version')!r}")
    sub = data_from_descriptor(doc["sub"])
    amb = data_from_descriptor(doc["amb"])
    sub_pos = {label_string(x): k for k, x in enumerate(sub.labels)}
    amb_pos = {label_string(x): k for k, x in enumerate(amb.labels)}
    b = np.zeros((len(amb), len(sub)), dtype=np.int64)
    rows = doc["b"]
    if len(rows) != len(doc["amb_labels"]) or any(len(r) != len(doc["sub_labels"]) for r in rows):
        raise ValueError("branching matrix does not match the label lists")
    for i_name, row in zip(doc["amb_labels"], rows):
        for lam_name, value in zip(doc["sub_labels"], row):
            if value:
                b[amb_pos[i_name], sub_pos[lam_name]] = int(value)
    return ConformalInclusion(doc["name"], sub, amb, b)
