"""Verlinde fusion rules and quantum dimensions."""
from __future__ import annotations

import threading
import weakref
from typing import Hashable, Mapping, Sequence

import numpy as np

from .modular import ModularData
from .report import Report

__all__ = [
    "ROUND_TOL",
    "IntegralityError",
    "FusionTable",
    "fusion_table",
    "verlinde",
    "fusion_matrix",
    "decompose",
    "quantum_dim",
    "dim_identity_check",
    "verify_fusion",
]

ROUND_TOL = 1e-6


class IntegralityError(ArithmeticError):
    """A Verlinde sum is not within ROUND_TOL of a nonnegative integer."""


def _round_counts(values: np.ndarray, what: str) -> np.ndarray:
    real = values.real
    rounded = np.rint(real)
    dev = float(np.max(np.abs(values - rounded), initial=0.0))
    if dev > ROUND_TOL or np.any(real < -ROUND_TOL):
        raise IntegralityError(f"{what}: Verlinde sum deviates from a nonnegative integer by {dev:.3g}")
    return rounded.astype(np.int64)


class FusionTable:
    """Fusion coefficients ``N[lam][mu, nu]`` computed per ``lam`` on demand."""

    def __init__(self, data: ModularData):
        self.data = data
        self._rows: dict[int, np.ndarray] = {}
        self._lock = threading.Lock()
        S = data.S
        self._ratio = S / S[0][np.newaxis, :]
        self._Sdag = S.conj().T

    def matrix_at(self, i: int) -> np.ndarray:
        with self._lock:
            cached = self._rows.get(i)
            if cached is None:
                values = (self.data.S * self._ratio[i][np.newaxis, :]) @ self._Sdag
                cached = _round_counts(values, f"N_{self.data.labels[i]}")
                cached.setflags(write=False)
                self._rows[i] = cached
            return cached

    def matrix(self, label: Hashable) -> np.ndarray:
        return self.matrix_at(self.data.index(label))

    def coefficient(self, a: Hashable, b: Hashable, c: Hashable) -> int:
        d = self.data
        return int(self.matrix(a)[d.index(b), d.index(c)])

    def full(self) -> np.ndarray:
        """Array ``N[a, b, c]`` over all label indices."""
        return np.stack([self.matrix_at(i) for i in range(len(self.data))])


_tables: "weakref.WeakKeyDictionary[ModularData, FusionTable]" = weakref.WeakKeyDictionary()
_tables_lock = threading.Lock()


def fusion_table(data: ModularData) -> FusionTable:
    with _tables_lock:
        table = _tables.get(data)
        if table is None:
            table = _tables[data] = FusionTable(data)
        return table


def verlinde(data: ModularData, a: Hashable, b: Hashable, c: Hashable) -> int:
    """Single coefficient ``sum_d S_ad S_bd conj(S_cd) / S_0d``."""
    S = data.S
    i, j, k = data.index(a), data.index(b), data.index(c)
    value = np.sum(S[i] * S[j] * S[k].conj() / S[0])
    return int(_round_counts(np.array([value]), f"N_{{{a},{b}}}^{c}")[0])


def fusion_matrix(data: ModularData, label: Hashable) -> np.ndarray:
    """``(N_label)[mu, nu] = N_{label, mu}^nu``."""
    return fusion_table(data).matrix(label)


def decompose(data: ModularData, a: Hashable, b: Hashable) -> dict:
    """``a x b`` as ``{nu: multiplicity}`` in label order."""
    row = fusion_table(data).matrix(a)[data.index(b)]
    return {data.labels[n]: int(row[n]) for n in np.flatnonzero(row)}


def quantum_dim(data: ModularData, label: Hashable) -> float:
    i = data.index(label)
    return float((data.S[0, i] / data.S[0, 0]).real)


Monomial = Sequence[Hashable]


def _evaluate(data: ModularData, combo: Sequence[tuple[int, Monomial]], constants: Mapping[str, float]) -> float:
    total = 0.0
    for coeff, factors in combo:
        term = float(coeff)
        for f in factors:
            if isinstance(f, str) and f in constants:
                term *= constants[f]
            else:
                term *= quantum_dim(data, f)
        total += term
    return total


def dim_identity_check(
    data: ModularData,
    lhs: Sequence[tuple[int, Monomial]],
    rhs: Sequence[tuple[int, Monomial]],
    constants: Mapping[str, float] | None = None,
    tol: float = 1e-8,
) -> Report:
    """Compare two integer combinations of monomials in quantum dimensions.

    Each combination is a list of ``(coefficient, factors)``; a factor is a
    label of ``data`` or a key of ``constants`` (e.g. extension sectors of
    dimension 1).
    """
    constants = dict(constants or {})
    left = _evaluate(data, lhs, constants)
    right = _evaluate(data, rhs, constants)
    report = Report(f"dimension identity in {data}", results={"lhs": left, "rhs": right})
    report.add("lhs = rhs", abs(left - right) < tol, abs(left - right))
    return report


def verify_fusion(data: ModularData) -> Report:
    """Unit, commutativity, associativity and Frobenius symmetry, exhaustively."""
    N = fusion_table(data).full()
    n = len(data)
    conj = np.array(data.conj)
    report = Report(f"fusion ring of {data}")
    report.add("unit", np.array_equal(N[0], np.eye(n, dtype=np.int64)))
    report.add("commutativity", np.array_equal(N, N.transpose(1, 0, 2)))
    # (a b) c = a (b c):  sum_x N_ab^x N_xc^y = sum_x N_bc^x N_ax^y
    Nf = N.astype(float)
    flat_right = Nf.reshape(n, n * n)
    flat_left = Nf.reshape(n * n, n)
    assoc = all(
        np.array_equal(Nf[a] @ flat_right, (flat_left @ Nf[a]).reshape(n, n * n)) for a in range(n)
    )
    report.add("associativity", assoc)
    # N_ab^c = N_{a cbar}^{bbar}
    frob = N[:, conj, :][:, :, conj].transpose(0, 2, 1)
    report.add("Frobenius symmetry", np.array_equal(N, frob))
    report.add("nonnegative", bool(np.all(N >= 0)))
    return report
