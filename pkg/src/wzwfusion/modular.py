"""Modular S and T matrices for su(N)_k and the level-1 catalog."""
from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Any, Hashable, Sequence

import numpy as np

from .affine import AffineWeight, AlgebraLabel, count_weights, enumerate_weights
from .report import Report

__all__ = [
    "AXIOM_TOL",
    "MAX_LABELS",
    "ModularData",
    "ProductModularData",
    "ResourceLimitError",
    "modular_data",
    "s_matrix_suNk",
    "level1_modular_data",
    "tensor",
    "verify_modular",
    "modular_automorphisms",
    "weyl_quantum_dim",
]

AXIOM_TOL = 1e-9
MAX_LABELS = 1000


class ResourceLimitError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class ModularData:
    """Primaries with their S-matrix, conformal weights and central charge.

    ``S`` is read-only; ``conj[i]`` is the index of the conjugate of label ``i``.
    The vacuum is always label 0.
    """

    algebra: Any
    labels: tuple
    S: np.ndarray
    h: tuple[Fraction, ...]
    central_charge: Fraction
    conj: tuple[int, ...]
    tol: float = AXIOM_TOL
    _index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        S = np.array(self.S, dtype=complex)
        S.setflags(write=False)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "_index", {lab: i for i, lab in enumerate(self.labels)})

    def __len__(self) -> int:
        return len(self.labels)

    def __str__(self) -> str:
        return str(self.algebra)

    def index(self, label: Hashable) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"{label!r} is not a primary of {self}") from None

    def s(self, a: Hashable, b: Hashable) -> complex:
        return complex(self.S[self.index(a), self.index(b)])

    def conjugate_label(self, label: Hashable) -> Hashable:
        return self.labels[self.conj[self.index(label)]]

    def conformal_weight(self, label: Hashable) -> Fraction:
        return self.h[self.index(label)]

    @property
    def T(self) -> np.ndarray:
        """Diagonal of T: ``exp(2 pi i (h - c/24))``."""
        shift = self.central_charge / 24
        return np.array([cmath.exp(2j * cmath.pi * float((x - shift) % 1)) for x in self.h])

    @property
    def quantum_dims(self) -> np.ndarray:
        return (self.S[0] / self.S[0, 0]).real

    @property
    def conj_matrix(self) -> np.ndarray:
        C = np.zeros((len(self), len(self)))
        C[np.arange(len(self)), list(self.conj)] = 1
        return C


@dataclass(frozen=True, eq=False)
class ProductModularData(ModularData):
    """Tensor product; labels are tuples of factor labels."""

    factors: tuple[ModularData, ...] = ()


def weyl_quantum_dim(w: AffineWeight) -> float:
    """Quantum dimension from the q-deformed Weyl product over positive roots."""
    N, kappa = w.N, w.level + w.N
    lam = list(w.partition) + [0]
    d = 1.0
    for a, b in itertools.combinations(range(N), 2):
        num = np.sin(np.pi * (lam[a] - lam[b] + b - a) / kappa)
        den = np.sin(np.pi * (b - a) / kappa)
        d *= num / den
    return float(d)


def _traceless_shifted(w: AffineWeight) -> np.ndarray:
    N = w.N
    lam = np.array(list(w.partition) + [0], dtype=float)
    ell = lam + N - np.arange(1, N + 1)
    return ell - ell.mean()


def _check_size(count: int, max_labels: int | None) -> None:
    limit = MAX_LABELS if max_labels is None else max_labels
    if count > limit:
        raise ResourceLimitError(f"{count} primaries exceeds the limit of {limit}")


@lru_cache(maxsize=None)
def _suNk(N: int, k: int, tol: float) -> ModularData:
    weights = enumerate_weights(N, k)
    ells = np.array([_traceless_shifted(w) for w in weights])
    kappa = k + N
    # raw[p, q] = det_ab exp(-2 pi i l^p_a l^q_b / kappa)
    phase = np.einsum("pa,qb->pqab", ells, ells)
    raw = np.linalg.det(np.exp(-2j * np.pi * phase / kappa))
    # fix the global constant by unitarity and S_00 > 0
    norm = np.sqrt(np.sum(np.abs(raw[0]) ** 2))
    S = raw * (np.conj(raw[0, 0]) / abs(raw[0, 0])) / norm
    index = {w: i for i, w in enumerate(weights)}
    conj = tuple(index[AffineWeight(N, k, w.dynkin[::-1])] for w in weights)
    label = AlgebraLabel.su(N, k)
    h = tuple(label.conformal_weight(w) for w in weights)
    return ModularData(label, tuple(weights), S, h, label.central_charge(), conj, tol)


def s_matrix_suNk(N: int, k: int, *, tol: float = AXIOM_TOL, max_labels: int | None = None) -> ModularData:
    """Kac-Peterson S-matrix of su(N) at level k.

    Labels are the dominant weights in lexicographic Dynkin order.
    """
    if N < 2 or k < 1:
        raise ValueError(f"su({N})_{k} needs N >= 2 and k >= 1")
    _check_size(count_weights(N, k), max_labels)
    return _suNk(N, k, float(tol))


@lru_cache(maxsize=None)
def _level1(label: AlgebraLabel, tol: float) -> ModularData:
    # the catalog theories are pointed: S_ab = exp(-2 pi i b(a, b)) / sqrt(|G|)
    # with b(a, b) = h(a + b) - h(a) - h(b)
    prims = label.primaries()
    n = len(prims)
    h = [label.conformal_weight(p) for p in prims]
    S = np.empty((n, n), dtype=complex)
    for i, p in enumerate(prims):
        for j, q in enumerate(prims):
            pairing = label.conformal_weight(label.add(p, q)) - h[i] - h[j]
            S[i, j] = cmath.exp(-2j * cmath.pi * float(pairing % 1)) / np.sqrt(n)
    conj = tuple(prims.index(label.conjugate(p)) for p in prims)
    return ModularData(label, prims, S, tuple(h), label.central_charge(), conj, tol)


def level1_modular_data(label: AlgebraLabel, *, tol: float = AXIOM_TOL) -> ModularData:
    """su(M)_1, so(2M)_1 (labels 1, v, s, c), e6_1 and e7_1."""
    if not label.is_catalog:
        raise ValueError(f"{label} is not a level-1 catalog entry")
    return _level1(label, float(tol))


def modular_data(label: AlgebraLabel | str, *, tol: float = AXIOM_TOL, max_labels: int | None = None) -> ModularData:
    if isinstance(label, str):
        from .affine import parse_algebra

        label = parse_algebra(label)
    if label.is_catalog:
        _check_size(len(label.primaries()), max_labels)
        return level1_modular_data(label, tol=tol)
    return s_matrix_suNk(label.rank, label.level, tol=tol, max_labels=max_labels)


def tensor(data_list: Sequence[ModularData], *, max_labels: int | None = None) -> ProductModularData:
    if not data_list:
        raise ValueError("tensor() needs at least one factor")
    factors = tuple(data_list)
    _check_size(int(np.prod([len(f) for f in factors])), max_labels)
    labels = tuple(itertools.product(*(f.labels for f in factors)))
    S = reduce(np.kron, [f.S for f in factors])
    h = tuple(sum(parts, Fraction(0)) for parts in itertools.product(*(f.h for f in factors)))
    sizes = [len(f) for f in factors]
    conj = []
    for idx in itertools.product(*(range(s) for s in sizes)):
        target = [f.conj[i] for f, i in zip(factors, idx)]
        conj.append(int(np.ravel_multi_index(target, sizes)))
    return ProductModularData(
        algebra=tuple(f.algebra for f in factors),
        labels=labels,
        S=S,
        h=h,
        central_charge=sum((f.central_charge for f in factors), Fraction(0)),
        conj=tuple(conj),
        tol=min(f.tol for f in factors),
        factors=factors,
    )


def verify_modular(data: ModularData, tol: float | None = None) -> Report:
    """Symmetry, unitarity, positive vacuum row, S^2 = C and (ST)^3 = S^2."""
    tol = data.tol if tol is None else tol
    S = data.S
    n = len(data)
    report = Report(f"modular axioms for {data}")

    dev = float(np.max(np.abs(S - S.T)))
    report.add("symmetry", dev < tol, dev)

    dev = float(np.max(np.abs(S @ S.conj().T - np.eye(n))))
    report.add("unitarity", dev < tol, dev)

    row = S[0]
    dev = float(max(np.max(np.abs(row.imag)), 0.0))
    report.add("vacuum row positive", bool(np.all(row.real > tol)) and dev < tol, dev,
               {"min_real": float(np.min(row.real))})

    S2 = S @ S
    rounded = np.rint(S2.real)
    is_perm = bool(np.all((rounded == 0) | (rounded == 1))
                   and np.all(rounded.sum(axis=0) == 1) and np.all(rounded.sum(axis=1) == 1))
    dev = float(np.max(np.abs(S2 - rounded)))
    matches = is_perm and np.array_equal(rounded, data.conj_matrix)
    report.add("S^2 = C", is_perm and matches and dev < tol, dev)

    ST = S * data.T[np.newaxis, :]
    dev = float(np.max(np.abs(np.linalg.matrix_power(ST, 3) - S2)))
    report.add("(ST)^3 = S^2", dev < tol, dev)
    return report


def modular_automorphisms(data: ModularData, tol: float = 1e-8) -> list[tuple[int, ...]]:
    """Label permutations fixing the vacuum that preserve S and T (h mod 1).

    ``p[i]`` is the image of label ``i``; the identity comes first.
    """
    n = len(data)
    S, h = data.S, data.h
    found: list[tuple[int, ...]] = []
    image = [0] + [-1] * (n - 1)
    used = [True] + [False] * (n - 1)

    def extend(i: int) -> None:
        if i == n:
            found.append(tuple(image))
            return
        for c in range(1, n):
            if used[c] or (h[c] - h[i]).denominator != 1:
                continue
            if abs(S[c, c] - S[i, i]) > tol:
                continue
            if any(abs(S[image[j], c] - S[j, i]) > tol for j in range(i)):
                continue
            image[i], used[c] = c, True
            extend(i + 1)
            image[i], used[c] = -1, False

    extend(1)
    return found
