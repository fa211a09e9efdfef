"""Dominant weights of affine su(N) at level k and the level-1 catalog.

Weights are stored by their Dynkin labels ``(a_1, ..., a_{N-1})``.  The
partition view ``lambda_i = a_i + ... + a_{N-1}`` and the shifted view
``k_i = a_i + 1`` (with ``a_0 = k - sum(a)``) are conversions on top of that.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence, Union

__all__ = [
    "AffineWeight",
    "AlgebraLabel",
    "WeightError",
    "enumerate_weights",
    "count_weights",
    "nality",
    "simple_current",
    "conjugate",
    "conformal_weight",
    "parse_weight",
    "parse_algebra",
]


class WeightError(ValueError):
    """Malformed weight or algebra literal."""


@dataclass(frozen=True, order=True)
class AffineWeight:
    """Integrable highest weight of su(N) at level ``level``."""

    N: int
    level: int
    dynkin: tuple[int, ...]

    def __post_init__(self):
        if self.N < 2:
            raise WeightError(f"su(N) needs N >= 2, got {self.N}")
        if self.level < 0:
            raise WeightError(f"negative level {self.level}")
        dynkin = tuple(int(a) for a in self.dynkin)
        object.__setattr__(self, "dynkin", dynkin)
        if len(dynkin) != self.N - 1:
            raise WeightError(f"su({self.N}) weight needs {self.N - 1} Dynkin labels, got {dynkin}")
        if any(a < 0 for a in dynkin):
            raise WeightError(f"negative Dynkin label in {dynkin}")
        if sum(dynkin) > self.level:
            raise WeightError(f"{dynkin} is not dominant at level {self.level}")

    @classmethod
    def vacuum(cls, N: int, level: int) -> "AffineWeight":
        return cls(N, level, (0,) * (N - 1))

    @classmethod
    def from_partition(cls, N: int, level: int, partition: Sequence[int]) -> "AffineWeight":
        """Build from ``lambda_1 >= ... >= lambda_{N-1} >= 0``; short input is zero padded.

        A trailing ``lambda_N`` is accepted only when it is zero.
        """
        parts = list(partition)
        if len(parts) == N and parts[-1] == 0:
            parts = parts[:-1]
        if len(parts) > N - 1:
            raise WeightError(f"partition {tuple(partition)} too long for su({N})")
        parts += [0] * (N - 1 - len(parts))
        if any(p < q for p, q in zip(parts, parts[1:])) or (parts and parts[-1] < 0):
            raise WeightError(f"{tuple(partition)} is not a partition")
        dynkin = [parts[i] - (parts[i + 1] if i + 1 < N - 1 else 0) for i in range(N - 1)]
        return cls(N, level, tuple(dynkin))

    @classmethod
    def from_shifted(cls, shifted: Sequence[int]) -> "AffineWeight":
        """Inverse of :attr:`shifted`; the level is ``sum(shifted) - N``."""
        N = len(shifted)
        if any(s < 1 for s in shifted):
            raise WeightError(f"shifted labels must be >= 1, got {tuple(shifted)}")
        return cls(N, sum(shifted) - N, tuple(s - 1 for s in shifted[1:]))

    @property
    def a0(self) -> int:
        return self.level - sum(self.dynkin)

    @property
    def extended(self) -> tuple[int, ...]:
        """Affine Dynkin labels ``(a_0, a_1, ..., a_{N-1})``."""
        return (self.a0,) + self.dynkin

    @property
    def shifted(self) -> tuple[int, ...]:
        """Labels of ``lambda + rho``: ``k_i = a_i + 1`` for ``i = 0..N-1``."""
        return tuple(a + 1 for a in self.extended)

    @property
    def partition(self) -> tuple[int, ...]:
        """``(lambda_1, ..., lambda_{N-1})`` with ``lambda_N = 0`` dropped."""
        return tuple(itertools.accumulate(reversed(self.dynkin)))[::-1]

    @property
    def is_vacuum(self) -> bool:
        return not any(self.dynkin)

    def __str__(self) -> str:
        return "d[" + ",".join(map(str, self.dynkin)) + "]"


def count_weights(N: int, k: int) -> int:
    return comb(N - 1 + k, N - 1)


def _compositions(total_max: int, parts: int) -> Iterator[tuple[int, ...]]:
    # lexicographic order on the tuple
    if parts == 0:
        yield ()
        return
    for first in range(total_max + 1):
        for rest in _compositions(total_max - first, parts - 1):
            yield (first,) + rest


def enumerate_weights(N: int, k: int) -> list[AffineWeight]:
    """All dominant weights of su(N) at level k, lexicographic in Dynkin labels."""
    if N < 2:
        raise WeightError(f"su(N) needs N >= 2, got {N}")
    if k < 0:
        raise WeightError(f"negative level {k}")
    return [AffineWeight(N, k, d) for d in _compositions(k, N - 1)]


def nality(w: AffineWeight) -> int:
    """Congruence class ``sum(i * a_i) mod N``."""
    return sum(i * a for i, a in enumerate(w.dynkin, start=1)) % w.N


def simple_current(w: AffineWeight, j: int = 1) -> AffineWeight:
    """Rotate the affine labels by ``j`` places: ``a'_i = a_{i-j}``."""
    j %= w.N
    ext = w.extended
    rotated = ext[-j:] + ext[:-j] if j else ext
    return AffineWeight(w.N, w.level, rotated[1:])


def conjugate(w: AffineWeight) -> AffineWeight:
    return AffineWeight(w.N, w.level, w.dynkin[::-1])


def _casimir(w: AffineWeight) -> Fraction:
    # (lambda, lambda + 2 rho) with long roots of length^2 = 2
    N = w.N
    lam = list(w.partition) + [0]
    total = sum(lam)
    value = Fraction(sum(x * x for x in lam)) - Fraction(total * total, N)
    value += sum(x * (N + 1 - 2 * i) for i, x in enumerate(lam, start=1))
    return value


def _weight_h(w: AffineWeight) -> Fraction:
    return _casimir(w) / (2 * (w.level + w.N))


# ---------------------------------------------------------------------------
# algebra labels and the level-1 catalog

Primary = Union[AffineWeight, str]

SU_K = "suN_levelk"
SU_1 = "su_level1"
SO_1 = "so_even_level1"
E6_1 = "e6_level1"
E7_1 = "e7_level1"


@dataclass(frozen=True)
class AlgebraLabel:
    """Which modular data to build.

    ``rank`` is N for su(N)_k, M for su(M)_1, and M for so(2M)_1.
    """

    family: str
    rank: int = 0
    level: int = 1

    def __post_init__(self):
        if self.family == SU_K:
            if self.rank < 2 or self.level < 1:
                raise WeightError(f"su({self.rank})_{self.level} is not allowed")
        elif self.family == SU_1:
            if self.rank < 2:
                raise WeightError(f"su({self.rank})_1 is not allowed")
        elif self.family == SO_1:
            if self.rank < 2:
                raise WeightError(f"so({2 * self.rank})_1 is not allowed")
        elif self.family in (E6_1, E7_1):
            object.__setattr__(self, "rank", 6 if self.family == E6_1 else 7)
        else:
            raise WeightError(f"unknown algebra family {self.family!r}")
        if self.family != SU_K:
            object.__setattr__(self, "level", 1)

    @classmethod
    def su(cls, N: int, k: int) -> "AlgebraLabel":
        return cls(SU_K, N, k)

    @classmethod
    def su1(cls, M: int) -> "AlgebraLabel":
        return cls(SU_1, M)

    @classmethod
    def so1(cls, two_m: int) -> "AlgebraLabel":
        if two_m % 2:
            raise WeightError("only so(2M)_1 is in the catalog")
        return cls(SO_1, two_m // 2)

    @classmethod
    def e6(cls) -> "AlgebraLabel":
        return cls(E6_1)

    @classmethod
    def e7(cls) -> "AlgebraLabel":
        return cls(E7_1)

    @property
    def is_catalog(self) -> bool:
        return self.family != SU_K

    def __str__(self) -> str:
        if self.family == SU_K:
            return f"su{self.rank}@{self.level}"
        if self.family == SU_1:
            return f"su{self.rank}@1"
        if self.family == SO_1:
            return f"so{2 * self.rank}@1"
        return f"e{self.rank}@1"

    def primaries(self) -> tuple[Primary, ...]:
        if self.family == SU_K:
            return tuple(enumerate_weights(self.rank, self.level))
        if self.family == SU_1:
            return tuple(str(j) for j in range(self.rank))
        if self.family == SO_1:
            return ("1", "v", "s", "c")
        if self.family == E6_1:
            return ("0", "1", "2")
        return ("0", "1")

    def central_charge(self) -> Fraction:
        if self.family == SU_K:
            N, k = self.rank, self.level
            return Fraction(k * (N * N - 1), k + N)
        if self.family == SU_1:
            return Fraction(self.rank - 1)
        return Fraction(self.rank)

    def conformal_weight(self, p: Primary) -> Fraction:
        if self.family == SU_K:
            return _weight_h(self._check(p))
        p = self._check(p)
        if self.family == SU_1:
            j, M = int(p), self.rank
            return Fraction(j * (M - j), 2 * M)
        if self.family == SO_1:
            return {"1": Fraction(0), "v": Fraction(1, 2)}.get(p, Fraction(self.rank, 8))
        if self.family == E6_1:
            return Fraction(0) if p == "0" else Fraction(2, 3)
        return Fraction(0) if p == "0" else Fraction(3, 4)

    def conjugate(self, p: Primary) -> Primary:
        p = self._check(p)
        if self.family == SU_K:
            return conjugate(p)
        if self.family == SU_1:
            return str((-int(p)) % self.rank)
        if self.family == SO_1:
            if self.rank % 2 and p in ("s", "c"):
                return "c" if p == "s" else "s"
            return p
        if self.family == E6_1:
            return {"0": "0", "1": "2", "2": "1"}[p]
        return p

    def add(self, p: Primary, q: Primary) -> Primary:
        """Group law of the (abelian) catalog fusion rules."""
        p, q = self._check(p), self._check(q)
        if self.family == SU_K:
            raise WeightError("su(N)_k fusion is not a group law")
        if self.family in (SU_1, E6_1, E7_1):
            order = {SU_1: self.rank, E6_1: 3, E7_1: 2}[self.family]
            return str((int(p) + int(q)) % order)
        # so(2M)_1: Z2 x Z2 for M even, Z4 = <s> for M odd
        code = {"1": 0, "s": 1, "v": 2, "c": 3}
        name = {v: k for k, v in code.items()}
        if self.rank % 2:
            return name[(code[p] + code[q]) % 4]
        bits = {"1": (0, 0), "v": (1, 0), "s": (0, 1), "c": (1, 1)}
        a, b = bits[p], bits[q]
        s = ((a[0] + b[0]) % 2, (a[1] + b[1]) % 2)
        return next(k for k, v in bits.items() if v == s)

    def parse(self, text: str) -> Primary:
        return parse_weight(text, self)

    def _check(self, p: Primary) -> Primary:
        if self.family == SU_K:
            if not isinstance(p, AffineWeight) or p.N != self.rank or p.level != self.level:
                raise WeightError(f"{p!r} is not a primary of {self}")
            return p
        p = str(p)
        if p not in self.primaries():
            raise WeightError(f"{p!r} is not a primary of {self}")
        return p


def conformal_weight(w: Primary, algebra: AlgebraLabel | None = None) -> Fraction:
    """Exact conformal weight ``(lambda, lambda + 2 rho) / (2 (k + N))``.

    Catalog primaries (strings) need their ``algebra``.
    """
    if isinstance(w, AffineWeight):
        return _weight_h(w)
    if algebra is None:
        raise WeightError(f"catalog primary {w!r} needs its algebra")
    return algebra.conformal_weight(w)


_ALGEBRA_RE = re.compile(r"^(su|so|e)(\d+)@(\d+)$")
_WEIGHT_RE = re.compile(r"^(d?)\[\s*(-?\d+(?:\s*,\s*-?\d+)*)?\s*\]$")


def parse_algebra(text: str) -> AlgebraLabel:
    """``su3@9``, ``su6@1``, ``so8@1``, ``e6@1``, ``e7@1``.

    ``suM@1`` is the level-1 catalog with primaries ``0..M-1``.
    """
    m = _ALGEBRA_RE.match(text.strip().lower())
    if not m:
        raise WeightError(f"cannot parse algebra {text!r} (expected e.g. su3@9, so8@1, e6@1)")
    family, rank, level = m.group(1), int(m.group(2)), int(m.group(3))
    if family == "su":
        return AlgebraLabel.su1(rank) if level == 1 else AlgebraLabel.su(rank, level)
    if level != 1:
        raise WeightError(f"{text!r}: only level 1 is available for {family}")
    if family == "so":
        return AlgebraLabel.so1(rank)
    if rank == 6:
        return AlgebraLabel.e6()
    if rank == 7:
        return AlgebraLabel.e7()
    raise WeightError(f"{text!r}: only e6@1 and e7@1 are in the catalog")


def parse_weight(text: str, algebra: AlgebraLabel) -> Primary:
    """Partition ``[2,1]`` or Dynkin ``d[1,1]`` for su(N)_k; a bare label for the catalog."""
    text = text.strip()
    if algebra.is_catalog:
        return algebra._check(text)
    m = _WEIGHT_RE.match(text)
    if not m:
        raise WeightError(f"cannot parse weight {text!r} (expected [2,1] or d[1,1])")
    values = [int(x) for x in m.group(2).split(",")] if m.group(2) else []
    N, k = algebra.rank, algebra.level
    if m.group(1):
        values += [0] * (N - 1 - len(values))
        return AffineWeight(N, k, tuple(values))
    return AffineWeight.from_partition(N, k, values)
