"""Level-rank duality between su(m)_n and su(n)_m.

The pie-slicing map ``beta`` sends su(m)_n weights to su(n)_m weights and is a
bijection on orbits of the centres.  Inside su(mn)_1 each su(m)_n weight in
the right congruence class pairs with exactly one su(n)_m weight; that pairing
gives the branching rules of su(m)_n x su(n)_m in su(mn)_1.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .affine import AffineWeight, AlgebraLabel, conjugate, enumerate_weights, nality, simple_current
from .fusion import fusion_table, quantum_dim
from .inclusion import ConformalInclusion, builtin_inclusion
from .modular import modular_data, s_matrix_suNk, tensor
from .report import Report

__all__ = [
    "PairingError",
    "PairingAmbiguous",
    "PairingEmpty",
    "BijectionFailure",
    "ExtensionAmbiguous",
    "LevelRankPairing",
    "beta",
    "orbit",
    "orbit_representative",
    "orbit_bijection_check",
    "pair",
    "transpose",
    "pairing",
    "build_product_inclusion",
    "ll_subsectors",
    "sign_vectors",
    "phi",
    "verify_th42",
]


class PairingError(RuntimeError):
    pass


class PairingAmbiguous(PairingError):
    pass


class PairingEmpty(PairingError):
    pass


class BijectionFailure(RuntimeError):
    def __init__(self, message: str, unmatched=()):
        super().__init__(message)
        self.unmatched = list(unmatched)


class ExtensionAmbiguous(RuntimeError):
    pass


def beta(w: AffineWeight) -> AffineWeight:
    """Pie-slicing map from su(m)_n to su(n)_m, on shifted labels.

    ``r_j = k_j + ... + k_{m-1} + k_0`` (j = 1..m) is a decreasing subset of
    ``1..m+n``; its complement ``rbar`` gives ``s_j = m + n + rbar_n - rbar_{n-j+1}``,
    read back as the partial sums of the dual shifted labels.
    """
    m, n = w.N, w.level
    if n < 2:
        raise ValueError(f"level-rank dual of su({m})_{n} needs level >= 2")
    k = w.shifted
    total = m + n
    r = [k[0] + sum(k[j:]) for j in range(1, m)] + [k[0]]
    rbar = sorted(set(range(1, total + 1)) - set(r), reverse=True)
    s = [total + rbar[n - 1] - rbar[n - j] for j in range(1, n + 1)]
    shifted = [s[n - 1]] + [s[j] - s[j + 1] for j in range(n - 1)]
    return AffineWeight.from_shifted(shifted)


def orbit(w: AffineWeight) -> frozenset[AffineWeight]:
    return frozenset(simple_current(w, j) for j in range(w.N))


def orbit_representative(w: AffineWeight) -> AffineWeight:
    return min(orbit(w))


def orbit_bijection_check(m: int, n: int) -> Report:
    """beta preserves shifted sums, is constant on centre orbits and induces a bijection of orbits."""
    report = Report(f"orbit bijection su({m})_{n} -> su({n})_{m}")
    weights = enumerate_weights(m, n)
    images = {w: beta(w) for w in weights}
    report.add("shifted sum preserved", all(sum(v.shifted) == m + n for v in images.values()))
    src = {orbit(w) for w in weights}
    dst = {orbit(v) for v in enumerate_weights(n, m)}
    induced = {}
    well_defined = True
    for o in src:
        targets = {orbit(images[w]) for w in o}
        well_defined &= len(targets) == 1
        induced[o] = next(iter(targets))
    report.add("constant on orbits", well_defined)
    report.add("orbit counts equal", len(src) == len(dst), 0.0, [len(src), len(dst)])
    report.add("injective on orbits", len(set(induced.values())) == len(src))
    report.results["orbits"] = len(src)
    return report


def _h_sum_integral(*hs: Fraction) -> bool:
    return sum(hs, Fraction(0)).denominator == 1


def transpose(w: AffineWeight) -> AffineWeight:
    """Transposed Young diagram of an su(m)_n weight, read as an su(n)_m weight."""
    m, n = w.N, w.level
    lam = w.partition
    cols = [sum(1 for part in lam if part >= i) for i in range(1, n + 1)]
    return AffineWeight.from_partition(n, m, [c - cols[-1] for c in cols[:-1]])


def _box_sector(w: AffineWeight, partner: AffineWeight, Lambda: int) -> bool:
    # (w, mu^j w^T) lives in the sector |w| + m j mod mn
    m, n = w.N, w.level
    t = transpose(w)
    return any(simple_current(t, j) == partner and (sum(w.partition) + m * j - Lambda) % (m * n) == 0
               for j in range(n))


def pair(w: AffineWeight, Lambda: int) -> AffineWeight:
    """The unique ``mu^j beta(w)`` occurring with ``w`` in the su(mn)_1 primary ``Lambda``.

    Candidates must have the right nality and make ``h_w + h_partner - h_Lambda``
    integral.  When gcd(m, n) > 1 that leaves several survivors; the one whose
    box count puts it in sector ``Lambda`` is kept.
    """
    m, n = w.N, w.level
    Lambda %= m * n
    if nality(w) != Lambda % m:
        raise PairingEmpty(f"{w} has nality {nality(w)}, not {Lambda} mod {m}")
    h_big = AlgebraLabel.su1(m * n).conformal_weight(str(Lambda))
    h_w = _h(w)
    base = beta(w)
    hits = []
    for j in range(n):
        cand = simple_current(base, j)
        if nality(cand) == Lambda % n and _h_sum_integral(h_w, _h(cand), -h_big) and cand not in hits:
            hits.append(cand)
    if len(hits) > 1:
        hits = [c for c in hits if _box_sector(w, c, Lambda)]
    if not hits:
        raise PairingEmpty(f"no partner for {w} in sector {Lambda}")
    if len(hits) > 1:
        raise PairingAmbiguous(f"{len(hits)} partners for {w} in sector {Lambda}: {[str(x) for x in hits]}")
    return hits[0]


def _h(w: AffineWeight) -> Fraction:
    return AlgebraLabel.su(w.N, w.level).conformal_weight(w)


@dataclass(frozen=True)
class LevelRankPairing:
    """``forward[(Lambda, w)] = (partner, j)`` with ``partner = mu^j beta(w)``."""

    m: int
    n: int
    forward: dict = field(hash=False)

    def partners(self, Lambda: int) -> dict:
        return {w: p for (L, w), (p, _) in self.forward.items() if L == Lambda}


def pairing(m: int, n: int) -> LevelRankPairing:
    forward = {}
    for Lambda in range(m * n):
        for w in enumerate_weights(m, n):
            if nality(w) != Lambda % m:
                continue
            partner = pair(w, Lambda)
            base = beta(w)
            j = next(j for j in range(n) if simple_current(base, j) == partner)
            forward[(Lambda, w)] = (partner, j)
    return LevelRankPairing(m, n, forward)


def build_product_inclusion(m: int, n: int, *, max_labels: int | None = None) -> ConformalInclusion:
    """su(m)_n x su(n)_m in su(mn)_1 with ``b = 1`` exactly on paired weights."""
    if m < 2 or n < 2:
        raise ValueError("level-rank inclusion needs m, n >= 2")
    sub = tensor([s_matrix_suNk(m, n), s_matrix_suNk(n, m)], max_labels=max_labels)
    amb = modular_data(AlgebraLabel.su1(m * n))
    b = np.zeros((len(amb), len(sub)), dtype=np.int64)
    for (Lambda, w), (partner, _) in pairing(m, n).forward.items():
        b[Lambda, sub.index((w, partner))] = 1
    return ConformalInclusion(f"product_{m}_{n}", sub, amb, b)


# ---------------------------------------------------------------------------
# subsectors of the two series


def sign_vectors(m: int) -> list[tuple[int, ...]]:
    """Sign vectors of length m with an even number of -1 entries."""
    return [s for s in itertools.product((1, -1), repeat=m) if s.count(-1) % 2 == 0]


def _sigma_rho(s: tuple[int, ...]) -> AffineWeight:
    m = len(s)
    a = sorted((s[i - 1] * (m - i) for i in range(1, m + 1)), reverse=True)
    shifted = [2 * m - 2 + a[-1] - a[0]] + [a[i] - a[i + 1] for i in range(m - 1)]
    return AffineWeight.from_shifted(shifted)


def ll_subsectors(n: int) -> list[AffineWeight]:
    """su(n+2)_n weights occurring in the vacuum of su((n+1)(n+2)/2)_1.

    For each even sign vector ``s`` the weight ``sigma_s(rho)`` is moved by the
    centre generator to the power ``2 k`` for every ``k`` solving
    ``c(s) + 2 k (m - 1) = 0 mod m(m-1)/2``.
    """
    if n < 2:
        raise ValueError("n >= 2 required")
    m = n + 2
    modulus = m * (m - 1) // 2
    period = modulus // math.gcd(2 * (m - 1), modulus)
    span = period * m // math.gcd(period, m)
    out = set()
    for s in sign_vectors(m):
        c = sum(m - i for i in range(1, m + 1) if s[i - 1] == 1)
        base = _sigma_rho(s)
        for k1 in range(span):
            if (c + 2 * k1 * (m - 1)) % modulus == 0:
                out.add(simple_current(base, 2 * k1))
    return sorted(out)


def _vacuum_support(name: str) -> list[AffineWeight]:
    incl = builtin_inclusion(name)
    return sorted(incl.sub.labels[k] for k in np.flatnonzero(incl.b[0]))


def phi(n: int) -> dict[AffineWeight, AffineWeight]:
    """``w -> conj(pair(w, 0))`` from su(n+2)_n subsectors to su(n)_{n+2} subsectors.

    Checks that the image is exactly the vacuum row of su(n)_{n+2} in
    su(n(n+1)/2)_1 and that quantum dimensions agree.
    """
    domain = ll_subsectors(n)
    solver_domain = _vacuum_support(f"series_a_{n + 2}")
    if domain != solver_domain:
        raise BijectionFailure(
            f"subsector enumeration disagrees with the solved su({n + 2})_{n} branching",
            sorted(set(domain) ^ set(solver_domain)),
        )
    codomain = _vacuum_support(f"series_b_{n}")
    mapping = {w: conjugate(pair(w, 0)) for w in domain}
    image = set(mapping.values())
    unmatched = sorted(image ^ set(codomain))
    if unmatched or len(image) != len(domain):
        raise BijectionFailure(f"phi is not a bijection onto the su({n})_{n + 2} subsectors", unmatched)
    big, small = s_matrix_suNk(n + 2, n), s_matrix_suNk(n, n + 2)
    bad = [w for w, v in mapping.items() if abs(quantum_dim(big, w) - quantum_dim(small, v)) > 1e-8]
    if bad:
        raise BijectionFailure("phi does not preserve quantum dimensions", bad)
    return mapping


def _phi_candidates(w: AffineWeight) -> set[AffineWeight]:
    base = beta(w)
    return {conjugate(simple_current(base, j)) for j in range(w.level)}


def _closure(table, start: list[int]) -> list[int]:
    members = set(start)
    frontier = list(start)
    while frontier:
        new = set()
        for a in frontier:
            for b in list(members):
                prod = table.matrix_at(a)[b]
                new.update(int(c) for c in np.flatnonzero(prod))
        new -= members
        members |= new
        frontier = sorted(new)
    return sorted(members)


def verify_th42(n: int) -> Report:
    """Extend phi to the fusion-closed subrings and compare structure constants."""
    report = Report(f"fusion-ring isomorphism for n = {n}")
    mapping = phi(n)
    big, small = s_matrix_suNk(n + 2, n), s_matrix_suNk(n, n + 2)
    tb, ts = fusion_table(big), fusion_table(small)
    report.add("phi bijective and dimension preserving", True, 0.0, {"subsectors": len(mapping)})

    cb = _closure(tb, [big.index(w) for w in mapping])
    cs = _closure(ts, [small.index(v) for v in mapping.values()])
    report.results["closure_sizes"] = [len(cb), len(cs)]
    report.add("closure sizes agree", len(cb) == len(cs), 0.0, [len(cb), len(cs)])

    matched = {big.index(w): small.index(v) for w, v in mapping.items()}
    dims_b, dims_s = big.quantum_dims, small.quantum_dims

    def signature(table, dims, z, keys):
        prods = tuple(int(table.matrix_at(x)[y][z]) for x, y in keys)
        return (round(float(dims[z]), 8), prods)

    while len(matched) < len(cb):
        keys_b = sorted(itertools.combinations_with_replacement(sorted(matched), 2))
        keys_s = [(matched[x], matched[y]) for x, y in keys_b]
        free_b = [z for z in cb if z not in matched]
        free_s = [z for z in cs if z not in set(matched.values())]
        sig_b: dict = {}
        sig_s: dict = {}
        for z in free_b:
            sig_b.setdefault(signature(tb, dims_b, z, keys_b), []).append(z)
        for z in free_s:
            sig_s.setdefault(signature(ts, dims_s, z, keys_s), []).append(z)
        progress = False
        for sig, zs in sig_b.items():
            if not any(sig[1]):
                continue  # not yet reached by products of matched elements
            ws = sig_s.get(sig, [])
            if len(zs) == len(ws) > 1:
                # tie: keep only images of the form conj(mu^j beta(z))
                for z in zs:
                    hint = [x for x in ws if small.labels[x] in _phi_candidates(big.labels[z])]
                    if len(hint) == 1 and hint[0] not in matched.values():
                        matched[z] = hint[0]
                        progress = True
            elif len(zs) == 1 and len(ws) == 1:
                matched[zs[0]] = ws[0]
                progress = True
            elif len(zs) != len(ws):
                report.add("extension well defined", False, 0.0,
                           {"signature_dim": sig[0], "left": [str(big.labels[z]) for z in zs],
                            "right": [str(small.labels[z]) for z in ws]})
                return report
        if not progress:
            pending = [str(big.labels[z]) for z in free_b]
            raise ExtensionAmbiguous(f"cannot extend phi uniquely; unmatched: {pending}")
    report.add("extension well defined", True)

    order = sorted(matched)
    Nb = np.stack([tb.matrix_at(a)[np.ix_(order, order)] for a in order])
    image = [matched[a] for a in order]
    Ns = np.stack([ts.matrix_at(a)[np.ix_(image, image)] for a in image])
    mism = np.argwhere(Nb != Ns)
    first = None
    if len(mism):
        a, b, c = mism[0]
        first = [str(big.labels[order[a]]), str(big.labels[order[b]]), str(big.labels[order[c]])]
    report.add("structure constants agree", len(mism) == 0, 0.0, first)
    # products of closure elements stay inside the closure on both sides
    inside_b = all(set(np.flatnonzero(tb.matrix_at(a)[b])) <= set(cb) for a in cb for b in cb)
    inside_s = all(set(np.flatnonzero(ts.matrix_at(a)[b])) <= set(cs) for a in cs for b in cs)
    report.add("closures are subrings", inside_b and inside_s)
    report.results["phi"] = {str(big.labels[a]): str(small.labels[b]) for a, b in sorted(matched.items())}
    return report
