"""Command-line interface: ``wzwfusion <command> ...``.

Exit status is 0 when every check of the command passes, 1 when a check fails
and 2 for usage errors.  ``--json`` prints one document with sorted keys:
``{command, inputs, results, checks, pass}``.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from . import affine, fusion, inclusion, levelrank, modular
from .affine import AffineWeight, AlgebraLabel, WeightError
from .report import Report

SNAP = 1e-12


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# number formatting


def num(x: float) -> float:
    """Round to 12 significant digits; magnitudes below 1e-12 become 0."""
    x = float(x)
    if not math.isfinite(x) or abs(x) < SNAP:
        return 0.0 if math.isfinite(x) else x
    return float(f"{x:.12g}")


def fmt(x: float) -> str:
    x = num(x)
    if x == 0:
        return "0"
    if abs(x) >= 1e6 or abs(x) < 1e-6:
        mantissa, exponent = f"{x:.11e}".split("e")
        return f"{mantissa}e{int(exponent)}"
    digits = 12 - 1 - int(math.floor(math.log10(abs(x))))
    text = f"{x:.{max(digits, 0)}f}"
    if "." in text:
        text = text.rstrip("0").rstrip(".")
    return text


def fmt_complex(z: complex) -> str:
    re_, im = num(z.real), num(z.imag)
    if im == 0:
        return fmt(re_)
    sign = "-" if im < 0 else "+"
    if re_ == 0:
        return f"{'-' if im < 0 else ''}{fmt(abs(im))}i"
    return f"{fmt(re_)}{sign}{fmt(abs(im))}i"


def _clean(obj: Any) -> Any:
    if isinstance(obj, float):
        return num(obj)
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return num(float(obj))
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


# ---------------------------------------------------------------------------
# output


class Output:
    def __init__(self, command: str, args: argparse.Namespace):
        self.command = command
        self.json = args.json
        self.inputs = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "json")}
        self.results: dict = {}
        self.report = Report(command)
        self.lines: list[str] = []

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    def merge(self, report: Report, prefix: str | None = None) -> None:
        self.report.extend(report, prefix)

    def check(self, name: str, passed: bool, dev: float = 0.0, detail: Any = None) -> None:
        self.report.add(name, passed, dev, detail)

    def emit(self, show_checks: bool = True) -> int:
        ok = self.report.passed
        if self.json:
            doc = {
                "command": self.command,
                "inputs": self.inputs,
                "results": self.results,
                "checks": [c.to_dict() for c in self.report.checks],
                "pass": ok,
            }
            print(json.dumps(_clean(doc), sort_keys=True, indent=2))
        else:
            for line in self.lines:
                print(line)
            if show_checks and self.report.checks:
                for c in self.report.checks:
                    print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}")
                print(f"OVERALL: {'PASS' if ok else 'FAIL'}")
        return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument helpers


def _algebra(text: str) -> AlgebraLabel:
    try:
        return affine.parse_algebra(text)
    except WeightError as exc:
        raise UsageError(str(exc)) from None


def _data(args, text: str) -> modular.ModularData:
    label = _algebra(text)
    return modular.modular_data(label, tol=args.tol, max_labels=args.max_labels)


def _weight(text: str, label: AlgebraLabel):
    try:
        return affine.parse_weight(text, label)
    except (WeightError, KeyError, ValueError) as exc:
        raise UsageError(str(exc).strip("'\"")) from None


def _inclusion(args, name: str) -> inclusion.ConformalInclusion:
    if name.endswith(".json"):
        path = Path(name)
        if not path.exists():
            raise UsageError(f"no such file: {name}")
        return inclusion.inclusion_from_json(path.read_text())
    if name.startswith("product_"):
        try:
            m, n = (int(x) for x in name.split("_")[1:])
        except ValueError:
            raise UsageError(f"unknown inclusion {name!r}") from None
        return levelrank.build_product_inclusion(m, n, max_labels=args.max_labels)
    try:
        return inclusion.builtin_inclusion(name)
    except KeyError as exc:
        raise UsageError(f"{exc.args[0]}; known: {', '.join(inclusion.builtin_names())}") from None


def _label(x) -> str:
    return inclusion.label_string(x)


# ---------------------------------------------------------------------------
# commands


def cmd_smatrix(args) -> int:
    out = Output("smatrix", args)
    data = _data(args, args.algebra)
    labels = [_label(x) for x in data.labels]
    S, T = data.S, data.T
    out.results = {
        "labels": labels,
        "S_re": S.real.tolist(),
        "S_im": S.imag.tolist(),
        "T": [[float(t.real), float(t.imag)] for t in T],
    }
    out.say(f"S-matrix of {data} ({len(data)} primaries)")
    for lab, row in zip(labels, S):
        out.say(f"{lab}: " + "  ".join(fmt_complex(z) for z in row))
    out.say("T: " + "  ".join(fmt_complex(t) for t in T))
    out.merge(modular.verify_modular(data, args.tol))
    return out.emit()


def _decomposition(parts: dict) -> str:
    if not parts:
        return "0"
    return " + ".join(_label(k) if v == 1 else f"{v} {_label(k)}" for k, v in parts.items())


def cmd_fuse(args) -> int:
    out = Output("fuse", args)
    data = _data(args, args.algebra)
    a, b = _weight(args.a, data.algebra), _weight(args.b, data.algebra)
    parts = fusion.decompose(data, a, b)
    out.results = {"decomposition": [{"label": _label(k), "multiplicity": v} for k, v in parts.items()]}
    out.say(_decomposition(parts))
    return out.emit(show_checks=False)


def cmd_qdim(args) -> int:
    out = Output("qdim", args)
    data = _data(args, args.algebra)
    w = _weight(args.weight, data.algebra)
    d = fusion.quantum_dim(data, w)
    out.results = {"label": _label(w), "quantum_dim": d}
    out.say(fmt(d))
    return out.emit(show_checks=False)


def cmd_branch(args) -> int:
    out = Output("branch", args)
    incl = _inclusion(args, args.inclusion)
    out.results = inclusion.inclusion_to_json(incl)
    out.say(f"branching rules of {incl.name}: {inclusion.describe_data(incl.sub)} in {inclusion.describe_data(incl.amb)}")
    for i, lab in enumerate(incl.amb.labels):
        parts = {incl.sub.labels[k]: int(incl.b[i, k]) for k in np.flatnonzero(incl.b[i])}
        out.say(f"{_label(lab)}: {_decomposition(parts)}")
    out.merge(inclusion.verify_branching(incl))
    return out.emit()


def cmd_kw_check(args) -> int:
    out = Output("kw-check", args)
    incl = _inclusion(args, args.inclusion)
    violations = inclusion.kw_scan(incl)
    pairs = inclusion.kw_pair_count(incl)
    out.results = {
        "pairs_checked": pairs,
        "violations": [
            {"i": _label(v.i), "lam": _label(v.lam), "j": _label(v.j), "mu": _label(v.mu),
             "re": v.value.real, "im": v.value.imag}
            for v in violations
        ],
    }
    if violations:
        out.say(f"{'i':>4} {'lam':>14} {'j':>4} {'mu':>14} {'Re':>16} {'Im':>16}")
        for v in violations:
            out.say(f"{_label(v.i):>4} {_label(v.lam):>14} {_label(v.j):>4} {_label(v.mu):>14} "
                    f"{fmt(v.value.real):>16} {fmt(v.value.imag):>16}")
        out.say(f"HYPOTHESIS FAILS ({len(violations)} of {pairs} pairs violate)")
    else:
        out.say(f"HYPOTHESIS HOLDS ({pairs} pairs checked)")
    out.check("Kac-Wakimoto positivity", not violations, 0.0, len(violations))
    return out.emit(show_checks=False)


def _pairing_table(m: int, n: int) -> list[dict]:
    table = levelrank.pairing(m, n)
    return [
        {"Lambda": L, "weight": str(w), "partner": str(p), "j": j}
        for (L, w), (p, j) in sorted(table.forward.items(), key=lambda kv: (kv[0][0], kv[0][1]))
    ]


def _su_weight(m: int, n: int, text: str) -> AffineWeight:
    if m < 2 or n < 2:
        raise UsageError("m and n must be at least 2")
    return _weight(text, AlgebraLabel.su(m, n))


def cmd_levelrank(args) -> int:
    out = Output(f"levelrank {args.action}", args)
    if args.action == "beta":
        w = _su_weight(args.m, args.n, args.weight)
        image = levelrank.beta(w)
        out.results = {"weight": str(w), "beta": str(image), "orbit": sorted(str(x) for x in levelrank.orbit(image))}
        out.say(str(image))
        if args.json:
            out.results["pairing"] = _pairing_table(args.m, args.n)
        return out.emit(show_checks=False)
    if args.action == "pair":
        w = _su_weight(args.m, args.n, args.weight)
        try:
            partner = levelrank.pair(w, args.Lambda)
        except levelrank.PairingError as exc:
            out.check("pairing", False, 0.0, str(exc))
            out.say(f"no pairing: {exc}")
            return out.emit(show_checks=False)
        out.results = {"weight": str(w), "Lambda": args.Lambda % (args.m * args.n), "partner": str(partner)}
        out.say(str(partner))
        if args.json:
            out.results["pairing"] = _pairing_table(args.m, args.n)
        return out.emit(show_checks=False)
    # verify-th42
    if args.n < 2:
        raise UsageError("n must be at least 2")
    try:
        report = levelrank.verify_th42(args.n)
    except (levelrank.BijectionFailure, levelrank.ExtensionAmbiguous) as exc:
        out.check("fusion-ring isomorphism", False, 0.0, str(exc))
        out.say(f"FAIL: {exc}")
        return out.emit(show_checks=False)
    out.merge(report)
    out.results = report.results
    sizes = report.results.get("closure_sizes")
    out.say(f"{'PASS' if report.passed else 'FAIL'}: su({args.n + 2})_{args.n} vs su({args.n})_{args.n + 2}, "
            f"closure sizes {sizes[0]} and {sizes[1]}")
    return out.emit(show_checks=False)


def reproduce_paper(max_labels: int | None = None) -> Report:
    """All counterexample, inclusion and level-rank checks in one report."""
    report = Report("reproduce-paper")
    res = report.results

    su33 = modular.s_matrix_suNk(3, 3)
    so8 = modular.modular_data(AlgebraLabel.so1(8))
    adj = AffineWeight(3, 3, (1, 1))
    s_aa, s_vv = su33.s(adj, adj), so8.s("v", "v")
    prod = s_aa * np.conj(s_vv)
    so8_incl = inclusion.builtin_inclusion("su3_3_in_so8")
    res["so8_counterexample"] = {"S_aa": s_aa.real, "S_vv": s_vv.real, "product": prod.real, "b_va": so8_incl.multiplicity("v", adj)}
    report.add("su3_3 in so8: S_aa = -1/2", abs(s_aa + 0.5) < 1e-9, abs(s_aa + 0.5))
    report.add("su3_3 in so8: S_vv = 1/2", abs(s_vv - 0.5) < 1e-9, abs(s_vv - 0.5))
    report.add("su3_3 in so8: product = -1/4", abs(prod + 0.25) < 1e-9, abs(prod + 0.25))
    report.add("su3_3 in so8: b_va = 1", so8_incl.multiplicity("v", adj) == 1)

    su42 = modular.s_matrix_suNk(4, 2)
    su6 = modular.modular_data(AlgebraLabel.su1(6))
    mu = AffineWeight.from_partition(4, 2, (1, 1, 0))
    s_mm, s_ww = su42.s(mu, mu), su6.s("1", "1")
    prod3 = s_mm * np.conj(s_ww)
    want3 = np.exp(-2j * np.pi / 6) / 6
    su6_incl = inclusion.builtin_inclusion("su4_2_in_su6")
    res["su6_counterexample"] = {"S_mumu": [s_mm.real, s_mm.imag], "S_omegaomega": [s_ww.real, s_ww.imag],
                       "product": [prod3.real, prod3.imag]}
    report.add("su4_2 in su6: S_mumu = 1/sqrt6", abs(s_mm - 1 / np.sqrt(6)) < 1e-9, abs(s_mm - 1 / np.sqrt(6)))
    report.add("su4_2 in su6: S_ww = exp(2 pi i/6)/sqrt6",
               abs(s_ww - np.exp(2j * np.pi / 6) / np.sqrt(6)) < 1e-9, abs(s_ww - np.exp(2j * np.pi / 6) / np.sqrt(6)))
    report.add("su4_2 in su6: product = exp(-2 pi i/6)/6", abs(prod3 - want3) < 1e-9, abs(prod3 - want3))
    report.add("su4_2 in su6: b_w,mu = 1", su6_incl.multiplicity("1", mu) == 1)

    e6 = inclusion.builtin_inclusion("su3_9_in_e6", cross_check=False, verify=False)
    report.extend(inclusion.verify_branching(e6), "su3_9_in_e6")
    report.add("su3_9_in_e6: table agrees with solver", inclusion.table_matches_solver(e6))
    su39 = e6.sub
    w = {p: AffineWeight.from_partition(3, 9, p) for p in [(2, 1), (4, 2), (5, 1)]}
    d21, d42 = fusion.quantum_dim(su39, w[(2, 1)]), fusion.quantum_dim(su39, w[(4, 2)])
    res["quantum_dims"] = {"(2,1)": d21, "(4,2)": d42, "(5,1)": fusion.quantum_dim(su39, w[(5, 1)])}
    report.add("d(2,1) = 3 + 2 sqrt3", abs(d21 - 3 - 2 * np.sqrt(3)) < 1e-8, abs(d21 - 3 - 2 * np.sqrt(3)))
    report.add("d(4,2) = 8 + 4 sqrt3", abs(d42 - 8 - 4 * np.sqrt(3)) < 1e-8, abs(d42 - 8 - 4 * np.sqrt(3)))
    one = {"sigma0": 1.0, "sigma1": 1.0, "sigma2": 1.0}
    a = w[(2, 1)]
    identities = {
        "a21 squared": ([(1, [a, a])], [(6, [a]), (1, ["sigma0"]), (1, ["sigma1"]), (1, ["sigma2"])]),
        "a42": ([(1, [w[(4, 2)]])], [(2, [a]), (1, ["sigma0"]), (1, ["sigma2"])]),
        "a51": ([(1, [w[(5, 1)]])], [(2, [a]), (1, ["sigma1"])]),
    }
    for key, (lhs, rhs) in identities.items():
        report.extend(fusion.dim_identity_check(su39, lhs, rhs, one), key)
    violations = inclusion.kw_scan(e6)
    res["e6_kw_violations"] = len(violations)
    report.add("su3_9_in_e6: Kac-Wakimoto violations found", len(violations) > 0, 0.0, len(violations))
    for name, incl in [("su3_3_in_so8", so8_incl), ("su4_2_in_su6", su6_incl), ("su3_9_in_e6", e6)]:
        ineq = inclusion.kw_inequality_check(incl)
        res[f"{name}_inequality"] = ineq.results
        report.extend(ineq, name)
    report.add("su3_9_in_e6: not label disjoint", not inclusion.label_disjoint(e6))

    lr = levelrank.build_product_inclusion(2, 3, max_labels=max_labels)
    report.extend(inclusion.verify_branching(lr), "product_2_3")
    for n in (2, 3):
        try:
            th = levelrank.verify_th42(n)
        except (levelrank.BijectionFailure, levelrank.ExtensionAmbiguous) as exc:
            report.add(f"level-rank subrings n={n}", False, 0.0, str(exc))
            continue
        res[f"subrings_n{n}"] = {"closure_sizes": th.results["closure_sizes"]}
        report.extend(th, f"level-rank subrings n={n}")
    return report


def cmd_reproduce_paper(args) -> int:
    out = Output("reproduce-paper", args)
    report = reproduce_paper(args.max_labels)
    out.merge(report)
    out.results = report.results
    return out.emit()


# ---------------------------------------------------------------------------
# parser


def _common(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=default(False), help="machine-readable output")
    parser.add_argument("--tol", type=float, default=default(modular.AXIOM_TOL), help="modular axiom tolerance")
    parser.add_argument("--max-labels", type=int, default=default(modular.MAX_LABELS),
                        help="refuse theories with more primaries than this")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wzwfusion", description="WZW fusion rules, conformal inclusions "
                                     "and level-rank duality")
    _common(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _common(common, suppress=True)
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("smatrix", parents=[common], help="S and T matrices with axiom checks")
    p.add_argument("algebra", help="e.g. su3@3, so8@1, e6@1")
    p.set_defaults(func=cmd_smatrix)

    p = sub.add_parser("fuse", parents=[common], help="decompose a fusion product")
    p.add_argument("algebra")
    p.add_argument("a", help="weight, e.g. [2,1] or d[1,1]")
    p.add_argument("b")
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("qdim", parents=[common], help="quantum dimension of a primary")
    p.add_argument("algebra")
    p.add_argument("weight")
    p.set_defaults(func=cmd_qdim)

    for cmd, func, text in [("branch", cmd_branch, "branching matrix with verification"),
                            ("kw-check", cmd_kw_check, "scan for Kac-Wakimoto violations")]:
        p = sub.add_parser(cmd, parents=[common], help=text)
        p.add_argument("inclusion", help="builtin name (su3_9_in_e6, product_2_3, ...) or a .json table")
        p.set_defaults(func=func)

    p = sub.add_parser("levelrank", parents=[common], help="level-rank duality tools")
    lr = p.add_subparsers(dest="action", metavar="action")
    lr.required = True
    q = lr.add_parser("beta", parents=[common], help="pie-slicing map su(m)_n -> su(n)_m")
    q.add_argument("m", type=int)
    q.add_argument("n", type=int)
    q.add_argument("weight")
    q = lr.add_parser("pair", parents=[common], help="partner of a weight in an su(mn)_1 sector")
    q.add_argument("m", type=int)
    q.add_argument("n", type=int)
    q.add_argument("weight")
    q.add_argument("Lambda", type=int)
    q = lr.add_parser("verify-th42", parents=[common], help="compare the fusion subrings for su(n+2)_n and su(n)_{n+2}")
    q.add_argument("n", type=int)
    p.set_defaults(func=cmd_levelrank)

    p = sub.add_parser("reproduce-paper", parents=[common], help="run every counterexample and duality check")
    p.set_defaults(func=cmd_reproduce_paper)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except modular.ResourceLimitError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, ArithmeticError) as exc:
        print(f"FAIL: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
