"""Command-line front end: exact invariants, structure reports, and self-checks."""
from __future__ import annotations

import argparse
import json
import sys
from typing import Callable

from .donaldson import (
    BlowupMismatch,
    InvariantQuery,
    StructureMismatch,
    adjudicate_gaussian,
    blowup_polys,
    structure_theorem,
    sw_report,
)
from .exactnum import Cyclo8Rational, rat, scalar_to_json, simplify
from .lattice import (
    LatticeError,
    basic_classes,
    format_class,
    multiplicity_notation,
    parse_class,
    parse_surface,
)
from .modforms import CATALOG, DualRouteMismatch, OrderStarvation, named_series
from .qseries import NumericZ, QSeries, from_units
from .theta import StructureFailure, ThetaUndefined


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# formatting


def _exp_str(units_: int) -> str:
    e = from_units(units_)
    return str(e)


def _latex_scalar(c) -> str:
    c = simplify(c)
    if isinstance(c, Cyclo8Rational):
        return "(" + str(c).replace("z", r"\zeta_8") + ")"
    if c.denominator == 1:
        return str(c.numerator)
    sign = "-" if c < 0 else ""
    return rf"{sign}\frac{{{abs(c.numerator)}}}{{{c.denominator}}}"


def latex_qseries(s: QSeries) -> str:
    parts = []
    for k in sorted(s.coeffs):
        e = from_units(k)
        c = _latex_scalar(s.coeffs[k])
        if e == 0:
            parts.append(c)
        else:
            ex = str(e.numerator) if e.denominator == 1 else f"{e.numerator}/{e.denominator}"
            parts.append(f"{c}\\,q^{{{ex}}}")
    body = " + ".join(parts) if parts else "0"
    if s.trunc != float("inf"):
        body += f" + O(q^{{{_exp_str(s.trunc)}}})"
    return body.replace("+ -", "- ")


def latex_zseries(z: NumericZ) -> str:
    rows = [r"\begin{tabular}{rl}", r"$n$ & coefficient of $z^n$ \\ \hline"]
    for n in sorted(z.terms):
        rows.append(f"{n} & ${_latex_scalar(z.terms[n])}$ \\\\")
    rows.append(r"\end{tabular}")
    return "\n".join(rows)


def qseries_report(name: str, s: QSeries) -> dict:
    return {
        "name": name,
        "terms": [[_exp_str(k), scalar_to_json(s.coeffs[k])] for k in sorted(s.coeffs)],
        "series": s.to_json(),
    }


def _json_default(obj):
    if isinstance(obj, (QSeries, NumericZ)):
        return obj.to_json()
    if isinstance(obj, Cyclo8Rational):
        return obj.to_json()
    if hasattr(obj, "numerator"):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def emit(payload: dict, fmt: str, latex: Callable[[], str], text: Callable[[], str]) -> str:
    if fmt == "json":
        return json.dumps(payload, default=_json_default, sort_keys=True)
    if fmt == "latex":
        return latex()
    return text()


# ---------------------------------------------------------------------------
# argument helpers


def _surface(text: str):
    try:
        return parse_surface(text)
    except (LatticeError, OSError, ValueError) as exc:
        raise UsageError(str(exc)) from exc


def _class(text: str, rank: int) -> tuple:
    try:
        return parse_class(text, rank)
    except (LatticeError, ValueError) as exc:
        raise UsageError(f"bad class {text!r}: {exc}") from exc


def _range(text: str) -> list:
    try:
        if ".." in text:
            lo, hi = text.split("..")
            return list(range(int(lo), int(hi) + 1))
        return [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}") from exc


# ---------------------------------------------------------------------------
# subcommands


def cmd_mfseries(args) -> str:
    if args.name not in CATALOG:
        raise UsageError(f"unknown series {args.name!r}; choose from {', '.join(CATALOG)}")
    s = named_series(args.name, rat(args.qorder))
    return emit(qseries_report(args.name, s), args.format, lambda: latex_qseries(s), lambda: f"{args.name} = {s}")


def cmd_donaldson(args) -> str:
    S = _surface(args.surface)
    C, F, x = _class(args.C, S.rank), _class(args.F, S.rank), _class(args.x, S.rank)
    G = _class(args.G, S.rank) if args.G else None
    rows = {}
    for r in _range(args.r):
        q = InvariantQuery(S, C, F, x, r, args.zorder, G)
        q.check()
        rows[r] = q.psi()
    payload = {
        "surface": S.describe(),
        "C": format_class(C),
        "F": format_class(F),
        "G": format_class(G) if G else None,
        "x": format_class(x),
        "psi": {str(r): v for r, v in rows.items()},
    }

    def latex() -> str:
        return "\n\n".join(f"% r = {r}\n{latex_zseries(v)}" for r, v in rows.items())

    def text() -> str:
        return "\n".join(f"Psi(x.z, p^{r}) = {v}" for r, v in rows.items())

    return emit(payload, args.format, latex, text)


def cmd_structure(args) -> str:
    S = _surface(args.surface)
    C, F, x = _class(args.C, S.rank), _class(args.F, S.rank), _class(args.x, S.rank)
    G = _class(args.G, S.rank) if args.G else None
    rep = structure_theorem(S, C, F, x, args.R, args.zorder, G)
    P = {str(n): {str(j): scalar_to_json(c) for j, c in p.items()} for n, p in rep.P.items() if p}
    table = [dict(row, W=format_class(row["W"])) for row in rep.table]
    payload = {
        "M": rep.M,
        "k": rep.k,
        "simple_type": rep.simple_type,
        "P": P,
        "leading": rep.leading,
        "checks": rep.checks,
        "classes": table,
    }

    def text() -> str:
        lines = [f"M = {rep.M}, k = {rep.k}, simple type of order k: {rep.simple_type}"]
        for n, p in P.items():
            lines.append(f"P_{n}(t) = " + " + ".join(f"({c}) t^{j}" for j, c in p.items()))
        lines.append(f"leading term: {rep.leading}")
        for row in table:
            lines.append(f"{row['set']} {row['W']} order {row['order']} eps {row['epsilon']}")
        return "\n".join(lines)

    def latex() -> str:
        rows = [r"\begin{tabular}{rl}", r"$n$ & $P_n(t)$ \\ \hline"]
        for n, p in rep.P.items():
            if p:
                poly = " + ".join(f"{_latex_scalar(c)}t^{{{j}}}" for j, c in p.items())
                rows.append(f"{n} & ${poly}$ \\\\")
        rows.append(r"\end{tabular}")
        return "\n".join(rows)

    return emit(payload, args.format, latex, text)


def cmd_basic_classes(args) -> str:
    S = _surface(args.surface)
    F = _class(args.F, S.rank)
    G = _class(args.G, S.rank) if args.G else None
    bc = basic_classes(S, F, G)
    rows = bc.all_with_orders()
    payload = {
        "M": bc.M,
        "k": bc.k,
        "classes": [
            {"set": name, "W": format_class(W), **({"order": o} if args.with_orders else {})} for name, W, o in rows
        ],
    }

    def text() -> str:
        lines = [f"M = {bc.M}, k = {bc.k}"]
        for name, W, o in rows:
            lines.append(f"{name} {multiplicity_notation(W)}" + (f" order {o}" if args.with_orders else ""))
        return "\n".join(lines)

    def latex() -> str:
        out = [r"\begin{tabular}{lll}", r"set & $W$ & order \\ \hline"]
        for name, W, o in rows:
            out.append(f"{name.replace('_', '_{')}}} & ${multiplicity_notation(W)}$ & {o} \\\\")
        out.append(r"\end{tabular}")
        return "\n".join(out)

    return emit(payload, args.format, latex, text)


def cmd_blowup(args) -> str:
    verdict = adjudicate_gaussian(min(args.max_k, 6))
    reading = "G/f^2" if verdict.get("G/f^2") else "G/f"
    bs = blowup_polys(args.max_k, args.qorder, reading)

    def poly_json(p):
        return [scalar_to_json(c) for c in p.coeffs]

    payload = {
        "reading": reading,
        "readings_polynomial": verdict,
        "B": [poly_json(p) for p in bs.B],
        "S": [poly_json(p) for p in bs.S],
    }

    def text() -> str:
        lines = [f"Gaussian reading: {reading}"]
        lines += [f"B_{k}(U) = {p}" for k, p in enumerate(bs.B)]
        lines += [f"S_{k}(U) = {p}" for k, p in enumerate(bs.S)]
        return "\n".join(lines)

    def latex() -> str:
        out = [r"\begin{tabular}{rll}", r"$k$ & $B_k(U)$ & $S_k(U)$ \\ \hline"]
        for k, (b, s) in enumerate(zip(bs.B, bs.S)):
            out.append(f"{k} & ${b}$ & ${s}$ \\\\")
        out.append(r"\end{tabular}")
        return "\n".join(out)

    return emit(payload, args.format, latex, text)


def cmd_swreport(args) -> str:
    S = _surface(args.surface)
    F = _class(args.F, S.rank)
    rep = sw_report(S, F)
    payload = {
        "R_F": [{"W": format_class(r["W"]), "order": r["order"]} for r in rep["R_F"]],
        "sw_basic": [{"W": format_class(r["W"]), "order": r["order"]} for r in rep["sw_basic"]],
        "M": rep["M"],
        "k": rep["k"],
        "omega_template": rep["omega_template"],
    }

    def text() -> str:
        lines = ["R_F:"] + [f"  {multiplicity_notation(r['W'])} order {r['order']}" for r in rep["R_F"]]
        lines += ["SW-basic:"] + [f"  {multiplicity_notation(r['W'])} order {r['order']}" for r in rep["sw_basic"]]
        lines.append(rep["omega_template"])
        return "\n".join(lines)

    return emit(payload, args.format, text, text)


def cmd_selftest(args) -> str:
    from .selftest import run_suite

    results = run_suite(args.suite)
    failed = [name for name, ok in results if not ok]
    payload = {"results": [{"check": n, "ok": ok} for n, ok in results], "failed": failed}
    out = emit(payload, args.format, lambda: "", lambda: "\n".join(f"{'PASS' if ok else 'FAIL'} {n}" for n, ok in results))
    if failed:
        raise InconsistencyExit(out)
    return out


class InconsistencyExit(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bplusone", description="Exact Donaldson invariants of b+ = 1 surfaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, qorder=True):
        p.add_argument("--format", choices=("json", "latex", "text"), default="text")
        p.add_argument("--zorder", type=int, default=8)
        if qorder:
            p.add_argument("--qorder", default="2")
        return p

    p = common(sub.add_parser("mfseries", help="q-expansion of a named modular form"))
    p.add_argument("--name", required=True)
    p.set_defaults(func=cmd_mfseries)

    p = common(sub.add_parser("donaldson", help="Psi(x.z, p^r) at a boundary period point"))
    for flag in ("--surface", "--C", "--F", "--x"):
        p.add_argument(flag, required=True)
    p.add_argument("--G")
    p.add_argument("--r", default="0")
    p.set_defaults(func=cmd_donaldson)

    p = common(sub.add_parser("structure", help="structure-theorem report"))
    for flag in ("--surface", "--C", "--F", "--x"):
        p.add_argument(flag, required=True)
    p.add_argument("--G")
    p.add_argument("--R", type=int)
    p.set_defaults(func=cmd_structure)

    p = common(sub.add_parser("basic-classes", help="basic classes and their orders"), qorder=False)
    p.add_argument("--surface", required=True)
    p.add_argument("--F", required=True)
    p.add_argument("--G")
    p.add_argument("--with-orders", action="store_true")
    p.set_defaults(func=cmd_basic_classes)

    p = common(sub.add_parser("blowup", help="universal blowup polynomials"), qorder=False)
    p.add_argument("--max-k", type=int, default=6)
    p.add_argument("--qorder")
    p.set_defaults(func=cmd_blowup)

    p = common(sub.add_parser("swreport", help="Seiberg-Witten dictionary for (X, F)"), qorder=False)
    p.add_argument("--surface", required=True)
    p.add_argument("--F", required=True)
    p.set_defaults(func=cmd_swreport)

    p = common(sub.add_parser("selftest", help="run built-in consistency checks"), qorder=False)
    p.add_argument("--suite", choices=("all", "modforms", "theta", "structure", "examples"), default="all")
    p.set_defaults(func=cmd_selftest)
    return parser


def run(argv: list | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        print(args.func(args))
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InconsistencyExit as exc:
        print(exc)
        return 1
    except (StructureMismatch, StructureFailure, BlowupMismatch, DualRouteMismatch) as exc:
        print(f"inconsistency: {exc}", file=sys.stderr)
        return 1
    except (ThetaUndefined, OrderStarvation, LatticeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def main() -> None:
    sys.exit(run())
