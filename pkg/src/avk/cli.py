"""Command-line front end: JSON in, JSON or plain tables out, exact rationals throughout.

Exit status is 0 on success, 1 when a mathematical check fails and 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import Any, Callable

from . import arrangements, bounds, curves, morsify, resolution
from .qforms import SymmetricForm, format_fraction, inertia, radical_basis, signed_perm_congruent

SCHEMA = "avk-1"


class InputError(Exception):
    pass


class CheckFailed(Exception):
    """A mathematical identity did not hold; the message names it."""

    def __init__(self, message: str, payload: dict):
        super().__init__(message)
        self.payload = payload


def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def _inertia_json(f: SymmetricForm) -> list[int]:
    t = inertia(f)
    return [t.sigma_plus, t.sigma_minus, t.sigma_zero]


# ---------------------------------------------------------------------------
# rendering


def _cell(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else format_fraction(x)
    if isinstance(x, str) and x.endswith("/1"):
        return x[:-2]
    if isinstance(x, (list, tuple)):
        return "(" + ",".join(_cell(v) for v in x) + ")"
    return str(x)


def _matrix_lines(basis, rows) -> list[str]:
    cells = [[_cell(b) for b in basis]] + [[_cell(b)] + [_cell(x) for x in row] for b, row in zip(basis, rows)]
    header = [""] + cells[0]
    body = cells[1:]
    widths = [max(len(r[i]) for r in [header] + body) for i in range(len(header))]
    fmt = lambda r: "  ".join(c.rjust(w) for c, w in zip(r, widths)).rstrip()
    return [fmt(header)] + [fmt(r) for r in body]


def _table(obj, indent: str = "") -> list[str]:
    lines = []
    for key, val in obj.items():
        if key == "schema":
            continue
        if isinstance(val, dict) and "basis" in val and ("gram" in val or "matrix" in val):
            lines.append(f"{indent}{key}:")
            rows = val.get("gram", val.get("matrix"))
            lines += [indent + "  " + ln for ln in _matrix_lines(val["basis"], rows)]
        elif isinstance(val, dict):
            lines.append(f"{indent}{key}:")
            lines += _table(val, indent + "  ")
        elif isinstance(val, list) and val and all(isinstance(v, dict) for v in val):
            lines.append(f"{indent}{key}:")
            for v in val:
                if all(not isinstance(x, (dict, list)) or _flat_list(x) for x in v.values()):
                    lines.append(indent + "  " + "  ".join(f"{k}={_cell(x)}" for k, x in v.items()))
                else:
                    lines += _table(v, indent + "  ")
                    lines.append("")
        else:
            lines.append(f"{indent}{key}: {_cell(val)}")
    return lines


def _flat_list(x) -> bool:
    return isinstance(x, list) and all(not isinstance(v, (dict, list)) for v in x)


def _emit(payload: dict, fmt: str) -> None:
    payload = {"schema": SCHEMA, **payload}
    if fmt == "json":
        sys.stdout.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")
    else:
        sys.stdout.write("\n".join(_table(payload)) + "\n")


# ---------------------------------------------------------------------------
# subcommands


def cmd_form(args) -> dict:
    f = SymmetricForm.from_json(_read_json(args.input))
    if args.action == "inertia":
        return {"inertia": _inertia_json(f)}
    if args.action == "radical":
        return {"radical": [[format_fraction(x) for x in v] for v in radical_basis(f)], "basis": list(f.basis)}
    other = SymmetricForm.from_json(_read_json(args.other))
    if f.dim != other.dim:
        raise CheckFailed("signed-permutation congruence: dimensions differ", {"congruent": False})
    ok, w = signed_perm_congruent(f, other)
    out = {"congruent": ok, "witness": None if w is None else {"perm": list(w.perm), "signs": list(w.signs)}}
    if not ok:
        raise CheckFailed("signed-permutation congruence fails", out)
    return out


def cmd_singularity(args) -> dict:
    if args.action == "catalog":
        return {"names": list(morsify.CATALOG_NAMES)}
    if args.catalog:
        desc = morsify.descriptor(args.catalog)
        diagram = desc.diagram
        head = {"name": desc.name, "polynomial": desc.polynomial, "mu": desc.mu}
    elif args.diagram:
        diagram = morsify.AGDiagram.from_json(_read_json(args.diagram))
        head = {}
    else:
        raise InputError("singularity residue needs --diagram or --catalog")
    res = morsify.boundary_residue(diagram, bar_only=args.bar_only)
    out = {**head, "qis": morsify.is_qis(diagram), "residue": res.to_json(),
           "inertia_plus": _inertia_json(res.q_plus)}
    if res.q_minus is not None:
        out["inertia_minus"] = _inertia_json(res.q_minus)
    return out


def cmd_resolution(args) -> dict:
    if args.action == "lambda":
        if args.graph:
            g = resolution.WeightedGraph.from_json(_read_json(args.graph))
            return {"contracted": resolution.contract_nonreal(g).to_json()}
        if args.surface:
            lam = resolution.lambda_from_resolution(resolution.BoundarySurfaceData.from_json(_read_json(args.surface)))
            return {"lambda": lam.to_json(), "q": resolution.residue_from_lambda(lam).to_json()}
        raise InputError("resolution lambda needs --graph or --surface")
    # cross-check against the morsification route
    names = [args.name] if args.name else list(resolution.RESOLUTION_NAMES)
    rows = [_route_row(n) for n in names]
    out = {"cases": rows}
    bad = [r["name"] for r in rows if not r["match"]]
    if bad:
        raise CheckFailed(f"resolution and morsification routes disagree for {', '.join(bad)}", out)
    return out


def _route_row(name: str) -> dict:
    q_res = resolution.resolution_route_q(name)
    q_mor = morsify.boundary_residue(morsify.descriptor(name).diagram).q_plus
    ok = q_res.dim == q_mor.dim and signed_perm_congruent(q_res, q_mor)[0]
    return {"name": name, "resolution": q_res.to_json(), "morsification": q_mor.to_json(), "match": ok}


def cmd_arrangement(args) -> dict:
    a = arrangements.Arrangement.from_json(_read_json(args.input))
    cc = arrangements.enumerate_cells(a)
    if args.action == "cells":
        return {"counts": cc.counts(), "euler_characteristic": cc.euler_characteristic(),
                "regions": [{"label": lab, "sign": "+" if cc.region_sign(i) > 0 else "-"}
                            for i, lab in enumerate(cc.region_labels())]}
    routes = list(arrangements.ROUTES) if args.route == "all" else [args.route]
    results = {r: arrangements.ROUTES[r](a, cc) for r in routes}
    out: dict = {"routes": {r: p.to_json() for r, p in results.items()}}
    failures = []
    first = results[routes[0]]
    agree = all(first.same_matrix(p) for p in results.values())
    if len(routes) > 1:
        out["routes_agree"] = agree
        if not agree:
            failures.append("route agreement")
    if args.check_inertia_prediction:
        checks = arrangements.check_inertia_prediction(a, first)
        out["inertia"] = [{"sign": "+" if c.sign > 0 else "-",
                           "predicted": [c.predicted.sigma_plus, c.predicted.sigma_minus, c.predicted.sigma_zero],
                           "computed": [c.computed.sigma_plus, c.computed.sigma_minus, c.computed.sigma_zero],
                           "ok": c.ok} for c in checks]
        failures += [f"inertia prediction ({'+' if c.sign > 0 else '-'} block)" for c in checks if not c.ok]
    if failures:
        raise CheckFailed("failed: " + ", ".join(failures), out)
    return out


def cmd_curve(args) -> dict:
    if args.action == "pentic":
        verdicts = curves.pentic_position_test()
        return {"positions": [{"position": v.position, "sigma_zero": v.sigma_zero, "verdict": v.verdict}
                              for v in verdicts]}
    model = curves.CurveModel.from_json(_read_json(args.model))
    phi = curves.assemble_phi(model, kind=args.kind)
    out = {"phi": phi.to_json(),
           "inertia": {("+" if s > 0 else "-"): _inertia_json(phi.block(s)) for s in (1, -1)}}
    if args.action == "phi":
        return out
    if not args.invariants:
        raise InputError("curve sharpness needs --invariants")
    ci = curves.CurveInvariants.from_json(_read_json(args.invariants))
    checks = curves.milnor_pluecker_validate(ci)
    reports = curves.sharpness_check(model, ci.r)
    out["checks"] = [{"name": c.name, "lhs": format_fraction(c.lhs), "rhs": format_fraction(c.rhs), "ok": c.ok}
                     for c in checks]
    out["sharpness"] = [{"sign": "+" if r.sign > 0 else "-", "radical_rank": r.radical_rank,
                         "expected": r.expected, "ok": r.ok} for r in reports]
    gaps = []
    for s in (1, -1):
        if s not in ci.chi_rx or s not in ci.b1_interior:
            continue
        sl = curves.inequality_slacks(ci, s, phi.block(s))
        gaps.append({"sign": "+" if s > 0 else "-", "gap": format_fraction(curves.gap_delta(ci, s)),
                     "slacks": [format_fraction(sl.plus), format_fraction(sl.minus), format_fraction(sl.zero)],
                     "ok": curves.gap_delta(ci, s) == sl.total})
    out["gap"] = gaps
    failed = [c.name for c in checks if not c.ok] + [f"gap ({g['sign']})" for g in gaps if not g["ok"]]
    if failed:
        raise CheckFailed("failed: " + ", ".join(failed), out)
    return out


def _lhs_from(path: str, sign: str) -> tuple[int, int, int]:
    data = _read_json(path)
    if "gram" in data:
        t = inertia(SymmetricForm.from_json(data))
    else:
        try:
            s = 1 if sign == "+" else -1
            labels = data["basis"]
            idx = [i for i, x in enumerate(data["signs"]) if (1 if x == "+" else -1) == s]
            rows = [[data["matrix"][i][j] for j in idx] for i in idx]
        except (KeyError, TypeError, IndexError) as exc:
            raise InputError(f"{path}: expected a form or a partition-form result ({exc})") from None
        t = inertia(SymmetricForm([labels[i] for i in idx], [[bounds.to_fraction(x) for x in r] for r in rows]))
    return t.sigma_plus, t.sigma_minus, t.sigma_zero


def cmd_bounds(args) -> dict:
    data = _read_json(args.invariants)
    if not isinstance(data, dict):
        raise InputError(f"{args.invariants}: expected a JSON object")
    if args.lhs_from:
        sp, sm, sz = _lhs_from(args.lhs_from, args.sign)
        data = {**data, "sigma_plus": sp, "sigma_minus": sm, "sigma_zero": sz}
    iv = bounds.InvariantBundle.from_json(data)
    which = [w for w in args.which.split(",") if w.strip()]
    report = bounds.run(which, iv)
    out = report.to_json()
    if not report.ok:
        failed = [r.id for r in report.rows if r.verdict == "fails"]
        raise CheckFailed("failed: " + ", ".join(failed), out)
    return out


def _selftest_ade() -> tuple[list[dict], list[str]]:
    rows, bad = [], []
    for name in morsify.CATALOG_NAMES:
        desc = morsify.descriptor(name)
        ok, _ = desc.check()
        rows.append({"name": name, "expected": desc.expected.to_json(), "computed": desc.computed().to_json(),
                     "match": ok})
        if not ok:
            bad.append(f"ade-table[{name}]")
    return rows, bad


def _selftest_routes() -> tuple[list[dict], list[str]]:
    rows = [_route_row(n) for n in resolution.RESOLUTION_NAMES]
    return rows, [f"routes[{r['name']}]" for r in rows if not r["match"]]


def _selftest_arrangements() -> tuple[list[dict], list[str]]:
    rows, bad = [], []
    for m in (4, 6, 8):
        a = arrangements.moment_arrangement(m, 2)
        cc = arrangements.enumerate_cells(a)
        phis = [arrangements.ROUTES[r](a, cc) for r in arrangements.ROUTES]
        agree = all(phis[0].same_matrix(p) for p in phis[1:])
        pred = all(c.ok for c in arrangements.check_inertia_prediction(a, phis[0]))
        rows.append({"m": m, "routes_agree": agree, "inertia_prediction": pred})
        if not agree:
            bad.append(f"arrangement-routes[m={m}]")
        if not pred:
            bad.append(f"arrangement-inertia[m={m}]")
    return rows, bad


def _selftest_pentic() -> tuple[list[dict], list[str]]:
    verdicts = {v.position: v for v in curves.pentic_position_test()}
    rows = [{"position": v.position, "sigma_zero": v.sigma_zero, "verdict": v.verdict} for v in verdicts.values()]
    ok = verdicts["same-side"].verdict == "excluded" and verdicts["opposite-side"].sigma_zero >= 1
    return rows, [] if ok else ["pentic"]


SELFTESTS: dict[str, Callable[[], tuple[list[dict], list[str]]]] = {
    "ade-table": _selftest_ade,
    "routes": _selftest_routes,
    "arrangements": _selftest_arrangements,
    "pentic": _selftest_pentic,
}


def cmd_selftest(args) -> dict:
    names = list(SELFTESTS) if args.suite == "all" else [args.suite]
    out, bad = {}, []
    for n in names:
        rows, failed = SELFTESTS[n]()
        out[n] = rows
        bad += failed
    if bad:
        raise CheckFailed("failed: " + ", ".join(bad), out)
    return out


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    fmt_parent = argparse.ArgumentParser(add_help=False)
    fmt_parent.add_argument("--format", choices=("json", "table"), default=argparse.SUPPRESS,
                            help="output format (default from AVK_OUTPUT, else json)")

    p = argparse.ArgumentParser(prog="avk", description="Exact partition forms and inequality checks for real curves.",
                                parents=[fmt_parent])
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("form", help="inertia, radical or congruence of a symmetric form", parents=[fmt_parent])
    f.add_argument("action", choices=("inertia", "radical", "congruent"))
    f.add_argument("--input", required=True)
    f.add_argument("--other", help="second form for 'congruent'")
    f.set_defaults(func=cmd_form)

    s = sub.add_parser("singularity", help="residue forms from morsification diagrams", parents=[fmt_parent])
    s.add_argument("action", choices=("residue", "catalog"))
    g = s.add_mutually_exclusive_group()
    g.add_argument("--diagram")
    g.add_argument("--catalog", metavar="NAME")
    s.add_argument("--bar-only", action="store_true", help="only require the positive inner block to be nondegenerate")
    s.set_defaults(func=cmd_singularity)

    r = sub.add_parser("resolution", help="linking forms from resolution data", parents=[fmt_parent])
    r.add_argument("action", choices=("lambda", "crosscheck"))
    r.add_argument("--graph")
    r.add_argument("--surface")
    r.add_argument("--name", help="singularity for crosscheck (default: all supported)")
    r.set_defaults(func=cmd_resolution)

    a = sub.add_parser("arrangement", help="partition forms of hyperplane arrangements", parents=[fmt_parent])
    a.add_argument("action", choices=("phi", "cells"))
    a.add_argument("--input", required=True)
    a.add_argument("--route", choices=tuple(arrangements.ROUTES) + ("all",), default="face")
    a.add_argument("--check-inertia-prediction", action="store_true")
    a.set_defaults(func=cmd_arrangement)

    c = sub.add_parser("curve", help="partition forms of curve models", parents=[fmt_parent])
    c.add_argument("action", choices=("phi", "sharpness", "pentic"))
    c.add_argument("--model")
    c.add_argument("--invariants")
    c.add_argument("--kind", choices=("q", "qbar"), default="q")
    c.set_defaults(func=cmd_curve)

    b = sub.add_parser("bounds", help="evaluate inequality right-hand sides", parents=[fmt_parent])
    b.add_argument("--invariants", required=True)
    b.add_argument("--which", required=True,
                   help="comma list: arnold-viro:<variant>, petrovskii, smith, hodge, cuspidal")
    b.add_argument("--lhs-from", help="form or partition-form JSON supplying sigma_plus/minus/zero")
    b.add_argument("--sign", choices=("+", "-"), default="+", help="sign block used with --lhs-from")
    b.set_defaults(func=cmd_bounds)

    t = sub.add_parser("selftest", help="golden and cross-route checks", parents=[fmt_parent])
    t.add_argument("suite", choices=tuple(SELFTESTS) + ("all",), nargs="?", default="all")
    t.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if not hasattr(args, "format"):
        env = os.environ.get("AVK_OUTPUT", "json")
        args.format = env if env in ("json", "table") else "json"
    if args.command == "curve" and args.action != "pentic" and not args.model:
        print("avk: error: curve phi/sharpness needs --model", file=sys.stderr)
        return 2
    if args.command == "form" and args.action == "congruent" and not args.other:
        print("avk: error: form congruent needs --other", file=sys.stderr)
        return 2
    try:
        payload = args.func(args)
    except CheckFailed as exc:
        _emit({"ok": False, **exc.payload}, args.format)
        print(f"avk {args.command}: {exc}", file=sys.stderr)
        return 1
    except (InputError, ValueError, ArithmeticError) as exc:
        print(f"avk {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    _emit({"ok": True, **payload}, args.format)
    return 0


if __name__ == "__main__":
    sys.exit(main())
