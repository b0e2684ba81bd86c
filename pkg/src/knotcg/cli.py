"""Command-line interface: knotcg <verb> [args] [--format text|json|csv]."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction
from typing import Sequence

from . import __version__
from .cg import (
    NOT_SLICE,
    FamilySpec,
    FamilyTerm,
    cg_disc,
    basis_independence_check,
    deficiency_certificate,
    family_expression,
    independence_certificate,
    slice_obstruction,
)
from .exact import UnitAngle
from .fox import twisted_alex_T2p
from .knots import (
    CableWord,
    SliceStatus,
    UnsupportedKnotError,
    alexander,
    alexander_orders,
    fox_milnor_is_norm,
    four_ball_genus_bound,
    is_algebraically_slice,
    lt_jump,
    tau_s,
)
from .laurent import unit_root_roots
from .parse import ParseError, parse_expression, parse_family, parse_word
from .witt import JumpFunction

__all__ = ["main", "build_parser", "signature_from_jumps", "Report"]

FORMATS = ("text", "json", "csv")
EXIT_OK, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2


class Report:
    """A command result: a JSON-able body, text lines and optional CSV rows."""

    def __init__(self, body: dict, text: list[str], rows: list[list] | None = None, status: int = EXIT_OK):
        self.body = body
        self.text = text
        self.rows = rows
        self.status = status

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.body, indent=2) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            for row in self.rows if self.rows is not None else _flat_rows(self.body):
                w.writerow(row)
            return buf.getvalue()
        return "\n".join(self.text) + "\n"


def _flat_rows(body: dict, prefix: str = "") -> list[list]:
    rows = [["key", "value"]] if not prefix else []
    for k, v in body.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            rows.extend(_flat_rows(v, key + "."))
        elif isinstance(v, list):
            rows.append([key, json.dumps(v)])
        else:
            rows.append([key, v])
    return rows


def _orders(arg: str | None) -> list[int] | None:
    if not arg:
        return None
    try:
        out = [int(x) for x in arg.split(",") if x.strip()]
    except ValueError:
        raise ValueError(f"--orders expects comma-separated positive integers, got {arg!r}") from None
    if any(o < 1 for o in out):
        raise ValueError("--orders entries must be positive")
    return out


def signature_from_jumps(j: JumpFunction, theta: UnitAngle) -> Fraction:
    """Averaged signature at theta: 2 * sum of jumps strictly before theta plus the jump at theta."""
    before = sum((v.as_fraction() for s, v in j.items() if 0 < s.fraction < theta.fraction), Fraction(0))
    at = j(theta).as_fraction() if theta.fraction != 0 else Fraction(0)
    return 2 * before + at


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- verbs --------------------------------------------------------------------

def cmd_alex(args) -> Report:
    e = parse_expression(args.expr)
    f = alexander(e)
    orders = _orders(args.orders) or sorted(alexander_orders(e))
    roots = unit_root_roots(f, orders)
    body = {
        "input": args.expr,
        "expression": str(e),
        "alexander": str(f),
        "candidate_orders": list(orders),
        "unit_roots": {str(k): v for k, v in sorted(roots.items())},
        "fox_milnor_norm": fox_milnor_is_norm(f, orders),
    }
    rows = [["angle", "multiplicity"]] + [[str(k), v] for k, v in sorted(roots.items())]
    return Report(body, [str(f)], rows)


def cmd_jumps(args) -> Report:
    e = parse_expression(args.expr)
    j = lt_jump(e)
    steps = j.signature_steps()
    rows = [["angle", "angle_float", "jump", "signature_after"]]
    text = [f"jumps of {e}"] if steps else [f"jumps of {e}: none"]
    entries = []
    for s, v, cum in steps:
        sig = 2 * cum.as_fraction()
        rows.append([str(s), f"{float(s.fraction):.12f}", str(v), _frac_str(sig)])
        text.append(f"  {str(s):>8}  {str(v):>4}")
        entries.append({"angle": str(s), "jump": str(v), "signature_after": _frac_str(sig)})
    body = {"input": args.expr, "expression": str(e), "jumps": entries}
    return Report(body, text, rows)


def cmd_sig_at(args) -> Report:
    e = parse_expression(args.expr)
    theta = UnitAngle.parse(args.angle)
    sig = signature_from_jumps(lt_jump(e), theta)
    body = {"input": args.expr, "expression": str(e), "angle": str(theta), "signature": _frac_str(sig)}
    return Report(body, [_frac_str(sig)])


def cmd_disc(args) -> Report:
    modes = ("fox", "closed_form") if args.disc_mode == "both" else (args.disc_mode,)
    found = {m: cg_disc(args.p, args.param, m, args.experimental) for m in modes}
    if len(set(found.values())) != 1:
        raise AssertionError(f"discriminant modes disagree: {found}")
    disc = next(iter(found.values()))
    roots = [str(r) for r in disc.sorted_roots()]
    body = {"p": args.p, "parameter": args.param, "modes": list(modes), "roots": roots}
    rows = [["angle"]] + [[r] for r in roots]
    return Report(body, [str(disc)], rows)


def cmd_twisted(args) -> Report:
    ta = twisted_alex_T2p(args.p, args.d, args.experimental)
    body = {
        "p": args.p,
        "d": ta.d,
        "e": ta.e,
        "numerator": str(ta.num),
        "denominator": str(ta.den),
        "h0_order": str(ta.h0_order),
    }
    text = [f"({ta.num}) / ({ta.den})", f"e = {ta.e}"]
    return Report(body, text)


def _cert_report(cert) -> Report:
    body = cert.to_dict()
    verdict = "certificate" if cert.ok else "refutation"
    return Report(body, [f"{cert.kind} of {cert.knot} at p={cert.p}: {verdict} ({cert.reason})"])


def cmd_deficiency(args) -> Report:
    return _cert_report(deficiency_certificate(parse_word(args.knot), args.p))


def cmd_independence(args) -> Report:
    return _cert_report(independence_certificate(parse_word(args.knot), args.p))


def _obstruction_text(cert) -> list[str]:
    lines = [f"family: {cert.family}", f"mode: {cert.mode_used}"]
    for h in cert.hypotheses:
        lines.append(f"  [{'ok' if h['ok'] else 'FAIL'}] {h['name']}")
    if cert.enumeration:
        en = cert.enumeration
        lines.append(f"  enumerated cases: {en['count']} (all witnessed: {en['all_witnessed']})")
    lines.extend(f"  note: {n}" for n in cert.notes)
    lines.append(f"verdict: {cert.verdict}")
    return lines


def cmd_obstruct(args) -> Report:
    if not args.family:
        raise ValueError("obstruct needs --family")
    fam = parse_family(args.family)
    cert = slice_obstruction(fam, args.mode, args.budget, args.jobs, args.experimental)
    body = cert.to_dict()
    body["input"]["expression"] = str(family_expression(fam))
    rows = None
    if cert.enumeration:
        rows = [["a", "b", "witness"]] + [
            [" ".join(map(str, c["a"])), " ".join(map(str, c["b"])), c["witness"] or ""]
            for c in cert.enumeration["cases"]
        ]
    status = EXIT_OK if cert.verdict == NOT_SLICE else EXIT_INCONCLUSIVE
    return Report(body, _obstruction_text(cert), rows, status)


def cmd_demo(args) -> Report:
    checks: list[dict] = []

    def check(name: str, ok: bool, detail) -> None:
        checks.append({"name": name, "ok": bool(ok), "detail": detail})

    trefoil = CableWord.torus(2, 3)
    fam = FamilySpec((FamilyTerm(trefoil, 13, 15, 1),))
    expr = family_expression(fam)
    cert = slice_obstruction(fam, "exhaustive", args.budget, args.jobs)
    check(
        "main combination is not slice",
        cert.verdict == NOT_SLICE and cert.enumeration["count"] == 48,
        {"expression": str(expr), "verdict": cert.verdict, "cases": cert.enumeration["count"]},
    )
    status = is_algebraically_slice(expr)
    norm = fox_milnor_is_norm(alexander(expr), alexander_orders(expr))
    check(
        "main combination is algebraically slice",
        status == SliceStatus.ZERO_CERTIFICATE and norm,
        {"status": status.value, "alexander_is_norm": norm},
    )
    tau = tau_s(expr)
    per_term = {str(w): tau_s(parse_expression(str(w)) * n)[0] for w, n in expr.items()}
    check("tau = s/2 = 0", tau == (0, 0), {"per_term": per_term})
    bound = four_ball_genus_bound(expr)
    check("four-ball genus bound", bound is not None, bound)
    j1 = lt_jump(CableWord.torus(2, 13))(UnitAngle(1, 26))
    j2 = lt_jump(trefoil.cable(2, 13))(UnitAngle(1, 12))
    check("jump values", j1 == -1 and j2 == -1, {"T(2,13) at 1/26": str(j1), "T(2,3;2,13) at 1/12": str(j2)})
    coeffs = range(-2, 3) if args.full else range(-1, 2)
    basis = basis_independence_check((13, 17, 19), tuple(coeffs))
    check(
        "basis family independence",
        basis["only_trivial_survives"] and basis["jump_argument_failures"] == 0,
        {k: basis[k] for k in ("combinations", "zero_jump_combinations", "obstructed")},
    )
    ok = all(c["ok"] for c in checks)
    body = {"tool_version": __version__, "checks": checks, "all_ok": ok}
    text = [f"[{'ok' if c['ok'] else 'FAIL'}] {c['name']}" for c in checks]
    return Report(body, text, status=EXIT_OK if ok else EXIT_INCONCLUSIVE)


# -- argument parsing ---------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    default_fmt = os.environ.get("KNOTCG_FORMAT", "text")
    if default_fmt not in FORMATS:
        default_fmt = "text"
    common.add_argument("--format", choices=FORMATS, default=default_fmt)
    common.add_argument("--output", help="write the report to this file")
    common.add_argument("--orders", help="comma-separated candidate root orders")
    common.add_argument("--jobs", type=int, default=1)
    common.add_argument("--budget", type=int, default=100_000, help="maximum enumerated cases")
    common.add_argument("--experimental", action="store_true", help="allow composite p")

    ap = argparse.ArgumentParser(prog="knotcg", description=__doc__)
    ap.add_argument("--version", action="version", version=f"knotcg {__version__}")
    sub = ap.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("alex", parents=[common], help="Alexander polynomial")
    p.add_argument("expr")
    p.set_defaults(func=cmd_alex)

    p = sub.add_parser("jumps", parents=[common], help="Levine-Tristram jump function")
    p.add_argument("expr")
    p.set_defaults(func=cmd_jumps)

    p = sub.add_parser("sig-at", parents=[common], help="averaged signature at an angle c/m")
    p.add_argument("expr")
    p.add_argument("angle")
    p.set_defaults(func=cmd_sig_at)

    p = sub.add_parser("disc", parents=[common], help="discriminant class of tau(T(2,p), chi)")
    p.add_argument("p", type=int)
    p.add_argument("param", type=int)
    p.add_argument("--disc-mode", choices=("fox", "closed_form", "both"), default="both")
    p.set_defaults(func=cmd_disc)

    p = sub.add_parser("twisted", parents=[common], help="twisted Alexander polynomial of T(2,p)")
    p.add_argument("p", type=int)
    p.add_argument("d", type=int)
    p.set_defaults(func=cmd_twisted)

    for verb, fn in (("deficiency", cmd_deficiency), ("independence", cmd_independence)):
        p = sub.add_parser(verb, parents=[common], help=f"p-{verb} certificate")
        p.add_argument("knot")
        p.add_argument("p", type=int)
        p.set_defaults(func=fn)

    p = sub.add_parser("obstruct", parents=[common], help="slice obstruction for a cable family")
    p.add_argument("--family", required=False)
    p.add_argument("--mode", choices=("structural", "exhaustive"), default="structural")
    p.set_defaults(func=cmd_obstruct)

    p = sub.add_parser("demo", parents=[common], help="self-checking run of the headline results")
    p.add_argument("--full", action="store_true", help="use coefficients -2..2 in the basis check")
    p.set_defaults(func=cmd_demo)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        report = args.func(args)
    except ParseError as exc:
        src = getattr(args, "expr", None) or getattr(args, "family", None) or getattr(args, "knot", "")
        print(f"knotcg: input error: {exc}\n  {src}\n  {' ' * (exc.col - 1)}^", file=sys.stderr)
        return EXIT_INPUT
    except UnsupportedKnotError as exc:
        print(f"knotcg: UNKNOWN: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except ValueError as exc:
        print(f"knotcg: input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    out = report.render(args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return report.status


if __name__ == "__main__":
    sys.exit(main())
