"""Command-line front end: params, expsum, code, ghw and verify."""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from fractions import Fraction

from . import codegen, expsum, ghw
from .codegen import DegeneracyReport, make_spec
from .field import field_for
from .numtheory import ParameterError, is_irreducible, is_two_primitive_root
from .subspaces import BudgetExceeded
from .verify import verify

log = logging.getLogger("tracecodes")


def hex_element(text: str) -> int:
    try:
        value = int(text, 16)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a hexadecimal field element: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("field elements are non-negative")
    return value


def parse_range(text: str) -> list[int]:
    """'1-3,10' -> [1, 2, 3, 10]."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        try:
            a = int(lo)
            b = int(hi) if sep else a
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad range {text!r}") from None
        if a < 1 or b < a:
            raise argparse.ArgumentTypeError(f"bad range {text!r}")
        out.extend(range(a, b + 1))
    return sorted(set(out))


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _frac(x) -> int | str:
    x = Fraction(x)
    return int(x) if x.denominator == 1 else str(x)


def cmd_params(args) -> int:
    ctx = field_for(args.l, args.m)
    p = ctx.params
    info = {
        "schema": 1,
        "l": p.l,
        "m": p.m,
        "s": p.s,
        "q": p.q,
        "modulus": str(ctx.modulus),
        "modulus_hex": f"{ctx.modulus.bits:x}",
        "modulus_irreducible": is_irreducible(ctx.modulus.bits),
        "two_primitive_root": is_two_primitive_root(p.l, p.m),
        "gamma": f"{ctx.gamma:x}",
        "alpha": f"{ctx.alpha:x}",
        "exponent": p.exponent,
    }
    if args.out:
        emit(dump_json(info), args.out)
    else:
        sys.stdout.write("".join(f"{k}: {v}\n" for k, v in info.items() if k != "schema"))
    return 0


def cmd_expsum(args) -> int:
    ctx = field_for(args.l, args.m)
    rows = expsum.expsum_rows(ctx)
    if not args.all:
        if args.a is None:
            raise ParameterError("give --a HEX or --all")
        if args.a == 0:
            raise ParameterError("a must be nonzero")
        ctx.check(args.a)
        rows = [rows[args.a - 1]]
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=["a", "S_brute", "S_closed", "E_a", "O_a"], lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    emit(buf.getvalue(), args.out)
    return 0


def code_report(spec, method: str) -> dict:
    """JSON-ready summary of one code, cross-checked against brute force when feasible."""
    discrepancies = []
    rank, kernel = codegen.empirical_dimension(spec)
    result = codegen.weight_distribution(spec, method)
    try:
        reference = codegen.weight_distribution(spec, "brute") if method != "brute" else result
    except ValueError as exc:
        log.info("no brute-force cross-check: %s", exc)
        reference = None

    degenerate = rank < 2 * spec.s
    if isinstance(result, DegeneracyReport):
        distribution = None
        closed_note = result.reason
    else:
        distribution = result.as_list()
        closed_note = None
        if reference is not None and reference.counts != result.counts:
            discrepancies.append(
                {"kind": "method-mismatch", "method": method, "value": result.enumerator(), "brute": reference.enumerator()}
            )
    observed = reference if reference is not None else (None if distribution is None else result)
    if observed is None:
        observed = codegen.weight_distribution(spec, "transform")
    if not degenerate and spec.b == 0:
        printed = codegen.closed_form_table(spec, printed=True)
        actual = {Fraction(w): Fraction(a) for w, a in observed.counts.items() if w}
        if printed != actual:
            discrepancies.append(
                {
                    "kind": "paper-table",
                    "explained": True,
                    "printed": {str(_frac(w)): _frac(a) for w, a in printed.items()},
                    "observed": {str(w): a for w, a in observed.counts.items() if w},
                }
            )
    ratio = None
    if not degenerate:
        value, exceeds = codegen.minmax_ratio(spec, observed)
        ratio = {"value": str(value), "exceeds_half": exceeds}
    out = {
        "schema": 1,
        "spec": spec.as_dict(),
        "method": method,
        "n": codegen.build_defining_set(spec).n,
        "formal_dimension": 2 * spec.s,
        "empirical_dimension": rank,
        "degenerate": degenerate,
        "kernel": [f"{k:x}" for k in kernel],
        "distribution": distribution,
        "enumerator": None if distribution is None else result.enumerator(),
        "ratio": ratio,
        "discrepancies": discrepancies,
    }
    if closed_note:
        out["closed_form"] = {"status": "inapplicable", "reason": closed_note}
    return out


def cmd_code(args) -> int:
    spec = make_spec(args.l, args.m, args.a, args.b)
    report = code_report(spec, args.method)
    if args.gen_matrix:
        emit(codegen.generator_matrix_text(spec), args.gen_matrix)
    emit(dump_json(report), args.out)
    return 0


def cmd_ghw(args) -> int:
    spec = make_spec(args.l, args.m, args.a, args.b)
    table = ghw.ghw_table(
        spec,
        budget=args.budget,
        rs=args.r,
        method=args.method,
        threads=args.threads,
        check_identity=args.check_identity,
        actual_code=args.actual_code,
    )
    out = table.as_dict()
    if args.check_identity:
        out["identity"] = {"checked": table.identity_checked, "failures": table.identity_failures}
    emit(dump_json(out), args.out)
    return 1 if table.discrepancies else 0


def cmd_verify(args) -> int:
    report = verify(
        args.l,
        args.m,
        budget=args.budget,
        threads=args.threads,
        seed=args.seed,
        samples=args.samples,
        brute_samples=args.brute_samples,
        ghw_scope=args.ghw_scope,
    )
    emit(dump_json(report.as_dict()), args.out)
    for c in report.claims:
        tag = f" [{c.kind}, explained]" if c.status == "discrepancy" and c.explained else ""
        print(f"{c.status:>15}  {c.claim} ({c.checked}){tag}", file=sys.stderr)
    return report.exit_status


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--l", type=int, required=True, help="odd prime l")
    common.add_argument("--m", type=int, default=1, help="exponent m (default 1)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled checks (default 0)")
    common.add_argument("--threads", type=int, default=1, help="worker threads; results do not depend on it")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=0)

    spec_args = argparse.ArgumentParser(add_help=False)
    spec_args.add_argument("--a", type=hex_element, required=True, help="nonzero field element, hex")
    spec_args.add_argument("--b", type=hex_element, required=True, help="field element, hex")

    ap = argparse.ArgumentParser(prog="tracecodes", description="Binary codes from trace functions over GF(2^phi(l^m)).")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", parents=[common], help="field parameters")
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("expsum", parents=[common], help="exponential sums S(a) as CSV")
    p.add_argument("--a", type=hex_element)
    p.add_argument("--all", action="store_true", help="every nonzero a")
    p.set_defaults(func=cmd_expsum)

    p = sub.add_parser("code", parents=[common, spec_args], help="length, dimension, weight distribution")
    p.add_argument("--method", choices=["brute", "transform", "closed"], default="brute")
    p.add_argument("--gen-matrix", metavar="PATH", help="also write the generator matrix as 0/1 text")
    p.set_defaults(func=cmd_code)

    p = sub.add_parser("ghw", parents=[common, spec_args], help="generalized Hamming weights")
    p.add_argument("--r", type=parse_range, help="e.g. 1-2,10-12 (default: all)")
    p.add_argument("--method", choices=["brute", "closed", "both"], default="both")
    p.add_argument("--budget", type=float, default=ghw.DEFAULT_BUDGET, help="brute-force cost cap")
    p.add_argument("--check-identity", action="store_true", help="check the B_H identity on every subspace")
    p.add_argument("--actual-code", action="store_true", help="for degenerate specs, compute the hierarchy of the actual code")
    p.set_defaults(func=cmd_ghw)

    p = sub.add_parser("verify", parents=[common], help="cross-check every closed form")
    p.add_argument("--budget", type=float, default=ghw.DEFAULT_BUDGET)
    p.add_argument("--samples", type=int, default=1000, help="random (a,b) pairs for S(a,b) at large q")
    p.add_argument("--brute-samples", type=int, default=20, help="random specs for brute-force weights")
    p.add_argument("--ghw-scope", choices=["auto", "all", "none"], default="auto")
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    if hasattr(args, "budget"):
        args.budget = int(args.budget)
    try:
        return args.func(args)
    except (ParameterError, ValueError, BudgetExceeded) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
