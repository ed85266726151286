"""Command-line front end.

Exit codes: 0 decided or all checks passed, 1 usage error, 2 budget
exhausted, 3 a verification check failed or the two methods disagree.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .dot import to_dot
from .maps import DEFAULT_BUDGET, Budget, BudgetExceeded, find_fpf_automorphism, is_retraction
from .poset import height_width, is_automorphic_width3
from .sections import SectionCode, horizon, is_nice, is_section, section
from .stacks import oracle_4crown_stack_retract
from .splits import assemble_split_retraction, search_retractive_split
from .table import MAX_TABLE_HEIGHT, build_segment_table
from .towers import check_theo32

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _code(word: str) -> str:
    try:
        return SectionCode(word).bits
    except ValueError as e:
        raise UsageError(str(e)) from None


def _n2(word: str) -> str:
    code = _code(word)
    if not SectionCode(code).in_n2:
        raise UsageError(f"{code} is not in N_2 (needs height >= 2 and both end bits 1)")
    return code


def _yn(b: bool) -> str:
    return "y" if b else "n"


def cmd_build(args, out):
    out.write(section(_code(args.code)).dumps() + "\n")


def cmd_classify(args, out):
    code = _code(args.code)
    P = section(code)
    h, w = height_width(P)
    rows = [
        ("code", code),
        ("classes", ",".join(sorted(SectionCode(code).classes))),
        ("points", P.n),
        ("height", h),
        ("width", w),
        ("section", _yn(is_section(P))),
        ("nice", _yn(is_nice(P))),
        ("horizon", horizon(P) if h >= 2 else "-"),
        ("automorphic", _yn(is_automorphic_width3(P) and find_fpf_automorphism(P, args.budget) is not None)),
    ]
    for k, v in rows:
        out.write(f"{k}\t{v}\n")


def cmd_table(args, out):
    if not 1 <= args.max_height <= MAX_TABLE_HEIGHT + 4:
        raise UsageError(f"--max-height must lie in [1, {MAX_TABLE_HEIGHT + 4}]")
    table = build_segment_table(args.max_height, use_criteria=not args.no_criteria, budget=args.budget)
    out.write(table.to_tsv())


def _flags_for(code: str, budget):
    table = build_segment_table(max(1, len(code) - 1), budget=budget)
    return table.flag


def _split_record(code: str, budget) -> dict | None:
    P = section(code)
    cert = search_retractive_split(P, code, _flags_for(code, budget), budget=budget)
    if cert is None:
        return None
    r = assemble_split_retraction(P, cert)
    return {"code": code, "method": "split", "image": "stack", "certificate": cert.to_json(), "map": list(r.map)}


def _oracle_record(code: str, budget) -> dict | None:
    r = oracle_4crown_stack_retract(section(code), budget)
    if r is None:
        return None
    return {"code": code, "method": "oracle", "image": "stack", "certificate": None, "map": list(r.map)}


def cmd_check_retract(args, out):
    code = _n2(args.code) if args.method in ("split", "both") else _code(args.code)
    records = {}
    if args.method in ("oracle", "both"):
        records["oracle"] = _oracle_record(code, args.budget)
    if args.method in ("split", "both"):
        records["split"] = _split_record(code, args.budget)
    for rec in records.values():
        out.write("none\n" if rec is None else json.dumps(rec) + "\n")
    if len({rec is None for rec in records.values()}) > 1:
        sys.stderr.write(f"methods disagree on {code}\n")
        return EXIT_FAILED
    return EXIT_OK


def cmd_theo32(args, out):
    code = _n2(args.code)
    d = check_theo32(section(code), code, args.budget)
    if d is None:
        out.write("none\n")
        return
    rec = {"code": code, "image": "tower", "certificate": None}
    rec.update(d.to_json())
    out.write(json.dumps(rec) + "\n")


def cmd_dot(args, out):
    code = _code(args.code)
    P = section(code)
    f = None
    if args.retraction:
        try:
            with open(args.retraction) as fh:
                data = json.loads(fh.read().strip().splitlines()[0])
        except (OSError, ValueError, IndexError) as e:
            raise UsageError(f"cannot read retraction: {e}") from None
        f = data.get("map") if isinstance(data, dict) else data
        if not isinstance(f, list) or len(f) != P.n or not is_retraction(P, f):
            raise UsageError("the file does not hold a retraction of this poset")
    out.write(to_dot(P, f, name=code))


def cmd_verify(args, out):
    from . import verify

    if args.suite == "certificates":
        text = "".join(open(p).read() for p in args.input) if args.input else sys.stdin.read()
        try:
            checks = verify.suite_certificates(verify.load_records(text))
        except (ValueError, KeyError) as e:
            raise UsageError(f"bad certificate input: {e}") from None
    elif args.suite == "all":
        checks = verify.run_all()
    else:
        checks = verify.SUITES[args.suite]()
    for c in checks:
        out.write(c.line() + "\n")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    from .verify import SUITES

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search node budget")
    p = argparse.ArgumentParser(prog="nicesec", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("build", parents=[common], help="poset JSON of a code")
    s.add_argument("code")
    s.set_defaults(fn=cmd_build)

    s = sub.add_parser("classify", parents=[common], help="shape report of a code")
    s.add_argument("code")
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("table", parents=[common], help="lower-segment table as TSV")
    s.add_argument("--max-height", type=int, default=MAX_TABLE_HEIGHT)
    s.add_argument("--no-criteria", action="store_true", help="disable pruning")
    s.set_defaults(fn=cmd_table)

    s = sub.add_parser("check-retract", parents=[common], help="4-crown-stack retract certificate")
    s.add_argument("code")
    s.add_argument("--method", choices=["split", "oracle", "both"], default="split")
    s.set_defaults(fn=cmd_check_retract)

    s = sub.add_parser("theo32", parents=[common], help="tower retract with a 32/23 pair")
    s.add_argument("code")
    s.set_defaults(fn=cmd_theo32)

    s = sub.add_parser("dot", parents=[common], help="Hasse diagram in DOT")
    s.add_argument("code")
    s.add_argument("--retraction", help="file with a JSON record holding 'map'")
    s.set_defaults(fn=cmd_dot)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all", "certificates"])
    s.add_argument("--input", nargs="*", help="certificate files (certificates suite)")
    s.set_defaults(fn=cmd_verify)
    return p


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    if args.budget <= 0:
        sys.stderr.write("--budget must be positive\n")
        return EXIT_USAGE
    args.budget = Budget(args.budget)
    try:
        code = args.fn(args, out)
    except UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE
    except BudgetExceeded as e:
        sys.stderr.write(f"budget exceeded: {e}\n")
        return EXIT_BUDGET
    return EXIT_OK if code is None else code


def main() -> None:
    sys.exit(run())
