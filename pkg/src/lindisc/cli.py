"""Command-line front end.

Exit codes: 0 success, 2 malformed input or usage, 3 refusal (an enumeration
cap or memory budget would be exceeded). Caps can be raised through the
LINDISC_ENUM_CAP, LINDISC_GRID_BUDGET, LINDISC_DP_BUDGET, LINDISC_LEB_BUDGET
and LINDISC_SAT_CAP environment variables.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from .approx import approx_lindisc
from .core import (
    InputError,
    eval_residual,
    RefusalError,
    format_rational,
    operator_inf_norm,
    parse_matrix,
    parse_rational,
    parse_vector,
    serialize_matrix,
)
from .lowdim import lindisc_lowdim
from .onerow import gap_profile_bruteforce, lindisc_onerow, round_onerow
from .oracle import lindisc_at, lindisc_grid_bracket
from .reduction import (
    SubsetSumInstance,
    incidence_matrix,
    nae_satisfiable,
    parse_cnf,
    subset_sum_weight,
)

EXIT_OK, EXIT_INPUT, EXIT_REFUSAL = 0, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_matrix(path: str):
    raw = _read(path)
    return parse_matrix(raw), hashlib.sha256(raw).hexdigest()


def _weights(args, n: int) -> tuple:
    if args.w is not None and args.w_file is not None:
        raise InputError("give weights with either --w or --w-file, not both")
    if args.w is not None:
        text = args.w
    elif args.w_file is not None:
        text = _read(args.w_file).decode("utf-8", errors="replace")
    else:
        raise InputError("weights are required (--w or --w-file)")
    w = parse_vector(text)
    if len(w) != n:
        raise InputError(f"expected {n} weights, got {len(w)}")
    return w


def _vec(v) -> str:
    return ",".join(format_rational(Fraction(c)) for c in v)


def _bits(x) -> str:
    return ",".join(str(int(c)) for c in x)


def _decimal(x: Fraction) -> str:
    return f"{float(x):.12g}"


class Report:
    """Ordered key/value report; exact values as p/q, decimals marked display-only."""

    def __init__(self, command: str, algorithm: str, digest: str | None):
        self.items = [("command", command), ("algorithm", algorithm)]
        if digest is not None:
            self.items.append(("input_sha256", digest))

    def add(self, key, value):
        self.items.append((key, value))

    def rational(self, key, value: Fraction):
        self.items.append((key, format_rational(value)))
        self.items.append((f"{key}_decimal_display_only", _decimal(value)))

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(dict(self.items), indent=2) + "\n"
        return "".join(f"{k}: {v}\n" for k, v in self.items)


def _cmd_onerow_exact(args, rep_cls):
    A, digest = _load_matrix(args.matrix)
    rep = rep_cls("onerow exact", "sorted-magnitude gap fold", digest)
    rep.rational("value", lindisc_onerow(A))
    if args.witness:
        prof = gap_profile_bruteforce(A)
        i = prof.witness_pair
        if i >= 0:
            rep.add("gap", f"{format_rational(prof.sums[i])}..{format_rational(prof.sums[i + 1])}")
    return rep


def _cmd_onerow_round(args, rep_cls):
    A, digest = _load_matrix(args.matrix)
    w = _weights(args, A.n)
    x = round_onerow(A, w)
    rep = rep_cls("onerow round", "subset-sum interval refinement", digest)
    rep.add("w", _vec(w))
    rep.add("x", _bits(x))
    rep.rational("residual", eval_residual(A, w, x))
    rep.rational("bound", lindisc_onerow(A))
    return rep


def _cmd_lowdim_exact(args, rep_cls):
    A, digest = _load_matrix(args.matrix)
    res = lindisc_lowdim(A)
    rep = rep_cls("lowdim exact", "lattice DP + largest empty sup-norm ball", digest)
    rep.rational("value", res.value)
    rep.add("center", _vec(res.image))
    rep.add("w", _vec(res.w))
    rep.add("minimizer", _bits(res.minimizer))
    return rep


def _cmd_approx(args, rep_cls):
    A, digest = _load_matrix(args.matrix)
    br = approx_lindisc(A)
    rep = rep_cls("approx", "operator-norm bracket", digest)
    rep.rational("norm", operator_inf_norm(A))
    rep.rational("lower", br.lower)
    rep.rational("upper", br.upper)
    rep.add("lower_provenance", br.lower_provenance.value)
    rep.add("upper_provenance", br.upper_provenance.value)
    return rep


def _cmd_oracle_at(args, rep_cls):
    A, digest = _load_matrix(args.matrix)
    w = _weights(args, A.n)
    res = lindisc_at(A, w)
    rep = rep_cls("oracle at", "exhaustive coloring enumeration", digest)
    rep.add("w", _vec(res.w))
    rep.rational("value", res.value)
    rep.add("minimizer", _bits(res.minimizer))
    return rep


def _cmd_oracle_grid(args, rep_cls):
    A, digest = _load_matrix(args.matrix)
    h = parse_rational(args.h)
    br, hole = lindisc_grid_bracket(A, h)
    rep = rep_cls("oracle grid", "grid sweep + Lipschitz cover", digest)
    rep.add("h", format_rational(h))
    rep.rational("lower", br.lower)
    rep.rational("upper", br.upper)
    rep.add("lower_provenance", br.lower_provenance.value)
    rep.add("upper_provenance", br.upper_provenance.value)
    rep.add("w", _vec(hole.w))
    rep.add("minimizer", _bits(hole.minimizer))
    return rep


def _write_out(args, A):
    if args.out:
        try:
            Path(args.out).write_text(serialize_matrix(A))
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc.strerror}") from None


def _cmd_gen_nae(args, rep_cls):
    raw = _read(args.cnf)
    C = parse_cnf(raw)
    A = incidence_matrix(C)
    tau = nae_satisfiable(C)
    half = tuple(Fraction(1, 2) for _ in range(A.n))
    rep = rep_cls("gen nae", "MNAE3SAT incidence matrix", hashlib.sha256(raw).hexdigest())
    rep.add("matrix", serialize_matrix(A).strip().replace("\n", "; "))
    rep.add("nae_satisfiable", "yes" if tau is not None else "no")
    if tau is not None:
        rep.add("assignment", _bits(tau))
    rep.rational("value_at_half", lindisc_at(A, half).value)
    _write_out(args, A)
    return rep


def _cmd_gen_subsetsum(args, rep_cls):
    parsed = parse_vector(args.values)
    if any(v.denominator != 1 for v in parsed):
        raise InputError("subset-sum values must be integers")
    values = [int(v) for v in parsed]
    inst = SubsetSumInstance(tuple(values), parse_rational(args.t))
    A, w = subset_sum_weight(inst)
    rep = rep_cls("gen subsetsum", "subset-sum row instance", None)
    rep.add("matrix", serialize_matrix(A).strip().replace("\n", "; "))
    rep.add("w", _vec(w))
    rep.rational("target", inst.target)
    res = lindisc_at(A, w)
    rep.rational("value", res.value)
    rep.add("minimizer", _bits(res.minimizer))
    _write_out(args, A)
    return rep


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--timing", action="store_true", help="append wall-clock timing (breaks byte stability)")

    parser = _Parser(prog="lindisc", description="Linear discrepancy solvers and oracles.")
    sub = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def weights(p):
        p.add_argument("--w", help="comma-separated rational weights")
        p.add_argument("--w-file", help="file of whitespace/comma-separated weights")

    onerow = sub.add_parser("onerow", help="single-row matrices").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = onerow.add_parser("exact", parents=[common])
    p.add_argument("matrix")
    p.add_argument("--witness", action="store_true", help="also report a widest subset-sum gap (enumerates 2^n sums)")
    p.set_defaults(func=_cmd_onerow_exact)
    p = onerow.add_parser("round", parents=[common])
    p.add_argument("matrix")
    weights(p)
    p.set_defaults(func=_cmd_onerow_round)

    lowdim = sub.add_parser("lowdim", help="integer matrices with 1 or 2 rows").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = lowdim.add_parser("exact", parents=[common])
    p.add_argument("matrix")
    p.set_defaults(func=_cmd_lowdim_exact)

    p = sub.add_parser("approx", parents=[common], help="2^(n+1)-factor bracket")
    p.add_argument("matrix")
    p.set_defaults(func=_cmd_approx)

    oracle = sub.add_parser("oracle", help="brute-force oracles").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = oracle.add_parser("at", parents=[common])
    p.add_argument("matrix")
    weights(p)
    p.set_defaults(func=_cmd_oracle_at)
    p = oracle.add_parser("grid", parents=[common])
    p.add_argument("matrix")
    p.add_argument("--h", required=True, help="grid spacing 1/k")
    p.set_defaults(func=_cmd_oracle_grid)

    gen = sub.add_parser("gen", help="hardness-reduction instances").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = gen.add_parser("nae", parents=[common])
    p.add_argument("cnf")
    p.add_argument("--out", help="write the incidence matrix to this file")
    p.set_defaults(func=_cmd_gen_nae)
    p = gen.add_parser("subsetsum", parents=[common])
    p.add_argument("--values", required=True, help="comma-separated positive integers")
    p.add_argument("--t", required=True, help="target as a fraction of the total")
    p.add_argument("--out", help="write the row matrix to this file")
    p.set_defaults(func=_cmd_gen_subsetsum)
    return parser


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    try:
        rep = args.func(args, Report)
    except RefusalError as exc:
        print(f"refused: {exc}", file=stderr)
        return EXIT_REFUSAL
    except InputError as exc:
        print(f"input error: {exc}", file=stderr)
        return EXIT_INPUT
    if args.timing:
        rep.add("elapsed_seconds", f"{time.perf_counter() - start:.6f}")
    stdout.write(rep.render(args.format))
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
