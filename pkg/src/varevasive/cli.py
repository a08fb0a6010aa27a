"""Command-line front end.

Exit codes: 0 all checks pass, 1 a check failed, 2 invalid input,
3 work budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import TextIO

from .construction import (
    DEFAULT_ENUMERATION_BUDGET,
    EvasiveConstruction,
    build_construction,
    enumerate_points,
    enumeration_size,
    from_manifest,
)
from .errors import InvalidParameters, WorkBudgetExceeded
from .field import parse_field
from .parameters import DEFAULT_MINOR_BUDGET, certify, check_k_regular
from .verify import DEFAULT_SWEEP_BUDGET, dumps, random_baseline, sweep_curves, sweep_flats

EXIT_OK, EXIT_FAIL, EXIT_INVALID, EXIT_BUDGET = 0, 1, 2, 3


@dataclass
class RunConfig:
    command: str
    args: argparse.Namespace


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"expected a rational like 1/2, got {text!r}") from exc


def _add_construction_args(p: argparse.ArgumentParser, required: bool = True) -> None:
    g = p.add_argument_group("construction")
    g.add_argument("--field", required=required, help="field size as p or p^e")
    g.add_argument("--n", type=_positive, required=required, help="ambient dimension")
    g.add_argument("--k", type=_positive, required=required, help="dimension of the evaded varieties")
    g.add_argument("--d", type=_positive, required=required, help="degree budget of the evaded varieties")
    g.add_argument("--m", type=_positive, default=None, help="block size for the bucketed construction (default n)")
    g.add_argument("--exponents", type=_int_list, default=None, help="explicit exponent list, descending")
    g.add_argument("--allow-noninvertible", action="store_true",
                   help="keep primes dividing q-1 in non-solved positions")
    g.add_argument("--emit-certificate", action="store_true", help="attach all k x k minors to the manifest")


def _construction(args) -> EvasiveConstruction:
    c = build_construction(
        parse_field(args.field), args.n, args.k, args.d, args.m,
        exponents=args.exponents, allow_noninvertible=args.allow_noninvertible,
    )
    if getattr(args, "emit_certificate", False):
        c = EvasiveConstruction(c.field, c.n, c.k, c.d, c.plan, certify(c.field, c.matrix), c.m_block)
    return c


def read_manifest(path: str) -> dict:
    """Manifest from a manifest JSON file, a JSONL point stream, or a CSV stream."""
    text = Path(path).read_text()
    first = text.split("\n", 1)[0].strip()
    if first.startswith("#"):
        return json.loads(first.lstrip("#").strip())
    try:
        data = json.loads(first)
    except json.JSONDecodeError:
        data = json.loads(text)
    if isinstance(data, dict) and "manifest" in data and "format" not in data:
        data = data["manifest"]
    return data


def _open_out(path: str | None) -> TextIO:
    if path is None or path == "-":
        return sys.stdout
    return open(path, "w", newline="\n")


# -- subcommands --------------------------------------------------------------


def cmd_params(args) -> int:
    c = _construction(args)
    sys.stdout.write(json.dumps(c.manifest(), sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def write_points(c: EvasiveConstruction, out: TextIO, fmt: str, budget: int) -> int:
    enumeration_size(c, budget)
    header = json.dumps(c.manifest(), sort_keys=True, separators=(",", ":"))
    count = 0
    if fmt == "jsonl":
        out.write(header + "\n")
        for pt in enumerate_points(c, budget):
            out.write("[" + ",".join(map(str, pt)) + "]\n")
            count += 1
    else:
        out.write("# " + header + "\n")
        for pt in enumerate_points(c, budget):
            out.write(",".join(map(str, pt)) + "\n")
            count += 1
    return count


def cmd_generate(args) -> int:
    c = _construction(args)
    out = _open_out(args.output)
    try:
        write_points(c, out, args.format, args.budget)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def _regularity_check(c: EvasiveConstruction, budget: int) -> dict:
    try:
        res = check_k_regular(c.field, c.matrix.entries, budget)
    except WorkBudgetExceeded:
        if c.matrix.gammas is None:
            raise
        return {"check": "k-regularity", "pass": True, "skipped": "budget; Vandermonde matrix trusted"}
    out = {"check": "k-regularity", "pass": res.regular, "minors_checked": len(res.minors)}
    if not res.regular:
        out["witness_columns"] = list(res.witness)
    return out


def cmd_verify(args) -> int:
    if args.manifest:
        c = from_manifest(read_manifest(args.manifest), verify_matrix=False)
    else:
        if not all(getattr(args, a) is not None for a in ("field", "n", "k", "d")):
            raise InvalidParameters("verify needs --manifest or --field/--n/--k/--d")
        c = _construction(args)
    checks = [_regularity_check(c, args.minor_budget)]
    if checks[0]["pass"]:
        if args.flats != "none":
            r = sweep_flats(
                c, args.flat_dim, args.flats, args.trials, args.seed, args.workers,
                args.budget, timing=args.timing,
            )
            checks.append({"check": "flats", **r.to_json()})
        if args.curve_trials:
            r = sweep_curves(
                c, args.curve_degree or c.d, args.curve_trials, args.seed, args.ext,
                args.workers, args.budget, timing=args.timing,
            )
            checks.append({"check": "curves", **r.to_json()})
    for ch in checks:
        ch.pop("manifest", None)
        if "point_count" in ch:
            ch["pass"] = ch["pass"] and ch["point_count"]["all_ok"]
    ok = all(ch["pass"] for ch in checks)
    report = {"schema_version": 1, "report": "verify", "manifest": c.manifest(), "checks": checks, "pass": ok}
    out = _open_out(args.output)
    try:
        out.write(dumps(report))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK if ok else EXIT_FAIL


def cmd_baseline(args) -> int:
    f = parse_field(args.field)
    seeds = [args.seed + i for i in range(args.num_seeds)]
    c = build_construction(f, args.n, args.k, args.d, args.m, exponents=args.exponents,
                           allow_noninvertible=args.allow_noninvertible)
    t0 = time.perf_counter()
    rep = random_baseline(f, args.n, args.k, args.d, args.eps, seeds, args.trials, c, args.workers, args.budget)
    data = rep.to_json()
    if args.timing:
        data["timing_seconds"] = round(time.perf_counter() - t0, 3)
    out = _open_out(args.output)
    try:
        out.write(dumps(data))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="varevasive", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="print the construction manifest")
    _add_construction_args(p)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("generate", help="stream the points of the evasive set")
    _add_construction_args(p)
    p.add_argument("--output", "-o", default="-")
    p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
    p.add_argument("--budget", type=_positive, default=DEFAULT_ENUMERATION_BUDGET)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="sweep adversary varieties against a construction")
    _add_construction_args(p, required=False)
    p.add_argument("--manifest", help="rebuild the construction from a manifest or point-stream file")
    p.add_argument("--flats", choices=("exhaustive", "sampled", "none"), default="sampled")
    p.add_argument("--flat-dim", type=int, default=None, help="flat dimension (default k)")
    p.add_argument("--trials", type=_positive, default=1000, help="sampled flats")
    p.add_argument("--curve-degree", type=_positive, default=None, help="default d")
    p.add_argument("--curve-trials", type=int, default=0)
    p.add_argument("--ext", type=_positive, default=1, help="evaluate curves over F_{q^ext}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--budget", type=_positive, default=DEFAULT_SWEEP_BUDGET)
    p.add_argument("--minor-budget", type=_positive, default=DEFAULT_MINOR_BUDGET)
    p.add_argument("--timing", action="store_true", help="record wall time (makes output nondeterministic)")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("baseline", help="random-set baseline against the same variety sample")
    _add_construction_args(p)
    p.add_argument("--eps", type=_fraction, required=True)
    p.add_argument("--num-seeds", type=_positive, default=20, help="seeds are seed, seed+1, ...")
    p.add_argument("--trials", type=_positive, default=10**4, help="sampled varieties per seed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=_positive, default=1)
    p.add_argument("--budget", type=_positive, default=DEFAULT_SWEEP_BUDGET)
    p.add_argument("--timing", action="store_true")
    p.add_argument("--output", "-o", default="-")
    p.set_defaults(func=cmd_baseline)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except WorkBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidParameters, KeyError, json.JSONDecodeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
