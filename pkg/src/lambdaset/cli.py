"""Command-line entry point: every operation behind one executable, with
deterministic JSON payloads on stdout and a run manifest on stderr.

Payloads carry no timestamps and are emitted with sorted keys, so identical
invocations produce byte-identical output; the manifest records the wall
time and a SHA-256 digest of the payload separately.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .constructions import (defining_sequence_Cl, thickness_Cl, verify_caseA,
                            verify_caseB, piece_endpoints)
from .cantor_metrics import DefiningSequence, newhouse_lower, thickness_of
from .errors import LambdasetError
from .ifs_core import Member, NotMember, greedy_digits, pi_eval
from .intersect import find_common, intersect_covers
from .lambda_set import binary_expansion, box_dim_estimate, cover, gaps
from .numerics import PrecisionConfig, parse_rational
from .seqcode import EpSequence
from .svg import svg_gaps

HALF = Fraction(1, 2)
ENV_BITS = "LAMBDASET_PRECISION_BITS"


def load_schema(command: str) -> dict:
    """Shipped JSON schema for a subcommand's payload (intersect emits the
    cover schema)."""
    from importlib import resources

    name = "cover" if command == "intersect" else command
    ref = resources.files("lambdaset") / "schemas" / f"{name}.json"
    return json.loads(ref.read_text(encoding="utf-8"))


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on usage errors; this tool reserves 2 for
    verification failures, so usage errors exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(1)


def _fraction(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _fraction_list(text: str) -> list[Fraction]:
    return [parse_rational(part) for part in text.split(",") if part]


def _build_config(args) -> PrecisionConfig:
    bits = args.bits if args.bits else int(os.environ.get(ENV_BITS, "128"))
    return PrecisionConfig(precision_bits=bits,
                           target_width=Fraction(1, 1 << args.width_bits))


def _reduce_symmetry(x: Fraction) -> tuple[Fraction, bool]:
    """Targets above 1/2 are mirrored: the ratio set of x equals that of 1-x."""
    if HALF < x < 1:
        return 1 - x, True
    return x, False


def _cover_csv(payload: dict) -> str:
    out = io.StringIO()
    out.write("index,lo,hi,low_code,high_code\n")
    for i, iv in enumerate(payload["intervals"]):
        out.write(f"{i},{iv['lo']['lo']},{iv['hi']['hi']},"
                  f"{iv['low_code'] or ''},{iv['high_code'] or ''}\n")
    return out.getvalue()


def _gaps_csv(payload: dict) -> str:
    out = io.StringIO()
    out.write("index,left,right,left_code,right_code\n")
    for i, g in enumerate(payload["gaps"]):
        out.write(f"{i},{g['left']['hi']},{g['right']['lo']},"
                  f"{g['left_code']},{g['right_code']}\n")
    return out.getvalue()


def _load_defining_sequence(source: str, bits: int) -> DefiningSequence:
    if source == "-":
        raw = json.load(sys.stdin)
    else:
        with open(source, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    hull = tuple(parse_rational(str(v)) for v in raw["hull"])
    removals = [(parse_rational(str(a)), parse_rational(str(b)))
                for a, b in raw["gaps"]]
    return DefiningSequence.from_fractions(hull, removals, bits)


def build_parser() -> _Parser:
    parser = _Parser(prog="lambdaset",
                     description="certified ratio-set computations for "
                                 "two-branch self-similar sets")
    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument("--bits", type=int, default=None,
                        help=f"enclosure precision bits (default: ${ENV_BITS} or 128)")
    shared.add_argument("--width-bits", type=int, default=80,
                        help="solver target width 2^-W (default 80)")
    shared.add_argument("--format", choices=("json", "csv"), default="json",
                        help="tabular subcommands can emit CSV")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)

    def add_parser(name, **kwargs):
        return sub.add_parser(name, parents=[shared], **kwargs)

    p = add_parser("code", help="greedy coding of x in base lambda")
    p.add_argument("--x", type=_fraction, required=True)
    p.add_argument("--lambda", dest="lam", type=_fraction, required=True)
    p.add_argument("--max-steps", type=int, default=256)

    p = add_parser("pi", help="exact coding-map value of a sequence")
    p.add_argument("--seq", required=True, help="sequence literal PRE(PER)")
    p.add_argument("--lambda", dest="lam", type=_fraction, required=True)

    p = add_parser("expansion", help="base-1/2 greedy expansion of x")
    p.add_argument("--x", type=_fraction, required=True)

    for name in ("cover", "gaps"):
        p = add_parser(name, help=f"{name} of the ratio set at a depth")
        p.add_argument("--x", type=_fraction, required=True)
        p.add_argument("--depth", type=int, required=True)

    p = add_parser("dim", help="box-counting slope in a ratio window")
    p.add_argument("--x", type=_fraction, required=True)
    p.add_argument("--center", type=_fraction, required=True)
    p.add_argument("--radius", type=_fraction, required=True)
    p.add_argument("--eps-min-exp", type=int, default=8)
    p.add_argument("--eps-max-exp", type=int, default=13)

    p = add_parser("pieces", help="endpoints of the k-th piece")
    p.add_argument("--x", type=_fraction, required=True)
    p.add_argument("--k", type=int, required=True)

    p = add_parser("cantor-ds", help="defining sequence of a tail construction")
    p.add_argument("--x", type=_fraction, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--kmax", type=int, default=4)
    p.add_argument("--qmax", type=int, default=2)

    p = add_parser("thickness", help="thickness of a defining sequence")
    p.add_argument("--gaps", required=True, metavar="FILE",
                   help="JSON {\"hull\":[lo,hi],\"gaps\":[[lo,hi],...]}; - for stdin")

    p = add_parser("thickness-cl", help="truncated thickness report")
    p.add_argument("--x", type=_fraction, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--kmax", type=int, default=5)
    p.add_argument("--qmax", type=int, default=2)

    p = add_parser("verify", help="certified inequality ledgers")
    p.add_argument("--case", choices=("A", "B"), required=True)
    p.add_argument("--x", type=_fraction, default=None,
                   help="target for case A (case B is fixed at 1/4)")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)

    p = add_parser("intersect", help="outer cover of a common ratio set")
    p.add_argument("--targets", type=_fraction_list, required=True)
    p.add_argument("--depth", type=int, required=True)

    p = add_parser("common", help="common-ratio certificates")
    p.add_argument("--targets", type=_fraction_list, required=True)
    p.add_argument("--depth", type=int, default=8)

    p = add_parser("svg-gaps", help="static gap-structure diagram")
    p.add_argument("--x", type=_fraction, required=True)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--kmax", type=int, default=3)
    p.add_argument("--qmax", type=int, default=2)
    p.add_argument("--out", default=None, help="output file (default stdout)")

    return parser


def _run(args, cfg: PrecisionConfig, notes: dict):
    """Returns (payload dict or raw text, text-is-raw flag, exit code)."""
    cmd = args.command
    if cmd == "code":
        outcome = greedy_digits(args.x, args.lam, args.max_steps)
        if isinstance(outcome, Member):
            payload = {"outcome": "member", "coding": str(outcome.coding),
                       "reject_step": None, "digits": None}
        elif isinstance(outcome, NotMember):
            payload = {"outcome": "not_member", "coding": None,
                       "reject_step": outcome.reject_step, "digits": None}
        else:
            payload = {"outcome": "unresolved", "coding": None,
                       "reject_step": None, "digits": str(outcome.digits)}
        payload.update({"x": str(args.x), "lambda": str(args.lam),
                        "max_steps": args.max_steps})
        return payload, 0

    if cmd == "pi":
        seq = EpSequence.from_string(args.seq)
        return {"sequence": str(seq), "lambda": str(args.lam),
                "value": str(pi_eval(seq, args.lam))}, 0

    if cmd == "expansion":
        x, reduced = _reduce_symmetry(args.x)
        if reduced:
            notes["symmetry_reduced_from"] = str(args.x)
        return {"x": str(x), "sequence": str(binary_expansion(x))}, 0

    if cmd in ("cover", "gaps"):
        x, reduced = _reduce_symmetry(args.x)
        if reduced:
            notes["symmetry_reduced_from"] = str(args.x)
        if cmd == "cover":
            return cover(x, args.depth, cfg).to_json(), 0
        payload = {"x": str(x), "depth": args.depth,
                   "gaps": [g.to_json() for g in gaps(x, args.depth, cfg)]}
        return payload, 0

    if cmd == "dim":
        x, reduced = _reduce_symmetry(args.x)
        if reduced:
            notes["symmetry_reduced_from"] = str(args.x)
        ladder = list(range(args.eps_min_exp, args.eps_max_exp + 1))
        report = box_dim_estimate(
            x, (args.center - args.radius, args.center + args.radius),
            ladder, cfg)
        return report.to_json(), 0

    if cmd == "pieces":
        return piece_endpoints(args.x, args.k, cfg).to_json(), 0

    if cmd == "cantor-ds":
        ds = defining_sequence_Cl(args.x, args.ell, args.kmax, args.qmax, cfg)
        payload = ds.to_json()
        payload.update({"x": str(args.x), "ell": args.ell,
                        "k_max": args.kmax, "q_max": args.qmax})
        return payload, 0

    if cmd == "thickness":
        ds = _load_defining_sequence(args.gaps, cfg.precision_bits)
        tau = thickness_of(ds)
        return {"thickness": str(tau), "thickness_float": float(tau),
                "newhouse_lower": newhouse_lower(tau),
                "gaps": len(ds.removals)}, 0

    if cmd == "thickness-cl":
        report = thickness_Cl(args.x, args.ell, args.kmax, args.qmax, cfg)
        payload = report.to_json()
        payload["newhouse_lower"] = newhouse_lower(report.tau_truncated)
        return payload, 2 if report.bound_violations else 0

    if cmd == "verify":
        if args.case == "A":
            if args.x is None:
                raise LambdasetError("case A needs --x")
            ledger = verify_caseA(args.x, args.trials, cfg, args.seed)
        else:
            ledger = verify_caseB(args.trials, cfg, args.seed)
        return ledger.to_json(), 2 if ledger.violations else 0

    if cmd == "intersect":
        covers = [cover(y, args.depth, cfg) for y in args.targets]
        return intersect_covers(covers).to_json(), 0

    if cmd == "common":
        certs = find_common(args.targets, args.depth, cfg)
        return {"targets": [str(t) for t in args.targets],
                "depth": args.depth,
                "certificates": [c.to_json() for c in certs]}, 0

    if cmd == "svg-gaps":
        text = svg_gaps(args.x, args.ell, args.kmax, args.qmax, cfg)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
            return {"written": args.out, "bytes": len(text)}, 0
        return text, 0

    raise AssertionError(f"unhandled command {cmd}")


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    started = time.time()
    notes: dict = {}
    try:
        cfg = _build_config(args)
        payload, code = _run(args, cfg, notes)
    except (LambdasetError, ValueError, OSError, ZeroDivisionError,
            json.JSONDecodeError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1
    if isinstance(payload, str):
        body = payload if payload.endswith("\n") else payload + "\n"
    elif args.format == "csv" and args.command == "cover":
        body = _cover_csv(payload)
    elif args.format == "csv" and args.command == "gaps":
        body = _gaps_csv(payload)
    else:
        body = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    sys.stdout.write(body)
    manifest = {
        "command": args.command,
        "parameters": {k: str(v) for k, v in sorted(vars(args).items())
                       if k != "command"},
        "notes": notes,
        "precision_bits": cfg.precision_bits,
        "library_version": __version__,
        "wall_time_ms": round((time.time() - started) * 1000, 3),
        "output_digest": hashlib.sha256(body.encode()).hexdigest(),
    }
    sys.stderr.write(json.dumps(manifest, sort_keys=True) + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
