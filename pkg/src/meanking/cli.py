"""Command-line front end: ``meanking {verify,geometry,mkp,track,channel}``.

Exit codes: 0 success, 1 a check or protocol inference failed, 2 usage error.
Reports are JSON Lines by default; the last line is a ``{"summary": ...}`` record.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from contextlib import contextmanager

from . import __version__
from .finitefield import InvalidDimensionError, as_dim
from .geometry import INCIDENCE_HEADER, audit_dapg, incidence_rows
from .mub import CB_TOKEN, basis_labels, basis_to_json, parse_basis
from .protocol import EXHAUSTIVE, Sampled, random_message, run_channel, run_mkp, run_tracking, summarize
from .verify import SUITES, run_suites

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _dim_arg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"dimension must be an integer, got {text!r}") from None
    try:
        return as_dim(n).d
    except InvalidDimensionError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _tol_arg(text: str) -> float:
    try:
        tol = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance must be a number, got {text!r}") from None
    if not tol > 0:
        raise argparse.ArgumentTypeError("tolerance must be > 0")
    return tol


def _line_arg(text: str) -> tuple[int, int]:
    try:
        a, b = (int(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"line must be 'mddot,m0', got {text!r}") from None
    return a, b


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=_dim_arg, default=3, help="odd prime dimension d (default 3)")
    common.add_argument("--tol", type=_tol_arg, default=1e-10, help="absolute tolerance (default 1e-10)")
    common.add_argument("--seed", type=int, default=None, help="seed for sampled runs")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None,
                        help="output format (json lines unless stated otherwise)")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="meanking", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run invariant suites")
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")

    sub.add_parser("geometry", parents=[common], help="dump the incidence table and audit it (csv default)")

    for name, helptext in (("mkp", "Mean King runs"), ("track", "basis-tracking runs")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--king-basis", default="all", help=f"'{CB_TOKEN}', 0..d-1, or all (default)")
        p.add_argument("--exhaustive", action="store_true",
                       help="enumerate every branch (default unless --seed is given)")
        p.add_argument("--trials", type=int, default=1, help="sampled rounds per basis")
        if name == "track":
            p.add_argument("--line", type=_line_arg, default=(0, 0), help="prepared line 'mddot,m0'")

    p = sub.add_parser("channel", parents=[common], help="multi-round tracking channel")
    p.add_argument("--line", type=_line_arg, default=(0, 0), help="initial line 'mddot,m0'")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--message", default=None, help=f"comma-separated symbols ('{CB_TOKEN}' or 0..d-1)")
    g.add_argument("--rounds", type=int, default=None, help="send a random message of this length")
    p.add_argument("--transcripts", action="store_true", help="also emit one record per round")
    return parser


@contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def _emit_json(out, records) -> None:
    for r in records:
        out.write(json.dumps(r) + "\n")


def _king_bases(parser, d: int, token: str):
    if token == "all":
        return basis_labels(d)
    try:
        return [parse_basis(d, token)]
    except ValueError as exc:
        parser.error(str(exc))


def _line(parser, d: int, pair):
    a, b = pair
    if not (0 <= a < d and 0 <= b < d):
        parser.error(f"invalid line {a},{b}: coordinates must lie in 0..{d - 1}")
    return pair


# -- commands -------------------------------------------------------------

def cmd_verify(args, parser) -> int:
    results = run_suites(args.suite, args.dim, args.tol)
    failed = sum(not r.passed for _, r in results)
    summary = {"dim": args.dim, "suite": args.suite, "checks": len(results), "failed": failed,
               "passed": failed == 0}
    fmt = args.format or "json"
    with _sink(args.out) as out:
        if fmt == "json":
            _emit_json(out, [{"suite": s, **r.to_json()} for s, r in results])
            _emit_json(out, [{"summary": summary}])
        elif fmt == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["suite", "name", "expected", "observed", "passed"])
            for s, r in results:
                w.writerow([s, r.name, r.expected, r.observed, r.passed])
        else:
            for s, r in results:
                out.write(f"{'PASS' if r.passed else 'FAIL'}  {s}.{r.name}  observed={r.observed}  expected={r.expected}\n")
            out.write(f"{len(results) - failed}/{len(results)} checks passed (d={args.dim})\n")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def cmd_geometry(args, parser) -> int:
    rows = incidence_rows(args.dim)
    audit = audit_dapg(args.dim)
    ok = all(r.passed for r in audit)
    fmt = args.format or "csv"
    with _sink(args.out) as out:
        if fmt == "csv":
            w = csv.DictWriter(out, fieldnames=INCIDENCE_HEADER, lineterminator="\n")
            w.writeheader()
            w.writerows(rows)
        elif fmt == "json":
            _emit_json(out, rows)
            _emit_json(out, [{"audit": r.to_json()} for r in audit])
        else:
            for r in rows:
                out.write(f"line ({r['line_mddot']},{r['line_m0']})  point (m={r['point_m']}, b={r['point_b']})\n")
    if fmt != "json":
        # keep the CSV/text body clean; the audit goes to stderr
        for r in audit:
            sys.stderr.write(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  observed={r.observed}\n")
    return EXIT_OK if ok else EXIT_FAIL


TRANSCRIPT_CSV = ["dim", "variant", "prepared", "king_basis", "king_outcome", "mddot_prime", "m0_dprime",
                  "inference_kind", "inference_value", "p_king", "p_control", "p_branch"]


def _transcript_row(rec: dict) -> list:
    prep = rec["prepared"]
    probs = rec.get("probabilities", {})
    return [rec["dim"], rec["variant"], prep if isinstance(prep, str) else f"{prep['mddot']},{prep['m0']}",
            rec["king_basis"], rec["king_outcome"], rec["control"]["mddot_prime"], rec["control"]["m0_dprime"],
            rec["inference"]["kind"], rec["inference"].get("value", ""),
            probs.get("king", ""), probs.get("control", ""), probs.get("branch", "")]


def _write_transcripts(args, records: list[dict], summary: dict) -> None:
    fmt = args.format or "json"
    with _sink(args.out) as out:
        if fmt == "json":
            _emit_json(out, records)
            _emit_json(out, [{"summary": summary}])
        elif fmt == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(TRANSCRIPT_CSV)
            for rec in records:
                w.writerow(_transcript_row(rec))
        else:
            for rec in records:
                inf = rec["inference"]
                value = f" {inf['value']}" if "value" in inf else ""
                out.write(f"{rec['variant']} b={rec['king_basis']} m={rec['king_outcome']} "
                          f"control=({rec['control']['mddot_prime']},{rec['control']['m0_dprime']}) "
                          f"-> {inf['kind']}{value}\n")
            out.write("summary " + json.dumps(summary) + "\n")


def _mode(args, b_offset: int):
    if args.exhaustive or args.seed is None:
        return EXHAUSTIVE
    return Sampled(args.seed, args.trials, first_trial=b_offset * args.trials)


def _protocol_cmd(args, parser, variant: str) -> int:
    d = args.dim
    bases = _king_bases(parser, d, args.king_basis)
    if args.trials < 1:
        parser.error("--trials must be >= 1")
    transcripts = []
    for i, b in enumerate(bases):
        mode = _mode(args, i)
        if variant == "MKP":
            transcripts += run_mkp(d, b, mode)
        else:
            transcripts += run_tracking(d, _line(parser, d, args.line), b, mode)
    exhaustive = _mode(args, 0) == EXHAUSTIVE
    summary = {"dim": d, "variant": variant, "mode": "exhaustive" if exhaustive else "sampled",
               "king_basis": args.king_basis if args.king_basis == "all" else basis_to_json(bases[0])}
    if variant == "Tracking":
        summary["prepared"] = {"mddot": args.line[0], "m0": args.line[1]}
    if exhaustive and len(bases) > 1:
        # every basis' branches carry full probability mass; average over bases
        per = [summarize([t for t in transcripts if t.king_basis == b], True) for b in bases]
        stats = summarize(transcripts, True)
        if variant == "Tracking":
            stats["erasure_rate"] = sum(p["erasure_rate"] for p in per) / len(per)
        stats["king_outcome_frequencies"] = {k: v / len(bases) for k, v in stats["king_outcome_frequencies"].items()}
    else:
        stats = summarize(transcripts, exhaustive)
    summary.update(stats)
    _write_transcripts(args, [t.to_json() for t in transcripts], summary)
    return EXIT_OK if summary["accuracy"] in (None, 1.0) else EXIT_FAIL


def cmd_mkp(args, parser) -> int:
    return _protocol_cmd(args, parser, "MKP")


def cmd_track(args, parser) -> int:
    return _protocol_cmd(args, parser, "Tracking")


def cmd_channel(args, parser) -> int:
    d = args.dim
    seed = 0 if args.seed is None else args.seed
    line = _line(parser, d, args.line)
    if args.message is not None:
        try:
            message = [parse_basis(d, tok) for tok in args.message.split(",")]
        except ValueError as exc:
            parser.error(str(exc))
    else:
        rounds = 100 if args.rounds is None else args.rounds
        if rounds < 1:
            parser.error("--rounds must be >= 1")
        message = random_message(d, rounds, seed)
    decoded, transcripts = run_channel(d, message, line, seed)
    n = len(message)
    erasures = sum(t.correct is None for t in transcripts)
    decided = n - erasures
    correct = sum(bool(t.correct) for t in transcripts)
    p = 1 / d
    summary = {
        "dim": d, "rounds": n, "seed": seed,
        "initial_line": {"mddot": line[0], "m0": line[1]},
        "message": [basis_to_json(b) for b in message] if n <= 64 else None,
        "decoded": [r.to_json() for r in decoded] if n <= 64 else None,
        "decode_accuracy": correct / decided if decided else None,
        "erasure_rate": erasures / n,
        "expected_erasure_rate": p,
        "erasure_sigma": math.sqrt(p * (1 - p) / n),
    }
    records = [t.to_json() for t in transcripts] if args.transcripts else []
    _write_transcripts(args, records, summary)
    return EXIT_OK if summary["decode_accuracy"] in (None, 1.0) else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "geometry": cmd_geometry, "mkp": cmd_mkp,
            "track": cmd_track, "channel": cmd_channel}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return COMMANDS[args.command](args, parser)


if __name__ == "__main__":
    sys.exit(main())
