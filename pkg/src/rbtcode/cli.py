"""Command-line interface.

Exit codes: 0 success, 1 domain error (corrupt data, missing chunks, failed
check), 2 usage error (bad flags or parameters).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import tradeoff as to
from .errors import RbtError, UsageError
from .gf import get_field
from .mds import DOUBLY_EXTENDED, GRS, PARITY
from .rank_oracle import SymbolSpace, verify_code_properties
from .rbt import CodeParams, RbtCode
from .storage_sim import (
    FailureSchedule,
    Padding,
    chunk_path,
    extract,
    ingest,
    load_chunk,
    read_manifest,
    run,
    store_chunk,
    write_manifest,
)

TRADEOFF_COLUMNS = ["alpha", "beta", "dbeta_cutset", "dbeta_spaceshare", "p", "theta", "verdict"]
MANIFEST = "manifest.txt"


class CommandError(RbtError):
    pass


def _params(args) -> CodeParams:
    try:
        return CodeParams(args.n, args.k, args.beta)
    except UsageError as exc:
        raise UsageError(f"invalid parameters: {exc} (regenerating codes need 1 < k <= d = n-1)") from exc


def build_code(params: CodeParams, mode: str = "auto", m: int | None = None) -> RbtCode:
    """Pick the outer code and field the way ``encode`` does."""
    if mode == "auto":
        mode = PARITY if params.k == params.n - 2 else GRS
    field = get_field(m) if m else None
    return RbtCode(params, field, mode)


def _code_from_manifest(directory: Path) -> tuple[RbtCode, dict]:
    path = directory / MANIFEST
    if not path.exists():
        raise CommandError(f"no {MANIFEST} in {directory}")
    man = read_manifest(path)
    try:
        params = CodeParams(int(man["n"]), int(man["k"]), int(man.get("beta", 1)))
        code = RbtCode(params, get_field(int(man["m"])), man.get("mode", GRS))
    except KeyError as exc:
        raise CommandError(f"manifest is missing key {exc}") from exc
    return code, man


def cmd_encode(args) -> int:
    src = Path(args.file)
    if not src.is_file():
        raise CommandError(f"input file {src} not found")
    code = build_code(_params(args), args.mode, args.m)
    message, padding = ingest(code, src.read_bytes())
    chunks = code.encode(message)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for ch in chunks:
        store_chunk(chunk_path(out, ch.node_id), ch)
    p = code.params
    write_manifest(out / MANIFEST, {
        "n": p.n, "k": p.k, "d": p.d, "m": code.field.m, "beta": p.beta, "mode": code.mode,
        "stripes": padding.stripes, "original_length": padding.original_length, "seed": args.seed,
    })
    print(
        f"encoded {padding.original_length} bytes into {p.n} chunks: "
        f"{padding.stripes} stripe(s), {p.alpha * padding.stripes} symbols per chunk, "
        f"GF(2^{code.field.m}) {code.mode}"
    )
    return 0


def _load_available(directory: Path, code: RbtCode, nodes=None):
    wanted = range(code.params.n) if nodes is None else nodes
    found = {}
    for node in wanted:
        path = chunk_path(directory, node)
        if path.exists():
            found[node] = load_chunk(path)
        elif nodes is not None:
            raise CommandError(f"chunk for node {node} not found at {path}")
    return found


def _parse_nodes(text: str | None):
    if text is None:
        return None
    try:
        return sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError as exc:
        raise UsageError(f"--nodes expects comma-separated node ids, got {text!r}") from exc


def cmd_reconstruct(args) -> int:
    directory = Path(args.chunks)
    code, man = _code_from_manifest(directory)
    chunks = _load_available(directory, code, _parse_nodes(args.nodes))
    if len(chunks) < code.params.k:
        raise CommandError(
            f"need chunks from k={code.params.k} nodes, found {len(chunks)} "
            f"(short by {code.params.k - len(chunks)})"
        )
    use = [chunks[x] for x in sorted(chunks)[: code.params.k]]
    message = code.reconstruct(use)
    padding = Padding(int(man["original_length"]), int(man["stripes"]), 0, code.field.m)
    Path(args.out).write_bytes(extract(message, padding))
    print(f"reconstructed {padding.original_length} bytes from nodes {[c.node_id for c in use]}")
    return 0


def cmd_repair(args) -> int:
    from .gf import count_ops

    directory = Path(args.chunks)
    code, _ = _code_from_manifest(directory)
    p = code.params
    failed = args.node
    if not 0 <= failed < p.n:
        raise UsageError(f"node must be in [0, {p.n}), got {failed}")
    survivors = {}
    for h in range(p.n):
        if h == failed:
            continue
        path = chunk_path(directory, h)
        if not path.exists():
            raise CommandError(f"survivor chunk for node {h} missing at {path}; repair needs all d={p.d} helpers")
        survivors[h] = load_chunk(path)
    with count_ops() as ops:
        responses = {h: code.repair_symbols(h, failed, ch) for h, ch in survivors.items()}
        chunk = code.repair(failed, responses)
    moved = sum(len(r) for r in responses.values())
    store_chunk(chunk_path(directory, failed), chunk)
    print(
        f"repaired node {failed}: {ops.total} arithmetic ops, "
        f"{p.d * p.beta}x{chunk.stripes} = {moved} symbols moved"
    )
    return 0


def _parse_point(text: str) -> tuple[Fraction, Fraction]:
    try:
        a, b = text.split(":")
        return Fraction(a), Fraction(b)
    except ValueError as exc:
        raise UsageError(f"--point expects ALPHA:BETA, got {text!r}") from exc


def tradeoff_rows(k: int, d: int, B, samples: int, points=()) -> list[dict[str, str]]:
    rows = []

    def row(alpha, beta, dbeta_cut, share):
        pt = to.classify_point(k, d, alpha, beta)
        verdict = to.exact_repair_feasibility(k, d, pt)
        rows.append({
            "alpha": to.fmt(alpha), "beta": to.fmt(beta), "dbeta_cutset": to.fmt(dbeta_cut),
            "dbeta_spaceshare": to.fmt(share), "p": str(pt.p), "theta": to.fmt(pt.theta),
            "verdict": verdict.status.value,
        })

    for s in to.curve_samples(k, d, B, samples):
        row(s.alpha, s.beta, s.dbeta_cutset, s.dbeta_spaceshare)
    lo, hi = to.alpha_range(k, d, B)
    for alpha, beta in points:
        share = None
        if d >= 2 * k - 2 and lo <= alpha <= hi:
            share = to.space_sharing_point(k, d, B, alpha)[1]
        row(alpha, beta, d * beta, share)
    return rows


def cmd_tradeoff(args) -> int:
    if args.d < args.k or args.k < 2:
        raise UsageError(f"need 2 <= k <= d, got k={args.k}, d={args.d}")
    points = [_parse_point(p) for p in args.point]
    rows = tradeoff_rows(args.k, args.d, Fraction(args.B), args.samples, points)
    buf = io.StringIO()
    w = csv.DictWriter(buf, TRADEOFF_COLUMNS, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    if args.out:
        Path(args.out).write_text(buf.getvalue())
        print(f"wrote {len(rows)} rows to {args.out}")
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def cmd_verify(args) -> int:
    code = build_code(_params(args), args.mode, args.m)
    space = SymbolSpace.from_code(code)
    if args.inject_fault:
        space = space.with_duplicate_column(0)
    report = verify_code_properties(code, space, seed=args.seed)
    sys.stdout.write(report.text())
    n_fail = len(report.failures)
    print(f"# {len(report.results)} checks, {n_fail} failed")
    return 1 if n_fail else 0


def cmd_simulate(args) -> int:
    code = build_code(_params(args), args.mode, args.m)
    message = None
    if args.file:
        src = Path(args.file)
        if not src.is_file():
            raise CommandError(f"input file {src} not found")
        message, _ = ingest(code, src.read_bytes())
    schedule = FailureSchedule(seed=args.seed, random_count=args.failures)
    ledger = run(code, schedule, message, audit_every=args.audit_every)
    text = ledger.to_csv()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(ledger.summary())
    return 0


def _add_code_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, required=True, help="number of nodes")
    p.add_argument("--k", type=int, required=True, help="reconstruction degree")
    p.add_argument("--beta", type=int, default=1, help="symbols per helper per stripe")
    p.add_argument(
        "--mode", choices=["auto", GRS, PARITY, DOUBLY_EXTENDED], default="auto",
        help="outer MDS code; auto uses XOR parity when k = n-2",
    )
    p.add_argument("--m", type=int, default=None, help="field degree (default 8, or 16 for large n)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rbtcode", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="split a file into n chunk files")
    p.add_argument("file")
    _add_code_flags(p)
    p.add_argument("--out", required=True, help="chunk directory")
    p.add_argument("--seed", type=int, default=0, help="recorded in the manifest")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("reconstruct", help="rebuild the file from any k chunks")
    p.add_argument("chunks", help="chunk directory")
    p.add_argument("--nodes", help="comma-separated node ids to read (default: first k present)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("repair", help="regenerate one node's chunk from the d survivors")
    p.add_argument("chunks", help="chunk directory")
    p.add_argument("--node", type=int, required=True)
    p.set_defaults(func=cmd_repair)

    p = sub.add_parser("tradeoff", help="CSV of the cut-set and space-sharing curves")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--B", type=str, required=True, help="file size in symbols")
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--point", action="append", default=[], metavar="ALPHA:BETA",
                   help="extra (alpha, beta) point to classify; repeatable")
    p.add_argument("--out")
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("verify", help="rank-based property checks of the constructed code")
    _add_code_flags(p)
    p.add_argument("--seed", type=int, default=0, help="subset sampling seed above 8 nodes")
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="replay random failures and account repair traffic")
    _add_code_flags(p)
    p.add_argument("--file", help="file to store (default: random stripe from the seed)")
    p.add_argument("--seed", type=int, default=0, help="drives data, failures and audits")
    p.add_argument("--failures", type=int, default=10, help="number of random node failures")
    p.add_argument("--audit-every", type=int, default=10, help="reconstruct after this many repairs (0: never)")
    p.add_argument("--out", help="ledger CSV path (default: stdout)")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (RbtError, OSError, AssertionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
