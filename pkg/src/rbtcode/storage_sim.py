"""Single-process simulation of an n-node cluster running the repair-by-transfer
code: byte ingestion, chunk files, failure injection, repair and traffic
accounting against a whole-file (Reed-Solomon style) repair baseline.
"""

from __future__ import annotations

import csv
import io
import math
import struct
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from pathlib import Path
from typing import Iterable

import numpy as np

from .errors import CorruptChunkError, UnsupportedScenarioError, UsageError
from .rbt import CodeParams, NodeChunk, RbtCode

MAGIC = b"RBT1"
VERSION = 1
HEADER = struct.Struct("<4sHHHHBBIIHI")
LEDGER_COLUMNS = ["event", "type", "node", "helpers", "symbols_moved", "baseline_symbols"]


# ingestion


@dataclass(frozen=True)
class Padding:
    original_length: int
    stripes: int
    pad_symbols: int
    m: int

    @property
    def pad_bytes(self) -> int:
        """Whole zero bytes appended after the original data."""
        total_symbols = self.original_symbols + self.pad_symbols
        if self.m == 1:
            return total_symbols // 8 - self.original_length
        return total_symbols * symbol_width(self.m) - self.original_length

    @property
    def original_symbols(self) -> int:
        if self.m == 1:
            return self.original_length * 8
        return math.ceil(self.original_length / symbol_width(self.m))


def symbol_width(m: int) -> int:
    return (m + 7) // 8


def _bytes_to_symbols(raw: bytes, m: int) -> np.ndarray:
    buf = np.frombuffer(raw, dtype=np.uint8)
    if m == 1:
        return np.unpackbits(buf, bitorder="little").astype(np.uint16)
    if m == 8:
        return buf.astype(np.uint16)
    if m == 16:
        if len(buf) % 2:
            buf = np.concatenate([buf, np.zeros(1, dtype=np.uint8)])
        return buf.view("<u2").astype(np.uint16)
    raise UsageError(f"byte ingestion supports GF(2), GF(2^8) and GF(2^16), not m={m}")


def ingest(code: RbtCode, raw: bytes) -> tuple[np.ndarray, Padding]:
    """Map bytes to field symbols and zero-pad to a whole number of stripes."""
    if not raw:
        raise UsageError("cannot ingest an empty file")
    B = code.params.B
    symbols = _bytes_to_symbols(raw, code.field.m)
    stripes = math.ceil(len(symbols) / B)
    pad = stripes * B - len(symbols)
    message = np.concatenate([symbols, np.zeros(pad, dtype=np.uint16)])
    return message, Padding(len(raw), stripes, pad, code.field.m)


def extract(message: np.ndarray, padding: Padding) -> bytes:
    msg = np.asarray(message, dtype=np.uint16)
    if padding.m == 1:
        raw = np.packbits(msg.astype(np.uint8), bitorder="little").tobytes()
    elif padding.m == 8:
        raw = msg.astype(np.uint8).tobytes()
    else:
        raw = msg.astype("<u2").tobytes()
    return raw[: padding.original_length]


# chunk files


def chunk_bytes(chunk: NodeChunk) -> bytes:
    p = chunk.params
    header = HEADER.pack(
        MAGIC, VERSION, p.n, p.k, p.d, chunk.m, 0, chunk.stripes, p.B, chunk.node_id, chunk.symbol_count
    )
    width = symbol_width(chunk.m)
    dtype = "<u1" if width == 1 else "<u2"
    return header + chunk.symbols.astype(dtype).tobytes()


def parse_chunk(data: bytes) -> NodeChunk:
    if len(data) < HEADER.size:
        raise CorruptChunkError("header", f"file has {len(data)} bytes, header needs {HEADER.size}")
    magic, version, n, k, d, m, reserved, stripes, B, node, count = HEADER.unpack_from(data)
    if magic != MAGIC:
        raise CorruptChunkError("magic", f"expected {MAGIC!r}, got {magic!r}")
    if version != VERSION:
        raise CorruptChunkError("version", f"unsupported version {version}")
    if reserved != 0:
        raise CorruptChunkError("reserved", f"must be 0, got {reserved}")
    if not 1 <= m <= 16:
        raise CorruptChunkError("m", f"field degree {m} out of range")
    if d != n - 1:
        raise CorruptChunkError("d", f"d={d} but n-1={n - 1}")
    if stripes == 0 or count % (stripes * d):
        raise CorruptChunkError("symbol_count", f"{count} symbols do not fill {stripes} stripes of d={d}")
    beta = count // (stripes * d)
    try:
        params = CodeParams(n, k, beta)
    except UsageError as exc:
        raise CorruptChunkError("params", str(exc)) from exc
    if params.B != B:
        raise CorruptChunkError("B", f"header says B={B}, parameters give {params.B}")
    width = symbol_width(m)
    payload = data[HEADER.size:]
    if len(payload) != count * width:
        raise CorruptChunkError("payload", f"expected {count * width} bytes, got {len(payload)}")
    values = np.frombuffer(payload, dtype="<u1" if width == 1 else "<u2").astype(np.uint16)
    if values.size and int(values.max()) >= (1 << m):
        raise CorruptChunkError("payload", f"symbol outside GF(2^{m})")
    try:
        return NodeChunk(node, params, m, values.reshape(stripes * beta, d))
    except Exception as exc:
        raise CorruptChunkError("node_id", str(exc)) from exc


def store_chunk(path, chunk: NodeChunk) -> None:
    Path(path).write_bytes(chunk_bytes(chunk))


def load_chunk(path) -> NodeChunk:
    return parse_chunk(Path(path).read_bytes())


def chunk_path(directory, node: int) -> Path:
    return Path(directory) / f"node_{node:03d}.rbt"


# manifest


def write_manifest(path, values: dict) -> None:
    Path(path).write_text("".join(f"{k}={v}\n" for k, v in values.items()))


def read_manifest(path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"malformed manifest line: {line!r}")
        out[key.strip()] = value.strip()
    return out


# simulation


@dataclass(frozen=True)
class FailureSchedule:
    """Failure events as ``(time_step, node)`` pairs, or ``random_count`` drawn
    uniformly from the seed."""

    seed: int = 0
    events: tuple[tuple[int, int], ...] = ()
    random_count: int = 0

    def resolve(self, n: int, rng: np.random.Generator) -> list[tuple[int, int]]:
        events = list(self.events)
        start = max((t for t, _ in events), default=-1) + 1
        nodes = rng.integers(0, n, size=self.random_count)
        events += [(start + i, int(x)) for i, x in enumerate(nodes)]
        events.sort(key=lambda e: e[0])
        seen = set()
        for t, node in events:
            if not 0 <= node < n:
                raise UsageError(f"failure of unknown node {node}")
            if t in seen:
                raise UnsupportedScenarioError(f"two failures at time step {t}; only single failures are repaired")
            seen.add(t)
        return events


@dataclass(frozen=True)
class LedgerEvent:
    index: int
    type: str  # "repair" or "reconstruct"
    node: int | None
    helpers: tuple[int, ...]
    symbols_moved: int
    baseline_symbols: int


@dataclass
class TrafficLedger:
    n: int
    k: int
    beta: int
    stripes: int
    seed: int
    events: list[LedgerEvent] = dc_field(default_factory=list)

    def repairs(self) -> list[LedgerEvent]:
        return [e for e in self.events if e.type == "repair"]

    @property
    def repair_symbols_total(self) -> int:
        return sum(e.symbols_moved for e in self.repairs())

    @property
    def baseline_symbols_total(self) -> int:
        return sum(e.baseline_symbols for e in self.repairs())

    def savings_ratio(self) -> Fraction:
        """1 - d*beta/B: the share of whole-file repair traffic avoided."""
        p = CodeParams(self.n, self.k, self.beta)
        return 1 - Fraction(p.d * p.beta, p.B)

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# seed={self.seed} n={self.n} k={self.k} beta={self.beta} stripes={self.stripes}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(LEDGER_COLUMNS)
        for e in self.events:
            w.writerow([
                e.index, e.type, "" if e.node is None else e.node,
                ";".join(map(str, e.helpers)), e.symbols_moved, e.baseline_symbols,
            ])
        return buf.getvalue()

    def summary(self) -> str:
        moved, base = self.repair_symbols_total, self.baseline_symbols_total
        ratio = self.savings_ratio()
        return (
            f"repair moved {moved} symbols vs baseline {base} "
            f"(savings {float(ratio) * 100:.2f}% = {ratio.numerator}/{ratio.denominator})"
        )


def read_ledger(text: str) -> list[dict[str, str]]:
    rows = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(rows))


class Cluster:
    """In-memory cluster: one chunk per node, at most one node down at a time."""

    def __init__(self, code: RbtCode, chunks: Iterable[NodeChunk]):
        self.code = code
        self.nodes: dict[int, NodeChunk | None] = {c.node_id: c for c in chunks}
        if sorted(self.nodes) != list(range(code.params.n)):
            raise UsageError("cluster needs exactly one chunk per node")

    @property
    def stripes(self) -> int:
        return next(c for c in self.nodes.values() if c is not None).stripes

    def fail(self, node: int) -> NodeChunk:
        down = [x for x, c in self.nodes.items() if c is None]
        if down:
            raise UnsupportedScenarioError(f"node {down[0]} is still down; cannot fail node {node}")
        chunk = self.nodes[node]
        self.nodes[node] = None
        return chunk

    def repair(self, node: int) -> tuple[NodeChunk, dict[int, int]]:
        """Rebuild ``node`` from all d survivors; returns the chunk and symbols sent per helper."""
        survivors = {x: c for x, c in self.nodes.items() if c is not None and x != node}
        responses = {h: self.code.repair_symbols(h, node, c) for h, c in survivors.items()}
        chunk = self.code.repair(node, responses)
        self.nodes[node] = chunk
        return chunk, {h: len(r) for h, r in responses.items()}

    def reconstruct(self, nodes: Iterable[int]) -> np.ndarray:
        return self.code.reconstruct([self.nodes[x] for x in nodes])


def run(
    code: RbtCode,
    schedule: FailureSchedule,
    message: np.ndarray | None = None,
    *,
    stripes: int = 1,
    audit_every: int = 10,
) -> TrafficLedger:
    """Replay ``schedule`` against a fresh cluster.

    Each failure is repaired immediately from all d survivors and the rebuilt
    chunk is compared with the pre-failure snapshot. Every ``audit_every``
    repairs a random k-subset reconstructs the file (logged as a reconstruct
    event). The run raises if any repair or audit is wrong.
    """
    p = code.params
    seeds = np.random.SeedSequence(schedule.seed).spawn(3)
    data_rng, fail_rng, audit_rng = (np.random.default_rng(s) for s in seeds)
    if message is None:
        message = code.field.random(stripes * p.B, data_rng)
    message = np.asarray(message, dtype=np.uint16)
    cluster = Cluster(code, code.encode(message))
    ledger = TrafficLedger(p.n, p.k, p.beta, cluster.stripes, schedule.seed)
    per_stripe_baseline = p.B * cluster.stripes

    def audit() -> None:
        nodes = tuple(sorted(audit_rng.choice(p.n, size=p.k, replace=False).tolist()))
        got = cluster.reconstruct(nodes)
        if not np.array_equal(got, message):
            raise AssertionError(f"reconstruction audit from {nodes} failed")
        ledger.events.append(LedgerEvent(
            len(ledger.events), "reconstruct", None, nodes,
            p.k * p.alpha * cluster.stripes, per_stripe_baseline,
        ))

    repairs = 0
    for _, node in schedule.resolve(p.n, fail_rng):
        before = cluster.fail(node)
        chunk, sent = cluster.repair(node)
        if chunk != before:
            raise AssertionError(f"repair of node {node} is not exact")
        moved = sum(sent.values())
        if moved != p.alpha * cluster.stripes:
            raise AssertionError(f"replacement received {moved} symbols, stores {p.alpha * cluster.stripes}")
        ledger.events.append(LedgerEvent(
            len(ledger.events), "repair", node, tuple(sorted(sent)), moved, per_stripe_baseline,
        ))
        repairs += 1
        if audit_every and repairs % audit_every == 0:
            audit()

    # final unlogged check so that an empty schedule still verifies the cluster
    final = tuple(sorted(audit_rng.choice(p.n, size=p.k, replace=False).tolist()))
    if not np.array_equal(cluster.reconstruct(final), message):
        raise AssertionError(f"final reconstruction from {final} failed")
    return ledger
