"""Repair-by-transfer exact-MBR code for [n, k, d = n - 1].

Every edge {i, j} of the complete graph on the n nodes carries one symbol of
an [C(n,2), B] MDS codeword, and each node stores the n - 1 symbols on its
incident edges. Any two nodes therefore share exactly one symbol, which is
what a helper hands over when the other one fails.

Node ids are 0-based. Under 1-based labels with lexicographic edge order the
layout for n = 5 is::

    node 1: c1 c2 c3 c4      node 4: c3 c6 c8 c10
    node 2: c1 c5 c6 c7      node 5: c4 c7 c9 c10
    node 3: c2 c5 c8 c9

For beta > 1 each stripe is split into beta independent groups that are coded
separately; a chunk's symbol array has one row per group.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import comb
from typing import Mapping, Sequence

import numpy as np

from .errors import (
    ConfigurationError,
    CorruptInputError,
    InsufficientHelpersError,
    InsufficientNodesError,
    UsageError,
)
from .gf import Field, field_for_length, get_field
from .mds import GRS, PARITY, MdsCodeSpec, decode_columns, mds_encode


@dataclass(frozen=True)
class CodeParams:
    n: int
    k: int
    beta: int = 1

    def __post_init__(self):
        if self.n < 3:
            raise UsageError(f"n must be at least 3, got {self.n}")
        if not 1 < self.k <= self.n - 1:
            raise UsageError(f"k must satisfy 1 < k <= d = n - 1 = {self.n - 1}, got k={self.k}")
        if self.beta < 1:
            raise UsageError(f"beta must be a positive integer, got {self.beta}")

    @property
    def d(self) -> int:
        return self.n - 1

    @property
    def alpha(self) -> int:
        return self.d * self.beta

    @property
    def B_unit(self) -> int:
        """Message symbols per beta = 1 group: kd - C(k, 2)."""
        return self.k * self.d - comb(self.k, 2)

    @property
    def B(self) -> int:
        return self.B_unit * self.beta

    @property
    def N(self) -> int:
        return comb(self.n, 2)


def edge_id(n: int, i: int, j: int) -> int:
    """Lexicographic index of the pair {i, j}, 0 <= i < j < n."""
    if not 0 <= i < j < n:
        raise UsageError(f"edge needs 0 <= i < j < n, got i={i}, j={j}, n={n}")
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


def incident_edges(n: int, node: int) -> list[int]:
    """Edge ids of ``node`` in ascending order (neighbours in ascending order)."""
    return [edge_id(n, min(node, o), max(node, o)) for o in range(n) if o != node]


def slot_of(node: int, neighbour: int) -> int:
    """Local slot in ``node``'s chunk holding the edge shared with ``neighbour``."""
    return neighbour if neighbour < node else neighbour - 1


def stripe_split(message, B: int) -> np.ndarray:
    msg = np.asarray(message)
    if msg.ndim != 1 or B <= 0 or msg.size % B:
        raise UsageError(f"message length {msg.size} is not a multiple of B={B}")
    return msg.reshape(-1, B)


def stripe_join(groups) -> np.ndarray:
    return np.asarray(groups).reshape(-1)


@dataclass(frozen=True, eq=False)
class NodeChunk:
    node_id: int
    params: CodeParams
    m: int
    symbols: np.ndarray  # shape (stripes * beta, d)

    def __post_init__(self):
        sym = np.asarray(self.symbols)
        if sym.ndim != 2 or sym.shape[1] != self.params.d or sym.shape[0] % self.params.beta:
            raise CorruptInputError(f"chunk symbols have shape {sym.shape}, expected (stripes*beta, {self.params.d})")
        if not 0 <= self.node_id < self.params.n:
            raise CorruptInputError(f"node id {self.node_id} outside [0, {self.params.n})")
        sym = sym.astype(np.uint16, copy=True)
        sym.flags.writeable = False
        object.__setattr__(self, "symbols", sym)

    @property
    def stripes(self) -> int:
        return self.symbols.shape[0] // self.params.beta

    @property
    def symbol_count(self) -> int:
        return self.symbols.size

    def header(self) -> tuple:
        return (self.params, self.m, self.stripes)

    def __eq__(self, other) -> bool:
        if not isinstance(other, NodeChunk):
            return NotImplemented
        return (self.node_id, self.header()) == (other.node_id, other.header()) and np.array_equal(
            self.symbols, other.symbols
        )

    def __hash__(self) -> int:
        return hash((self.node_id, self.header(), self.symbols.tobytes()))


class RbtCode:
    """The code for one parameter set, field and outer-code mode.

    ``mode`` defaults to ``"parity"`` when k = n - 2 (XOR-only encoding) and to
    generalized Reed-Solomon otherwise.
    """

    def __init__(self, params: CodeParams, field: Field | None = None, mode: str | None = None):
        self.params = params
        N, B = params.N, params.B_unit
        if mode is None:
            mode = PARITY if B == N - 1 else GRS
        if mode == PARITY and B != N - 1:
            raise ConfigurationError(f"parity mode requires k = n - 2 (got n={params.n}, k={params.k})")
        if field is None:
            field = get_field(8) if mode == PARITY else field_for_length(N)
        self.field = field
        self.mode = mode
        if mode == PARITY:
            self.mds = MdsCodeSpec.parity(N, field)
        else:
            self.mds = MdsCodeSpec(N, B, field, mode)

    def __repr__(self) -> str:
        p = self.params
        return f"RbtCode(n={p.n}, k={p.k}, beta={p.beta}, mode={self.mode!r}, m={self.field.m})"

    @cached_property
    def edges(self) -> list[list[int]]:
        return [incident_edges(self.params.n, node) for node in range(self.params.n)]

    def _units(self, message) -> np.ndarray:
        p = self.params
        msg = np.asarray(message, dtype=np.uint16)
        if msg.ndim != 1 or msg.size == 0 or msg.size % p.B:
            raise UsageError(f"message length {msg.size} is not a positive multiple of B={p.B}")
        return stripe_split(msg, p.B_unit)

    def encode(self, message) -> list[NodeChunk]:
        """Encode ``stripes * B`` symbols into n chunks."""
        codewords = mds_encode(self.mds, self._units(message))
        return [
            NodeChunk(node, self.params, self.field.m, codewords[:, self.edges[node]])
            for node in range(self.params.n)
        ]

    def _check_chunk(self, chunk: NodeChunk) -> None:
        if chunk.params != self.params or chunk.m != self.field.m:
            raise CorruptInputError(
                f"chunk {chunk.node_id} header {chunk.params}, m={chunk.m} does not match {self!r}"
            )

    def reconstruct(self, chunks: Sequence[NodeChunk]) -> np.ndarray:
        """Recover the message from chunks of at least k distinct nodes."""
        p = self.params
        by_node: dict[int, NodeChunk] = {}
        for ch in chunks:
            self._check_chunk(ch)
            if ch.node_id in by_node and by_node[ch.node_id] != ch:
                raise CorruptInputError(f"two different chunks claim node {ch.node_id}")
            by_node[ch.node_id] = ch
        if len(by_node) < p.k:
            raise InsufficientNodesError(f"need chunks from k={p.k} distinct nodes, got {len(by_node)}")
        stripes = {ch.stripes for ch in by_node.values()}
        if len(stripes) != 1:
            raise CorruptInputError(f"chunks disagree on stripe count: {sorted(stripes)}")

        columns: dict[int, np.ndarray] = {}
        for node, ch in sorted(by_node.items()):
            for slot, e in enumerate(self.edges[node]):
                col = ch.symbols[:, slot]
                if e in columns:
                    if not np.array_equal(columns[e], col):
                        raise CorruptInputError(f"nodes disagree on the symbol of edge {e}")
                else:
                    columns[e] = col
        positions = sorted(columns)
        values = np.stack([columns[e] for e in positions], axis=1)
        return stripe_join(decode_columns(self.mds, positions, values))

    def repair_symbols(self, helper: int, failed: int, helper_chunk: NodeChunk) -> np.ndarray:
        """What ``helper`` sends to rebuild ``failed``: its copy of the shared edge.

        Pure selection, one symbol per beta-group and stripe.
        """
        n = self.params.n
        if helper == failed:
            raise UsageError("a node cannot help repair itself")
        if not (0 <= helper < n and 0 <= failed < n):
            raise UsageError(f"node ids must be in [0, {n})")
        if helper_chunk.node_id != helper:
            raise UsageError(f"chunk belongs to node {helper_chunk.node_id}, not helper {helper}")
        self._check_chunk(helper_chunk)
        return helper_chunk.symbols[:, slot_of(helper, failed)].copy()

    def repair(self, failed: int, responses: Mapping[int, np.ndarray]) -> NodeChunk:
        """Place the d helper responses into the failed node's slots."""
        p = self.params
        expected = set(range(p.n)) - {failed}
        got = set(responses)
        if got != expected:
            missing, extra = sorted(expected - got), sorted(got - expected)
            raise InsufficientHelpersError(
                f"repair of node {failed} needs one response from each of {sorted(expected)}; "
                f"missing {missing}, unexpected {extra}"
            )
        lengths = {len(r) for r in responses.values()}
        if len(lengths) != 1:
            raise CorruptInputError(f"helper responses differ in length: {sorted(lengths)}")
        rows = lengths.pop()
        symbols = np.empty((rows, p.d), dtype=np.uint16)
        for helper, data in responses.items():
            symbols[:, slot_of(failed, helper)] = data
        return NodeChunk(failed, p, self.field.m, symbols)

    def repair_node(self, failed: int, chunks: Mapping[int, NodeChunk]) -> NodeChunk:
        """Convenience: gather responses from the surviving chunks and repair."""
        responses = {
            h: self.repair_symbols(h, failed, ch) for h, ch in chunks.items() if h != failed
        }
        return self.repair(failed, responses)
