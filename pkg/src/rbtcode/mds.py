"""[N, B] MDS outer code: generalized Reed-Solomon, doubly-extended RS, or
single parity check.

Messages are arrays whose last axis has length B; several stripes can be
encoded at once by passing a ``(stripes, B)`` array.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import kernels
from .errors import ConfigurationError, CorruptInputError, InsufficientDataError, UsageError
from .gf import Field, get_field

GRS = "grs"
DOUBLY_EXTENDED = "doubly_extended"
PARITY = "parity"
MODES = (GRS, DOUBLY_EXTENDED, PARITY)


def default_points(field: Field, count: int) -> tuple[int, ...]:
    """0, 1, g, g^2, ... for the field's primitive element g."""
    if count > field.order:
        raise ConfigurationError(f"GF(2^{field.m}) has only {field.order} elements, need {count} points")
    pts = [0] + [int(field.exp[i]) for i in range(field.order - 1)]
    return tuple(pts[:count])


@dataclass(frozen=True)
class MdsCodeSpec:
    N: int
    B: int
    field: Field
    mode: str = GRS
    evaluation_points: tuple[int, ...] | None = None
    systematic: bool = False

    def __post_init__(self):
        if self.mode not in MODES:
            raise UsageError(f"unknown MDS mode {self.mode!r}")
        if not 1 <= self.B <= self.N:
            raise UsageError(f"need 1 <= B <= N, got B={self.B}, N={self.N}")
        if self.mode == PARITY:
            if self.B != self.N - 1:
                raise ConfigurationError(f"parity mode needs B = N - 1, got B={self.B}, N={self.N}")
            if self.evaluation_points is not None:
                raise UsageError("parity mode takes no evaluation points")
            return
        needed = self.N if self.mode == GRS else self.N - 1
        if self.field.order < needed:
            raise ConfigurationError(
                f"{self.mode} with N={self.N} needs a field of at least {needed} elements, "
                f"GF(2^{self.field.m}) has {self.field.order}"
            )
        if self.evaluation_points is None:
            object.__setattr__(self, "evaluation_points", default_points(self.field, needed))
        pts = self.evaluation_points
        if len(pts) != needed:
            raise UsageError(f"expected {needed} evaluation points, got {len(pts)}")
        if len(set(pts)) != len(pts):
            raise UsageError("evaluation points must be pairwise distinct")
        if any(not 0 <= p < self.field.order for p in pts):
            raise UsageError("evaluation point outside the field")

    @classmethod
    def grs(cls, N: int, B: int, field: Field | None = None, **kw) -> MdsCodeSpec:
        return cls(N, B, field or get_field(8), GRS, **kw)

    @classmethod
    def doubly_extended(cls, N: int, B: int, field: Field | None = None, **kw) -> MdsCodeSpec:
        return cls(N, B, field or get_field(8), DOUBLY_EXTENDED, **kw)

    @classmethod
    def parity(cls, N: int, field: Field | None = None) -> MdsCodeSpec:
        return cls(N, N - 1, field or get_field(1), PARITY)

    @cached_property
    def generator(self) -> np.ndarray:
        """B x N generator matrix; column i maps a message to symbol c_i."""
        F, B, N = self.field, self.B, self.N
        if self.mode == PARITY:
            g = np.zeros((B, N), dtype=np.uint16)
            g[:, :B] = np.eye(B, dtype=np.uint16)
            g[:, B] = 1
            g.flags.writeable = False
            return g
        g = np.zeros((B, N), dtype=np.uint16)
        for col, x in enumerate(self.evaluation_points):
            v = 1
            for row in range(B):
                g[row, col] = v
                v = F.clmul_mul(v, x)
        if self.mode == DOUBLY_EXTENDED:
            g[B - 1, N - 1] = 1  # column for the point at infinity
        if self.systematic:
            head = kernels.inverse(g[:, :B], F.exp, F.log, F.order)
            g = kernels.matmul(head, g, F.exp, F.log, F.order)
        g.flags.writeable = False
        return g


def mds_generator_columns(spec: MdsCodeSpec) -> list[np.ndarray]:
    return [spec.generator[:, i].copy() for i in range(spec.N)]


def mds_encode(spec: MdsCodeSpec, message) -> np.ndarray:
    msg = np.asarray(message, dtype=np.uint16)
    if msg.shape[-1:] != (spec.B,):
        raise UsageError(f"message must have length B={spec.B}, got shape {msg.shape}")
    if msg.size and int(msg.max()) >= spec.field.order:
        raise UsageError(f"message symbol outside GF(2^{spec.field.m})")
    flat = msg.reshape(-1, spec.B)
    if spec.mode == PARITY:
        parity = spec.field.xor_reduce(flat, axis=1)
        out = np.concatenate([flat, parity[:, None]], axis=1)
    else:
        out = spec.field.matmul(flat, spec.generator)
    return out.reshape(msg.shape[:-1] + (spec.N,))


def _normalize_known(spec: MdsCodeSpec, known) -> tuple[dict[int, np.ndarray], bool]:
    items: Iterable = known.items() if isinstance(known, Mapping) else known
    out: dict[int, np.ndarray] = {}
    scalar = True
    for pos, value in items:
        pos = int(pos)
        scalar = scalar and np.ndim(value) == 0
        if not 0 <= pos < spec.N:
            raise UsageError(f"position {pos} outside [0, {spec.N})")
        val = np.atleast_1d(np.asarray(value, dtype=np.uint16))
        if pos in out:
            if out[pos].shape != val.shape or not np.array_equal(out[pos], val):
                raise CorruptInputError(f"conflicting values for position {pos}")
            continue
        out[pos] = val
    return out, scalar


def mds_decode_erasures(spec: MdsCodeSpec, known) -> np.ndarray:
    """Recover the message from any B or more known codeword positions.

    ``known`` is a mapping or iterable of ``(position, value)``; a value may be
    a scalar or a 1-D array of per-stripe symbols. Extra positions beyond B are
    checked for consistency against the re-encoded codeword.
    """
    table, scalar = _normalize_known(spec, known)
    if len(table) < spec.B:
        raise InsufficientDataError(f"need {spec.B} distinct positions, got {len(table)}")
    positions = sorted(table)
    shapes = {v.shape for v in table.values()}
    if len(shapes) != 1:
        raise CorruptInputError("known values have inconsistent stripe counts")
    values = np.stack([table[p] for p in positions], axis=1)
    msg = decode_columns(spec, positions, values)
    return msg[0] if scalar else msg


def decode_columns(spec: MdsCodeSpec, positions, values: np.ndarray) -> np.ndarray:
    """Bulk decoder: ``values[:, j]`` holds the symbols at ``positions[j]``.

    Returns a ``(rows, B)`` message array.
    """
    positions = list(positions)
    values = np.asarray(values, dtype=np.uint16)
    if len(set(positions)) != len(positions):
        raise CorruptInputError("duplicate positions")
    if len(positions) < spec.B:
        raise InsufficientDataError(f"need {spec.B} distinct positions, got {len(positions)}")
    order = np.argsort(positions)
    positions = [positions[i] for i in order]
    values = values[:, order]
    F, B = spec.field, spec.B

    if spec.mode == PARITY:
        msg = _decode_parity(spec, positions, values)
    else:
        use, extra = positions[:B], positions[B:]
        sub = spec.generator[:, use]
        try:
            inv = F.inverse(sub)
        except kernels.SINGULAR_ERRORS as exc:  # pragma: no cover - MDS guarantees invertibility
            raise CorruptInputError(f"generator submatrix singular: {exc}") from exc
        msg = F.matmul(values[:, :B], inv)
        if extra:
            check = F.matmul(msg, spec.generator[:, extra])
            if not np.array_equal(check, values[:, B:]):
                raise CorruptInputError("known symbols are inconsistent with any codeword")
    return msg


def _decode_parity(spec: MdsCodeSpec, positions, values) -> np.ndarray:
    B = spec.B
    rows = values.shape[0]
    col_of = {p: j for j, p in enumerate(positions)}
    missing = [i for i in range(B) if i not in col_of]
    msg = np.zeros((rows, B), dtype=np.uint16)
    for i in range(B):
        if i in col_of:
            msg[:, i] = values[:, col_of[i]]
    if missing:
        # exactly one message symbol missing and the parity symbol is known
        (gap,) = missing
        others = [col_of[p] for p in positions if p != gap]
        msg[:, gap] = spec.field.xor_reduce(values[:, others], axis=1)
    elif B in col_of:
        if not np.array_equal(spec.field.xor_reduce(msg, axis=1), values[:, col_of[B]]):
            raise CorruptInputError("parity check failed")
    return msg
