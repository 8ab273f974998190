"""Arithmetic over binary extension fields GF(2^m), 1 <= m <= 16.

Scalars are plain ints in ``[0, q)``; vectors and matrices are numpy ``uint16``
arrays. Multiplication goes through log/antilog tables built once per field.
``FieldElement`` wraps an int together with its field for operator-style use.

Every field operation can be tallied with :func:`count_ops`, which is how the
repair path is shown to perform no arithmetic at all.
"""

from __future__ import annotations

import contextlib
import contextvars
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from . import kernels
from .errors import FieldMismatchError, UsageError

DEFAULT_POLYNOMIALS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10001001,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


@dataclass
class OpCounter:
    adds: int = 0
    muls: int = 0
    invs: int = 0

    @property
    def total(self) -> int:
        return self.adds + self.muls + self.invs


_counter: contextvars.ContextVar[OpCounter | None] = contextvars.ContextVar("gf_op_counter", default=None)


@contextlib.contextmanager
def count_ops():
    """Tally field operations performed inside the block.

    >>> with count_ops() as ops:
    ...     _ = GF256.mul(3, 7)
    >>> ops.muls
    1
    """
    counter = OpCounter()
    token = _counter.set(counter)
    try:
        yield counter
    finally:
        _counter.reset(token)


def _tally(adds: int = 0, muls: int = 0, invs: int = 0) -> None:
    c = _counter.get()
    if c is not None:
        c.adds += adds
        c.muls += muls
        c.invs += invs


def clmul(a: int, b: int) -> int:
    """Carry-less product of two polynomials over GF(2) encoded as ints."""
    out = 0
    while b:
        if b & 1:
            out ^= a
        a <<= 1
        b >>= 1
    return out


def poly_mod(a: int, mod: int) -> int:
    dm = mod.bit_length()
    while a.bit_length() >= dm:
        a ^= mod << (a.bit_length() - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree 1..deg/2."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    for div in range(2, 1 << (deg // 2 + 1)):
        if poly_mod(poly, div) == 0:
            return False
    return True


class Field:
    """GF(2^m) defined by an irreducible reduction polynomial.

    Instances are immutable and cached per ``(m, polynomial)``; use
    :func:`get_field` rather than calling the constructor repeatedly.
    """

    def __init__(self, m: int, polynomial: int | None = None):
        if not 1 <= m <= 16:
            raise UsageError(f"extension degree must be in 1..16, got {m}")
        if polynomial is None:
            polynomial = DEFAULT_POLYNOMIALS[m]
        if polynomial.bit_length() - 1 != m:
            raise UsageError(f"reduction polynomial {polynomial:#x} does not have degree {m}")
        if not is_irreducible(polynomial):
            raise UsageError(f"reduction polynomial {polynomial:#x} is reducible over GF(2)")
        self.m = m
        self.polynomial = polynomial
        self.order = 1 << m
        self.generator, exp, log = self._build_tables()
        exp.flags.writeable = False
        log.flags.writeable = False
        self.exp = exp
        self.log = log
        self.dtype = np.uint8 if m <= 8 else np.uint16

    def _build_tables(self):
        q = self.order
        for g in range(1 if q == 2 else 2, q):
            powers = np.empty(q - 1, dtype=np.uint16)
            x = 1
            for i in range(q - 1):
                powers[i] = x
                x = poly_mod(clmul(x, g), self.polynomial)
                if x == 1 and i < q - 2:
                    break
            else:
                if x != 1:
                    continue
                log = np.zeros(q, dtype=np.uint16)
                log[powers] = np.arange(q - 1, dtype=np.uint16)
                exp = np.concatenate([powers, powers])
                return g, exp, log
        raise AssertionError("no primitive element found")  # pragma: no cover

    def __repr__(self) -> str:
        return f"Field(m={self.m}, polynomial={self.polynomial:#x})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.m, self.polynomial) == (other.m, other.polynomial)

    def __hash__(self) -> int:
        return hash((self.m, self.polynomial))

    def __reduce__(self):
        return (get_field, (self.m, self.polynomial))

    def _check(self, *values: int) -> None:
        for v in values:
            if not 0 <= v < self.order:
                raise UsageError(f"{v} is not an element of GF(2^{self.m})")

    # scalar operations

    def add(self, a: int, b: int) -> int:
        self._check(a, b)
        _tally(adds=1)
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        _tally(muls=1)
        if a == 0 or b == 0:
            return 0
        return int(self.exp[int(self.log[a]) + int(self.log[b])])

    def inv(self, a: int) -> int:
        self._check(a)
        if a == 0:
            raise ZeroDivisionError("zero has no multiplicative inverse")
        _tally(invs=1)
        return int(self.exp[(self.order - 1) - int(self.log[a])])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        self._check(a)
        if e < 0:
            return self.pow(self.inv(a), -e)
        _tally(muls=max(e.bit_length(), 1))
        if a == 0:
            return 1 if e == 0 else 0
        return int(self.exp[(int(self.log[a]) * e) % (self.order - 1)])

    def clmul_mul(self, a: int, b: int) -> int:
        """Table-free product: carry-less multiply then reduce."""
        self._check(a, b)
        return poly_mod(clmul(a, b), self.polynomial)

    def element(self, value: int) -> FieldElement:
        return FieldElement(value, self)

    # bulk operations on uint16 arrays

    def xor_reduce(self, values: np.ndarray, axis: int = -1) -> np.ndarray:
        """Sum along ``axis``; counts ``len - 1`` additions per output."""
        values = np.asarray(values)
        n = values.shape[axis]
        _tally(adds=max(n - 1, 0) * (values.size // max(n, 1)))
        return np.bitwise_xor.reduce(values, axis=axis)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        a = np.asarray(a)
        b = np.asarray(b)
        r, s = a.shape
        c = b.shape[1]
        _tally(adds=r * max(s - 1, 0) * c, muls=r * s * c)
        return kernels.matmul(a, b, self.exp, self.log, self.order)

    def inverse(self, a: np.ndarray) -> np.ndarray:
        n = a.shape[0]
        _tally(adds=n ** 3, muls=n ** 3, invs=n)
        return kernels.inverse(a, self.exp, self.log, self.order)

    def rank(self, a: np.ndarray) -> int:
        a = np.asarray(a)
        if a.size == 0:
            return 0
        r, c = a.shape
        _tally(adds=r * c * min(r, c), muls=r * c * min(r, c), invs=min(r, c))
        return kernels.rank(a, self.exp, self.log, self.order)

    def random(self, shape, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.order, size=shape, dtype=np.uint16)


def get_field(m: int = 8, polynomial: int | None = None) -> Field:
    if polynomial is None:
        polynomial = DEFAULT_POLYNOMIALS.get(m, 0)
    return _cached_field(m, polynomial)


@lru_cache(maxsize=None)
def _cached_field(m: int, polynomial: int) -> Field:
    return Field(m, polynomial)


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: Field = dc_field(repr=False)

    def __post_init__(self):
        if not 0 <= self.value < self.field.order:
            raise UsageError(f"{self.value} is not an element of GF(2^{self.field.m})")

    def _same(self, other: FieldElement) -> None:
        if not isinstance(other, FieldElement):
            raise FieldMismatchError(f"expected FieldElement, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return FieldElement(self.field.add(self.value, other.value), self.field)

    __sub__ = __add__

    def __mul__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return FieldElement(self.field.mul(self.value, other.value), self.field)

    def __truediv__(self, other: FieldElement) -> FieldElement:
        self._same(other)
        return FieldElement(self.field.div(self.value, other.value), self.field)

    def __pow__(self, e: int) -> FieldElement:
        return FieldElement(self.field.pow(self.value, e), self.field)

    def inverse(self) -> FieldElement:
        return FieldElement(self.field.inv(self.value), self.field)

    def __int__(self) -> int:
        return self.value


def gf_add(a: FieldElement, b: FieldElement) -> FieldElement:
    return a + b


def gf_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    return a * b


def gf_inv(a: FieldElement) -> FieldElement:
    return a.inverse()


def gf_pow(a: FieldElement, e: int) -> FieldElement:
    return a ** e


GF2 = get_field(1)
GF256 = get_field(8)


def field_for_length(n_symbols: int) -> Field:
    """Smallest default byte-aligned field with at least ``n_symbols`` elements."""
    for m in (8, 16):
        if (1 << m) >= n_symbols:
            return get_field(m)
    raise UsageError(f"no supported field has {n_symbols} distinct evaluation points")
