import numpy as np
import pytest
from hypothesis import given, strategies as st

from rbtcode.errors import FieldMismatchError, UsageError
from rbtcode.gf import (
    GF256,
    Field,
    FieldElement,
    clmul,
    count_ops,
    get_field,
    gf_add,
    gf_inv,
    gf_mul,
    gf_pow,
    is_irreducible,
    poly_mod,
)


def slow_mul(a, b, poly):
    """Shift-and-add product, independent of the log tables."""
    out = 0
    m = poly.bit_length() - 1
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> m:
            a ^= poly
    return out


def el(v, F=GF256):
    return FieldElement(v, F)


def test_add_examples():
    assert gf_add(el(0x53), el(0x53)).value == 0
    assert gf_add(el(0x47), el(0)).value == 0x47
    assert gf_add(el(0x53), el(0xCA)).value == 0x53 ^ 0xCA == 0x99


def test_mul_examples():
    assert gf_mul(el(0x02), el(0x80)).value == slow_mul(0x02, 0x80, 0x11D) == 0x1D
    for a in (0, 1, 0x53, 0xFF):
        assert gf_mul(el(a), el(1)).value == a
        assert gf_mul(el(a), el(0)).value == 0


def test_inverse_examples():
    F16 = get_field(4)
    assert gf_inv(el(1)).value == 1
    for a in range(1, 16):
        assert gf_mul(el(a, F16), gf_inv(el(a, F16))).value == 1
    with pytest.raises(ZeroDivisionError):
        gf_inv(el(0))


def test_field_mismatch():
    with pytest.raises(FieldMismatchError):
        gf_add(el(1), el(1, get_field(4)))
    with pytest.raises(FieldMismatchError):
        gf_mul(el(1), el(1, get_field(4)))


def test_element_range():
    with pytest.raises(UsageError):
        FieldElement(256, GF256)
    with pytest.raises(UsageError):
        GF256.mul(300, 1)


@pytest.mark.parametrize("m", [4, 8])
def test_tables_match_shift_and_add_exhaustively(m):
    F = get_field(m)
    q = F.order
    oracle = np.array([[slow_mul(a, b, F.polynomial) for b in range(q)] for a in range(q)])
    table = np.array([[F.mul(a, b) for b in range(q)] for a in range(q)])
    assert np.array_equal(oracle, table)


@pytest.mark.parametrize("m", [4, 8])
def test_field_axioms_exhaustive(m):
    F = get_field(m)
    q = F.order
    T = np.array([[slow_mul(a, b, F.polynomial) for b in range(q)] for a in range(q)], dtype=np.int64)
    a = np.arange(q)[:, None, None]
    b = np.arange(q)[None, :, None]
    c = np.arange(q)[None, None, :]
    assert np.array_equal(T, T.T)
    assert np.array_equal(T[T[a, b], c], T[a, T[b, c]])
    assert np.array_equal(T[a, b ^ c], T[a, b] ^ T[a, c])
    assert np.array_equal((a ^ b) ^ c, a ^ (b ^ c))
    assert np.array_equal(T[:, 1], np.arange(q))
    assert not T[:, 0].any()
    # every nonzero element has exactly one inverse
    assert all((T[x, 1:] == 1).sum() == 1 for x in range(1, q))


@pytest.mark.parametrize("m", range(1, 9))
def test_fermat(m):
    F = get_field(m)
    for a in range(1, F.order):
        x = 1
        for _ in range(F.order - 1):
            x = slow_mul(x, a, F.polynomial)
        assert x == 1
        assert gf_pow(el(a, F), F.order - 1).value == 1


def test_default_polynomials_irreducible():
    for m in range(1, 17):
        F = get_field(m)
        assert F.order == 2 ** m
        assert F.exp[0] == 1


def test_reducible_polynomial_rejected():
    assert not is_irreducible(0b101)  # (x+1)^2
    assert not is_irreducible(0x11B ^ 0x2)  # x^8+x^4+x^3+1 has root 1
    with pytest.raises(UsageError):
        Field(2, 0b101)
    with pytest.raises(UsageError):
        Field(17)


def test_non_primitive_irreducible_polynomial():
    # x^8+x^4+x^3+x+1 is irreducible, but x is not a generator
    F = Field(8, 0x11B)
    assert F.generator != 2
    for a in range(1, 256):
        assert F.mul(a, F.inv(a)) == 1
        assert F.mul(a, 7) == slow_mul(a, 7, 0x11B)


@given(st.integers(0, 2**12), st.integers(0, 2**12))
def test_clmul_commutes_and_reduces(a, b):
    assert clmul(a, b) == clmul(b, a)
    assert poly_mod(clmul(a, b), 0x11D) < 256


def test_op_counter():
    with count_ops() as ops:
        GF256.add(1, 2)
        GF256.mul(3, 4)
        GF256.xor_reduce(np.ones((5, 4), dtype=np.uint16), axis=1)
    assert (ops.adds, ops.muls) == (1 + 5 * 3, 1)
    GF256.mul(3, 4)
    assert ops.muls == 1


def test_field_is_cached_and_picklable():
    import pickle

    assert get_field(8) is GF256
    assert pickle.loads(pickle.dumps(GF256)) is GF256
