import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from evmx import _kernels
from evmx.alu import (
    _divmod_general,
    _divmod_shift,
    add,
    byte_at,
    compare_and_bitwise,
    divmod_nonrestoring,
    exp,
    mul_shift_add,
    sar,
    shl,
    shr,
    sign_extend,
    signed_div,
    signed_mod,
    sub,
)
from evmx.words import WORD_MASK, from_signed

MOD = 1 << 256
words = st.integers(min_value=0, max_value=WORD_MASK)


def test_add_sub_wraparound():
    assert add(2**256 - 1, 1) == 0
    assert sub(0, 1) == 2**256 - 1


@given(words, words)
def test_add_sub_inverse(a, b):
    assert sub(add(a, b), b) == a


def test_mul_identities():
    x = 0xDEADBEEF << 200
    assert mul_shift_add(x, 1) == x
    assert mul_shift_add(x, 0) == 0
    assert mul_shift_add(3, 5) == 15


def test_mul_random_against_big_int():
    rng = random.Random(101)
    for _ in range(1000):
        a, b = rng.getrandbits(256), rng.getrandbits(256)
        assert mul_shift_add(a, b) == (a * b) % MOD


def test_divmod_examples():
    assert divmod_nonrestoring(7, 2) == (3, 1)
    assert divmod_nonrestoring(123, 0) == (0, 0)  # division by zero is defined
    assert divmod_nonrestoring(2**200, 2**10) == (2**190, 0)  # shift fast path


def test_divmod_random_against_big_int():
    rng = random.Random(202)
    for _ in range(1000):
        a, b = rng.getrandbits(256), rng.getrandbits(rng.choice([8, 64, 128, 256]))
        q, r = divmod_nonrestoring(a, b)
        if b == 0:
            assert (q, r) == (0, 0)
        else:
            assert (q, r) == divmod(a, b)


@given(words, words.filter(lambda b: b != 0))
def test_divmod_reconstruction_identity(a, b):
    q, r = divmod_nonrestoring(a, b)
    assert r < b
    assert (q * b + r) % MOD == a


@given(words, st.integers(0, 255))
def test_shift_path_agrees_with_general_path(a, k):
    b = 1 << k
    assert _divmod_shift(a, b) == _divmod_general(a, b)


def test_shift_path_rejects_non_power_of_two():
    with pytest.raises(ValueError):
        _divmod_shift(10, 3)


def test_signed_division():
    minus8 = from_signed(-8)
    assert signed_div(minus8, 2) == from_signed(-4)
    assert signed_div(2**255, 2**256 - 1) == 2**255  # min / -1 wraps to min
    assert signed_div(5, 0) == 0
    assert signed_mod(from_signed(-7), 3) == from_signed(-1)
    assert signed_mod(7, from_signed(-3)) == 1  # remainder takes the dividend's sign
    assert signed_mod(5, 0) == 0


def test_signed_ops_random_against_big_int():
    rng = random.Random(303)

    def signed(v):
        return v - MOD if v >> 255 else v

    for _ in range(500):
        a, b = rng.getrandbits(256), rng.getrandbits(256)
        sa, sb = signed(a), signed(b)
        want_q = 0 if sb == 0 else abs(sa) // abs(sb) * (-1 if (sa < 0) != (sb < 0) else 1)
        want_r = 0 if sb == 0 else abs(sa) % abs(sb) * (-1 if sa < 0 else 1)
        assert signed_div(a, b) == want_q % MOD
        assert signed_mod(a, b) == want_r % MOD


def test_exp():
    assert exp(123, 0) == 1
    assert exp(2, 256) == 0
    assert exp(3, 20) == 3_486_784_401
    rng = random.Random(404)
    for _ in range(50):
        base, e = rng.getrandbits(256), rng.getrandbits(16)
        assert exp(base, e) == pow(base, e, MOD)


@given(words)
def test_exp_of_one_is_identity(x):
    assert exp(x, 1) == x


def test_compare_and_bitwise():
    a = 0xF0F0
    assert compare_and_bitwise("EQ", a, a) == 1
    assert compare_and_bitwise("EQ", a, a + 1) == 0
    assert compare_and_bitwise("AND", a, compare_and_bitwise("NOT", a)) == 0
    assert compare_and_bitwise("SHR", 255, 2**255) == 1
    assert compare_and_bitwise("LT", 1, 2) == 1
    assert compare_and_bitwise("GT", 1, 2) == 0
    assert compare_and_bitwise("SLT", from_signed(-1), 0) == 1
    assert compare_and_bitwise("SGT", from_signed(-1), 0) == 0
    assert compare_and_bitwise("ISZERO", 0) == 1
    assert compare_and_bitwise("XOR", a, a) == 0
    with pytest.raises(ValueError):
        compare_and_bitwise("NAND", 1, 1)


def test_byte_and_shifts():
    word = int.from_bytes(bytes(range(32)), "big")
    for i in range(32):
        assert byte_at(i, word) == i
    assert byte_at(32, word) == 0
    assert shl(4, 1) == 16
    assert shl(256, 1) == 0
    assert shr(256, WORD_MASK) == 0
    assert sar(256, from_signed(-1)) == WORD_MASK
    assert sar(256, 5) == 0
    assert sar(1, from_signed(-2)) == from_signed(-1)


def test_sign_extend():
    assert sign_extend(0, 0xFF) == WORD_MASK
    assert sign_extend(0, 0x7F) == 0x7F
    assert sign_extend(1, 0x80FF) == from_signed(-(0x10000 - 0x80FF))
    assert sign_extend(31, 0xAB) == 0xAB


def test_jitted_and_plain_kernels_agree():
    # In numba mode the compiled kernel must match its own Python source
    # running un-jitted; in numpy mode they are the same object.
    rng = random.Random(505)
    mul, div = _kernels.mul_limbs, _kernels.divmod_limbs
    mul_py = getattr(mul, "py_func", mul)
    div_py = getattr(div, "py_func", div)
    for _ in range(25):
        a, b = rng.getrandbits(256), rng.getrandbits(256) | 1
        la, lb = _kernels.to_limbs(a), _kernels.to_limbs(b)
        assert _kernels.from_limbs(mul(la, lb)) == _kernels.from_limbs(mul_py(la, lb))
        q1, r1 = div(la, lb)
        q2, r2 = div_py(la, lb)
        assert (q1 == q2).all() and (r1 == r2).all()
