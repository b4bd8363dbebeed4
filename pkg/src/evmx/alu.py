"""256-bit arithmetic and logic.

Multiplication uses the shift-and-add algorithm and division/modulo the
non-restoring shifting algorithm, both running on the limb kernels in
``_kernels``; no wide hardware-multiplier analogue sits anywhere on that path.
A divisor that is a power of two short-circuits to a plain right shift.
Division by zero yields zero results rather than an error.

Comparisons, bitwise operations, shifts, and the modular-add/mul helpers
are direct int operations; they model single-cycle combinational logic, so
nothing is gained by routing them through the bit-serial kernels.
"""

from __future__ import annotations

from typing import NamedTuple

from ._kernels import divmod_limbs, from_limbs, mask_low_limbs, mul_limbs, shr_limbs, to_limbs
from .words import SIGN_BIT, WORD_MASK, from_signed, to_signed


class DivModResult(NamedTuple):
    quotient: int
    remainder: int


def add(a: int, b: int) -> int:
    return (a + b) & WORD_MASK


def sub(a: int, b: int) -> int:
    return (a - b) & WORD_MASK


def mul_shift_add(a: int, b: int) -> int:
    """(a * b) mod 2^256 via conditional adds of the shifted multiplicand."""
    a &= WORD_MASK
    b &= WORD_MASK
    return from_limbs(mul_limbs(to_limbs(a), to_limbs(b)))


def _divmod_general(a: int, b: int) -> DivModResult:
    """Non-restoring path, callable directly for any nonzero divisor."""
    q, r = divmod_limbs(to_limbs(a & WORD_MASK), to_limbs(b & WORD_MASK))
    return DivModResult(from_limbs(q), from_limbs(r))


def _divmod_shift(a: int, b: int) -> DivModResult:
    """Right-shift fast path; requires the divisor to be a power of two."""
    if b <= 0 or b & (b - 1):
        raise ValueError("shift path needs a power-of-two divisor")
    k = b.bit_length() - 1
    limbs = to_limbs(a & WORD_MASK)
    return DivModResult(from_limbs(shr_limbs(limbs, k)), from_limbs(mask_low_limbs(limbs, k)))


def divmod_nonrestoring(a: int, b: int) -> DivModResult:
    """Quotient and remainder of unsigned division; (0, 0) when b == 0."""
    a &= WORD_MASK
    b &= WORD_MASK
    if b == 0:
        return DivModResult(0, 0)
    if b & (b - 1) == 0:
        return _divmod_shift(a, b)
    return _divmod_general(a, b)


def signed_div(a: int, b: int) -> int:
    """Two's-complement division truncating toward zero; b == 0 gives 0."""
    if b == 0:
        return 0
    sa, sb = to_signed(a), to_signed(b)
    q = divmod_nonrestoring(abs(sa), abs(sb)).quotient
    if (sa < 0) != (sb < 0):
        q = -q
    return from_signed(q)


def signed_mod(a: int, b: int) -> int:
    """Two's-complement remainder, sign following the dividend; b == 0 gives 0."""
    if b == 0:
        return 0
    sa, sb = to_signed(a), to_signed(b)
    r = divmod_nonrestoring(abs(sa), abs(sb)).remainder
    if sa < 0:
        r = -r
    return from_signed(r)


def exp(base: int, exponent: int) -> int:
    """base^exponent mod 2^256 by square-and-multiply over mul_shift_add."""
    base &= WORD_MASK
    exponent &= WORD_MASK
    result = 1
    while exponent:
        if exponent & 1:
            result = mul_shift_add(result, base)
        exponent >>= 1
        if exponent:
            base = mul_shift_add(base, base)
    return result


def addmod(a: int, b: int, n: int) -> int:
    return (a + b) % n if n else 0


def mulmod(a: int, b: int, n: int) -> int:
    return (a * b) % n if n else 0


def sign_extend(byte_index: int, value: int) -> int:
    if byte_index >= 31:
        return value & WORD_MASK
    bit = 8 * (byte_index + 1) - 1
    mask = (1 << (bit + 1)) - 1
    if value & (1 << bit):
        return (value | ~mask) & WORD_MASK
    return value & mask


def byte_at(index: int, value: int) -> int:
    """Big-endian byte `index` of a word (0 = most significant); 0 past 31."""
    if index >= 32:
        return 0
    return (value >> (8 * (31 - index))) & 0xFF


def shl(shift: int, value: int) -> int:
    if shift >= 256:
        return 0
    return (value << shift) & WORD_MASK


def shr(shift: int, value: int) -> int:
    if shift >= 256:
        return 0
    return (value & WORD_MASK) >> shift


def sar(shift: int, value: int) -> int:
    signed = to_signed(value)
    if shift >= 256:
        return WORD_MASK if signed < 0 else 0
    return from_signed(signed >> shift)


_COMPARE_AND_BITWISE = {
    "LT": lambda a, b: int((a & WORD_MASK) < (b & WORD_MASK)),
    "GT": lambda a, b: int((a & WORD_MASK) > (b & WORD_MASK)),
    "SLT": lambda a, b: int(to_signed(a) < to_signed(b)),
    "SGT": lambda a, b: int(to_signed(a) > to_signed(b)),
    "EQ": lambda a, b: int((a & WORD_MASK) == (b & WORD_MASK)),
    "ISZERO": lambda a, b: int((a & WORD_MASK) == 0),
    "AND": lambda a, b: (a & b) & WORD_MASK,
    "OR": lambda a, b: (a | b) & WORD_MASK,
    "XOR": lambda a, b: (a ^ b) & WORD_MASK,
    "NOT": lambda a, b: ~a & WORD_MASK,
    "BYTE": lambda a, b: byte_at(a, b),
    "SHL": lambda a, b: shl(a, b),
    "SHR": lambda a, b: shr(a, b),
    "SAR": lambda a, b: sar(a, b),
}


def compare_and_bitwise(op: str, a: int, b: int = 0) -> int:
    """Dispatch table for the comparison/bitwise/shift group (0/1 for tests)."""
    try:
        fn = _COMPARE_AND_BITWISE[op]
    except KeyError:
        raise ValueError(f"unknown compare/bitwise op {op!r}") from None
    return fn(a, b)


SIGNED_MIN = SIGN_BIT  # 2^255, the most negative two's-complement word
