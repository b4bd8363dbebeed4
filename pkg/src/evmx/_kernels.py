"""Numeric kernels for the two hot loops: Keccak-f[1600] and bit-serial
256-bit arithmetic (shift-and-add multiply, non-restoring divide).

Backend selection
-----------------
``EVMX_BACKEND`` picks the implementation at import time:

* ``numba``: require numba, JIT-compile the loop kernels (error if missing)
* ``numpy``: pure-numpy fallback, the same limb loops un-jitted plus a
  vectorized Keccak permutation
* ``auto`` (default): numba when importable, numpy otherwise

256-bit words are handled as 8 little-endian 32-bit limbs stored in uint64
cells, so no intermediate ever overflows uint64 and the jitted and un-jitted
paths are bit-identical. The non-restoring divider keeps a 288-bit
two's-complement partial remainder in 9 limbs.
"""

from __future__ import annotations

import os

import numpy as np

_M32 = np.uint64(0xFFFFFFFF)
_U0 = np.uint64(0)
_U1 = np.uint64(1)
_U32 = np.uint64(32)
_U63 = np.uint64(63)
_BIT32 = np.array([1 << k for k in range(32)], dtype=np.uint64)

_KECCAK_ROUNDS = np.array([
    0x0000000000000001, 0x0000000000008082, 0x800000000000808A, 0x8000000080008000,
    0x000000000000808B, 0x0000000080000001, 0x8000000080008081, 0x8000000000008009,
    0x000000000000008A, 0x0000000000000088, 0x0000000080008009, 0x000000008000000A,
    0x000000008000808B, 0x800000000000008B, 0x8000000000008089, 0x8000000000008003,
    0x8000000000008002, 0x8000000000000080, 0x000000000000800A, 0x800000008000000A,
    0x8000000080008081, 0x8000000000008080, 0x0000000080000001, 0x8000000080008008,
], dtype=np.uint64)

# Lane (x, y) lives at flat index x + 5*y, matching the sponge byte order.
# The combined rho/pi step is b[j] = rotl(lanes[_PI_SRC[j]], _RHO[j]).
_RHO_BY_XY = (
    (0, 36, 3, 41, 18),
    (1, 44, 10, 45, 2),
    (62, 6, 43, 15, 61),
    (28, 55, 25, 21, 56),
    (27, 20, 39, 8, 14),
)
_PI_SRC = np.zeros(25, dtype=np.int64)
_RHO = np.zeros(25, dtype=np.uint64)
for _x in range(5):
    for _y in range(5):
        _j = _y + 5 * ((2 * _x + 3 * _y) % 5)
        _PI_SRC[_j] = _x + 5 * _y
        _RHO[_j] = _RHO_BY_XY[_x][_y]
_RHO_C = (np.uint64(64) - _RHO) % np.uint64(64)


def _select_backend() -> str:
    flag = os.environ.get("EVMX_BACKEND", "auto").strip().lower()
    if flag in ("numpy", "nojit"):
        return "numpy"
    if flag in ("numba", "jit"):
        import numba  # noqa: F401  (hard requirement when forced)
        return "numba"
    try:
        import numba  # noqa: F401
        return "numba"
    except ImportError:
        return "numpy"


BACKEND = _select_backend()


def active_backend() -> str:
    """Backend selected at import time: ``"numba"`` or ``"numpy"``."""
    return BACKEND


# --------------------------------------------------------------------------
# Keccak-f[1600]
# --------------------------------------------------------------------------

def _keccak_f1600_loops(lanes):
    # 24 rounds of theta / rho+pi / chi / iota over 25 uint64 lanes, in place.
    c = np.empty(5, dtype=np.uint64)
    d = np.empty(5, dtype=np.uint64)
    b = np.empty(25, dtype=np.uint64)
    for rnd in range(24):
        for x in range(5):
            c[x] = lanes[x] ^ lanes[x + 5] ^ lanes[x + 10] ^ lanes[x + 15] ^ lanes[x + 20]
        for x in range(5):
            t = c[(x + 1) % 5]
            d[x] = c[(x + 4) % 5] ^ ((t << _U1) | (t >> _U63))
        for x in range(5):
            for y in range(5):
                lanes[x + 5 * y] ^= d[x]
        for j in range(25):
            v = lanes[_PI_SRC[j]]
            b[j] = (v << _RHO[j]) | (v >> _RHO_C[j])
        for y in range(5):
            base = 5 * y
            for x in range(5):
                lanes[base + x] = b[base + x] ^ (~b[base + (x + 1) % 5] & b[base + (x + 2) % 5])
        lanes[0] ^= _KECCAK_ROUNDS[rnd]


def keccak_f1600_numpy(lanes: np.ndarray) -> None:
    """Vectorized permutation over a flat (25,) uint64 lane array, in place."""
    a = lanes.reshape(5, 5)  # a[y, x]
    for rc in _KECCAK_ROUNDS:
        c = np.bitwise_xor.reduce(a, axis=0)
        t = np.roll(c, -1)
        d = np.roll(c, 1) ^ ((t << _U1) | (t >> _U63))
        a ^= d[np.newaxis, :]
        flat = lanes[_PI_SRC]
        b = ((flat << _RHO) | (flat >> _RHO_C)).reshape(5, 5)
        a[:, :] = b ^ (~np.roll(b, -1, axis=1) & np.roll(b, -2, axis=1))
        lanes[0] ^= rc


# --------------------------------------------------------------------------
# 256-bit limb arithmetic
# --------------------------------------------------------------------------

def _bit_length_limbs(a):
    for i in range(len(a) - 1, -1, -1):
        if a[i] != _U0:
            v = a[i]
            n = 0
            while v != _U0:
                v >>= _U1
                n += 1
            return 32 * i + n
    return 0


def _mul_limbs(a, b):
    # Shift-and-add: walk the multiplier bits low to high, conditionally
    # accumulating the (left-shifting) multiplicand. Result is mod 2^256
    # because the top carry simply falls off the 8-limb accumulator.
    out = np.zeros(8, dtype=np.uint64)
    m = a.copy()
    nbits = _bit_length_limbs(b)
    for i in range(nbits):
        if (b[i >> 5] & _BIT32[i & 31]) != _U0:
            carry = _U0
            for k in range(8):
                s = out[k] + m[k] + carry
                out[k] = s & _M32
                carry = s >> _U32
        carry = _U0
        for k in range(8):
            v = (m[k] << _U1) | carry
            m[k] = v & _M32
            carry = v >> _U32
    return out


def _divmod_limbs(a, d):
    # Non-restoring division: shift a dividend bit into the 288-bit signed
    # partial remainder, then subtract or add the divisor depending on the
    # remainder's sign; a non-negative result sets the quotient bit. One
    # final addition corrects a negative remainder.
    q = np.zeros(8, dtype=np.uint64)
    r = np.zeros(9, dtype=np.uint64)
    dd = np.zeros(9, dtype=np.uint64)
    for i in range(8):
        dd[i] = d[i]
    nbits = _bit_length_limbs(a)
    for i in range(nbits - 1, -1, -1):
        carry = _U0
        for k in range(9):
            v = (r[k] << _U1) | carry
            r[k] = v & _M32
            carry = v >> _U32
        if (a[i >> 5] & _BIT32[i & 31]) != _U0:
            r[0] |= _U1
        if (r[8] & _BIT32[31]) != _U0:
            carry = _U0
            for k in range(9):
                s = r[k] + dd[k] + carry
                r[k] = s & _M32
                carry = s >> _U32
        else:
            carry = _U1
            for k in range(9):
                s = r[k] + (dd[k] ^ _M32) + carry
                r[k] = s & _M32
                carry = s >> _U32
        if (r[8] & _BIT32[31]) == _U0:
            q[i >> 5] |= _BIT32[i & 31]
    if (r[8] & _BIT32[31]) != _U0:
        carry = _U0
        for k in range(9):
            s = r[k] + dd[k] + carry
            r[k] = s & _M32
            carry = s >> _U32
    return q, r[:8].copy()


def _shr_limbs(a, k):
    # Logical right shift by k bits, the power-of-two divisor fast path.
    out = np.zeros(8, dtype=np.uint64)
    limb = k >> 5
    bits = np.uint64(k & 31)
    for i in range(8 - limb):
        v = a[i + limb] >> bits
        if bits != _U0 and i + limb + 1 < 8:
            v |= (a[i + limb + 1] << (_U32 - bits)) & _M32
        out[i] = v
    return out


def _mask_low_limbs(a, k):
    # a mod 2^k, the remainder companion of the shift fast path.
    out = np.zeros(8, dtype=np.uint64)
    limb = k >> 5
    for i in range(min(limb, 8)):
        out[i] = a[i]
    bits = k & 31
    if limb < 8 and bits != 0:
        out[limb] = a[limb] & (_BIT32[bits] - _U1)
    return out


if BACKEND == "numba":
    from numba import njit

    _jit = njit(cache=True, nogil=True)
    _bit_length_limbs = _jit(_bit_length_limbs)
    _keccak_f1600_loops = _jit(_keccak_f1600_loops)
    _mul_limbs = _jit(_mul_limbs)
    _divmod_limbs = _jit(_divmod_limbs)
    _shr_limbs = _jit(_shr_limbs)
    _mask_low_limbs = _jit(_mask_low_limbs)
    keccak_f1600 = _keccak_f1600_loops
else:
    keccak_f1600 = keccak_f1600_numpy

keccak_f1600_loops = _keccak_f1600_loops
mul_limbs = _mul_limbs
divmod_limbs = _divmod_limbs
shr_limbs = _shr_limbs
mask_low_limbs = _mask_low_limbs


def to_limbs(value: int) -> np.ndarray:
    """Split a (already masked) 256-bit int into 8 uint64-held 32-bit limbs."""
    return np.array([(value >> (32 * i)) & 0xFFFFFFFF for i in range(8)], dtype=np.uint64)


def from_limbs(limbs: np.ndarray) -> int:
    value = 0
    for i in range(7, -1, -1):
        value = (value << 32) | int(limbs[i])
    return value


def warm_up() -> None:
    """Trigger JIT compilation of every kernel (no-op on the numpy backend)."""
    lanes = np.zeros(25, dtype=np.uint64)
    keccak_f1600(lanes)
    a = to_limbs(3)
    b = to_limbs(5)
    mul_limbs(a, b)
    divmod_limbs(a, b)
    shr_limbs(a, 1)
    mask_low_limbs(a, 1)
