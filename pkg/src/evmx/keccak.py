"""Keccak-256 sponge over the backend-selected f[1600] permutation kernel.

This is the original Keccak (0x01 domain padding), not standardized
SHA3-256 (0x06), i.e. the variant contract addresses are derived with.
Rate is 1088 bits (136 bytes), capacity 512, output 32 bytes.
"""

from __future__ import annotations

import numpy as np

from ._kernels import keccak_f1600

DIGEST_BYTES = 32
_RATE_BYTES = 136
_LANE_LE = np.dtype("<u8")


def keccak256(data: bytes) -> bytes:
    """32-byte Keccak-256 digest of an arbitrary byte string."""
    lanes = np.zeros(25, dtype=np.uint64)

    padded = bytearray(data)
    pad_len = _RATE_BYTES - (len(padded) % _RATE_BYTES)
    if pad_len == 1:
        padded.append(0x81)
    else:
        padded.append(0x01)
        padded.extend(bytes(pad_len - 2))
        padded.append(0x80)

    view = np.frombuffer(bytes(padded), dtype=_LANE_LE).astype(np.uint64, copy=False)
    for start in range(0, len(view), _RATE_BYTES // 8):
        lanes[:17] ^= view[start:start + 17]
        keccak_f1600(lanes)

    return lanes[:4].astype(_LANE_LE, copy=False).tobytes()
