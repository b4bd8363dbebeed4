"""Contract-address derivation: digest concatenation, address extraction,
and the minimal RLP encoding the CREATE path needs.

Two address-extraction windows exist. ``compat`` (the default) takes the
LAST 20 digest bytes and therefore reproduces real-network contract
addresses; ``first20`` models a datapath that forwards the FIRST 20 bytes
instead. Both modes hash identical preimages.
"""

from __future__ import annotations

from .keccak import keccak256
from .words import ADDRESS_BYTES

SALT_BYTES = 32
CREATE2_PREFIX = b"\xff"
PREIMAGE_BYTES = 1 + ADDRESS_BYTES + SALT_BYTES + 32  # 85


def delta_concat(sender: bytes, salt: bytes, code_digest: bytes) -> bytes:
    """85-byte preimage 0xff || sender || salt || digest, in that order."""
    if len(sender) != ADDRESS_BYTES:
        raise ValueError(f"sender must be {ADDRESS_BYTES} bytes, got {len(sender)}")
    if len(salt) != SALT_BYTES:
        raise ValueError(f"salt must be {SALT_BYTES} bytes, got {len(salt)}")
    if len(code_digest) != 32:
        raise ValueError(f"code digest must be 32 bytes, got {len(code_digest)}")
    return CREATE2_PREFIX + sender + salt + code_digest


def split_delta(preimage: bytes) -> tuple[bytes, bytes, bytes]:
    """Inverse of delta_concat (drops the fixed prefix)."""
    if len(preimage) != PREIMAGE_BYTES or preimage[0] != 0xFF:
        raise ValueError("not a CREATE2 preimage")
    return preimage[1:21], preimage[21:53], preimage[53:85]


def extract_address(digest: bytes, mode: str = "compat") -> bytes:
    """20-byte address from a 32-byte digest (see module docstring for modes)."""
    if len(digest) != 32:
        raise ValueError("digest must be 32 bytes")
    if mode == "compat":
        return digest[12:32]
    if mode == "first20":
        return digest[:20]
    raise ValueError(f"unknown address mode {mode!r}")


def rlp_encode_address_nonce(sender: bytes, nonce: int) -> bytes:
    """RLP list [20-byte address, nonce], all the CREATE path ever encodes.

    The nonce is a minimal big-endian integer (0 encodes as the empty
    string, 0x80). With nonce < 2^64 the list payload is at most 30 bytes,
    so the single-byte 0xC0-family header always suffices.
    """
    if len(sender) != ADDRESS_BYTES:
        raise ValueError(f"sender must be {ADDRESS_BYTES} bytes, got {len(sender)}")
    if not 0 <= nonce < 2**64:
        raise ValueError("nonce must fit in 64 bits")

    addr_item = bytes([0x80 + ADDRESS_BYTES]) + sender
    if nonce == 0:
        nonce_item = b"\x80"
    elif nonce < 0x80:
        nonce_item = bytes([nonce])
    else:
        payload = nonce.to_bytes((nonce.bit_length() + 7) // 8, "big")
        nonce_item = bytes([0x80 + len(payload)]) + payload

    body = addr_item + nonce_item
    return bytes([0xC0 + len(body)]) + body


def create_address(sender: bytes, nonce: int, mode: str = "compat") -> bytes:
    """Deterministic address for a nonce-based deployment."""
    return extract_address(keccak256(rlp_encode_address_nonce(sender, nonce)), mode)


def create2_address(sender: bytes, salt: bytes, init_code: bytes, mode: str = "compat") -> bytes:
    """Deterministic salt-based deployment address: the two-hash pipeline.

    The init code is hashed first; its digest is framed by delta_concat and
    hashed again, and the address window is extracted from the result.
    """
    code_digest = keccak256(init_code)
    return extract_address(keccak256(delta_concat(sender, salt, code_digest)), mode)
