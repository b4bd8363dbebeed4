"""256-bit machine words, 20-byte addresses, and the execution configuration.

Words are plain Python ints constrained to [0, 2^256); helpers here handle
masking, big-endian (de)serialization, and two's-complement reinterpretation.
"""

from __future__ import annotations

from dataclasses import dataclass

WORD_BITS = 256
WORD_BYTES = 32
WORD_MASK = (1 << WORD_BITS) - 1
WORD_MOD = 1 << WORD_BITS
SIGN_BIT = 1 << (WORD_BITS - 1)

ADDRESS_BYTES = 20
ZERO_ADDRESS = bytes(ADDRESS_BYTES)

DEFAULT_CLOCK_HZ = 142_860_000


def word_from_bytes(data: bytes) -> int:
    """Big-endian word from at most 32 bytes (shorter inputs left-pad with 0)."""
    if len(data) > WORD_BYTES:
        raise ValueError(f"word input is {len(data)} bytes, limit is {WORD_BYTES}")
    return int.from_bytes(data, "big")


def word_to_bytes(value: int) -> bytes:
    """Exact 32-byte big-endian serialization of a word."""
    return (value & WORD_MASK).to_bytes(WORD_BYTES, "big")


def to_signed(value: int) -> int:
    """Two's-complement reading of a word."""
    value &= WORD_MASK
    return value - WORD_MOD if value & SIGN_BIT else value


def from_signed(value: int) -> int:
    return value & WORD_MASK


def address_to_word(address: bytes) -> int:
    """Zero-extend a 20-byte address to a stack word."""
    if len(address) != ADDRESS_BYTES:
        raise ValueError(f"address must be {ADDRESS_BYTES} bytes, got {len(address)}")
    return int.from_bytes(address, "big")


def word_to_address(value: int) -> bytes:
    """Low 20 bytes of a word, as an address."""
    return (value & ((1 << (8 * ADDRESS_BYTES)) - 1)).to_bytes(ADDRESS_BYTES, "big")


def parse_hex_bytes(text: str) -> bytes:
    """Hex string (optional 0x prefix, even length) to bytes."""
    text = text.strip()
    if text.startswith(("0x", "0X")):
        text = text[2:]
    if len(text) % 2:
        raise ValueError("hex string must have even length")
    return bytes.fromhex(text)


@dataclass
class ExecutionConfig:
    """Inputs that parameterize one contract execution.

    Mirrors the engine's external input signals: the gas limit counter load,
    the initialization-data array (also served as calldata), the value sent
    to a created contract, and the deploying account's address and nonce.
    """

    gas_limit: int = 10_000_000
    init_data: bytes = b""
    call_value: int = 0
    sender_address: bytes = ZERO_ADDRESS
    sender_nonce: int = 0
    clock_hz: int = DEFAULT_CLOCK_HZ
    self_address: bytes = ZERO_ADDRESS
    address_mode: str = "compat"  # or "first20": which digest window becomes an address
    hw_faithful_storage: bool = False
    call_stub_result: int = 1
    step_limit: int = 2_000_000

    def __post_init__(self) -> None:
        if self.gas_limit <= 0:
            raise ValueError("gas_limit must be positive")
        if self.clock_hz <= 0:
            raise ValueError("clock_hz must be positive")
        if len(self.sender_address) != ADDRESS_BYTES:
            raise ValueError("sender_address must be 20 bytes")
        if len(self.self_address) != ADDRESS_BYTES:
            raise ValueError("self_address must be 20 bytes")
        if not 0 <= self.sender_nonce < 2**64:
            raise ValueError("sender_nonce must fit in 64 bits")
        if self.address_mode not in ("compat", "first20"):
            raise ValueError("address_mode must be 'compat' or 'first20'")
        if not 0 <= self.call_value < WORD_MOD:
            raise ValueError("call_value must be a 256-bit word")
