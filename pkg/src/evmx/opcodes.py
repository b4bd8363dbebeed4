"""Opcode metadata: the executable instruction table with per-opcode gas and
cycle costs, plus the full standard mnemonic namespace for disassembly.

Gas values are a flat embedded fee schedule (one static amount per opcode;
dynamic repricing components of the published schedule are intentionally
flattened so a trace step always deducts exactly ``OpcodeSpec.gas``).

Cycle costs come from the ``table3`` calibration dataset where available.
Every other opcode gets an estimate from a documented rule::

    cycles = max(1, pops + pushes + immediate_bytes + component_latency)

with component latencies: memory word access 32, Keccak permutation 24,
bit-serial ALU 32 (signed variants 34, modular 40, EXP 64), simple
combinational ALU 1, storage port 1, PC load 1, stack reorder 2 (dup) or
4 (swap), RLP encode 8. Estimated entries carry ``estimated=True``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache

from .timing import CALIBRATED_CYCLES, CALIBRATED_GAS


@dataclass(frozen=True)
class OpcodeSpec:
    """Static metadata for one executable opcode."""

    code: int
    mnemonic: str
    immediate_len: int  # trailing immediate bytes (PUSH1..PUSH32 carry 1..32)
    gas: int
    cycles: int
    pops: int           # words removed from the stack
    pushes: int         # words added to the stack
    min_depth: int      # stack depth required before execution
    estimated: bool     # True when the cycle cost is rule-estimated


# (code, mnemonic, pops, pushes, gas, component_latency)
_FIXED_OPS = (
    (0x00, "STOP", 0, 0, 0, 0),
    (0x01, "ADD", 2, 1, 3, 1),
    (0x02, "MUL", 2, 1, 5, 32),
    (0x03, "SUB", 2, 1, 3, 1),
    (0x04, "DIV", 2, 1, 5, 32),
    (0x05, "SDIV", 2, 1, 5, 34),
    (0x06, "MOD", 2, 1, 5, 32),
    (0x07, "SMOD", 2, 1, 5, 34),
    (0x08, "ADDMOD", 3, 1, 8, 40),
    (0x09, "MULMOD", 3, 1, 8, 40),
    (0x0A, "EXP", 2, 1, 10, 64),
    (0x0B, "SIGNEXTEND", 2, 1, 5, 1),
    (0x10, "LT", 2, 1, 3, 1),
    (0x11, "GT", 2, 1, 3, 1),
    (0x12, "SLT", 2, 1, 3, 1),
    (0x13, "SGT", 2, 1, 3, 1),
    (0x14, "EQ", 2, 1, 3, 1),
    (0x15, "ISZERO", 1, 1, 3, 1),
    (0x16, "AND", 2, 1, 3, 1),
    (0x17, "OR", 2, 1, 3, 1),
    (0x18, "XOR", 2, 1, 3, 1),
    (0x19, "NOT", 1, 1, 3, 1),
    (0x1A, "BYTE", 2, 1, 3, 1),
    (0x1B, "SHL", 2, 1, 3, 1),
    (0x1C, "SHR", 2, 1, 3, 1),
    (0x1D, "SAR", 2, 1, 3, 1),
    (0x20, "KECCAK256", 2, 1, 30, 56),
    (0x30, "ADDRESS", 0, 1, 2, 0),
    (0x33, "CALLER", 0, 1, 2, 0),
    (0x34, "CALLVALUE", 0, 1, 2, 0),
    (0x35, "CALLDATALOAD", 1, 1, 3, 32),
    (0x36, "CALLDATASIZE", 0, 1, 2, 0),
    (0x38, "CODESIZE", 0, 1, 2, 0),
    (0x39, "CODECOPY", 3, 0, 3, 64),
    (0x3B, "EXTCODESIZE", 1, 1, 100, 1),
    (0x3D, "RETURNDATASIZE", 0, 1, 2, 0),
    (0x50, "POP", 1, 0, 2, 0),
    (0x51, "MLOAD", 1, 1, 3, 32),
    (0x52, "MSTORE", 2, 0, 3, 32),
    (0x53, "MSTORE8", 2, 0, 3, 1),
    (0x54, "SLOAD", 1, 1, 100, 1),
    (0x55, "SSTORE", 2, 0, 100, 1),
    (0x56, "JUMP", 1, 0, 8, 1),
    (0x57, "JUMPI", 2, 0, 10, 1),
    (0x58, "PC", 0, 1, 2, 0),
    (0x5A, "GAS", 0, 1, 2, 0),
    (0x5B, "JUMPDEST", 0, 0, 1, 0),
    (0xF0, "CREATE", 3, 1, 32000, 32),
    (0xF1, "CALL", 7, 1, 100, 1),
    (0xF3, "RETURN", 2, 0, 0, 32),
    (0xF4, "DELEGATECALL", 6, 1, 100, 1),
    (0xF5, "CREATE2", 4, 1, 32000, 81),
    (0xFA, "STATICCALL", 6, 1, 100, 1),
    (0xFD, "REVERT", 2, 0, 0, 32),
    (0xFE, "INVALID", 0, 0, 0, 0),
)

PUSH0 = 0x5F
PUSH1 = 0x60
PUSH32 = 0x7F
DUP1 = 0x80
SWAP1 = 0x90


def estimate_cycles(pops: int, pushes: int, immediate_len: int, component: int) -> int:
    return max(1, pops + pushes + immediate_len + component)


def _spec(code: int, mnemonic: str, pops: int, pushes: int, gas: int,
          component: int, immediate_len: int = 0, min_depth: int | None = None) -> OpcodeSpec:
    calibrated = code in CALIBRATED_CYCLES
    if calibrated:
        cycles = CALIBRATED_CYCLES[code]
        if gas != CALIBRATED_GAS[code]:
            raise AssertionError(f"{mnemonic}: fee schedule disagrees with calibration")
    else:
        cycles = estimate_cycles(pops, pushes, immediate_len, component)
    return OpcodeSpec(
        code=code,
        mnemonic=mnemonic,
        immediate_len=immediate_len,
        gas=gas,
        cycles=cycles,
        pops=pops,
        pushes=pushes,
        min_depth=pops if min_depth is None else min_depth,
        estimated=not calibrated,
    )


@lru_cache(maxsize=None)
def opcode_table() -> dict[int, OpcodeSpec]:
    """The full supported instruction table, keyed by opcode byte."""
    table: dict[int, OpcodeSpec] = {}
    for code, mnemonic, pops, pushes, gas, component in _FIXED_OPS:
        table[code] = _spec(code, mnemonic, pops, pushes, gas, component)
    table[PUSH0] = _spec(PUSH0, "PUSH0", 0, 1, 2, 0)
    for width in range(1, 33):
        code = PUSH1 + width - 1
        table[code] = _spec(code, f"PUSH{width}", 0, 1, 3, 0, immediate_len=width)
    for n in range(1, 17):
        code = DUP1 + n - 1
        table[code] = _spec(code, f"DUP{n}", 0, 1, 3, 2, min_depth=n)
    for n in range(1, 17):
        code = SWAP1 + n - 1
        table[code] = _spec(code, f"SWAP{n}", 0, 0, 3, 4, min_depth=n + 1)
    return table


@lru_cache(maxsize=None)
def mnemonic_to_code() -> dict[str, int]:
    return {spec.mnemonic: code for code, spec in opcode_table().items()}


def lookup(name_or_code: int | str) -> OpcodeSpec:
    """Spec by opcode byte or mnemonic."""
    table = opcode_table()
    if isinstance(name_or_code, str):
        return table[mnemonic_to_code()[name_or_code.upper()]]
    return table[name_or_code]


def table_as_json(indent: int | None = 2) -> str:
    """Export the table for documentation/tooling."""
    rows = [
        {
            "code": f"0x{code:02x}",
            "mnemonic": spec.mnemonic,
            "gas": spec.gas,
            "cycles": spec.cycles,
            "estimated": spec.estimated,
        }
        for code, spec in sorted(opcode_table().items())
    ]
    return json.dumps(rows, indent=indent)


def _standard_mnemonics() -> dict[int, str]:
    # The complete published one-byte namespace, used for disassembly and the
    # opcode census; includes instructions the executor does not run.
    names = {code: spec.mnemonic for code, spec in opcode_table().items()}
    names.update({
        0x31: "BALANCE", 0x32: "ORIGIN", 0x37: "CALLDATACOPY", 0x3A: "GASPRICE",
        0x3C: "EXTCODECOPY", 0x3E: "RETURNDATACOPY", 0x3F: "EXTCODEHASH",
        0x40: "BLOCKHASH", 0x41: "COINBASE", 0x42: "TIMESTAMP", 0x43: "NUMBER",
        0x44: "PREVRANDAO", 0x45: "GASLIMIT", 0x46: "CHAINID", 0x47: "SELFBALANCE",
        0x48: "BASEFEE", 0x49: "BLOBHASH", 0x4A: "BLOBBASEFEE",
        0x59: "MSIZE", 0x5C: "TLOAD", 0x5D: "TSTORE", 0x5E: "MCOPY",
        0xA0: "LOG0", 0xA1: "LOG1", 0xA2: "LOG2", 0xA3: "LOG3", 0xA4: "LOG4",
        0xF2: "CALLCODE", 0xFF: "SELFDESTRUCT",
    })
    return names


STANDARD_MNEMONICS = _standard_mnemonics()
