import json

import pytest

from evmx.opcodes import STANDARD_MNEMONICS, lookup, mnemonic_to_code, opcode_table, table_as_json
from evmx.timing import NOMINAL_PERIOD_NS, TABLE3

# The 45 most frequent mnemonics in the verified-contract census, all of
# which the executable table must cover.
TOP45_MNEMONICS = [
    "JUMP", "PUSH1", "PUSH2", "POP", "JUMPDEST", "SWAP1", "DUP1", "DUP2",
    "ADD", "OR", "DUP3", "PUSH0", "SWAP2", "MSTORE", "AND", "JUMPI", "CALL",
    "MLOAD", "PUSH20", "DUP4", "SUB", "SWAP3", "DUP5", "EQ", "SLOAD",
    "PUSH4", "LT", "DUP6", "KECCAK256", "MUL", "EXP", "STOP", "PUSH3", "GT",
    "CALLVALUE", "SWAP4", "CALLDATASIZE", "NOT", "PUSH32", "INVALID",
    "CALLER", "DUP7", "DIV", "CODECOPY", "RETURNDATASIZE",
]

ZERO_GAS_OK = {"STOP", "RETURN", "REVERT", "INVALID"}


def test_top45_all_present():
    names = set(mnemonic_to_code())
    missing = [m for m in TOP45_MNEMONICS if m not in names]
    assert not missing, missing


def test_mandated_families_present():
    names = set(mnemonic_to_code())
    required = {"STOP", "RETURN", "KECCAK256", "CREATE", "CREATE2", "JUMPDEST"}
    required.update(f"PUSH{i}" for i in range(33))
    required.update(f"DUP{i}" for i in range(1, 17))
    required.update(f"SWAP{i}" for i in range(1, 17))
    assert required <= names


def test_calibrated_gas_and_cycles_exact():
    for row in TABLE3:
        spec = lookup(row.code)
        assert spec.gas == row.gas, spec.mnemonic
        assert spec.cycles * NOMINAL_PERIOD_NS == row.engine_ns, spec.mnemonic
        assert not spec.estimated


def test_spec_lookup_examples():
    add = lookup(0x01)
    assert (add.mnemonic, add.gas, add.cycles) == ("ADD", 3, 4)
    pop = lookup(0x50)
    assert (pop.mnemonic, pop.gas, pop.cycles) == ("POP", 2, 1)
    push1 = lookup(0x60)
    assert (push1.mnemonic, push1.immediate_len, push1.gas, push1.cycles) == ("PUSH1", 1, 3, 2)


def test_arity_bounds():
    for spec in opcode_table().values():
        assert 0 <= spec.pops <= 17, spec.mnemonic
        assert 0 <= spec.pushes <= 1, spec.mnemonic
        assert spec.min_depth >= spec.pops


def test_costs_positive():
    for spec in opcode_table().values():
        assert spec.cycles >= 1, spec.mnemonic
        if spec.mnemonic in ZERO_GAS_OK:
            assert spec.gas == 0
        else:
            assert spec.gas > 0, spec.mnemonic


def test_push_immediate_lengths():
    for width in range(1, 33):
        assert lookup(f"PUSH{width}").immediate_len == width
    assert lookup("PUSH0").immediate_len == 0
    non_push = [s for s in opcode_table().values() if not s.mnemonic.startswith("PUSH")]
    assert all(s.immediate_len == 0 for s in non_push)


def test_json_export_schema():
    rows = json.loads(table_as_json())
    assert len(rows) == len(opcode_table())
    for row in rows:
        assert set(row) == {"code", "mnemonic", "gas", "cycles", "estimated"}
        assert int(row["code"], 16) in opcode_table()
    codes = [int(r["code"], 16) for r in rows]
    assert codes == sorted(codes)


def test_standard_namespace_covers_table():
    for code, spec in opcode_table().items():
        assert STANDARD_MNEMONICS[code] == spec.mnemonic
    assert STANDARD_MNEMONICS[0x31] == "BALANCE"  # census-only instruction
    assert 0x0C not in STANDARD_MNEMONICS         # unassigned byte


def test_lookup_by_name_or_code():
    assert lookup("swap1").code == 0x90
    assert lookup(0x90).mnemonic == "SWAP1"
    with pytest.raises(KeyError):
        lookup("NOTANOP")
