import pytest
from hypothesis import given
from hypothesis import strategies as st

from evmx.errors import (
    BytecodeTooLarge,
    InvalidJump,
    MemoryOutOfRange,
    StackOverflow,
    StackUnderflow,
    StorageCapacityExceeded,
)
from evmx.state import (
    BYTECODE_BYTES,
    MEMORY_BYTES,
    STACK_DEPTH,
    STORAGE_SLOTS,
    BytecodeMemory,
    DirectMappedStorage,
    Memory,
    ProgramCounter,
    Stack,
    Storage,
    scan_jumpdests,
    snapshot_json,
)

import oracle_evm


# --- stack -----------------------------------------------------------------

def test_stack_lifo_round_trip():
    s = Stack()
    s.push(5)
    assert s.pop() == 5


def test_stack_capacity():
    s = Stack()
    for i in range(STACK_DEPTH):
        s.push(i)
    with pytest.raises(StackOverflow):
        s.push(0)


def test_stack_underflow():
    with pytest.raises(StackUnderflow):
        Stack().pop()


def test_dup_and_swap():
    s = Stack()
    s.push(1)
    s.push(2)
    s.swap(1)
    assert s.as_list() == [2, 1]
    s.swap(1)
    assert s.as_list() == [1, 2]  # swap twice is the identity
    s.dup(1)
    assert s.as_list() == [1, 2, 2]
    with pytest.raises(StackUnderflow):
        s.dup(4)
    with pytest.raises(StackUnderflow):
        s.swap(3)


def test_dup_at_full_depth_overflows():
    s = Stack()
    for i in range(STACK_DEPTH):
        s.push(i)
    with pytest.raises(StackOverflow):
        s.dup(1)


@given(st.lists(st.one_of(
    st.tuples(st.just("push"), st.integers(0, 2**256 - 1)),
    st.tuples(st.just("pop"), st.just(0)),
), max_size=200))
def test_stack_matches_list_model(ops):
    s = Stack()
    model = []
    for kind, value in ops:
        if kind == "push":
            if len(model) < STACK_DEPTH:
                s.push(value)
                model.append(value)
        else:
            if model:
                assert s.pop() == model.pop()
            else:
                with pytest.raises(StackUnderflow):
                    s.pop()
    assert s.as_list() == model


# --- memory ----------------------------------------------------------------

@given(st.integers(0, MEMORY_BYTES - 32), st.integers(0, 2**256 - 1))
def test_store32_load32_identity(offset, value):
    m = Memory()
    m.store32(offset, value)
    assert m.load32(offset) == value


def test_memory_boundaries():
    m = Memory()
    m.store32(MEMORY_BYTES - 32, 1)  # ends exactly at capacity
    with pytest.raises(MemoryOutOfRange):
        m.store32(2752, 1)  # 2752 + 32 = 2784 > 2768
    m.store8(MEMORY_BYTES - 1, 0xAB)
    with pytest.raises(MemoryOutOfRange):
        m.store8(MEMORY_BYTES, 0)
    with pytest.raises(MemoryOutOfRange):
        m.load32(MEMORY_BYTES - 31)


def test_store8_neighbors_untouched():
    m = Memory()
    m.store8(0, 0xAB)
    word = m.load32(0)
    assert word >> 248 == 0xAB
    assert word & ((1 << 248) - 1) == 0


def test_disjoint_writes_commute():
    a, b = Memory(), Memory()
    a.store32(0, 111)
    a.store32(64, 222)
    b.store32(64, 222)
    b.store32(0, 111)
    assert a.as_hex() == b.as_hex()


def test_read_region():
    m = Memory()
    for i in range(10):
        m.store8(i, i)
    assert m.read_region(0, 0) == b""
    assert m.read_region(2, 5) == bytes([2, 3, 4, 5, 6])
    assert len(m.read_region(0, 100)) == 100
    with pytest.raises(MemoryOutOfRange):
        m.read_region(2760, 16)


def test_write_region_checks_before_writing():
    m = Memory()
    with pytest.raises(MemoryOutOfRange):
        m.write_region(MEMORY_BYTES - 4, b"12345")


# --- storage ---------------------------------------------------------------

def test_storage_semantics():
    st_ = Storage()
    st_.store(42, 7)
    assert st_.load(42) == 7
    st_.store(42, 9)
    assert st_.load(42) == 9  # last write wins
    assert st_.load(12345) == 0  # absent key reads zero


def test_storage_capacity():
    st_ = Storage()
    for key in range(STORAGE_SLOTS):
        st_.store(key, 1)
    st_.store(5, 2)  # rewriting an existing key is fine at capacity
    with pytest.raises(StorageCapacityExceeded):
        st_.store(STORAGE_SLOTS + 1, 1)


def test_storage_snapshot_restore():
    st_ = Storage()
    st_.store(1, 10)
    snap = st_.snapshot()
    st_.store(1, 20)
    st_.store(2, 30)
    st_.restore(snap)
    assert st_.load(1) == 10 and st_.load(2) == 0


def test_direct_mapped_storage_aliases():
    st_ = DirectMappedStorage()
    st_.store(3, 100)
    assert st_.load(3) == 100
    assert st_.collisions == 0
    st_.store(3 + 1024, 200)  # same low 10 bits
    assert st_.collisions == 1
    assert st_.load(3) == 200  # aliased: the slot now belongs to the new key
    assert st_.collisions == 2  # the read against a foreign key also counts


# --- bytecode memory & jumpdests --------------------------------------------

def test_jumpdest_scan_basics():
    assert BytecodeMemory(b"\x5b").valid_jumpdests == {0}
    # offset 1 is a PUSH1 immediate, so only offset 2 is a real JUMPDEST
    assert BytecodeMemory(b"\x60\x5b\x5b").valid_jumpdests == {2}


def test_bytecode_capacity():
    BytecodeMemory(bytes(BYTECODE_BYTES))
    with pytest.raises(BytecodeTooLarge):
        BytecodeMemory(bytes(BYTECODE_BYTES + 1))


@given(st.binary(max_size=400))
def test_jumpdest_scan_matches_reference(code):
    assert scan_jumpdests(code) == oracle_evm._jumpdests(code)


def test_pc_jump_validation():
    bcm = BytecodeMemory(b"\x5b\x60\x5b")
    pc = ProgramCounter()
    pc.jump(0, bcm)
    assert pc.value == 0
    with pytest.raises(InvalidJump):
        pc.jump(40_000, bcm)  # exceeds the 15-bit range
    with pytest.raises(InvalidJump):
        pc.jump(2, bcm)  # inside a PUSH immediate


def test_snapshot_json_shape():
    s = Stack()
    s.push(1)
    s.push(2)
    st_ = Storage()
    st_.store(7, 8)
    doc = snapshot_json(s, Memory(), st_, ProgramCounter(4))
    assert doc["pc"] == 4
    assert doc["stack"] == [f"0x{1:064x}", f"0x{2:064x}"]  # top-last
    assert len(doc["memory"]) == 2 * MEMORY_BYTES
    assert doc["storage"] == {f"0x{7:064x}": f"0x{8:064x}"}
