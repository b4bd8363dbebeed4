"""The engine's storage components and program counter.

Capacities model the synthesized datapath exactly: a 1024-word stack, a
fixed 2,768-byte byte-addressable memory (writes of 1 or 32 bytes, reads of
32), a 1024-entry key/value store, a 32,768-byte bytecode memory, and a
15-bit program counter. Exceeding any capacity is a hard error: memory
never expands and no expansion gas exists.
"""

from __future__ import annotations

from .errors import (
    BytecodeTooLarge,
    InvalidJump,
    MemoryOutOfRange,
    StackOverflow,
    StackUnderflow,
    StorageCapacityExceeded,
)
from .opcodes import PUSH1, PUSH32
from .words import WORD_MASK, word_from_bytes, word_to_bytes

STACK_DEPTH = 1024
MEMORY_BYTES = 2768
STORAGE_SLOTS = 1024
BYTECODE_BYTES = 32768
PC_BITS = 15
PC_LIMIT = 1 << PC_BITS  # 32768


class Stack:
    """LIFO word stack, at most 1024 entries."""

    __slots__ = ("_items",)

    def __init__(self) -> None:
        self._items: list[int] = []

    def __len__(self) -> int:
        return len(self._items)

    def push(self, value: int) -> None:
        if len(self._items) >= STACK_DEPTH:
            raise StackOverflow(f"push at depth {STACK_DEPTH}")
        self._items.append(value & WORD_MASK)

    def pop(self) -> int:
        if not self._items:
            raise StackUnderflow("pop on empty stack")
        return self._items.pop()

    def peek(self, depth: int = 0) -> int:
        """Item `depth` positions below the top (0 = top)."""
        if depth >= len(self._items):
            raise StackUnderflow(f"peek({depth}) at depth {len(self._items)}")
        return self._items[-1 - depth]

    def dup(self, n: int) -> None:
        """Push a copy of the n-th item (1 = top)."""
        if n > len(self._items):
            raise StackUnderflow(f"dup{n} at depth {len(self._items)}")
        self.push(self._items[-n])

    def swap(self, n: int) -> None:
        """Exchange the top with the item n positions below it."""
        if n + 1 > len(self._items):
            raise StackUnderflow(f"swap{n} at depth {len(self._items)}")
        self._items[-1], self._items[-1 - n] = self._items[-1 - n], self._items[-1]

    def as_list(self) -> list[int]:
        """Bottom-first copy of the contents."""
        return list(self._items)


class Memory:
    """Fixed-capacity byte-addressable memory with 1/32-byte write ports."""

    __slots__ = ("_data", "capacity")

    def __init__(self, capacity: int = MEMORY_BYTES) -> None:
        self.capacity = capacity
        self._data = bytearray(capacity)

    def check_range(self, offset: int, size: int) -> None:
        if offset < 0 or offset + size > self.capacity:
            raise MemoryOutOfRange(
                f"access [{offset}, {offset + size}) exceeds capacity {self.capacity}"
            )

    def store8(self, offset: int, byte: int) -> None:
        self.check_range(offset, 1)
        self._data[offset] = byte & 0xFF

    def store32(self, offset: int, value: int) -> None:
        self.check_range(offset, 32)
        self._data[offset:offset + 32] = word_to_bytes(value)

    def load32(self, offset: int) -> int:
        self.check_range(offset, 32)
        return word_from_bytes(bytes(self._data[offset:offset + 32]))

    def read_region(self, offset: int, size: int) -> bytes:
        """`size` bytes from `offset`, gathered as successive 32-byte fetches
        with the trailing fetch truncated (mirroring the accumulate register
        on the hardware's read path)."""
        self.check_range(offset, size)
        chunks = []
        cursor = offset
        remaining = size
        while remaining >= 32:
            chunks.append(word_to_bytes(self.load32(cursor)))
            cursor += 32
            remaining -= 32
        if remaining:
            chunks.append(bytes(self._data[cursor:cursor + remaining]))
        return b"".join(chunks)

    def write_region(self, offset: int, data: bytes) -> None:
        """Bulk store used by code-copy style operations."""
        self.check_range(offset, len(data))
        self._data[offset:offset + len(data)] = data

    def as_hex(self) -> str:
        return bytes(self._data).hex()


class Storage:
    """Associative key/value store capped at 1024 distinct keys.

    Unwritten keys read as zero. The capacity check replaces the silent
    key-aliasing a direct-mapped array would exhibit; see
    ``DirectMappedStorage`` for that behavior.
    """

    __slots__ = ("_slots",)

    capacity = STORAGE_SLOTS

    def __init__(self) -> None:
        self._slots: dict[int, int] = {}

    def store(self, key: int, value: int) -> None:
        key &= WORD_MASK
        if key not in self._slots and len(self._slots) >= STORAGE_SLOTS:
            raise StorageCapacityExceeded(f"more than {STORAGE_SLOTS} distinct keys")
        self._slots[key] = value & WORD_MASK

    def load(self, key: int) -> int:
        return self._slots.get(key & WORD_MASK, 0)

    def snapshot(self) -> dict[int, int]:
        return dict(self._slots)

    def restore(self, snapshot: dict[int, int]) -> None:
        self._slots = dict(snapshot)

    def __len__(self) -> int:
        return len(self._slots)

    @property
    def collisions(self) -> int:
        return 0


class DirectMappedStorage(Storage):
    """Architecture-exploration mode: the key's low 10 bits index a
    1024-slot array, so colliding keys alias. Collisions are counted, never
    raised."""

    __slots__ = ("_keys", "_values", "collision_count")

    def __init__(self) -> None:
        self._keys: list[int | None] = [None] * STORAGE_SLOTS
        self._values: list[int] = [0] * STORAGE_SLOTS
        self.collision_count = 0

    def store(self, key: int, value: int) -> None:
        key &= WORD_MASK
        idx = key & (STORAGE_SLOTS - 1)
        if self._keys[idx] is not None and self._keys[idx] != key:
            self.collision_count += 1
        self._keys[idx] = key
        self._values[idx] = value & WORD_MASK

    def load(self, key: int) -> int:
        key &= WORD_MASK
        idx = key & (STORAGE_SLOTS - 1)
        if self._keys[idx] is not None and self._keys[idx] != key:
            self.collision_count += 1
        return self._values[idx]

    def snapshot(self) -> dict[int, int]:
        return {
            key: value
            for key, value in zip(self._keys, self._values)
            if key is not None
        }

    def restore(self, snapshot: dict[int, int]) -> None:
        self._keys = [None] * STORAGE_SLOTS
        self._values = [0] * STORAGE_SLOTS
        for key, value in snapshot.items():
            self._keys[key & (STORAGE_SLOTS - 1)] = key
            self._values[key & (STORAGE_SLOTS - 1)] = value

    def __len__(self) -> int:
        return sum(1 for key in self._keys if key is not None)

    @property
    def collisions(self) -> int:
        return self.collision_count


def scan_jumpdests(code: bytes) -> set[int]:
    """Offsets of 0x5B bytes that are real instructions, i.e. not bytes
    inside a PUSH immediate."""
    dests: set[int] = set()
    i = 0
    while i < len(code):
        op = code[i]
        if op == 0x5B:
            dests.add(i)
            i += 1
        elif PUSH1 <= op <= PUSH32:
            i += 1 + (op - PUSH1 + 1)
        else:
            i += 1
    return dests


class BytecodeMemory:
    """Read-only program store, up to 32,768 bytes, with the jump-target map
    computed once at load time."""

    __slots__ = ("code", "valid_jumpdests")

    def __init__(self, code: bytes, capacity: int = BYTECODE_BYTES) -> None:
        if len(code) > capacity:
            raise BytecodeTooLarge(f"{len(code)} bytes exceeds capacity {capacity}")
        self.code = bytes(code)
        self.valid_jumpdests = scan_jumpdests(self.code)

    def __len__(self) -> int:
        return len(self.code)

    def byte_at(self, offset: int) -> int:
        return self.code[offset]


class ProgramCounter:
    """15-bit instruction pointer. Sequential advance is unchecked beyond
    the bytecode bound; stack-sourced targets must name a valid JUMPDEST."""

    __slots__ = ("value",)

    def __init__(self, value: int = 0) -> None:
        self.value = value

    def advance(self, amount: int) -> None:
        self.value += amount

    def jump(self, target: int, bcm: BytecodeMemory) -> None:
        if target >= PC_LIMIT:
            raise InvalidJump(f"target {target} exceeds the {PC_BITS}-bit range")
        if target not in bcm.valid_jumpdests:
            raise InvalidJump(f"target {target} is not a JUMPDEST")
        self.value = target


def snapshot_json(stack: Stack, memory: Memory, storage: Storage, pc: ProgramCounter) -> dict:
    """Machine-state snapshot for the trace tooling (stack is top-last)."""
    return {
        "pc": pc.value,
        "stack": [f"0x{word:064x}" for word in stack.as_list()],
        "memory": memory.as_hex(),
        "storage": {
            f"0x{key:064x}": f"0x{value:064x}"
            for key, value in sorted(storage.snapshot().items())
        },
    }


__all__ = [
    "STACK_DEPTH", "MEMORY_BYTES", "STORAGE_SLOTS", "BYTECODE_BYTES", "PC_LIMIT",
    "Stack", "Memory", "Storage", "DirectMappedStorage", "BytecodeMemory",
    "ProgramCounter", "scan_jumpdests", "snapshot_json",
]
