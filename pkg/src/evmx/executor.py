"""The fetch-decode-execute state machine.

Each step fetches one opcode, deducts its gas *before* any effect (an
opcode the counter cannot cover never executes), charges its cycle cost,
applies the state transition, and advances the program counter. Running off
the end of the bytecode halts successfully, as does STOP/RETURN. Out-of-gas
and faults halt immediately and roll storage back to its pre-run contents.

Cross-contract calls (CALL/DELEGATECALL/STATICCALL) are stubs: they pop the
right arity, charge gas, and push a configured constant, because no chain
state exists behind this engine. CREATE/CREATE2 derive and push real addresses and
record the attempted deployment in the receipt.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

from . import alu
from .addresses import create2_address, create_address
from .errors import InvalidOpcode, OutOfGas, VmError
from .keccak import keccak256
from .opcodes import DUP1, PUSH0, PUSH1, PUSH32, SWAP1, OpcodeSpec, opcode_table
from .state import (
    BytecodeMemory,
    DirectMappedStorage,
    Memory,
    ProgramCounter,
    Stack,
    Storage,
    snapshot_json,
)
from .words import (
    ExecutionConfig,
    address_to_word,
    word_from_bytes,
    word_to_bytes,
)


class ReceiptStatus(str, Enum):
    SUCCESS = "success"
    OUT_OF_GAS = "out_of_gas"
    FAULT = "fault"
    REVERTED = "reverted"


@dataclass
class TraceStep:
    """One executed opcode, as recorded in a trace stream."""

    step: int
    pc: int
    opcode: int
    mnemonic: str
    gas_before: int
    gas_after: int
    cycles: int
    stack_depth: int
    stack_top: Optional[int]

    def to_dict(self) -> dict:
        return {
            "step": self.step,
            "pc": self.pc,
            "opcode": f"0x{self.opcode:02x}",
            "mnemonic": self.mnemonic,
            "gas_before": self.gas_before,
            "gas_after": self.gas_after,
            "cycles": self.cycles,
            "stack_depth": self.stack_depth,
            "stack_top": None if self.stack_top is None else f"0x{self.stack_top:x}",
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TraceStep":
        top = d["stack_top"]
        return cls(
            step=d["step"], pc=d["pc"], opcode=int(d["opcode"], 16),
            mnemonic=d["mnemonic"], gas_before=d["gas_before"],
            gas_after=d["gas_after"], cycles=d["cycles"],
            stack_depth=d["stack_depth"],
            stack_top=None if top is None else int(top, 16),
        )


@dataclass
class CreateEvent:
    """A CREATE/CREATE2 the program executed (value recorded, not settled)."""

    kind: str            # "create" | "create2"
    address: bytes
    value: int
    salt: Optional[bytes] = None
    nonce: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "address": "0x" + self.address.hex(),
            "value": f"0x{self.value:x}",
            "salt": None if self.salt is None else "0x" + self.salt.hex(),
            "nonce": self.nonce,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CreateEvent":
        return cls(
            kind=d["kind"],
            address=bytes.fromhex(d["address"][2:]),
            value=int(d["value"], 16),
            salt=None if d["salt"] is None else bytes.fromhex(d["salt"][2:]),
            nonce=d["nonce"],
        )


@dataclass
class Receipt:
    """Outcome of one execution."""

    status: ReceiptStatus
    gas_limit: int
    gas_used: int
    gas_remaining: int
    cycles: int
    clock_hz: int
    simulated_time_ns: float
    return_data: bytes
    storage_out: dict[int, int]
    steps: int
    error_kind: Optional[str] = None
    error_context: Optional[str] = None
    creates: list[CreateEvent] = field(default_factory=list)
    storage_collisions: int = 0
    trace: Optional[list[TraceStep]] = None
    final_state: Optional[dict] = None

    def to_dict(self) -> dict:
        doc = {
            "status": self.status.value,
            "gas_limit": self.gas_limit,
            "gas_used": self.gas_used,
            "gas_remaining": self.gas_remaining,
            "cycles": self.cycles,
            "clock_hz": self.clock_hz,
            "simulated_time_ns": self.simulated_time_ns,
            "return_data": "0x" + self.return_data.hex(),
            "storage_out": {
                f"0x{k:064x}": f"0x{v:064x}" for k, v in sorted(self.storage_out.items())
            },
            "steps": self.steps,
            "error_kind": self.error_kind,
            "error_context": self.error_context,
            "creates": [event.to_dict() for event in self.creates],
            "storage_collisions": self.storage_collisions,
        }
        if self.trace is not None:
            doc["trace"] = [step.to_dict() for step in self.trace]
        if self.final_state is not None:
            doc["final_state"] = self.final_state
        return doc

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, doc: dict) -> "Receipt":
        return cls(
            status=ReceiptStatus(doc["status"]),
            gas_limit=doc["gas_limit"],
            gas_used=doc["gas_used"],
            gas_remaining=doc["gas_remaining"],
            cycles=doc["cycles"],
            clock_hz=doc["clock_hz"],
            simulated_time_ns=doc["simulated_time_ns"],
            return_data=bytes.fromhex(doc["return_data"][2:]),
            storage_out={int(k, 16): int(v, 16) for k, v in doc["storage_out"].items()},
            steps=doc["steps"],
            error_kind=doc["error_kind"],
            error_context=doc["error_context"],
            creates=[CreateEvent.from_dict(e) for e in doc["creates"]],
            storage_collisions=doc["storage_collisions"],
            trace=(
                [TraceStep.from_dict(s) for s in doc["trace"]]
                if "trace" in doc else None
            ),
            final_state=doc.get("final_state"),
        )

    @classmethod
    def from_json(cls, text: str) -> "Receipt":
        return cls.from_dict(json.loads(text))


class MachineState:
    """Mutable execution context: the storage components plus the gas and
    cycle counters."""

    __slots__ = (
        "pc", "stack", "memory", "storage", "bcm",
        "gas_remaining", "cycles_elapsed", "return_data", "halted", "steps",
    )

    def __init__(self, bcm: BytecodeMemory, cfg: ExecutionConfig) -> None:
        self.pc = ProgramCounter()
        self.stack = Stack()
        self.memory = Memory()
        self.storage: Storage = DirectMappedStorage() if cfg.hw_faithful_storage else Storage()
        self.bcm = bcm
        self.gas_remaining = cfg.gas_limit
        self.cycles_elapsed = 0
        self.return_data = b""
        self.halted = False
        self.steps = 0


def load_program(code: bytes, cfg: ExecutionConfig) -> MachineState:
    """Fresh machine state with the bytecode loaded and the gas counter set."""
    return MachineState(BytecodeMemory(code), cfg)


Handler = Callable[["Executor", OpcodeSpec], None]


class Executor:
    """Drives one MachineState from start to halt."""

    def __init__(
        self,
        code: bytes,
        cfg: ExecutionConfig | None = None,
        initial_storage: dict[int, int] | None = None,
        trace: bool = False,
    ) -> None:
        self.cfg = cfg or ExecutionConfig()
        self.ms = load_program(code, self.cfg)
        if initial_storage:
            for key, value in initial_storage.items():
                self.ms.storage.store(key, value)
        self._storage_before = self.ms.storage.snapshot()
        self._status: ReceiptStatus | None = None
        self._error: VmError | None = None
        self.creates: list[CreateEvent] = []
        self.trace: Optional[list[TraceStep]] = [] if trace else None

    # -- halting ------------------------------------------------------------

    def _halt(self, status: ReceiptStatus, error: VmError | None = None) -> None:
        self.ms.halted = True
        self._status = status
        self._error = error
        if status is not ReceiptStatus.SUCCESS:
            self.ms.storage.restore(self._storage_before)

    # -- single step ----------------------------------------------------------

    def step(self) -> None:
        """Execute exactly one opcode; may halt the machine."""
        ms = self.ms
        if ms.halted:
            raise RuntimeError("machine already halted")
        if ms.pc.value >= len(ms.bcm):
            self._halt(ReceiptStatus.SUCCESS)
            return

        pc_before = ms.pc.value
        op = ms.bcm.byte_at(pc_before)
        spec = opcode_table().get(op)
        if spec is None:
            self._halt(ReceiptStatus.FAULT, InvalidOpcode(f"unknown opcode 0x{op:02x}"))
            return

        if ms.gas_remaining < spec.gas:
            self._halt(
                ReceiptStatus.OUT_OF_GAS,
                OutOfGas(f"{spec.mnemonic} needs {spec.gas}, {ms.gas_remaining} left"),
            )
            return

        gas_before = ms.gas_remaining
        ms.gas_remaining -= spec.gas
        ms.cycles_elapsed += spec.cycles

        try:
            handler = _HANDLERS[op]
            handler(self, spec)
        except VmError as err:
            status = (
                ReceiptStatus.OUT_OF_GAS if isinstance(err, OutOfGas) else ReceiptStatus.FAULT
            )
            self._halt(status, err)
            return

        ms.steps += 1
        if self.trace is not None:
            depth = len(ms.stack)
            self.trace.append(TraceStep(
                step=ms.steps - 1,
                pc=pc_before,
                opcode=op,
                mnemonic=spec.mnemonic,
                gas_before=gas_before,
                gas_after=ms.gas_remaining,
                cycles=spec.cycles,
                stack_depth=depth,
                stack_top=ms.stack.peek() if depth else None,
            ))

    # -- full run -------------------------------------------------------------

    def run(self) -> Receipt:
        """Step until halt (or the step-limit guard) and build the receipt."""
        ms = self.ms
        limit = self.cfg.step_limit
        while not ms.halted:
            if ms.steps >= limit:
                self._halt(
                    ReceiptStatus.FAULT,
                    VmError(f"step limit {limit} exceeded"),
                )
                break
            self.step()
        return self._build_receipt()

    def _build_receipt(self) -> Receipt:
        ms = self.ms
        status = self._status or ReceiptStatus.SUCCESS
        return Receipt(
            status=status,
            gas_limit=self.cfg.gas_limit,
            gas_used=self.cfg.gas_limit - ms.gas_remaining,
            gas_remaining=ms.gas_remaining,
            cycles=ms.cycles_elapsed,
            clock_hz=self.cfg.clock_hz,
            simulated_time_ns=ms.cycles_elapsed * (1e9 / self.cfg.clock_hz),
            return_data=ms.return_data,
            storage_out=ms.storage.snapshot(),
            steps=ms.steps,
            error_kind=self._error.kind if self._error else None,
            error_context=self._error.context if self._error else None,
            creates=list(self.creates),
            storage_collisions=self.ms.storage.collisions,
            trace=self.trace,
        )

    def state_snapshot(self) -> dict:
        ms = self.ms
        return snapshot_json(ms.stack, ms.memory, ms.storage, ms.pc)


def run(
    code: bytes,
    cfg: ExecutionConfig | None = None,
    initial_storage: dict[int, int] | None = None,
    trace: bool = False,
) -> Receipt:
    """Execute bytecode to completion and return the receipt."""
    return Executor(code, cfg, initial_storage=initial_storage, trace=trace).run()


# --------------------------------------------------------------------------
# Opcode handlers
# --------------------------------------------------------------------------

def _advance(ex: Executor, spec: OpcodeSpec) -> None:
    ex.ms.pc.advance(1 + spec.immediate_len)


def _binary(fn: Callable[[int, int], int]) -> Handler:
    def handler(ex: Executor, spec: OpcodeSpec) -> None:
        a = ex.ms.stack.pop()
        b = ex.ms.stack.pop()
        ex.ms.stack.push(fn(a, b))
        _advance(ex, spec)
    return handler


def _unary(fn: Callable[[int], int]) -> Handler:
    def handler(ex: Executor, spec: OpcodeSpec) -> None:
        ex.ms.stack.push(fn(ex.ms.stack.pop()))
        _advance(ex, spec)
    return handler


def _ternary(fn: Callable[[int, int, int], int]) -> Handler:
    def handler(ex: Executor, spec: OpcodeSpec) -> None:
        a = ex.ms.stack.pop()
        b = ex.ms.stack.pop()
        c = ex.ms.stack.pop()
        ex.ms.stack.push(fn(a, b, c))
        _advance(ex, spec)
    return handler


def _push_constant(value_fn: Callable[[Executor], int]) -> Handler:
    def handler(ex: Executor, spec: OpcodeSpec) -> None:
        ex.ms.stack.push(value_fn(ex))
        _advance(ex, spec)
    return handler


def _op_stop(ex: Executor, spec: OpcodeSpec) -> None:
    ex.ms.return_data = b""
    ex._halt(ReceiptStatus.SUCCESS)


def _op_return(ex: Executor, spec: OpcodeSpec) -> None:
    offset = ex.ms.stack.pop()
    size = ex.ms.stack.pop()
    ex.ms.return_data = ex.ms.memory.read_region(offset, size)
    ex._halt(ReceiptStatus.SUCCESS)


def _op_revert(ex: Executor, spec: OpcodeSpec) -> None:
    offset = ex.ms.stack.pop()
    size = ex.ms.stack.pop()
    ex.ms.return_data = ex.ms.memory.read_region(offset, size)
    ex._halt(ReceiptStatus.REVERTED)


def _op_push(ex: Executor, spec: OpcodeSpec) -> None:
    ms = ex.ms
    start = ms.pc.value + 1
    raw = ms.bcm.code[start:start + spec.immediate_len]
    if len(raw) < spec.immediate_len:  # immediate truncated by end of code
        raw = raw + bytes(spec.immediate_len - len(raw))
    ms.stack.push(word_from_bytes(raw))
    _advance(ex, spec)


def _op_dup(ex: Executor, spec: OpcodeSpec) -> None:
    ex.ms.stack.dup(spec.code - DUP1 + 1)
    _advance(ex, spec)


def _op_swap(ex: Executor, spec: OpcodeSpec) -> None:
    ex.ms.stack.swap(spec.code - SWAP1 + 1)
    _advance(ex, spec)


def _op_pop(ex: Executor, spec: OpcodeSpec) -> None:
    ex.ms.stack.pop()
    _advance(ex, spec)


def _op_mload(ex: Executor, spec: OpcodeSpec) -> None:
    offset = ex.ms.stack.pop()
    ex.ms.stack.push(ex.ms.memory.load32(offset))
    _advance(ex, spec)


def _op_mstore(ex: Executor, spec: OpcodeSpec) -> None:
    offset = ex.ms.stack.pop()
    value = ex.ms.stack.pop()
    ex.ms.memory.store32(offset, value)
    _advance(ex, spec)


def _op_mstore8(ex: Executor, spec: OpcodeSpec) -> None:
    offset = ex.ms.stack.pop()
    value = ex.ms.stack.pop()
    ex.ms.memory.store8(offset, value & 0xFF)
    _advance(ex, spec)


def _op_sload(ex: Executor, spec: OpcodeSpec) -> None:
    key = ex.ms.stack.pop()
    ex.ms.stack.push(ex.ms.storage.load(key))
    _advance(ex, spec)


def _op_sstore(ex: Executor, spec: OpcodeSpec) -> None:
    key = ex.ms.stack.pop()
    value = ex.ms.stack.pop()
    ex.ms.storage.store(key, value)
    _advance(ex, spec)


def _op_jump(ex: Executor, spec: OpcodeSpec) -> None:
    target = ex.ms.stack.pop()
    ex.ms.pc.jump(target, ex.ms.bcm)


def _op_jumpi(ex: Executor, spec: OpcodeSpec) -> None:
    target = ex.ms.stack.pop()
    condition = ex.ms.stack.pop()
    if condition:
        ex.ms.pc.jump(target, ex.ms.bcm)
    else:
        _advance(ex, spec)


def _op_keccak256(ex: Executor, spec: OpcodeSpec) -> None:
    offset = ex.ms.stack.pop()
    size = ex.ms.stack.pop()
    data = ex.ms.memory.read_region(offset, size)
    ex.ms.stack.push(word_from_bytes(keccak256(data)))
    _advance(ex, spec)


def _op_calldataload(ex: Executor, spec: OpcodeSpec) -> None:
    index = ex.ms.stack.pop()
    data = ex.cfg.init_data
    if index >= len(data):
        word = b""
    else:
        word = data[index:index + 32]
    ex.ms.stack.push(word_from_bytes(word + bytes(32 - len(word))))
    _advance(ex, spec)


def _op_codecopy(ex: Executor, spec: OpcodeSpec) -> None:
    dest = ex.ms.stack.pop()
    offset = ex.ms.stack.pop()
    size = ex.ms.stack.pop()
    ex.ms.memory.check_range(dest, size)  # before building the padded chunk
    code = ex.ms.bcm.code
    chunk = code[offset:offset + size] if offset < len(code) else b""
    ex.ms.memory.write_region(dest, chunk + bytes(size - len(chunk)))
    _advance(ex, spec)


def _op_create(ex: Executor, spec: OpcodeSpec) -> None:
    ms = ex.ms
    value = ms.stack.pop()
    offset = ms.stack.pop()
    size = ms.stack.pop()
    ms.memory.read_region(offset, size)  # validate the init-code window
    address = create_address(ex.cfg.sender_address, ex.cfg.sender_nonce, ex.cfg.address_mode)
    ex.creates.append(CreateEvent(
        kind="create", address=address, value=value, nonce=ex.cfg.sender_nonce,
    ))
    ms.stack.push(address_to_word(address))
    _advance(ex, spec)


def _op_create2(ex: Executor, spec: OpcodeSpec) -> None:
    # Register walk: value first, then offset, then size (offset parked while
    # size pops), the init code streams out of memory and through the hash,
    # and salt joins for the final digest.
    ms = ex.ms
    value = ms.stack.pop()
    offset = ms.stack.pop()
    size = ms.stack.pop()
    init_code = ms.memory.read_region(offset, size)
    salt = word_to_bytes(ms.stack.pop())
    address = create2_address(ex.cfg.sender_address, salt, init_code, ex.cfg.address_mode)
    ex.creates.append(CreateEvent(
        kind="create2", address=address, value=value, salt=salt,
    ))
    ms.stack.push(address_to_word(address))
    _advance(ex, spec)


def _call_stub(arity: int) -> Handler:
    def handler(ex: Executor, spec: OpcodeSpec) -> None:
        for _ in range(arity):
            ex.ms.stack.pop()
        ex.ms.stack.push(ex.cfg.call_stub_result)
        _advance(ex, spec)
    return handler


def _op_invalid(ex: Executor, spec: OpcodeSpec) -> None:
    raise InvalidOpcode("designated invalid opcode")


def _build_handlers() -> dict[int, Handler]:
    handlers: dict[int, Handler] = {
        0x00: _op_stop,
        0x01: _binary(alu.add),
        0x02: _binary(alu.mul_shift_add),
        0x03: _binary(alu.sub),
        0x04: _binary(lambda a, b: alu.divmod_nonrestoring(a, b).quotient),
        0x05: _binary(alu.signed_div),
        0x06: _binary(lambda a, b: alu.divmod_nonrestoring(a, b).remainder),
        0x07: _binary(alu.signed_mod),
        0x08: _ternary(alu.addmod),
        0x09: _ternary(alu.mulmod),
        0x0A: _binary(alu.exp),
        0x0B: _binary(alu.sign_extend),
        0x10: _binary(lambda a, b: alu.compare_and_bitwise("LT", a, b)),
        0x11: _binary(lambda a, b: alu.compare_and_bitwise("GT", a, b)),
        0x12: _binary(lambda a, b: alu.compare_and_bitwise("SLT", a, b)),
        0x13: _binary(lambda a, b: alu.compare_and_bitwise("SGT", a, b)),
        0x14: _binary(lambda a, b: alu.compare_and_bitwise("EQ", a, b)),
        0x15: _unary(lambda a: alu.compare_and_bitwise("ISZERO", a)),
        0x16: _binary(lambda a, b: alu.compare_and_bitwise("AND", a, b)),
        0x17: _binary(lambda a, b: alu.compare_and_bitwise("OR", a, b)),
        0x18: _binary(lambda a, b: alu.compare_and_bitwise("XOR", a, b)),
        0x19: _unary(lambda a: alu.compare_and_bitwise("NOT", a)),
        0x1A: _binary(alu.byte_at),
        0x1B: _binary(alu.shl),
        0x1C: _binary(alu.shr),
        0x1D: _binary(alu.sar),
        0x20: _op_keccak256,
        0x30: _push_constant(lambda ex: address_to_word(ex.cfg.self_address)),
        0x33: _push_constant(lambda ex: address_to_word(ex.cfg.sender_address)),
        0x34: _push_constant(lambda ex: ex.cfg.call_value),
        0x35: _op_calldataload,
        0x36: _push_constant(lambda ex: len(ex.cfg.init_data)),
        0x38: _push_constant(lambda ex: len(ex.ms.bcm)),
        0x39: _op_codecopy,
        0x3B: _unary(lambda a: 0),
        0x3D: _push_constant(lambda ex: len(ex.ms.return_data)),
        0x50: _op_pop,
        0x51: _op_mload,
        0x52: _op_mstore,
        0x53: _op_mstore8,
        0x54: _op_sload,
        0x55: _op_sstore,
        0x56: _op_jump,
        0x57: _op_jumpi,
        0x58: _push_constant(lambda ex: ex.ms.pc.value),
        0x5A: _push_constant(lambda ex: ex.ms.gas_remaining),
        0x5B: _advance,
        0xF0: _op_create,
        0xF1: _call_stub(7),
        0xF3: _op_return,
        0xF4: _call_stub(6),
        0xF5: _op_create2,
        0xFA: _call_stub(6),
        0xFD: _op_revert,
        0xFE: _op_invalid,
    }
    handlers[PUSH0] = _push_constant(lambda ex: 0)
    for code in range(PUSH1, PUSH32 + 1):
        handlers[code] = _op_push
    for code in range(DUP1, DUP1 + 16):
        handlers[code] = _op_dup
    for code in range(SWAP1, SWAP1 + 16):
        handlers[code] = _op_swap
    return handlers


_HANDLERS = _build_handlers()
