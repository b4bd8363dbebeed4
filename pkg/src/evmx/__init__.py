"""Cycle-modeled smart-contract execution engine.

A bytecode interpreter whose component structure mirrors a synthesized
stack-machine datapath: fixed-capacity stack/memory/storage/bytecode
stores, a gas counter deducted per opcode, hardware-style 256-bit
arithmetic (shift-and-add multiply, non-restoring divide), Keccak-256
address derivation, and a per-opcode clock-cycle timing model calibrated
at 142.86 MHz.
"""

from ._kernels import active_backend
from .addresses import (
    create2_address,
    create_address,
    delta_concat,
    extract_address,
    rlp_encode_address_nonce,
)
from .alu import DivModResult, divmod_nonrestoring, exp, mul_shift_add
from .census import CorpusEntry, FrequencyTable, aggregate, disassemble_count
from .errors import (
    BytecodeTooLarge,
    InvalidJump,
    InvalidOpcode,
    MemoryOutOfRange,
    OutOfGas,
    StackOverflow,
    StackUnderflow,
    StorageCapacityExceeded,
    VmError,
)
from .executor import Executor, MachineState, Receipt, ReceiptStatus, TraceStep, load_program, run
from .keccak import keccak256
from .opcodes import OpcodeSpec, lookup, opcode_table
from .state import BytecodeMemory, Memory, ProgramCounter, Stack, Storage
from .timing import ClockConfig, cycles_for, simulated_time_ns, table3_report
from .words import DEFAULT_CLOCK_HZ, ExecutionConfig, word_from_bytes, word_to_bytes

__version__ = "1.0.0"

__all__ = [
    "__version__",
    "active_backend",
    "keccak256",
    "create_address", "create2_address", "delta_concat", "extract_address",
    "rlp_encode_address_nonce",
    "DivModResult", "divmod_nonrestoring", "exp", "mul_shift_add",
    "CorpusEntry", "FrequencyTable", "aggregate", "disassemble_count",
    "VmError", "StackOverflow", "StackUnderflow", "OutOfGas", "MemoryOutOfRange",
    "StorageCapacityExceeded", "InvalidJump", "InvalidOpcode", "BytecodeTooLarge",
    "Executor", "MachineState", "Receipt", "ReceiptStatus", "TraceStep",
    "load_program", "run",
    "OpcodeSpec", "lookup", "opcode_table",
    "Stack", "Memory", "Storage", "BytecodeMemory", "ProgramCounter",
    "ClockConfig", "cycles_for", "simulated_time_ns", "table3_report",
    "DEFAULT_CLOCK_HZ", "ExecutionConfig", "word_from_bytes", "word_to_bytes",
]
