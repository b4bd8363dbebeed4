"""Execution error hierarchy.

Every failure mode the engine can raise is a ``VmError`` subclass carrying a
machine-readable ``kind`` plus a human-readable context message. Out-of-gas
and faults both cause the executor to halt and revert storage.
"""

from __future__ import annotations


class VmError(Exception):
    """Base class for all virtual-machine execution errors."""

    kind = "VmError"

    def __init__(self, context: str = ""):
        self.context = context
        super().__init__(f"{self.kind}: {context}" if context else self.kind)


class StackOverflow(VmError):
    kind = "StackOverflow"


class StackUnderflow(VmError):
    kind = "StackUnderflow"


class OutOfGas(VmError):
    kind = "OutOfGas"


class MemoryOutOfRange(VmError):
    kind = "MemoryOutOfRange"


class StorageCapacityExceeded(VmError):
    kind = "StorageCapacityExceeded"


class InvalidJump(VmError):
    kind = "InvalidJump"


class InvalidOpcode(VmError):
    kind = "InvalidOpcode"


class BytecodeTooLarge(VmError):
    kind = "BytecodeTooLarge"


ERROR_KINDS = {
    cls.kind: cls
    for cls in (
        StackOverflow, StackUnderflow, OutOfGas, MemoryOutOfRange,
        StorageCapacityExceeded, InvalidJump, InvalidOpcode, BytecodeTooLarge,
    )
}
