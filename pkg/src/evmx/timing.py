"""Clock-cycle and simulated-time accounting.

Fifteen opcodes carry measured hardware timings (the built-in ``table3``
calibration dataset): nanoseconds on the synthesized engine at its default
142.86 MHz operating point, alongside the published per-opcode gas and the
three CPU-client baselines the measurements were compared against. At that
operating point one cycle nominally spans 7 ns, and every calibrated entry
is an exact multiple of it. All other opcodes get estimated cycle counts
(see ``opcodes.estimate_cycles``) and are marked as such.

The CPU baseline numbers are embedded report data from an external client
benchmark; they are not measurements produced by this package.
"""

from __future__ import annotations

from dataclasses import dataclass

from .words import DEFAULT_CLOCK_HZ

NOMINAL_PERIOD_NS = 7  # calibration grid at the default operating point


@dataclass(frozen=True)
class ClockConfig:
    """Operating frequency and the derived clock period."""

    frequency_hz: int = DEFAULT_CLOCK_HZ

    def __post_init__(self) -> None:
        if self.frequency_hz <= 0:
            raise ValueError("frequency must be positive")

    @property
    def period_ns(self) -> float:
        return 1e9 / self.frequency_hz

    @property
    def is_default(self) -> bool:
        return self.frequency_hz == DEFAULT_CLOCK_HZ


@dataclass(frozen=True)
class CalibrationRow:
    """One calibrated opcode: measured engine time plus CPU baselines (ns)."""

    code: int
    mnemonic: str
    category: str
    gas: int
    lpy_ns: int
    wgo_ns: int
    wpa_ns: int
    engine_ns: int
    delta_pct: int  # published rounded improvement figure

    @property
    def cycles(self) -> int:
        if self.engine_ns % NOMINAL_PERIOD_NS:
            raise ValueError(f"{self.mnemonic}: {self.engine_ns} ns is not on the 7 ns grid")
        return self.engine_ns // NOMINAL_PERIOD_NS

    def recompute_delta(self, engine_ns: float | None = None) -> float:
        """(min(baselines) - engine) / min(baselines) * 100."""
        best_cpu = min(self.lpy_ns, self.wgo_ns, self.wpa_ns)
        ns = self.engine_ns if engine_ns is None else engine_ns
        return (best_cpu - ns) / best_cpu * 100.0


TABLE3 = (
    CalibrationRow(0x01, "ADD", "Arithmetic", 3, 510, 602, 610, 28, 95),
    CalibrationRow(0x03, "SUB", "Arithmetic", 3, 440, 611, 606, 28, 94),
    CalibrationRow(0x14, "EQ", "Logic", 3, 430, 571, 604, 28, 93),
    CalibrationRow(0x16, "AND", "Logic", 3, 480, 643, 703, 28, 94),
    CalibrationRow(0x17, "OR", "Logic", 3, 490, 646, 701, 28, 94),
    CalibrationRow(0x30, "ADDRESS", "Environmental", 2, 2770, 1170, 608, 7, 99),
    CalibrationRow(0x33, "CALLER", "Environmental", 2, 3640, 1142, 614, 7, 99),
    CalibrationRow(0x34, "CALLVALUE", "Environmental", 2, 80, 556, 604, 7, 91),
    CalibrationRow(0x50, "POP", "Memory/Stack", 2, 220, 570, 605, 7, 97),
    CalibrationRow(0x51, "MLOAD", "Memory/Stack", 3, 6950, 1838, 666, 259, 61),
    CalibrationRow(0x52, "MSTORE", "Memory/Stack", 3, 2830, 1726, 684, 245, 64),
    CalibrationRow(0x54, "SLOAD", "Memory/Stack", 100, 1990, 694, 701, 21, 97),
    CalibrationRow(0x60, "PUSH1", "Memory/Stack", 3, 260, 600, 640, 14, 95),
    CalibrationRow(0x90, "SWAP1", "Memory/Stack", 3, 310, 528, 550, 28, 91),
    CalibrationRow(0x80, "DUP1", "Memory/Stack", 3, 240, 559, 594, 21, 91),
)

CALIBRATED_CYCLES = {row.code: row.cycles for row in TABLE3}
CALIBRATED_GAS = {row.code: row.gas for row in TABLE3}


def simulated_time_ns(cycles: int, clock: ClockConfig | None = None) -> float:
    """Wall time the given cycle count spans at the configured frequency."""
    clock = clock or ClockConfig()
    return cycles * clock.period_ns


def cycles_for(code: int) -> int:
    """Cycle cost of one opcode byte; raises KeyError for unsupported bytes."""
    from .opcodes import opcode_table  # deferred: opcodes builds on this module

    return opcode_table()[code].cycles


def calibration_export() -> list[dict]:
    """Timing provenance for every supported opcode: nominal nanoseconds,
    cycles, and whether the figure is calibrated (``table3``) or
    rule-estimated (``estimated``)."""
    from .opcodes import opcode_table

    return [
        {
            "code": f"0x{code:02x}",
            "mnemonic": spec.mnemonic,
            "gas": spec.gas,
            "ns": spec.cycles * NOMINAL_PERIOD_NS,
            "cycles": spec.cycles,
            "source": "estimated" if spec.estimated else "table3",
        }
        for code, spec in sorted(opcode_table().items())
    ]


def table3_report(clock: ClockConfig | None = None) -> list[dict]:
    """Per-row comparison: gas, CPU baselines, modeled engine ns, recomputed
    delta %. At a non-default frequency the engine column rescales linearly
    (cycles are frequency-independent)."""
    clock = clock or ClockConfig()
    report = []
    for row in TABLE3:
        if clock.is_default:
            engine_ns: float = row.engine_ns
        else:
            engine_ns = row.cycles * clock.period_ns
        report.append({
            "code": row.code,
            "mnemonic": row.mnemonic,
            "category": row.category,
            "gas": row.gas,
            "lpy_ns": row.lpy_ns,
            "wgo_ns": row.wgo_ns,
            "wpa_ns": row.wpa_ns,
            "engine_ns": engine_ns,
            "cycles": row.cycles,
            "delta_pct": round(row.recompute_delta(engine_ns)),
            "published_delta_pct": row.delta_pct,
        })
    return report
