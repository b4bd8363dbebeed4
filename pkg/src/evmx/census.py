"""Bytecode corpus ingestion and opcode-frequency analysis.

The scan is static: every instruction byte is counted once, PUSH immediates
are skipped (never counted), and bytes with no assigned mnemonic are
counted under INVALID. Whether supplied bytes are constructor or runtime
code is not distinguished.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .opcodes import PUSH1, PUSH32, STANDARD_MNEMONICS
from .words import parse_hex_bytes

_CODE_BY_MNEMONIC = {name: code for code, name in STANDARD_MNEMONICS.items()}


@dataclass
class CorpusEntry:
    """One contract: an identifier and its raw bytecode."""

    id: str
    code: bytes

    @classmethod
    def from_hex(cls, entry_id: str, text: str) -> "CorpusEntry":
        return cls(entry_id, parse_hex_bytes(text))


@dataclass
class FrequencyTable:
    """Occurrence counts per mnemonic, plus the total scanned."""

    counts: dict[str, int] = field(default_factory=dict)

    @property
    def total_opcodes(self) -> int:
        return sum(self.counts.values())

    def merge(self, other: "FrequencyTable") -> "FrequencyTable":
        for name, n in other.counts.items():
            self.counts[name] = self.counts.get(name, 0) + n
        return self

    def ranked(self, top_n: int | None = None) -> list[tuple[str, int]]:
        """Descending by count; ties break toward the lower opcode byte."""
        order = sorted(
            self.counts.items(),
            key=lambda item: (-item[1], _CODE_BY_MNEMONIC.get(item[0], 0x100)),
        )
        return order if top_n is None else order[:top_n]


def disassemble_count(code: bytes) -> FrequencyTable:
    """Count instruction bytes in one bytecode blob (immediates excluded)."""
    counts: dict[str, int] = {}
    i = 0
    while i < len(code):
        op = code[i]
        name = STANDARD_MNEMONICS.get(op, "INVALID")
        counts[name] = counts.get(name, 0) + 1
        if PUSH1 <= op <= PUSH32:
            i += 1 + (op - PUSH1 + 1)
        else:
            i += 1
    return FrequencyTable(counts)


def aggregate(corpus: Iterable[CorpusEntry], top_n: int = 45) -> list[tuple[str, int]]:
    """Summed, ranked counts over a corpus, truncated to the top n."""
    if top_n < 1:
        raise ValueError("top_n must be at least 1")
    total = FrequencyTable()
    for entry in corpus:
        total.merge(disassemble_count(entry.code))
    return total.ranked(top_n)


def load_corpus(path: str | Path, on_error=None) -> Iterator[CorpusEntry]:
    """Read a corpus: a directory of .hex files or a JSON-lines file with
    {"id", "code"} objects. Unreadable entries are reported via `on_error`
    (or ignored) and skipped."""
    path = Path(path)

    def report(entry_id: str, err: Exception) -> None:
        if on_error is not None:
            on_error(entry_id, err)

    if path.is_dir():
        for file in sorted(path.glob("*.hex")):
            try:
                yield CorpusEntry.from_hex(file.name, file.read_text())
            except (ValueError, OSError) as err:
                report(str(file), err)
    else:
        with open(path) as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    doc = json.loads(line)
                    yield CorpusEntry.from_hex(str(doc["id"]), doc["code"])
                except (ValueError, KeyError, TypeError) as err:
                    report(f"{path}:{lineno}", err)


def ranked_to_csv(ranked: list[tuple[str, int]]) -> str:
    lines = ["mnemonic,count"]
    lines += [f"{name},{count}" for name, count in ranked]
    return "\n".join(lines) + "\n"


def ranked_to_plot_json(ranked: list[tuple[str, int]]) -> str:
    """Histogram series consumable by vega-lite style plotters."""
    return json.dumps(
        [{"opcode": name, "count": count} for name, count in ranked],
        indent=2,
    )


__all__ = [
    "CorpusEntry", "FrequencyTable", "disassemble_count", "aggregate",
    "load_corpus", "ranked_to_csv", "ranked_to_plot_json",
]
