"""Command-line surface.

Subcommands: ``run`` (execute bytecode, print the receipt), ``trace`` (run
with the step stream forced on), ``bench-table3`` (the calibrated-timing
report and regression gate), ``histogram`` (corpus opcode census),
``block`` (execute a synthetic transaction block), and ``opcodes`` (dump
the instruction table).

Exit codes for ``run``/``trace``: 0 success, 2 out-of-gas, 3 fault or
revert, 1 usage error. ``EVMX_FREQ_HZ`` overrides the default clock.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .census import aggregate, load_corpus, ranked_to_csv, ranked_to_plot_json
from .executor import Executor, ReceiptStatus
from .opcodes import table_as_json
from .timing import ClockConfig, calibration_export, table3_report
from .words import DEFAULT_CLOCK_HZ, ExecutionConfig, parse_hex_bytes

_STATUS_EXIT = {
    ReceiptStatus.SUCCESS: 0,
    ReceiptStatus.OUT_OF_GAS: 2,
    ReceiptStatus.FAULT: 3,
    ReceiptStatus.REVERTED: 3,
}


def _default_freq() -> int:
    env = os.environ.get("EVMX_FREQ_HZ")
    if env:
        return int(float(env))
    return DEFAULT_CLOCK_HZ


def _read_bytecode(source: str) -> bytes:
    """`source` is either inline hex or a path to a hex file."""
    path = Path(source)
    if path.exists():
        return parse_hex_bytes(path.read_text())
    try:
        return parse_hex_bytes(source)
    except ValueError as err:
        raise click.UsageError(f"--bytecode: not a readable file and not valid hex ({err})")


def _address_option(text: str) -> bytes:
    raw = parse_hex_bytes(text)
    if len(raw) != 20:
        raise click.UsageError(f"address must be 20 bytes, got {len(raw)}")
    return raw


@click.group()
def main() -> None:
    """Cycle-modeled smart-contract execution engine."""


def _execute(bytecode, gas, calldata, value, sender, nonce, freq, trace_path,
             hw_faithful_storage, addr_first20, force_trace) -> int:
    try:
        code = _read_bytecode(bytecode)
        cfg = ExecutionConfig(
            gas_limit=gas,
            init_data=parse_hex_bytes(calldata) if calldata else b"",
            call_value=int(value, 16) if value.startswith("0x") else int(value),
            sender_address=_address_option(sender),
            sender_nonce=nonce,
            clock_hz=freq,
            hw_faithful_storage=hw_faithful_storage,
            address_mode="first20" if addr_first20 else "compat",
        )
    except (ValueError, click.UsageError) as err:
        click.echo(f"error: {err}", err=True)
        return 1

    want_trace = force_trace or trace_path is not None
    executor = Executor(code, cfg, trace=want_trace)
    receipt = executor.run()

    if want_trace:
        lines = "\n".join(json.dumps(step.to_dict()) for step in receipt.trace or [])
        if trace_path in (None, "-"):
            click.echo(lines, err=True)
        else:
            Path(trace_path).write_text(lines + ("\n" if lines else ""))
        receipt.final_state = executor.state_snapshot()

    click.echo(receipt.to_json())
    return _STATUS_EXIT[receipt.status]


_run_options = [
    click.option("--bytecode", required=True, help="Inline hex or a path to a hex file."),
    click.option("--gas", type=int, required=True, help="Gas limit for the run."),
    click.option("--calldata", default="", help="Initialization/call data, hex."),
    click.option("--value", default="0", help="Call value (decimal or 0x hex)."),
    click.option("--sender", default="0x" + "00" * 20, help="Sender address, 20 bytes hex."),
    click.option("--nonce", type=int, default=0, help="Sender nonce (CREATE addressing)."),
    click.option("--freq", type=float, default=None, help="Clock frequency in Hz."),
    click.option("--trace", "trace_path", default=None,
                 help="Write a JSON-lines step trace here ('-' for stderr)."),
    click.option("--hw-faithful-storage", is_flag=True,
                 help="Direct-mapped 10-bit-indexed storage (collisions counted)."),
    click.option("--addr-first20", is_flag=True,
                 help="Extract contract addresses from the FIRST 20 digest bytes."),
]


def _apply_options(options):
    def wrap(fn):
        for option in reversed(options):
            fn = option(fn)
        return fn
    return wrap


@main.command("run")
@_apply_options(_run_options)
def cmd_run(bytecode, gas, calldata, value, sender, nonce, freq, trace_path,
            hw_faithful_storage, addr_first20):
    """Execute bytecode and print the receipt JSON."""
    freq_hz = int(freq) if freq else _default_freq()
    sys.exit(_execute(bytecode, gas, calldata, value, sender, nonce, freq_hz,
                      trace_path, hw_faithful_storage, addr_first20, force_trace=False))


@main.command("trace")
@_apply_options(_run_options)
def cmd_trace(bytecode, gas, calldata, value, sender, nonce, freq, trace_path,
              hw_faithful_storage, addr_first20):
    """Execute bytecode with the step trace forced on."""
    freq_hz = int(freq) if freq else _default_freq()
    sys.exit(_execute(bytecode, gas, calldata, value, sender, nonce, freq_hz,
                      trace_path, hw_faithful_storage, addr_first20, force_trace=True))


@main.command("bench-table3")
@click.option("--freq", type=float, default=None, help="Clock frequency in Hz.")
@click.option("--csv", "csv_path", default=None, help="Also write the report as CSV.")
def cmd_bench_table3(freq, csv_path):
    """Print the calibrated-opcode timing report.

    At the default frequency this is a golden regression gate: the process
    fails if any modeled time deviates from the calibration dataset.
    """
    freq_hz = int(freq) if freq else _default_freq()
    clock = ClockConfig(freq_hz)
    rows = table3_report(clock)

    header = f"{'Opcode':<10} {'Gas':>5} {'LPy':>6} {'WGo':>6} {'WPa':>6} {'Engine':>8} {'Δ%':>4}"
    click.echo(header)
    click.echo("-" * len(header))
    for row in rows:
        click.echo(
            f"{row['mnemonic']:<10} {row['gas']:>5} {row['lpy_ns']:>6} {row['wgo_ns']:>6} "
            f"{row['wpa_ns']:>6} {row['engine_ns']:>8.6g} {row['delta_pct']:>4}"
        )

    if csv_path:
        lines = ["mnemonic,gas,lpy_ns,wgo_ns,wpa_ns,engine_ns,cycles,delta_pct"]
        lines += [
            f"{r['mnemonic']},{r['gas']},{r['lpy_ns']},{r['wgo_ns']},{r['wpa_ns']},"
            f"{r['engine_ns']:.6g},{r['cycles']},{r['delta_pct']}"
            for r in rows
        ]
        Path(csv_path).write_text("\n".join(lines) + "\n")

    if clock.is_default:
        bad = [
            r["mnemonic"] for r in rows
            if r["engine_ns"] != r["cycles"] * 7 or r["delta_pct"] != r["published_delta_pct"]
        ]
        if bad:
            click.echo(f"calibration gate FAILED for: {', '.join(bad)}", err=True)
            sys.exit(1)
        click.echo("calibration gate passed (15/15 rows)", err=True)
    else:
        click.echo("non-default frequency: calibration gate skipped", err=True)


@main.command("histogram")
@click.argument("corpus_path")
@click.option("--top", "top_n", type=int, default=45, show_default=True)
@click.option("--csv", "csv_path", default=None, help="Write CSV here (default stdout).")
@click.option("--plot-json", default=None, help="Write a histogram JSON series here.")
def cmd_histogram(corpus_path, top_n, csv_path, plot_json):
    """Opcode-frequency census over a bytecode corpus."""
    problems: list[str] = []

    def on_error(entry_id, err):
        problems.append(entry_id)
        click.echo(f"warning: skipping {entry_id}: {err}", err=True)

    try:
        entries = list(load_corpus(corpus_path, on_error=on_error))
    except OSError as err:
        click.echo(f"error: {err}", err=True)
        sys.exit(1)
    if not entries:
        click.echo("error: corpus is empty", err=True)
        sys.exit(1)

    ranked = aggregate(entries, top_n=top_n)
    csv_text = ranked_to_csv(ranked)
    if csv_path:
        Path(csv_path).write_text(csv_text)
    else:
        click.echo(csv_text, nl=False)
    if plot_json:
        Path(plot_json).write_text(ranked_to_plot_json(ranked) + "\n")


@main.command("block")
@click.argument("block_spec_path")
@click.option("--freq", type=float, default=None, help="Clock frequency in Hz.")
def cmd_block(block_spec_path, freq):
    """Execute a transaction block spec and report aggregate timing.

    The block spec is JSON: {"label": ..., "transactions": [{"code_ref":
    hex-or-path, "gas_limit": int, "init_data": hex, "call_value": hex}]}.
    Transactions run sequentially; aggregate simulated time is the exact sum
    of per-transaction times.
    """
    freq_hz = int(freq) if freq else _default_freq()
    try:
        spec = json.loads(Path(block_spec_path).read_text())
        transactions = spec["transactions"]
    except (OSError, ValueError, KeyError) as err:
        click.echo(f"error: unreadable block spec: {err}", err=True)
        sys.exit(1)
    if not transactions:
        click.echo("error: block has no transactions", err=True)
        sys.exit(1)

    results = []
    failures = 0
    for index, tx in enumerate(transactions):
        try:
            code = _read_bytecode(str(tx["code_ref"]))
            cfg = ExecutionConfig(
                gas_limit=int(tx["gas_limit"]),
                init_data=parse_hex_bytes(tx.get("init_data", "")),
                call_value=int(str(tx.get("call_value", "0x0")), 16),
                clock_hz=freq_hz,
            )
            receipt = Executor(code, cfg).run()
            results.append({"tx": index, "receipt": receipt.to_dict()})
        except (ValueError, KeyError, TypeError, click.UsageError) as err:
            failures += 1
            results.append({"tx": index, "error": str(err)})
            click.echo(f"warning: transaction {index} malformed: {err}", err=True)

    receipts = [r["receipt"] for r in results if "receipt" in r]
    aggregate_doc = {
        "label": spec.get("label", ""),
        "transactions": len(transactions),
        "executed": len(receipts),
        "total_gas_used": sum(r["gas_used"] for r in receipts),
        "total_cycles": sum(r["cycles"] for r in receipts),
        "total_simulated_time_us": sum(r["simulated_time_ns"] for r in receipts) / 1e3,
        "clock_hz": freq_hz,
    }
    click.echo(json.dumps({"block": aggregate_doc, "results": results}, indent=2))
    sys.exit(1 if failures else 0)


@main.command("opcodes")
@click.option("--timing-csv", default=None,
              help="Also write per-opcode timing rows (code, mnemonic, gas, ns, cycles, source).")
def cmd_opcodes(timing_csv):
    """Dump the instruction table (code, mnemonic, gas, cycles, estimated)."""
    if timing_csv:
        rows = calibration_export()
        lines = ["code,mnemonic,gas,ns,cycles,source"]
        lines += [
            f"{r['code']},{r['mnemonic']},{r['gas']},{r['ns']},{r['cycles']},{r['source']}"
            for r in rows
        ]
        Path(timing_csv).write_text("\n".join(lines) + "\n")
    click.echo(table_as_json())


if __name__ == "__main__":
    main()
