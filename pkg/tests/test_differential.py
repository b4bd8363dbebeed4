"""Differential tests: fuzzed programs against the independent reference
interpreter, plus revert/gas properties over deliberately failing runs."""

import random

import pytest

import oracle_evm
from program_gen import generate_program
from evmx.executor import Executor, ReceiptStatus, run
from evmx.opcodes import lookup
from evmx.words import ExecutionConfig

BIG_GAS = 50_000_000


def cfg(**kwargs):
    kwargs.setdefault("gas_limit", BIG_GAS)
    return ExecutionConfig(**kwargs)


def run_both(code):
    ex = Executor(code, cfg())
    receipt = ex.run()
    assert receipt.status is ReceiptStatus.SUCCESS, (receipt.error_context, code.hex())
    stack, storage, returndata = oracle_evm.execute(code)
    return ex, receipt, stack, storage, returndata


@pytest.mark.parametrize("seed", range(8))
def test_fuzzed_programs_match_reference(seed):
    rng = random.Random(0xD1FF + seed)
    for _ in range(50):
        code = generate_program(rng)
        ex, receipt, stack, storage, returndata = run_both(code)
        assert ex.ms.stack.as_list() == stack, code.hex()
        assert receipt.storage_out == storage, code.hex()
        assert receipt.return_data == returndata, code.hex()


def test_generated_programs_respect_bounds():
    rng = random.Random(77)
    for _ in range(200):
        code = generate_program(rng, max_ops=64)
        ops = 0
        i = 0
        while i < len(code):
            op = code[i]
            ops += 1
            i += 1 + (op - 0x5F if 0x60 <= op <= 0x7F else 0)
        assert ops <= 64


def _failing_run(rng):
    """A run engineered to fail: either gas starvation or an injected fault."""
    body = generate_program(rng, max_ops=24)
    pre_state = {rng.getrandbits(256): rng.getrandbits(256) for _ in range(4)}
    mode = rng.randrange(3)
    if mode == 0:
        # starve: enough gas to start, never enough to finish
        total = sum(lookup(s.opcode).gas for s in _trace_of(body))
        gas = max(1, total // 2) if total else 1
        receipt = run(body, cfg(gas_limit=gas), initial_storage=pre_state, trace=True)
    elif mode == 1:
        # out-of-range memory touch appended before the terminator
        code = body[:-1] + bytes.fromhex("610c0051") + body[-1:]
        receipt = run(code, cfg(), initial_storage=pre_state, trace=True)
    else:
        # jump to a non-JUMPDEST target
        code = body[:-1] + bytes.fromhex("60ff56") + body[-1:]
        receipt = run(code, cfg(), initial_storage=pre_state, trace=True)
    return receipt, pre_state


def _trace_of(code):
    receipt = run(code, cfg(), trace=True)
    assert receipt.trace is not None
    return receipt.trace


def test_failing_runs_revert_storage_and_conserve_gas():
    rng = random.Random(0xFA11)
    failures = 0
    for _ in range(60):
        receipt, pre_state = _failing_run(rng)
        if receipt.status is ReceiptStatus.SUCCESS:
            continue  # starvation heuristics occasionally still complete
        failures += 1
        assert receipt.storage_out == pre_state
        running = receipt.gas_limit
        for step in receipt.trace:
            assert step.gas_before - step.gas_after == lookup(step.opcode).gas
            assert step.gas_before == running
            running = step.gas_after
        assert receipt.gas_used + receipt.gas_remaining == receipt.gas_limit
    assert failures >= 40  # the vast majority must actually fail


def test_cycles_additive_over_trace():
    rng = random.Random(0xADD)
    for _ in range(20):
        code = generate_program(rng)
        receipt = run(code, cfg(), trace=True)
        assert receipt.cycles == sum(step.cycles for step in receipt.trace)
        assert receipt.steps == len(receipt.trace)
