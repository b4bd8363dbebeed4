import pytest

from evmx import _kernels


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # JIT-compile everything once so individual tests measure logic, not LLVM.
    _kernels.warm_up()
