import pytest

from emsim import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile/import costs land here, not in timed tests
    kernels.warmup()
