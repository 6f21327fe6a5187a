import pytest

from product_variants import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile the jitted kernels once so timed tests measure steady state
    kernels.warmup()
