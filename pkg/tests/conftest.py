import numpy as np
import pytest

import trapkick as tk
from trapkick import _kernels
from trapkick.units import quantity


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Compile the jitted kernels once so timed tests measure compute, not JIT.
    _kernels.warmup()


@pytest.fixture
def electron_trap_1ghz():
    return tk.TrapConfig(tk.TrapKind.PENNING, quantity(1e9, "rad/s"), tk.ELECTRON)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
