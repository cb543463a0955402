import numpy as np
import pytest

from memoryflow import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger one-time kernel compilation so timed tests measure math, not JIT."""
    h = np.array([[1.0, 0.5j], [-0.5j, 2.0]], dtype=complex)
    kernels.jacobi_eigvals(h)
    kernels.transfer_power_average(np.array([0.1]), np.array([1.0]), 1.0, 0.0, 2)
    eye = np.eye(3, dtype=complex)[None, :, :]
    kernels.series_convolve(eye, eye)
    kernels.walk_run(1.0, 0.0, 2)
