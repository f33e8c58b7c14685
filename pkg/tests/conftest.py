"""Shared fixtures: backend selection and numba warmup."""
import numpy as np
import pytest

from steerell import kernels


@pytest.fixture(scope="session", autouse=True)
def warmup_kernels():
    # trigger jit compilation once so per-test timings stay honest
    minv = np.eye(3) * 4.0
    centre = np.array([0.0, 0.0, 0.5])
    p = np.array([0.0, 0.0, 1.0])
    normals = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    kernels.scan_bounds(minv, centre, p, normals)
    kernels.scan_pencil(
        minv, centre, p, np.array([0.0, 0.0, 0.4]),
        np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0]), np.array([0.1, 0.2]),
    )
    kernels.triangle_sweep(
        np.array([0.1, 0.0]), np.array([0.9, 0.0]),
        np.array([0.1, 0.1]), np.array([0.8, 0.4]),
        np.array([0.3, 0.05]), 16,
    )


def _backends():
    names = ["numpy"]
    if kernels.HAVE_NUMBA:
        names.append("numba")
    return names


@pytest.fixture(params=_backends())
def backend(request):
    return request.param
