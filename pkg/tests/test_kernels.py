"""Backend parity between the jit kernels and the vectorized numpy twins."""
import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from steerell import kernels, sampling

seeds = st.integers(min_value=0, max_value=2**32 - 1)

needs_numba = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")


def test_get_backend_resolution():
    assert kernels.get_backend("numpy") == "numpy"
    assert kernels.get_backend(None) in ("numpy", "numba")
    assert kernels.get_backend("auto") == kernels.DEFAULT_BACKEND
    with pytest.raises(ValueError):
        kernels.get_backend("gpu")


def _scan_inputs(seed):
    rng = np.random.default_rng(seed)
    ell, p = sampling.random_tangent_ellipsoid(rng)
    n = 64
    thetas = rng.uniform(0.05, np.pi - 0.05, n)
    phis = rng.uniform(0, 2 * np.pi, n)
    normals = np.stack(
        [np.sin(thetas) * np.cos(phis), np.sin(thetas) * np.sin(phis), np.cos(thetas)], axis=-1
    )
    return ell, p, normals, rng


@needs_numba
@given(seed=seeds)
@settings(max_examples=25, deadline=None)
def test_scan_bounds_backend_agreement(seed):
    ell, p, normals, _ = _scan_inputs(seed)
    minv = ell.inverse_shape_matrix()
    lo_a, hi_a, va = kernels.scan_bounds(minv, ell.centre, p, normals, backend="numba")
    lo_b, hi_b, vb = kernels.scan_bounds(minv, ell.centre, p, normals, backend="numpy")
    npt.assert_array_equal(va, vb)
    npt.assert_allclose(lo_a[va], lo_b[vb], rtol=0, atol=1e-12)
    npt.assert_allclose(hi_a[va], hi_b[vb], rtol=0, atol=1e-12)


@needs_numba
@given(seed=seeds)
@settings(max_examples=25, deadline=None)
def test_scan_pencil_backend_agreement(seed):
    ell, p, _normals, rng = _scan_inputs(seed)
    b = sampling.random_interior_point(rng, ell)
    d = b - p
    if np.linalg.norm(d) < 0.05:
        return
    d = d / np.linalg.norm(d)
    e1 = np.cross(d, [1.0, 0.3, 0.2])
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(d, e1)
    ts = np.linspace(0, np.pi, 48, endpoint=False)
    th_a, va = kernels.scan_pencil(ell.inverse_shape_matrix(), ell.centre, p, b, e1, e2, ts, backend="numba")
    th_b, vb = kernels.scan_pencil(ell.inverse_shape_matrix(), ell.centre, p, b, e1, e2, ts, backend="numpy")
    npt.assert_array_equal(va, vb)
    npt.assert_allclose(th_a[va], th_b[vb], rtol=0, atol=1e-12)


def _triangle_inputs(seed):
    # raw segment data; no geometric validity needed for parity checks
    rng = np.random.default_rng(seed)
    sp1 = rng.uniform(-1, 1, 2)
    c1 = sp1 + rng.uniform(0.1, 1.0, 2)
    sm1 = rng.uniform(-1, 1, 2)
    c2 = sm1 + rng.uniform(-1.0, -0.1, 2)
    sm0 = rng.uniform(-1, 1, 2)
    return sp1, c1, sm1, c2, sm0


@needs_numba
@given(seed=seeds)
@settings(max_examples=50, deadline=None)
def test_triangle_sweep_backend_identical(seed):
    # both backends must return the same first admissible index exactly
    args = _triangle_inputs(seed)
    out_a = kernels.triangle_sweep(*args, 257, backend="numba")
    out_b = kernels.triangle_sweep(*args, 257, backend="numpy")
    assert out_a[0] == out_b[0]
    assert out_a[1] == out_b[1]
    npt.assert_allclose(out_a[2:], out_b[2:], rtol=0, atol=1e-15)


def test_triangle_sweep_known_intersection():
    # s2 fixed at (0,0): line to sm0=(1,0) meets the ray (2,-1)->(2,1) at
    # (2,0): t=2, lam3=0.5, eps0=1/2
    sp1 = np.array([0.0, 0.0])
    c1 = np.array([0.0, 0.0])
    sm1 = np.array([2.0, -1.0])
    c2 = np.array([2.0, 1.0])
    sm0 = np.array([1.0, 0.0])
    found, idx, lam2, lam3, eps0 = kernels.triangle_sweep(sp1, c1, sm1, c2, sm0, 7)
    assert found
    assert idx == 0
    assert lam3 == pytest.approx(0.5)
    assert eps0 == pytest.approx(0.5)


def test_triangle_sweep_no_solution():
    # ray points away: no admissible intersection
    sp1 = np.array([0.1, 0.0])
    c1 = np.array([0.9, 0.0])
    sm1 = np.array([0.0, 0.5])
    c2 = np.array([0.0, 2.0])
    sm0 = np.array([-0.5, -0.5])
    found, idx, *_ = kernels.triangle_sweep(sp1, c1, sm1, c2, sm0, 101)
    assert not found
    assert idx == -1


def test_grid_validation():
    args = _triangle_inputs(3)
    with pytest.raises(ValueError):
        kernels.triangle_sweep(*args, 1)


@given(
    al=st.floats(-0.8, 0.8, allow_nan=False),
    be=st.floats(-0.8, 0.8, allow_nan=False),
    ga=st.floats(0.05, 0.95, allow_nan=False),
    radius=st.floats(0.1, 1.0, allow_nan=False),
)
@settings(max_examples=200, deadline=None)
def test_bounds_closed_form_is_extremal(al, be, ga, radius):
    # the closed-form pair must bracket the threshold at every chord slope;
    # only draws whose denominator quadratic stays positive correspond to
    # nested sections, so poles are excluded up front
    disc = (radius * (1 + ga) * be) ** 2 - (1 - 2 * radius * (1 + ga) * al)
    assume(disc < -1e-3)
    lo_v, hi_v = kernels._bounds_from_abc_numpy(
        np.array([al]), np.array([be]), np.array([ga]), np.array([radius])
    )
    ks = np.tan(np.linspace(-np.pi / 2 + 1e-3, np.pi / 2 - 1e-3, 801))
    sig = al + ks * be
    vals = ((1 + ks**2) * (1 - ga) - 2 * radius * sig) / (
        1 + ks**2 - 2 * radius * (1 + ga) * sig
    )
    vals = np.append(vals, 1 - ga)  # axis-parallel limit
    assert lo_v[0] <= vals.min() + 1e-7
    assert hi_v[0] >= vals.max() - 1e-7
