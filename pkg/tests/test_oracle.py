import math

import numpy as np
import pytest

from spinpair.drive import Constant, Sinusoid
from spinpair.errors import NormDriftError
from spinpair.model import ModelParams, Subspace
from spinpair.oracle import (
    IntegratorConfig,
    integrate_block,
    integrate_block_fn,
    integrate_block_ic2,
    integrate_full,
    kernel_backend,
    suggest_step,
)
from spinpair._kernels import _pykernels

try:
    from spinpair._kernels import _cykernels
except ImportError:
    _cykernels = None

STATIC = ModelParams(
    lambda_x=Constant(1.3),
    lambda_y=Constant(-0.4),
    lambda_z=Constant(0.9),
    omega_1=Constant(2.0),
    omega_2=Constant(-0.7),
)

DRIVEN = ModelParams.from_derived(
    omega_plus=Sinusoid(2.0, 50.0, math.pi / 50),
    lambda_m=Sinusoid(1.0, 50.0, math.pi / 50),
    lambda_z=Constant(0.5),
)


def expm_herm(h, t):
    """exp(-i h t) for Hermitian h via eigendecomposition."""
    w, v = np.linalg.eigh(h)
    return v @ np.diag(np.exp(-1j * w * t)) @ v.conj().T


# --- kernel backend agreement -------------------------------------------

BLOCK_COEFFS = (2.0, 50.0, 0.1, 0.0, 0.0, 0.0, 0.3) * 2 + (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.9)
FULL_COEFFS = BLOCK_COEFFS + (1.0, 30.0, 0.0, 0.0, 0.0, 0.0, 0.0) * 2
IC2_COEFFS = (4.0, 50.0, math.pi / 50, 0.1, 0.0, 1.0) + (0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.4)


@pytest.mark.skipif(_cykernels is None, reason="compiled kernels not built")
def test_backends_agree_block():
    py = _pykernels.rk4_block_profiles(BLOCK_COEFFS, 0.6 + 0.1j, 0.8j, 0.0, 1.7, 400)
    cy = _cykernels.rk4_block_profiles(BLOCK_COEFFS, 0.6 + 0.1j, 0.8j, 0.0, 1.7, 400)
    assert abs(py[0] - cy[0]) < 5e-14
    assert abs(py[1] - cy[1]) < 5e-14


@pytest.mark.skipif(_cykernels is None, reason="compiled kernels not built")
def test_backends_agree_full():
    init = (0.5, 0.5j, 0.5, -0.5)
    py = _pykernels.rk4_full_profiles(FULL_COEFFS, *init, 0.0, 1.7, 400)
    cy = _cykernels.rk4_full_profiles(FULL_COEFFS, *init, 0.0, 1.7, 400)
    for a, b in zip(py, cy):
        assert abs(a - b) < 5e-14


@pytest.mark.skipif(_cykernels is None, reason="compiled kernels not built")
def test_backends_agree_ic2():
    py = _pykernels.rk4_block_ic2(IC2_COEFFS, 1.0 + 0.0j, 0.0j, 0.0, 0.9, 400)
    cy = _cykernels.rk4_block_ic2(IC2_COEFFS, 1.0 + 0.0j, 0.0j, 0.0, 0.9, 400)
    assert abs(py[0] - cy[0]) < 5e-14
    assert abs(py[1] - cy[1]) < 5e-14


@pytest.mark.skipif(_cykernels is None, reason="compiled kernels not built")
def test_backends_agree_jacobi(rng):
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = m + m.conj().T
    py_w, py_v = _pykernels.jacobi_eigh4(tuple(m.ravel()))
    cy_w, cy_v = _cykernels.jacobi_eigh4(tuple(m.ravel()))
    assert np.allclose(py_w, cy_w, atol=5e-14)
    assert np.allclose(py_v, cy_v, atol=5e-14)


def test_kernel_backend_name():
    assert kernel_backend() in ("cython", "python")


def test_jacobi_matches_numpy(rng):
    m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    m = m + m.conj().T
    evals, evecs = _pykernels.jacobi_eigh4(tuple(m.ravel()))
    v = np.array(evecs).reshape(4, 4)
    assert np.allclose(evals, np.linalg.eigvalsh(m), atol=1e-12)
    for j in range(4):
        assert np.allclose(m @ v[:, j], evals[j] * v[:, j], atol=1e-12)


# --- integrators ----------------------------------------------------------

@pytest.mark.parametrize("subspace", [Subspace.ONE, Subspace.TWO])
def test_integrate_block_constant_hamiltonian(subspace):
    from spinpair.model import block

    h = block(STATIC, 0.0, subspace)
    initial = np.array([0.6, 0.8j])
    cfg = IntegratorConfig(step=1e-3)
    trace = integrate_block(STATIC, subspace, initial, 2.0, cfg, sample_times=[0.0, 0.9, 2.0])
    for t, row in zip(trace.times, trace.amplitudes):
        assert np.allclose(row, expm_herm(h, t) @ initial, atol=1e-9)
    assert trace.norm_drift < 1e-10
    assert trace.error_estimate is None


def test_integrate_full_constant_hamiltonian():
    from spinpair.model import hamiltonian_uncoupled

    h = hamiltonian_uncoupled(STATIC, 0.0)
    initial = np.array([0.5, 0.5, 0.5, 0.5], dtype=complex)
    cfg = IntegratorConfig(step=1e-3)
    trace = integrate_full(STATIC, initial, 1.5, cfg, sample_times=[0.0, 1.5])
    assert np.allclose(trace.amplitudes[-1], expm_herm(h, 1.5) @ initial, atol=1e-9)


def test_sample_times_respected():
    times = [0.0, 0.123, 0.5, 1.618, 2.0]
    cfg = IntegratorConfig(step=1e-3)
    trace = integrate_block(DRIVEN, Subspace.ONE, [1.0, 0.0], 2.0, cfg, sample_times=times)
    assert np.array_equal(trace.times, np.array(times))
    assert trace.amplitudes.shape == (5, 2)
    assert np.array_equal(trace.amplitudes[0], np.array([1.0, 0.0]))


def test_block_diagonality_gives_exact_zero_leakage():
    cfg = IntegratorConfig(step=1e-3)
    trace = integrate_full(DRIVEN, [1.0, 0.0, 0.0, 0.0], 1.0, cfg, sample_times=[0.0, 1.0])
    assert trace.amplitudes[-1, 2] == 0.0
    assert trace.amplitudes[-1, 3] == 0.0
    assert abs(trace.amplitudes[-1, 0]) > 0.0


def test_norm_drift_error_with_coarse_step():
    cfg = IntegratorConfig(step=0.5, norm_tolerance=1e-10)
    with pytest.raises(NormDriftError):
        integrate_block(DRIVEN, Subspace.ONE, [1.0, 0.0], 10.0, cfg)


def test_doubling_estimate_bounds_error():
    from spinpair.model import block

    h = block(STATIC, 0.0, Subspace.ONE)
    initial = np.array([1.0, 0.0], dtype=complex)
    cfg = IntegratorConfig(step=2e-2, method="rk4_doubling")
    trace = integrate_block(STATIC, Subspace.ONE, initial, 3.0, cfg, sample_times=[0.0, 3.0])
    exact = expm_herm(h, 3.0) @ initial
    actual = np.linalg.norm(trace.amplitudes[-1] - exact)
    assert trace.error_estimate is not None
    assert 0.0 < actual < 10.0 * trace.error_estimate
    assert trace.error_estimate < 1e-6


def test_suggest_step_values():
    assert suggest_step(DRIVEN, 10.0) == pytest.approx((2 * math.pi / 50.0) / 200.0)
    assert suggest_step(STATIC, 10.0) == pytest.approx(10.0 / 2000.0)


def test_integrator_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(step=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(step=1e-3, method="euler")
    with pytest.raises(ValueError):
        IntegratorConfig(step=1e-3, norm_tolerance=0.0)


@pytest.mark.parametrize(
    "times", [[0.0, 0.5, 0.5], [0.5, 0.2], [-0.1, 0.5], [0.0, 3.0]]
)
def test_bad_sample_times_rejected(times):
    cfg = IntegratorConfig(step=1e-2)
    with pytest.raises(ValueError):
        integrate_block(STATIC, Subspace.ONE, [1.0, 0.0], 2.0, cfg, sample_times=times)


def test_integrate_block_fn_constant():
    h = np.array([[0.7, 0.4 - 0.2j], [0.4 + 0.2j, -0.7]])
    initial = np.array([0.6, 0.8], dtype=complex)
    cfg = IntegratorConfig(step=1e-3)
    trace = integrate_block_fn(lambda t: h, initial, 2.0, cfg, sample_times=[0.0, 2.0])
    assert np.allclose(trace.amplitudes[-1], expm_herm(h, 2.0) @ initial, atol=1e-9)


def test_integrate_block_fn_piecewise_with_breakpoints():
    h1 = np.array([[1.0, 0.3], [0.3, -1.0]], dtype=complex)
    h2 = np.array([[-0.2, 0.9j], [-0.9j, 0.2]], dtype=complex)
    tb = 0.8377
    initial = np.array([1.0, 0.0], dtype=complex)
    cfg = IntegratorConfig(step=1e-3)
    trace = integrate_block_fn(
        lambda t: h1 if t < tb else h2,
        initial,
        2.0,
        cfg,
        sample_times=[0.0, 2.0],
        breakpoints=[tb],
    )
    exact = expm_herm(h2, 2.0 - tb) @ expm_herm(h1, tb) @ initial
    assert np.allclose(trace.amplitudes[-1], exact, atol=1e-9)


def test_integrate_block_ic2_runs_and_conserves_norm():
    from spinpair.drive import Sinusoid as S
    from spinpair.exact import IC2Setup, ic2_breakpoints, ic2_kernel_coeffs
    from spinpair.model import Subspace as Sub

    setup = IC2Setup(kappa=0.1, theta10=math.pi / 4, lambda_m=S(4.0, 50.0, math.pi / 50))
    coeffs = ic2_kernel_coeffs(setup, Sub.ONE)
    marks = ic2_breakpoints(setup, 1.0, Sub.ONE)
    cfg = IntegratorConfig(step=2e-4, norm_tolerance=1e-8)
    trace = integrate_block_ic2(
        coeffs, [1.0, 0.0], 1.0, cfg, sample_times=[0.0, 0.5, 1.0], breakpoints=marks
    )
    assert trace.norm_drift < 1e-9
    assert trace.amplitudes.shape == (3, 2)
