import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import solve_ivp
from scipy.linalg import expm

from phonon_raman.errors import DomainError, IntegrationError
from phonon_raman.linear_integrator import LinearSystem, _expm2, hermitian_system, integrate


def _random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (a + a.conj().T)


def test_constant_generator_matches_expm(rng):
    H = _random_hermitian(rng, 4)
    psi0 = np.array([1, 0, 0, 0], dtype=complex)
    t = np.linspace(0, 3, 7)
    out = integrate(hermitian_system(lambda s: H, 4), psi0, t, tol=1e-12)
    ref = np.array([expm(-1j * H * s) @ psi0 for s in t])
    assert np.max(np.abs(out - ref)) < 1e-10


def test_time_dependent_against_solve_ivp():
    H = lambda t: np.array([[0.0, np.cos(t)], [np.cos(t), 0.5 * t]], dtype=complex)
    psi0 = np.array([1, 0], dtype=complex)
    t = np.linspace(0, 5, 11)
    out = integrate(hermitian_system(H, 2), psi0, t, tol=1e-11)
    ref = solve_ivp(lambda s, y: -1j * H(s) @ y, (0, 5), psi0, t_eval=t, rtol=1e-12, atol=1e-13, method="DOP853")
    assert np.max(np.abs(out - ref.y.T)) < 1e-9


def test_norm_preserved_over_long_runs():
    H = lambda t: np.array([[0.0, 1.0], [1.0, 3.0 * np.sin(t)]], dtype=complex)
    out = integrate(hermitian_system(H, 2), np.array([1, 0], dtype=complex), np.linspace(0, 60, 30), tol=1e-8)
    assert np.max(np.abs(np.linalg.norm(out, axis=1) - 1)) < 1e-12


def test_hits_output_times_and_first_row_is_initial():
    psi0 = np.array([0.6, 0.8j])
    t = np.array([0.0, 0.1, 0.1000001, 4.0])
    out = integrate(hermitian_system(lambda s: np.eye(2), 2), psi0, t)
    assert np.allclose(out[0], psi0)
    assert np.allclose(out, psi0[None, :] * np.exp(-1j * t)[:, None], atol=1e-12)


@given(st.floats(-50, 50), st.floats(-50, 50), st.floats(-50, 50), st.floats(-50, 50))
def test_closed_form_2x2_exponential(a, b, c, d):
    m = np.array([[a, b + 1j * c], [1j * d, -a + 0.5j * b]])
    assert np.allclose(_expm2(m), expm(m), rtol=1e-9, atol=1e-9 * np.abs(expm(m)).max())


def test_invalid_inputs():
    sys = hermitian_system(lambda t: np.eye(2), 2)
    with pytest.raises(DomainError):
        integrate(sys, np.ones(3), [0, 1])
    with pytest.raises(DomainError):
        integrate(sys, np.ones(2), [0, 1], tol=1e-3)
    with pytest.raises(DomainError):
        integrate(sys, np.ones(2), [0, 1, 0.5])
    with pytest.raises(DomainError):
        LinearSystem(lambda t: np.eye(2), 0)


def test_non_finite_generator_reports_last_time():
    def gen(t):
        return np.full((2, 2), np.nan if t > 1.0 else 0.0, dtype=complex)

    with pytest.raises(IntegrationError) as err:
        integrate(LinearSystem(gen, 2), np.array([1, 0], dtype=complex), [0.0, 2.0])
    assert err.value.last_time <= 1.0 + 1e-9
